"""The bundled library of ``.stt`` files and the harness that checks it.

``manifest.txt`` lists every file with its expected outcome::

    EXPECT CHECKS shapes.stt -- anchor text
    EXPECT FAILS:BoundaryViolation neg/boundary-mismatch.stt -- anchor text

Files that ``import prelude`` start from a copy of the prelude's environment.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import List, Optional, Tuple

from ..checker import Diagnostic, Environment, check_module
from ..syntax import LexError, ParseError, SourceModule, parse_module
from ..topes import TopeSolver

CORPUS_DIR = Path(__file__).resolve().parent
PARSE_ERROR = "ParseError"
PRELUDE_ERROR = "PreludeError"


class PreludeError(Exception):
    """The prelude itself failed to check."""


class ManifestError(Exception):
    pass


def prelude_path() -> Path:
    override = os.environ.get("STT_PRELUDE")
    return Path(override) if override else CORPUS_DIR / "prelude.stt"


def manifest_path() -> Path:
    return CORPUS_DIR / "manifest.txt"


@lru_cache(maxsize=None)
def _solver(distinct_endpoints: bool) -> TopeSolver:
    return TopeSolver(distinct_endpoints)


@lru_cache(maxsize=None)
def _prelude_env(path: str, mtime: float, distinct_endpoints: bool) -> Environment:
    diags, env = check_source(Path(path).read_text(encoding="utf-8"), path,
                              distinct_endpoints, env=Environment())
    errors = [d for d in diags if d.severity == "ERROR"]
    if errors:
        raise PreludeError(errors[0].format())
    return env


def prelude_env(distinct_endpoints: bool = True) -> Environment:
    """The checked prelude, cached per path, modification time and flag."""
    path = prelude_path()
    if not path.is_file():
        raise PreludeError(f"prelude not found: {path}")
    return _prelude_env(str(path), path.stat().st_mtime, distinct_endpoints)


def parse_source(text: str, filename: str) -> Tuple[Optional[SourceModule], Optional[Diagnostic]]:
    try:
        return parse_module(text), None
    except (LexError, ParseError) as err:
        return None, Diagnostic("ERROR", filename, err.line, err.col, PARSE_ERROR, err.message)


def check_source(text: str, filename: str, distinct_endpoints: bool = True,
                 env: Optional[Environment] = None) -> Tuple[List[Diagnostic], Environment]:
    """Parse and check one file.

    Without an explicit ``env`` the prelude is loaded when the file imports it.
    """
    module, err = parse_source(text, filename)
    if err is not None:
        return [err], env if env is not None else Environment()
    if env is None:
        try:
            env = prelude_env(distinct_endpoints) if module.imports_prelude else Environment()
        except PreludeError as exc:
            return [Diagnostic("ERROR", filename, 1, 1, PRELUDE_ERROR, str(exc))], Environment()
    return check_module(module, filename, env, distinct_endpoints, _solver(distinct_endpoints))


def check_file(path: Path, distinct_endpoints: bool = True,
               display: Optional[str] = None) -> Tuple[List[Diagnostic], Environment]:
    path = Path(path)
    return check_source(path.read_text(encoding="utf-8"), display or str(path), distinct_endpoints)


def outcome(diagnostics: List[Diagnostic]) -> str:
    """``CHECKS`` or ``FAILS:<category>`` of the first error."""
    for d in diagnostics:
        if d.severity == "ERROR":
            return f"FAILS:{d.category}"
    return "CHECKS"


@dataclass(frozen=True)
class ManifestEntry:
    expect: str
    path: str
    anchor: str
    line: int


def parse_manifest(text: str) -> List[ManifestEntry]:
    entries: List[ManifestEntry] = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, anchor = line.partition(" -- ")
        parts = head.split()
        if len(parts) != 3 or parts[0] != "EXPECT":
            raise ManifestError(f"line {lineno}: expected 'EXPECT <outcome> <path> -- <anchor>'")
        expect, path = parts[1], parts[2]
        if expect != "CHECKS" and not expect.startswith("FAILS:"):
            raise ManifestError(f"line {lineno}: unknown outcome {expect!r}")
        if expect == "CHECKS" and not anchor.strip():
            raise ManifestError(f"line {lineno}: CHECKS entries need an anchor")
        if path in seen:
            raise ManifestError(f"line {lineno}: {path} listed twice")
        seen.add(path)
        entries.append(ManifestEntry(expect, path, anchor.strip() if sep else "", lineno))
    return entries


@dataclass(frozen=True)
class FileResult:
    entry: ManifestEntry
    actual: str
    definitions: int
    diagnostics: Tuple[Diagnostic, ...]

    @property
    def ok(self) -> bool:
        return self.actual == self.entry.expect

    def line(self) -> str:
        status = "ok      " if self.ok else "MISMATCH"
        text = f"{status} {self.entry.path}: expected {self.entry.expect}, got {self.actual}"
        if self.actual == "CHECKS":
            text += f" ({self.definitions} definitions)"
        return text


@dataclass(frozen=True)
class CorpusReport:
    results: Tuple[FileResult, ...]

    @property
    def mismatches(self) -> int:
        return sum(not r.ok for r in self.results)

    def render(self) -> str:
        lines = [r.line() for r in self.results]
        for r in self.results:
            if not r.ok:
                lines.extend("  " + d.format() for d in r.diagnostics if d.severity == "ERROR")
        checks = sum(r.entry.expect == "CHECKS" for r in self.results)
        lines.append(f"{len(self.results)} files ({checks} CHECKS, {len(self.results) - checks} "
                     f"FAILS), {self.mismatches} mismatches")
        return "\n".join(lines) + "\n"


def _own_definitions(module_text: str, filename: str) -> int:
    module, _ = parse_source(module_text, filename)
    if module is None:
        return 0
    return sum(d.kind in ("def", "postulate") for d in module.decls)


def run_corpus(manifest: Optional[Path] = None, distinct_endpoints: bool = True) -> CorpusReport:
    """Check every manifest entry; paths are relative to the manifest."""
    manifest = Path(manifest) if manifest is not None else manifest_path()
    base = manifest.parent
    results = []
    for entry in parse_manifest(manifest.read_text(encoding="utf-8")):
        target = base / entry.path
        if not target.is_file():
            raise FileNotFoundError(f"{manifest}:{entry.line}: missing file {entry.path}")
        text = target.read_text(encoding="utf-8")
        if target.resolve() == prelude_path().resolve():
            diags, _ = check_source(text, entry.path, distinct_endpoints, env=Environment())
        else:
            diags, _ = check_source(text, entry.path, distinct_endpoints)
        actual = outcome(diags)
        results.append(FileResult(entry, actual, _own_definitions(text, entry.path), tuple(diags)))
    return CorpusReport(tuple(results))
