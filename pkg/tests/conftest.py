from __future__ import annotations

from functools import lru_cache
from pathlib import Path
from typing import List, Tuple

import pytest

from stt import corpus
from stt.checker import Environment
from stt.syntax import Decl, parse_module

CORPUS = corpus.CORPUS_DIR


def checking_files() -> List[str]:
    entries = corpus.parse_manifest(corpus.manifest_path().read_text())
    return [e.path for e in entries if e.expect == "CHECKS"]


@lru_cache(maxsize=None)
def checked(path: str) -> Tuple[Tuple[Decl, ...], Environment]:
    """Declarations of a CHECKS file and the environment after checking it."""
    text = (CORPUS / path).read_text()
    module = parse_module(text)
    if path == "prelude.stt":
        diags, env = corpus.check_source(text, path, env=Environment())
    else:
        diags, env = corpus.check_source(text, path)
    assert not [d for d in diags if d.severity == "ERROR"], diags
    return tuple(module.decls), env


def all_decls() -> List[Tuple[str, Decl]]:
    out = []
    for path in checking_files():
        out.extend((path, d) for d in parse_module((CORPUS / path).read_text()).decls)
    return out


def definitions() -> List[Tuple[str, Decl]]:
    return [(p, d) for p, d in all_decls() if d.kind == "def"]


@pytest.fixture(scope="session")
def prelude_env() -> Environment:
    return corpus.prelude_env()


def sequent_grid():
    """Every hyp/goal made of one to three atoms over ``t, s`` joined by a single connective."""
    import itertools

    from stt.kernel import ONE, ZERO, CVar, Eq, Leq, conj, disj

    t, s = CVar(1), CVar(0)
    atoms = [Leq(t, s), Leq(s, t), Eq(t, s), Eq(t, ZERO), Eq(t, ONE), Eq(s, ZERO), Eq(s, ONE)]
    formulas = list(atoms)
    for k in (2, 3):
        for combo in itertools.combinations(atoms, k):
            formulas.append(conj(*combo))
            formulas.append(disj(*combo))
    return [(h, g) for h in formulas for g in formulas]


ACCEPTANCE_LINES: List[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
