import json
from pathlib import Path

import pytest

from zforce.graph import (
    FIG1_GRID9,
    FIG3_FORK,
    FIG4_LEADCOEF,
    builtin_graph,
    random_corpus,
)
from zforce.polynomial import Poly

GOLDEN = json.loads((Path(__file__).parent / "golden" / "worked_examples.json").read_text())


def P(text):
    return Poly.parse(text)


def oracle_forcer_maps(g, s):
    """Every forcer map reachable by some legal sequence of single forces.

    Walks all serializations of the color change rule one force at a time;
    shares nothing with the library's chain enumerator.
    """
    s = frozenset(s)
    results = set()
    seen = set()
    stack = [(s, ())]
    while stack:
        colored, forces = stack.pop()
        key = (colored, forces)
        if key in seen:
            continue
        seen.add(key)
        if len(colored) == g.n:
            results.add(forces)
            continue
        for i in colored:
            white = [w for w in g.neighbors(i) if w not in colored]
            if len(white) == 1:
                k = white[0]
                stack.append((colored | {k}, tuple(sorted(forces + ((k, i),)))))
    return {tuple(dict(f).items()) for f in results}


def corpus_builtins():
    return [
        builtin_graph("path", 6),
        builtin_graph("complete", 5),
        builtin_graph("complete_minus_two_disjoint_edges", 6),
        builtin_graph("forked_path", 7),
        FIG1_GRID9,
        FIG3_FORK,
        FIG4_LEADCOEF,
    ]


@pytest.fixture(scope="session")
def small_corpus():
    """Builtins up to 8 vertices plus seeded random connected graphs on 3..7 vertices."""
    return [g for g in corpus_builtins() if g.n <= 8] + random_corpus(40, 3, 7, seed=11)


# (criterion number, title, passed, seconds, detail), filled by test_acceptance.py
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, passed, secs, detail in sorted(ACCEPTANCE_RESULTS):
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{verdict}] AC{num:>2} {title} ({secs:.2f}s) {detail}".rstrip())
