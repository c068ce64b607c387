"""Undirected simple graphs on vertices ``1..n`` and the edge-list format."""

from __future__ import annotations

import random
from itertools import combinations
from typing import Iterable


class GraphParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class Graph:
    """Immutable simple graph. Vertex labels are ``1..n``."""

    __slots__ = ("n", "edges", "_adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 1:
            raise ValueError("graph needs at least one vertex")
        es = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge {{{u},{v}}} out of range 1..{n}")
            es.add((min(u, v), max(u, v)))
        adj: list[list[int]] = [[] for _ in range(n + 1)]
        for u, v in es:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(es))
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __reduce__(self):
        return (Graph, (self.n, self.sorted_edges()))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def closed_neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(self._adj[v] + (v,)))

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    @property
    def max_degree(self) -> int:
        return max(len(self._adj[v]) for v in self.vertices)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def is_connected(self) -> bool:
        seen = {1}
        stack = [1]
        while stack:
            for w in self._adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.sorted_edges()})"

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}


def parse_edge_list(text: str) -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r").split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise GraphParseError(lineno, f"expected 'n <count>', got {raw!r}")
            try:
                n = int(parts[1])
            except ValueError:
                raise GraphParseError(lineno, f"bad vertex count {parts[1]!r}") from None
            if n < 1:
                raise GraphParseError(lineno, "vertex count must be positive")
            continue
        if len(parts) != 2:
            raise GraphParseError(lineno, f"expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(lineno, f"non-integer vertex in {raw!r}") from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphParseError(lineno, f"vertex out of range 1..{n}")
        if u == v:
            raise GraphParseError(lineno, f"self-loop at vertex {u}")
        edges.append((u, v))
    if n is None:
        raise GraphParseError(1, "missing 'n <count>' header")
    return Graph(n, edges)


def serialize_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def read_graph(path: str) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def path_graph(n: int) -> Graph:
    return Graph(n, [(k, k + 1) for k in range(1, n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, combinations(range(1, n + 1), 2))


def complete_minus_two_disjoint_edges(n: int) -> Graph:
    if n < 4:
        raise ValueError("complete_minus_two_disjoint_edges requires n >= 4")
    removed = {(1, n - 1), (2, n)}
    return Graph(n, [e for e in combinations(range(1, n + 1), 2) if e not in removed])


def forked_path(n: int) -> Graph:
    if n < 4:
        raise ValueError("forked_path requires n >= 4")
    edges = [(k, k + 1) for k in range(1, n - 2)]
    edges += [(n - 2, n - 1), (n - 2, n)]
    return Graph(n, edges)


FIG1_GRID9 = Graph(9, [(1, 4), (2, 5), (5, 8), (3, 6), (6, 9), (4, 5), (5, 6), (7, 8), (8, 9), (5, 9)])
FIG3_FORK = Graph(8, [(5, 8), (8, 7), (7, 2), (2, 6), (6, 1), (1, 7), (7, 4), (6, 3)])
FIG4_LEADCOEF = Graph(5, [(1, 2), (2, 3), (3, 5), (5, 4), (4, 2)])

_FAMILIES = {
    "path": (path_graph, 1),
    "complete": (complete_graph, 1),
    "complete_minus_two_disjoint_edges": (complete_minus_two_disjoint_edges, 4),
    "forked_path": (forked_path, 4),
}
_FIXED = {
    "fig1_grid9": FIG1_GRID9,
    "fig3_fork": FIG3_FORK,
    "fig4_leadcoef": FIG4_LEADCOEF,
}
BUILTIN_NAMES = tuple(_FAMILIES) + tuple(_FIXED)


def builtin_graph(name: str, n: int | None = None) -> Graph:
    if name in _FIXED:
        return _FIXED[name]
    if name not in _FAMILIES:
        raise ValueError(f"unknown graph {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    build, minimum = _FAMILIES[name]
    if n is None:
        raise ValueError(f"graph {name!r} requires n")
    if n < minimum:
        raise ValueError(f"{name} requires n >= {minimum}")
    return build(n)


def random_connected_graph(n: int, seed: int, extra_edge_prob: float = 0.3) -> Graph:
    """Random spanning tree plus independent extra edges."""
    rng = random.Random(seed)
    edges = [(rng.randint(1, k - 1), k) for k in range(2, n + 1)]
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    edges = [(perm[u - 1], perm[v - 1]) for u, v in edges]
    present = {(min(e), max(e)) for e in edges}
    for e in combinations(range(1, n + 1), 2):
        if e not in present and rng.random() < extra_edge_prob:
            edges.append(e)
    return Graph(n, edges)


def random_corpus(count: int, min_n: int, max_n: int, seed: int) -> list[Graph]:
    rng = random.Random(seed)
    return [
        random_connected_graph(rng.randint(min_n, max_n), rng.randrange(2**32))
        for _ in range(count)
    ]
