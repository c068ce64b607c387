"""The zero forcing color change rule.

A colored vertex with exactly one uncolored neighbor forces (colors) that
neighbor. Everything here is a pure function of a graph and an initial set.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

from .graph import Graph
from .polynomial import ONE, ZERO, Poly


class ForcingError(ValueError):
    pass


class NotZeroForcingError(ForcingError):
    pass


class SearchTooLargeError(ForcingError):
    pass


class ChainLimitError(ForcingError):
    """Raised instead of returning a truncated chain list."""

    def __init__(self, limit: int):
        super().__init__(f"more than {limit} forcing chains; enumeration truncated")
        self.limit = limit


class IllegalChainError(ForcingError):
    pass


def _check_set(g: Graph, s: Iterable[int]) -> frozenset[int]:
    s = frozenset(s)
    bad = [v for v in s if not 1 <= v <= g.n]
    if bad:
        raise ForcingError(f"vertices {sorted(bad)} not in 1..{g.n}")
    return s


@dataclass(frozen=True)
class ColoringTrace:
    rounds: tuple[frozenset[int], ...]

    @property
    def derived_set(self) -> frozenset[int]:
        return self.rounds[-1]

    @property
    def time(self) -> int:
        return len(self.rounds) - 1

    def to_json(self) -> list[list[int]]:
        return [sorted(r) for r in self.rounds]


def closure(g: Graph, s: Iterable[int]) -> ColoringTrace:
    colored = _check_set(g, s)
    rounds = [colored]
    while True:
        new = set()
        for i in colored:
            white = [w for w in g.neighbors(i) if w not in colored]
            if len(white) == 1:
                new.add(white[0])
        if not new:
            return ColoringTrace(tuple(rounds))
        colored = colored | new
        rounds.append(colored)


def _masks(g: Graph) -> list[int]:
    nb = [0] * (g.n + 1)
    for v in g.vertices:
        for w in g.neighbors(v):
            nb[v] |= 1 << w
    return nb


def _derived_mask(nb: list[int], n: int, colored: int) -> int:
    # order-independent fixpoint; no round bookkeeping
    changed = True
    while changed:
        changed = False
        for v in range(1, n + 1):
            if colored >> v & 1:
                white = nb[v] & ~colored
                if white and white & (white - 1) == 0:
                    colored |= white
                    changed = True
    return colored


def is_zero_forcing_set(g: Graph, s: Iterable[int]) -> bool:
    s = _check_set(g, s)
    full = ((1 << (g.n + 1)) - 1) & ~1
    mask = sum(1 << v for v in s)
    return _derived_mask(_masks(g), g.n, mask) == full


DEFAULT_MAX_VERTICES = 20
DEFAULT_MAX_CHECKS = 5_000_000


def minimum_zero_forcing_sets(
    g: Graph,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    max_checks: int = DEFAULT_MAX_CHECKS,
) -> tuple[int, list[tuple[int, ...]]]:
    """Exhaustive search by increasing cardinality.

    Returns ``(Z, sets)`` with every zero forcing set of size ``Z`` in
    lexicographic order. Raises :class:`SearchTooLargeError` rather than
    returning an unverified answer.
    """
    if g.n > max_vertices:
        raise SearchTooLargeError(f"search too large: n={g.n} exceeds cap {max_vertices}")
    nb = _masks(g)
    full = ((1 << (g.n + 1)) - 1) & ~1
    checks = 0
    for k in range(0, g.n + 1):
        found = []
        for combo in combinations(g.vertices, k):
            checks += 1
            if checks > max_checks:
                raise SearchTooLargeError(f"search too large: more than {max_checks} closure checks")
            if _derived_mask(nb, g.n, sum(1 << v for v in combo)) == full:
                found.append(combo)
        if found:
            return k, found
    raise AssertionError("V(G) is always a zero forcing set")


def propagation_time(g: Graph, s: Iterable[int]) -> int:
    trace = closure(g, s)
    if len(trace.derived_set) != g.n:
        raise NotZeroForcingError(f"{sorted(trace.rounds[0])} is not a zero forcing set")
    return trace.time


@dataclass(frozen=True)
class ForcingChain:
    """Who forces whom, plus the earliest round each vertex can be colored."""

    S: frozenset[int]
    forcer: Mapping[int, int]
    round: Mapping[int, int]

    @classmethod
    def from_forcer(cls, g: Graph, s: Iterable[int], forcer: Mapping[int, int]) -> ForcingChain:
        s = _check_set(g, s)
        forcer = dict(sorted(forcer.items()))
        if set(forcer) != set(g.vertices) - s:
            raise IllegalChainError("forcer map must be defined exactly on V \\ S")
        for k, i in forcer.items():
            if not g.has_edge(i, k):
                raise IllegalChainError(f"{i} -> {k} is not an edge")
        rounds = {v: 0 for v in s}
        state: dict[int, int] = {}

        def visit(k: int) -> int:
            if k in rounds:
                return rounds[k]
            if state.get(k) == 1:
                raise IllegalChainError(f"forcer map is not realizable (cycle through {k})")
            state[k] = 1
            i = forcer[k]
            r = 1 + max(visit(j) for j in g.closed_neighbors(i) if j != k)
            state[k] = 2
            rounds[k] = r
            return r

        for k in forcer:
            visit(k)
        return cls(s, forcer, dict(sorted(rounds.items())))

    @property
    def time(self) -> int:
        return max(self.round.values())

    def key(self) -> tuple[int, ...]:
        return tuple(self.forcer.values())

    def forces(self) -> list[tuple[int, int, int]]:
        """``(by, on, round)`` triples in round order."""
        return sorted(((i, k, self.round[k]) for k, i in self.forcer.items()), key=lambda f: (f[2], f[1]))

    def order(self) -> list[int]:
        """Non-initial vertices in an order where every force is legal."""
        return [k for _, k, _ in self.forces()]

    def paths(self) -> list[list[int]]:
        nxt = {i: k for k, i in self.forcer.items()}
        out = []
        for v in sorted(self.S):
            p = [v]
            while p[-1] in nxt:
                p.append(nxt[p[-1]])
            out.append(p)
        return out

    def __hash__(self) -> int:
        return hash((self.S, self.key()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ForcingChain):
            return NotImplemented
        return self.S == other.S and dict(self.forcer) == dict(other.forcer)

    def describe(self) -> str:
        return ", ".join(f"{i}->{k}" for i, k, _ in self.forces()) or "(no forces)"

    def to_json(self) -> dict:
        return {
            "S": sorted(self.S),
            "forces": [{"by": i, "on": k, "round": r} for i, k, r in self.forces()],
        }

    @classmethod
    def from_json(cls, g: Graph, obj: Mapping) -> ForcingChain:
        chain = cls.from_forcer(g, obj["S"], {f["on"]: f["by"] for f in obj["forces"]})
        for f in obj["forces"]:
            if chain.round[f["on"]] != f["round"]:
                raise IllegalChainError(f"round of {f['on']} is {chain.round[f['on']]}, not {f['round']}")
        return chain


def enumerate_forcing_chains(g: Graph, s: Iterable[int], limit: int = 10**6) -> list[ForcingChain]:
    """Every realizable forcer map for ``s``.

    A map ``k -> i`` is realizable when "everything in N[i] other than k is
    colored before k" is acyclic. Vertices are assigned in closure order and
    cycles are rejected as soon as they appear.
    """
    s = _check_set(g, s)
    trace = closure(g, s)
    if len(trace.derived_set) != g.n:
        raise NotZeroForcingError(f"{sorted(s)} is not a zero forcing set")
    order = [v for r in range(1, len(trace.rounds)) for v in sorted(trace.rounds[r] - trace.rounds[r - 1])]
    # before[k]: vertices that must be colored before k
    before: dict[int, set[int]] = {v: set() for v in g.vertices}
    forcer: dict[int, int] = {}
    out: list[ForcingChain] = []

    def reaches(src: int, targets: set[int]) -> bool:
        # does src precede (transitively) any vertex in targets? edges j -> k mean j before k
        after: dict[int, list[int]] = {}
        for k, pre in before.items():
            for j in pre:
                after.setdefault(j, []).append(k)
        seen = {src}
        stack = [src]
        while stack:
            v = stack.pop()
            if v in targets:
                return True
            for w in after.get(v, ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return False

    def rec(pos: int) -> None:
        if pos == len(order):
            if len(out) >= limit:
                raise ChainLimitError(limit)
            out.append(ForcingChain.from_forcer(g, s, forcer))
            return
        k = order[pos]
        for i in g.neighbors(k):
            req = {j for j in g.closed_neighbors(i) if j != k}
            if reaches(k, req):
                continue
            added = req - before[k]
            before[k] |= added
            forcer[k] = i
            rec(pos + 1)
            del forcer[k]
            before[k] -= added

    rec(0)
    out.sort(key=ForcingChain.key)
    return out


def greedy_chain_with_q(g: Graph, s: Iterable[int]) -> tuple[ForcingChain, dict[int, Poly]]:
    """Synchronized forcing where each vertex takes the cheapest available forcer.

    The cost of forcer ``i`` for ``k`` is the sum of ``q_j`` over
    ``N[i] \\ {k}``, compared by eventual dominance; ties go to the smaller
    label.
    """
    s = _check_set(g, s)
    q = {v: ONE for v in s}
    forcer: dict[int, int] = {}
    colored = set(s)
    while len(colored) < g.n:
        options: dict[int, list[int]] = {}
        for i in sorted(colored):
            white = [w for w in g.neighbors(i) if w not in colored]
            if len(white) == 1:
                options.setdefault(white[0], []).append(i)
        if not options:
            raise NotZeroForcingError(f"{sorted(s)} is not a zero forcing set")
        new_q = {}
        for k, candidates in options.items():
            best_cost, best_i = None, None
            for i in candidates:
                cost = ZERO
                for j in g.closed_neighbors(i):
                    if j != k:
                        cost = cost + q[j]
                if best_cost is None or cost < best_cost:
                    best_cost, best_i = cost, i
            forcer[k] = best_i
            new_q[k] = best_cost.mul_t()
        q.update(new_q)
        colored.update(options)
    return ForcingChain.from_forcer(g, s, forcer), dict(sorted(q.items()))


def greedy_chain(g: Graph, s: Iterable[int]) -> ForcingChain:
    return greedy_chain_with_q(g, s)[0]
