"""Error and variance polynomial vectors.

For a chain where ``i`` forces ``k``, the error polynomial of ``k`` is ``t``
times the sum of the polynomials on ``N[i] \\ {k}``; initial vertices get 1.
Seeding initial vertex ``i`` with the symbol ``alpha_i`` instead gives the
multivariable form, and the variance polynomial of ``k`` is the sum of
squares of its alpha-coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .forcing import (
    ForcingChain,
    closure,
    enumerate_forcing_chains,
    greedy_chain_with_q,
    NotZeroForcingError,
)
from .graph import Graph
from .polynomial import ONE, AlphaForm, Poly

PolyVec = dict[int, Poly]

DEFAULT_CHAIN_LIMIT = 10**6


def _propagate(g: Graph, chain: ForcingChain, seed):
    values = {v: seed(v) for v in chain.S}
    for k in chain.order():
        i = chain.forcer[k]
        acc = None
        for j in g.closed_neighbors(i):
            if j != k:
                acc = values[j] if acc is None else acc + values[j]
        values[k] = acc.mul_t()
    return dict(sorted(values.items()))


def error_vector_of_chain(g: Graph, chain: ForcingChain) -> PolyVec:
    return _propagate(g, chain, lambda v: ONE)


def alpha_vector_of_chain(g: Graph, chain: ForcingChain) -> dict[int, AlphaForm]:
    return _propagate(g, chain, AlphaForm.source)


def variance_vector_of_chain(g: Graph, chain: ForcingChain) -> PolyVec:
    return {v: f.sum_of_squares() for v, f in alpha_vector_of_chain(g, chain).items()}


def error_vector_of_set(g: Graph, s: Iterable[int]) -> tuple[PolyVec, ForcingChain]:
    chain, _ = greedy_chain_with_q(g, s)
    return error_vector_of_chain(g, chain), chain


def entrywise_min(vectors: Iterable[PolyVec]) -> tuple[PolyVec, dict[int, int]]:
    """Entrywise minimum and, per vertex, the index of the first vector attaining it."""
    best: PolyVec = {}
    where: dict[int, int] = {}
    for idx, vec in enumerate(vectors):
        for v, p in vec.items():
            if v not in best or p < best[v]:
                best[v] = p
                where[v] = idx
    return dict(sorted(best.items())), dict(sorted(where.items()))


@dataclass
class VarianceResult:
    V: PolyVec
    chains: list[ForcingChain]
    witnesses: dict[int, int]
    single_chain: int | None

    @property
    def single_chain_achieves(self) -> bool:
        return self.single_chain is not None


def variance_vector_of_set(g: Graph, s: Iterable[int], limit: int = DEFAULT_CHAIN_LIMIT) -> VarianceResult:
    """Entrywise minimum of the variance vector over every forcing chain.

    ``witnesses[v]`` indexes ``chains``; ``single_chain`` is the index of the
    first chain attaining every entry at once, or None.
    """
    chains = enumerate_forcing_chains(g, s, limit=limit)
    per_chain = [variance_vector_of_chain(g, c) for c in chains]
    best, where = entrywise_min(per_chain)
    single = next((idx for idx, vec in enumerate(per_chain) if vec == best), None)
    return VarianceResult(best, chains, where, single)


def max_entry(vec: Mapping[int, Poly]) -> tuple[int, Poly]:
    """Largest entry under eventual dominance; ties go to the smallest vertex."""
    v_best = None
    for v in sorted(vec):
        if v_best is None or vec[v] > vec[v_best]:
            v_best = v
    return v_best, vec[v_best]


def polyvec_json(vec: Mapping[int, Poly]) -> dict:
    return {str(v): _poly_json(p) for v, p in sorted(vec.items())}


def _poly_json(p: Poly) -> dict:
    return {**p.to_json(), "text": str(p)}


def set_report(g: Graph, s: Iterable[int], limit: int = DEFAULT_CHAIN_LIMIT) -> dict:
    """Error and variance summary for one zero forcing set, as JSON-ready data."""
    s = sorted(set(s))
    trace = closure(g, s)
    if len(trace.derived_set) != g.n:
        raise NotZeroForcingError(f"{s} is not a zero forcing set")
    q, _ = error_vector_of_set(g, s)
    var = variance_vector_of_set(g, s, limit=limit)
    qv, qp = max_entry(q)
    vv, vp = max_entry(var.V)
    return {
        "set": s,
        "pt": trace.time,
        "q": polyvec_json(q),
        "V": polyvec_json(var.V),
        "q_max": {"vertex": qv, "poly": _poly_json(qp)},
        "V_max": {"vertex": vv, "poly": _poly_json(vp)},
        "V_single_chain": var.single_chain_achieves,
    }


__all__ = [
    "PolyVec",
    "VarianceResult",
    "alpha_vector_of_chain",
    "entrywise_min",
    "error_vector_of_chain",
    "error_vector_of_set",
    "max_entry",
    "polyvec_json",
    "set_report",
    "variance_vector_of_chain",
    "variance_vector_of_set",
]
