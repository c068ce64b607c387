"""Matrices whose off-diagonal support is a graph's edge set.

Constructors that must satisfy identities exactly (the witness matrix, the
counterexamples) work in :class:`fractions.Fraction`. The sampler works in
floats.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .forcing import closure, is_zero_forcing_set, minimum_zero_forcing_sets
from .graph import Graph, complete_graph, complete_minus_two_disjoint_edges, path_graph


class PatternError(ValueError):
    pass


@dataclass(frozen=True)
class PatternMatrix:
    graph: Graph
    rows: tuple[tuple, ...]
    known_null: tuple | None = None

    def __post_init__(self):
        n = self.graph.n
        if len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise PatternError(f"matrix must be {n}x{n}")
        bad = pattern_violations(self.graph, self.rows)
        if bad:
            raise PatternError(f"entries {bad[:5]} violate the graph pattern")

    @property
    def n(self) -> int:
        return self.graph.n

    def entry(self, i: int, j: int):
        """1-based access."""
        return self.rows[i - 1][j - 1]

    @property
    def exact(self) -> bool:
        return all(isinstance(a, (int, Fraction)) for r in self.rows for a in r)

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(a) for a in r] for r in self.rows])

    def matvec(self, x: Sequence) -> list:
        return [sum(a * b for a, b in zip(r, x)) for r in self.rows]

    def null_residual(self) -> float:
        """Relative residual ``max|Ax| / max_i sum_j |A_ij x_j|`` of the known null vector."""
        if self.known_null is None:
            raise ValueError("no known null vector")
        x = self.known_null
        scale = max(sum(abs(a * b) for a, b in zip(r, x)) for r in self.rows)
        res = max(abs(v) for v in self.matvec(x))
        return float(res / scale) if scale else float(res)

    def kappa_prime(self):
        return kappa_prime(self.rows)

    def to_json(self) -> dict:
        enc = _enc_exact if self.exact else float
        out = {"n": self.n, "rows": [[enc(a) for a in r] for r in self.rows]}
        if self.known_null is not None:
            out["known_null"] = [enc(a) for a in self.known_null]
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for r in self.rows:
            w.writerow([str(a) for a in r])
        return buf.getvalue()


def _enc_exact(a) -> str:
    return str(Fraction(a))


def pattern_violations(g: Graph, rows: Sequence[Sequence]) -> list[tuple[int, int]]:
    """1-based off-diagonal positions whose zero/nonzero status disagrees with ``g``."""
    bad = []
    for i in range(1, g.n + 1):
        for j in range(1, g.n + 1):
            if i != j and (rows[i - 1][j - 1] != 0) != g.has_edge(i, j):
                bad.append((i, j))
    return bad


def conforms(g: Graph, rows: Sequence[Sequence]) -> bool:
    return not pattern_violations(g, rows)


def kappa_prime(rows) -> float | Fraction:
    """Largest ratio of magnitudes of two nonzero entries in a common row; 1 if none."""
    if isinstance(rows, PatternMatrix):
        rows = rows.rows
    best = 1
    for r in rows:
        mags = [abs(a) for a in r if a != 0]
        if mags:
            ratio = max(mags) / min(mags)
            if ratio > best:
                best = ratio
    return best


def matrix_with_null_vector(g: Graph, offdiag: dict[tuple[int, int], object], x: Sequence) -> PatternMatrix:
    """Fill the diagonal so that ``A x = 0``; ``offdiag`` maps ordered 1-based pairs to weights."""
    n = g.n
    rows = [[0] * n for _ in range(n)]
    for (i, j), w in offdiag.items():
        rows[i - 1][j - 1] = w
    for i in range(n):
        if x[i] == 0:
            raise ValueError("null vector entries must be nonzero")
        s = sum(rows[i][j] * x[j] for j in range(n) if j != i)
        rows[i][i] = -s / x[i]
    return PatternMatrix(g, tuple(map(tuple, rows)), tuple(x))


def sample_with_null_vector(
    g: Graph,
    seed: int,
    weight_range: tuple[float, float] = (0.5, 2.0),
    symmetric: bool = False,
) -> PatternMatrix:
    """Random matrix on ``g``'s pattern with a known null vector.

    Off-diagonal weights have magnitude uniform in ``weight_range`` and a
    random sign. The null vector has entries uniform in ``[-2,-1] u [1,2]``.
    """
    lo, hi = weight_range
    if not 0 < lo <= hi:
        raise ValueError("weight_range must satisfy 0 < lo <= hi")
    rng = np.random.default_rng(seed)
    edges = g.sorted_edges()
    mags = rng.uniform(lo, hi, size=(len(edges), 2))
    signs = rng.choice([-1.0, 1.0], size=(len(edges), 2))
    x = rng.uniform(1.0, 2.0, size=g.n) * rng.choice([-1.0, 1.0], size=g.n)
    offdiag = {}
    for (u, v), m, sg in zip(edges, mags, signs):
        offdiag[(u, v)] = float(m[0] * sg[0])
        offdiag[(v, u)] = float(m[0] * sg[0]) if symmetric else float(m[1] * sg[1])
    return matrix_with_null_vector(g, offdiag, [float(a) for a in x])


def _nonzero_fill(k: int) -> list[int]:
    """``k >= 2`` nonzero integers summing to zero."""
    xs = [1] * (k - 2)
    partial = sum(xs)
    nxt = 1 if partial + 1 != 0 else 2
    xs.append(nxt)
    xs.append(-(partial + nxt))
    return xs


def witness_matrix(g: Graph, s: Iterable[int]) -> tuple[PatternMatrix, tuple[int, ...]]:
    """A matrix on ``g``'s pattern whose columns outside the derived set sum to zero.

    Returns ``(A, Y)`` where ``Y`` is the uncolored remainder. Raises if ``s``
    is a zero forcing set, since then no such matrix exists.
    """
    derived = closure(g, s).derived_set
    y = tuple(v for v in g.vertices if v not in derived)
    if not y:
        raise ValueError(f"{sorted(set(s))} is a zero forcing set; no witness matrix exists")
    yset = set(y)
    n = g.n
    rows = [[Fraction(0)] * n for _ in range(n)]
    for v in g.vertices:
        for w in g.neighbors(v):
            rows[v - 1][w - 1] = Fraction(1)
    # Laplacian of the graph induced on Y
    for v in y:
        inner = [w for w in g.neighbors(v) if w in yset]
        rows[v - 1][v - 1] = Fraction(len(inner))
        for w in inner:
            rows[v - 1][w - 1] = Fraction(-1)
    for v in sorted(derived):
        inner = [w for w in g.neighbors(v) if w in yset]
        if not inner:
            continue
        if len(inner) == 1:
            raise AssertionError("a colored vertex with one uncolored neighbor would force it")
        for w, val in zip(inner, _nonzero_fill(len(inner))):
            rows[v - 1][w - 1] = Fraction(val)
    return PatternMatrix(g, tuple(map(tuple, rows))), y


def kn_counterexample(n: int, delta) -> PatternMatrix:
    """Complete graph matrix with a small weight ``delta`` on every entry touching vertex 1."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not isinstance(delta, float):
        delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    one = Fraction(1) if isinstance(delta, Fraction) else 1.0
    rows = [[one] * n for _ in range(n)]
    for k in range(1, n):
        rows[0][k] = rows[k][0] = delta
    rows[0][0] = delta * delta
    null = (one,) + tuple(-delta / (n - 1) for _ in range(n - 1))
    return PatternMatrix(complete_graph(n), tuple(map(tuple, rows)), null)


def path_counterexample(n: int) -> PatternMatrix:
    """Zero-diagonal path matrix with weight ``2**min(i, j)`` on each edge."""
    if n < 1 or n % 2 == 0:
        raise ValueError("n must be odd")
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(1, n):
        rows[i - 1][i] = rows[i][i - 1] = Fraction(2**i)
    null = tuple(Fraction((-2) ** ((n - i) // 2)) if i % 2 else Fraction(0) for i in range(1, n + 1))
    return PatternMatrix(path_graph(n), tuple(map(tuple, rows)), null)


def rational_rank(rows: Sequence[Sequence]) -> int:
    m = [[Fraction(a) for a in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def columns(rows: Sequence[Sequence], cols: Iterable[int]) -> list[list]:
    """Submatrix of the given 1-based columns."""
    cols = list(cols)
    return [[r[c - 1] for c in cols] for r in rows]


class GF2Matrix:
    """Square bit matrix over GF(2); row ``i`` is an int whose bit ``j`` is entry ``(i, j)``."""

    def __init__(self, rows: Sequence[Sequence[int]]):
        self.n = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        self.bits = [sum((int(a) & 1) << j for j, a in enumerate(r)) for r in rows]

    def rank(self) -> int:
        return gf2_rank(self.bits, self.ncols)

    def columns(self, cols: Iterable[int]) -> GF2Matrix:
        cols = list(cols)
        return GF2Matrix([[b >> (c - 1) & 1 for c in cols] for b in self.bits])

    def det(self) -> int:
        return int(self.n == self.ncols and self.rank() == self.n)


def gf2_rank(rows: list[int], n_cols: int) -> int:
    work = rows[:]
    rank = 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, len(work)) if work[r] >> col & 1), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(len(work)):
            if r != rank and work[r] >> col & 1:
                work[r] ^= work[rank]
        rank += 1
    return rank


def f2_matrix(diagonal: Sequence[int]) -> GF2Matrix:
    """The only shape a matrix over GF(2) on K6 minus {1,5},{2,6} can take."""
    g = complete_minus_two_disjoint_edges(6)
    rows = [[1 if g.has_edge(i, j) else 0 for j in range(1, 7)] for i in range(1, 7)]
    for i, d in enumerate(diagonal):
        rows[i][i] = d & 1
    return GF2Matrix(rows)


F2_MINOR = ((1, 1, 1), (0, 1, 1), (1, 0, 1))


def f2_counterexample_check() -> dict:
    g = complete_minus_two_disjoint_edges(6)
    ranks = []
    for diag in product((0, 1), repeat=6):
        ranks.append(f2_matrix(diag).columns([1, 2, 3]).rank())
    minor = f2_matrix([0] * 6)
    minor_rows = [[minor.bits[i - 1] >> (j - 1) & 1 for j in (1, 2, 3)] for i in (4, 5, 6)]
    z, _ = minimum_zero_forcing_sets(g)
    report = {
        "graph": g.to_json(),
        "minor_rows_456_cols_123": minor_rows,
        "minor_det_f2": GF2Matrix(minor_rows).det(),
        "diagonal_assignments": len(ranks),
        "min_rank_first_three_columns": min(ranks),
        "all_rank_3": all(r == 3 for r in ranks),
        "set_456_is_zero_forcing": is_zero_forcing_set(g, {4, 5, 6}),
        "Z": z,
    }
    report["ok"] = (
        report["minor_det_f2"] == 1
        and report["all_rank_3"]
        and not report["set_456_is_zero_forcing"]
        and z == 4
    )
    return report
