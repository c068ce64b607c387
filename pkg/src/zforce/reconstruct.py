"""Back-solving a null vector from noisy samples on a zero forcing set.

If ``i`` forces ``k``, row ``i`` of ``A x = 0`` determines ``x_k`` from the
entries on ``N[i] \\ {k}``. Running that along a forcing chain rebuilds the
whole vector from the sampled entries, and the per-vertex error is bounded by
the chain's error polynomial evaluated at ``kappa'(A)``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .errorvec import alpha_vector_of_chain, error_vector_of_chain, variance_vector_of_chain
from .forcing import ForcingChain, greedy_chain, propagation_time
from .graph import Graph
from .matrices import PatternError, PatternMatrix, kn_counterexample, path_counterexample, sample_with_null_vector

REL_SLACK = 1e-9
ABS_SLACK = 1e-12


@dataclass
class Measurement:
    values: dict[int, object]
    epsilon: float = 0.0

    @property
    def S(self) -> frozenset[int]:
        return frozenset(self.values)


@dataclass
class Reconstruction:
    x_hat: dict[int, object]
    error_bound: dict[int, float] = field(default_factory=dict)
    coarse_bound: dict[int, float] = field(default_factory=dict)
    kappa: float = 1.0


def _within(observed: float, bound: float) -> bool:
    return observed <= bound * (1 + REL_SLACK) + ABS_SLACK


def back_solve(a: PatternMatrix, chain: ForcingChain, m: Measurement, bounds: bool = True) -> Reconstruction:
    """Rebuild ``x`` from ``m`` along ``chain``.

    Values may be floats, Fractions (exact arithmetic throughout) or equal-shape
    numpy arrays (a batch of independent measurements).
    """
    if m.S != chain.S:
        raise ValueError(f"measurement covers {sorted(m.S)}, chain starts from {sorted(chain.S)}")
    g = a.graph
    x_hat = dict(m.values)
    zero = 0 * next(iter(x_hat.values())) if x_hat else 0
    for k in chain.order():
        i = chain.forcer[k]
        pivot = a.entry(i, k)
        if pivot == 0:
            raise PatternError(f"pivot A[{i},{k}] is zero")
        acc = zero
        for j in g.closed_neighbors(i):
            if j != k:
                aij = a.entry(i, j)
                if aij != 0:
                    acc = acc + aij * x_hat[j]
        x_hat[k] = -acc / pivot
    x_hat = dict(sorted(x_hat.items()))
    rec = Reconstruction(x_hat)
    if bounds:
        kappa = a.kappa_prime()
        q = error_vector_of_chain(g, chain)
        base = kappa * g.max_degree
        rec.kappa = kappa
        rec.error_bound = {v: q[v].eval(kappa) * m.epsilon for v in q}
        rec.coarse_bound = {v: base ** chain.round[v] * m.epsilon for v in q}
    return rec


def _trial_seed(seed: int, trial: int, stream: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, trial, stream])


def _run_bound_trials(args) -> list[dict]:
    g, chain, trials, seed, eps, weight_range = args
    tau = chain.time
    out = []
    for t in trials:
        a = sample_with_null_vector(g, _trial_seed(seed, t, 0), weight_range)
        rng = np.random.default_rng(_trial_seed(seed, t, 1))
        x = a.known_null
        noise = rng.uniform(-eps, eps, size=len(chain.S))
        m = Measurement({v: x[v - 1] + float(e) for v, e in zip(sorted(chain.S), noise)}, eps)
        rec = back_solve(a, chain, m)
        kappa = rec.kappa
        global_bound = (kappa * g.max_degree) ** tau * eps
        errs = {v: abs(x[v - 1] - rec.x_hat[v]) for v in g.vertices}
        violations = []
        poly_ratio = 0.0
        for v, e in errs.items():
            b = rec.error_bound[v]
            poly_ratio = max(poly_ratio, e / b if b else (0.0 if e == 0 else math.inf))
            if not _within(e, b):
                violations.append({"vertex": v, "kind": "per_vertex", "observed": e, "bound": b})
            if not _within(b, rec.coarse_bound[v]):
                violations.append({"vertex": v, "kind": "bound_order", "observed": b, "bound": rec.coarse_bound[v]})
        worst = max(errs.values())
        if not _within(worst, global_bound):
            violations.append({"vertex": max(errs, key=errs.get), "kind": "global", "observed": worst, "bound": global_bound})
        for viol in violations:
            viol.update(trial=t, seed=[seed, t], kappa=kappa, matrix=a.to_json())
        out.append(
            {
                "trial": t,
                "violations": violations,
                "poly_ratio": poly_ratio,
                "coarse_ratio": worst / global_bound if global_bound else 0.0,
            }
        )
    return out


def default_threads() -> int:
    env = os.environ.get("ZFS_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def verify_bounds(
    g: Graph,
    s: Iterable[int],
    trials: int,
    seed: int,
    eps: float = 1e-3,
    chain: ForcingChain | None = None,
    weight_range: tuple[float, float] = (0.5, 2.0),
    threads: int = 1,
) -> dict:
    """Sample matrices, perturb the sampled entries, back-solve, check both error bounds.

    Every trial derives its randomness from ``(seed, trial)``, so the report
    does not depend on ``threads``.
    """
    s = sorted(set(s))
    propagation_time(g, s)
    chain = chain or greedy_chain(g, s)
    idx = list(range(trials))
    if threads > 1 and trials > 1:
        chunks = [idx[k::threads] for k in range(threads) if idx[k::threads]]
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            parts = pool.map(_run_bound_trials, [(g, chain, c, seed, eps, weight_range) for c in chunks])
            results = sorted((r for p in parts for r in p), key=lambda r: r["trial"])
    else:
        results = _run_bound_trials((g, chain, idx, seed, eps, weight_range))
    violations = [v for r in results for v in r["violations"]]
    return {
        "graph": g.to_json(),
        "set": s,
        "chain": chain.to_json(),
        "trials": trials,
        "eps": eps,
        "violations": violations,
        "worst_slack": {
            "thm16": max((r["coarse_ratio"] for r in results), default=0.0),
            "thm52": max((r["poly_ratio"] for r in results), default=0.0),
        },
        "ok": not violations,
    }


def _noise(rng: np.random.Generator, dist: str, eps: float, size) -> np.ndarray:
    if dist == "uniform":
        w = math.sqrt(3 * eps)
        return rng.uniform(-w, w, size=size)
    if dist == "gaussian":
        return rng.normal(0.0, math.sqrt(eps), size=size)
    if dist == "rademacher":
        return rng.choice([-1.0, 1.0], size=size) * math.sqrt(eps)
    raise ValueError(f"unknown noise distribution {dist!r}")


NOISE_DISTS = ("uniform", "gaussian", "rademacher")


def error_coefficients(a: PatternMatrix, chain: ForcingChain) -> dict[int, dict[int, float]]:
    """``C[i][k]``: change in the estimate of ``x_k`` per unit error at sensor ``i``.

    Measured by perturbing one sensor at a time around the true null vector.
    """
    x = a.known_null
    base = {v: x[v - 1] for v in chain.S}
    exact = back_solve(a, chain, Measurement(base), bounds=False).x_hat
    out = {}
    for i in sorted(chain.S):
        probe = dict(base)
        probe[i] = probe[i] + 1
        xh = back_solve(a, chain, Measurement(probe), bounds=False).x_hat
        out[i] = {k: xh[k] - exact[k] for k in a.graph.vertices}
    return out


def verify_variance(
    g: Graph,
    s: Iterable[int],
    chain: ForcingChain | None = None,
    trials: int = 10_000,
    noise: str = "uniform",
    seed: int = 0,
    eps: float = 1e-4,
    weight_range: tuple[float, float] = (0.5, 2.0),
) -> dict:
    """Monte Carlo check of the variance bound for one sampled matrix.

    Per vertex: ``|mean| <= 4 sqrt(V(kappa) eps / trials)`` and
    ``sample variance <= V(kappa) eps (1 + 6/sqrt(trials))``. Also checks each
    unit-probe coefficient against the matching alpha-coefficient at
    ``kappa``, and that every trial's error is exactly the probe-predicted
    linear combination.
    """
    s = sorted(set(s))
    chain = chain or greedy_chain(g, s)
    if sorted(chain.S) != s:
        raise ValueError("chain does not start from the given set")
    a = sample_with_null_vector(g, np.random.SeedSequence([seed, 0]), weight_range)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 1]))
    kappa = a.kappa_prime()
    alpha = alpha_vector_of_chain(g, chain)
    var_poly = variance_vector_of_chain(g, chain)
    coeffs = error_coefficients(a, chain)

    failures = []
    probe_worst = 0.0
    for i in s:
        for k in g.vertices:
            c = abs(coeffs[i][k])
            b = alpha[k].coefficient(i).eval(kappa)
            probe_worst = max(probe_worst, c / b if b else (0.0 if c < ABS_SLACK else math.inf))
            if not _within(c, b):
                failures.append({"kind": "coefficient", "sensor": i, "vertex": k, "observed": c, "bound": b})

    # superposition on random probe pairs
    x = a.known_null
    exact = {v: x[v - 1] for v in s}
    lin_worst = 0.0
    for _ in range(8):
        u, w = rng.normal(size=len(s)), rng.normal(size=len(s))
        cu, cw = rng.normal(size=2)
        def err(vec):
            m = Measurement({v: exact[v] + float(e) for v, e in zip(s, vec)})
            xh = back_solve(a, chain, m, bounds=False).x_hat
            return np.array([xh[k] - x[k - 1] for k in g.vertices])
        lhs = err(cu * u + cw * w)
        rhs = cu * err(u) + cw * err(w)
        lin_worst = max(lin_worst, float(np.max(np.abs(lhs - rhs)) / max(1.0, float(np.max(np.abs(rhs))))))
    if lin_worst > 1e-8:
        failures.append({"kind": "linearity", "observed": lin_worst, "bound": 1e-8})

    sample = _noise(rng, noise, eps, (trials, len(s)))
    m = Measurement({v: exact[v] + sample[:, col] for col, v in enumerate(s)}, eps)
    xh = back_solve(a, chain, m, bounds=False).x_hat
    cmat = np.array([[coeffs[i][k] for k in g.vertices] for i in s])
    predicted_err = sample @ cmat
    ident_worst = 0.0
    per_vertex = []
    for col, k in enumerate(g.vertices):
        e = xh[k] - x[k - 1]
        ident_worst = max(ident_worst, float(np.max(np.abs(e - predicted_err[:, col]))))
        bound = var_poly[k].eval(kappa) * eps
        mean = float(np.mean(e))
        svar = float(np.var(e, ddof=1)) if trials > 1 else 0.0
        band = 4 * math.sqrt(bound / trials) if trials else 0.0
        var_cap = bound * (1 + 6 / math.sqrt(trials)) if trials else bound
        entry = {
            "vertex": k,
            "bound": bound,
            "sample": svar,
            "predicted": float(sum(coeffs[i][k] ** 2 for i in s)) * eps,
            "mean": mean,
            "mean_band": band,
            "z_mean": mean / math.sqrt(bound / trials) if bound and trials else 0.0,
        }
        per_vertex.append(entry)
        if trials and not _within(abs(mean), band):
            failures.append({"kind": "mean", "vertex": k, "observed": abs(mean), "bound": band})
        if trials > 1 and not _within(svar, var_cap):
            failures.append({"kind": "variance", "vertex": k, "observed": svar, "bound": var_cap})
    ident_tol = 1e-9 * max(1.0, float(np.max(np.abs(predicted_err)))) if trials else 0.0
    if ident_worst > ident_tol:
        failures.append({"kind": "linear_identity", "observed": ident_worst, "bound": ident_tol})
    return {
        "graph": g.to_json(),
        "set": s,
        "chain": chain.to_json(),
        "trials": trials,
        "eps": eps,
        "noise": noise,
        "kappa": float(kappa),
        "coefficients": {str(i): {str(k): float(c) for k, c in row.items()} for i, row in coeffs.items()},
        "probe_worst_ratio": probe_worst,
        "linearity_worst": lin_worst,
        "identity_worst": ident_worst,
        "variance": {"per_vertex": per_vertex},
        "violations": failures,
        "ok": not failures,
    }


def path_tightness(n: int, eps=Fraction(1)) -> dict:
    """Seed error ``eps`` at the end of the doubling path; exact error at vertex 1."""
    a = path_counterexample(n)
    chain = greedy_chain(a.graph, {n})
    x = a.known_null
    m = Measurement({n: x[n - 1] + eps}, eps)
    rec = back_solve(a, chain, m)
    err = abs(x[0] - rec.x_hat[1])
    return {
        "n": n,
        "eps": eps,
        "error_at_1": err,
        "factor": err / eps,
        "expected_factor": 2 ** ((n - 1) // 2),
        "poly_bound_at_1": rec.error_bound[1],
        "kappa": rec.kappa,
        "x_hat": rec.x_hat,
    }


def kn_tightness(n: int, delta, eps=Fraction(1)) -> dict:
    """Every sensor off by ``+eps`` on the complete-graph example; exact error at vertex 1."""
    a = kn_counterexample(n, delta)
    s = set(range(2, n + 1))
    chain = greedy_chain(a.graph, s)
    x = a.known_null
    m = Measurement({v: x[v - 1] + eps for v in s}, eps)
    rec = back_solve(a, chain, m)
    err = abs(x[0] - rec.x_hat[1])
    delta = Fraction(delta) if not isinstance(delta, float) else delta
    return {
        "n": n,
        "delta": delta,
        "eps": eps,
        "error_at_1": err,
        "factor": err / eps,
        "expected_factor": (n - 1) / delta,
        "kappa": rec.kappa,
        "forcer_of_1": chain.forcer[1],
    }


def measurement_from_null(a: PatternMatrix, s: Iterable[int], errors: Mapping[int, object] | None = None) -> Measurement:
    errors = errors or {}
    x = a.known_null
    return Measurement({v: x[v - 1] + errors.get(v, 0) for v in sorted(set(s))})
