import math
from fractions import Fraction

import numpy as np
import pytest

from zforce.errorvec import alpha_vector_of_chain, error_vector_of_chain
from zforce.forcing import ForcingChain, enumerate_forcing_chains, greedy_chain, minimum_zero_forcing_sets
from zforce.graph import FIG1_GRID9, FIG3_FORK, Graph, path_graph
from zforce.matrices import PatternError, PatternMatrix, kn_counterexample, path_counterexample, sample_with_null_vector
from zforce.reconstruct import (
    Measurement,
    back_solve,
    error_coefficients,
    kn_tightness,
    measurement_from_null,
    path_tightness,
    verify_bounds,
    verify_variance,
)

from conftest import GOLDEN, corpus_builtins


def test_exact_measurements_recover_x(small_corpus):
    for idx, g in enumerate(small_corpus):
        s = minimum_zero_forcing_sets(g)[1][0]
        a = sample_with_null_vector(g, idx)
        rec = back_solve(a, greedy_chain(g, s), measurement_from_null(a, s))
        x = np.array(a.known_null)
        xh = np.array([rec.x_hat[v] for v in g.vertices])
        assert np.max(np.abs(x - xh)) / np.max(np.abs(x)) < 1e-8


def test_sampled_entries_are_kept_bitwise():
    a = sample_with_null_vector(FIG1_GRID9, 4)
    m = measurement_from_null(a, {2, 6, 9}, {2: 1e-3, 6: -2e-3, 9: 0.5e-3})
    rec = back_solve(a, greedy_chain(FIG1_GRID9, {2, 6, 9}), m)
    for v in (2, 6, 9):
        assert rec.x_hat[v] is m.values[v]


def test_exact_mode_with_fractions():
    a = path_counterexample(7)
    rec = back_solve(a, greedy_chain(a.graph, {7}), measurement_from_null(a, {7}))
    assert tuple(rec.x_hat.values()) == a.known_null


def test_path_counterexample_error_doubles():
    a = path_counterexample(9)
    chain = greedy_chain(a.graph, {9})
    eps = Fraction(1, 1000)
    rec = back_solve(a, chain, measurement_from_null(a, {9}, {9: eps}))
    assert abs(a.known_null[0] - rec.x_hat[1]) == 16 * eps
    for n in (3, 5, 11, 21):
        assert path_tightness(n)["factor"] == 2 ** ((n - 1) // 2)


def test_kn_counterexample_error():
    for n, delta in [(4, Fraction(1, 10)), (5, Fraction(1, 100)), (7, Fraction(3, 7))]:
        rep = kn_tightness(n, delta, Fraction(1, 10**6))
        assert rep["error_at_1"] == Fraction(n - 1) / delta * Fraction(1, 10**6)
        assert rep["kappa"] == max(delta, 1 / delta)


def test_kn_reconstruction_formula_any_forcer():
    a = kn_counterexample(5, Fraction(1, 100))
    s = {2, 3, 4, 5}
    errs = {2: Fraction(1), 3: Fraction(-2), 4: Fraction(5), 5: Fraction(1, 3)}
    for forcer in s:
        chain = ForcingChain.from_forcer(a.graph, s, {1: forcer})
        rec = back_solve(a, chain, measurement_from_null(a, s, errs))
        assert a.known_null[0] - rec.x_hat[1] == sum(errs.values()) * 100


def test_tightness_probe_ratio_on_path():
    rep = path_tightness(9, Fraction(1))
    # q at the far end of P9 from a single endpoint, via the binomial identity, at kappa' = 2
    q_far = sum(math.comb(8 - r, r) * 2 ** (8 - r) for r in range(5))
    assert q_far == 2448
    assert rep["kappa"] == 2
    assert rep["poly_bound_at_1"] == q_far
    assert rep["error_at_1"] / rep["poly_bound_at_1"] == Fraction(16, 2448)


def test_bounds_reported_per_vertex():
    g = FIG1_GRID9
    chain = greedy_chain(g, {1, 6, 9})
    a = sample_with_null_vector(g, 0)
    rec = back_solve(a, chain, Measurement(measurement_from_null(a, {1, 6, 9}).values, 1e-3))
    q = error_vector_of_chain(g, chain)
    kappa = a.kappa_prime()
    for v in g.vertices:
        assert rec.error_bound[v] == pytest.approx(q[v].eval(kappa) * 1e-3)
        assert rec.coarse_bound[v] == pytest.approx((kappa * g.max_degree) ** chain.round[v] * 1e-3)
        assert rec.error_bound[v] <= rec.coarse_bound[v] * (1 + 1e-12)


def test_zero_pivot_is_a_pattern_error():
    # chain on the path 1-2-3, matrix on a graph without the edge {1,2}
    a = PatternMatrix(Graph(3, [(2, 3)]), ((1, 0, 0), (0, 1, 1), (0, 1, 1)))
    chain = greedy_chain(path_graph(3), {1})
    with pytest.raises(PatternError, match="pivot"):
        back_solve(a, chain, Measurement({1: 1.0}), bounds=False)


def test_measurement_must_match_chain():
    a = path_counterexample(3)
    with pytest.raises(ValueError):
        back_solve(a, greedy_chain(a.graph, {1}), Measurement({3: Fraction(1)}))


def test_verify_bounds_zero_trials():
    rep = verify_bounds(FIG1_GRID9, {2, 6, 9}, 0, seed=1)
    assert rep["ok"] and rep["violations"] == [] and rep["trials"] == 0


@pytest.mark.parametrize("s", ["2,6,9", "1,6,9", "1,4,7"])
def test_verify_bounds_grid9_sets(s):
    rep = verify_bounds(FIG1_GRID9, map(int, s.split(",")), 200, seed=7, eps=1e-3)
    assert rep["ok"], rep["violations"][:1]
    assert 0 < rep["worst_slack"]["thm52"] <= 1 + 1e-9
    assert 0 < rep["worst_slack"]["thm16"] <= 1 + 1e-9


def test_verify_bounds_corpus_quick():
    for g in corpus_builtins():
        s = minimum_zero_forcing_sets(g)[1][0]
        assert verify_bounds(g, s, 20, seed=3)["ok"]


def test_verify_bounds_same_result_with_workers():
    one = verify_bounds(FIG3_FORK, {1, 3, 5}, 30, seed=2)
    two = verify_bounds(FIG3_FORK, {1, 3, 5}, 30, seed=2, threads=2)
    assert one == two


def test_verify_bounds_catches_a_broken_bound(monkeypatch):
    import zforce.reconstruct as rc

    real = rc.back_solve

    def shrunk(*args, **kwargs):
        rec = real(*args, **kwargs)
        rec.error_bound = {v: b / 1e6 for v, b in rec.error_bound.items()}
        return rec

    monkeypatch.setattr(rc, "back_solve", shrunk)
    rep = rc.verify_bounds(FIG1_GRID9, {2, 6, 9}, 3, seed=0)
    assert not rep["ok"]
    viol = rep["violations"][0]
    assert {"trial", "vertex", "seed", "matrix", "kappa"} <= set(viol)


def _fork_chain(case):
    forcer = {int(k): v for k, v in GOLDEN["fig3_fork"][case]["forcer"].items()}
    return ForcingChain.from_forcer(FIG3_FORK, {1, 3, 5}, forcer)


def test_unit_probes_respect_alpha_coefficients():
    for case in ("case1", "case2"):
        chain = _fork_chain(case)
        alpha = alpha_vector_of_chain(FIG3_FORK, chain)
        for seed in range(20):
            a = sample_with_null_vector(FIG3_FORK, seed)
            kappa = a.kappa_prime()
            coeffs = error_coefficients(a, chain)
            for i, row in coeffs.items():
                for k, c in row.items():
                    assert abs(c) <= alpha[k].coefficient(i).eval(kappa) * (1 + 1e-9) + 1e-12


def test_unit_probe_reproduces_linear_combination():
    chain = greedy_chain(FIG1_GRID9, {1, 4, 7})
    a = sample_with_null_vector(FIG1_GRID9, 9)
    coeffs = error_coefficients(a, chain)
    errs = {1: 0.3, 4: -0.7, 7: 1.1}
    rec = back_solve(a, chain, measurement_from_null(a, {1, 4, 7}, errs), bounds=False)
    for k in FIG1_GRID9.vertices:
        predicted = sum(coeffs[i][k] * e for i, e in errs.items())
        assert rec.x_hat[k] - a.known_null[k - 1] == pytest.approx(predicted, rel=1e-9, abs=1e-12)


def test_single_source_variance_is_coefficient_squared():
    g = path_graph(6)
    rep = verify_variance(g, {1}, trials=20_000, seed=4, eps=1e-2)
    assert rep["ok"], rep["violations"]
    for e in rep["variance"]["per_vertex"]:
        c = rep["coefficients"]["1"][str(e["vertex"])]
        assert e["predicted"] == pytest.approx(c**2 * 1e-2)
        # sample variance of a scaled uniform; 6 sigma relative band
        assert e["sample"] == pytest.approx(e["predicted"], rel=6 * math.sqrt(0.8 / 20_000), abs=1e-15)


@pytest.mark.parametrize("noise", ["uniform", "gaussian", "rademacher"])
def test_verify_variance_noise_models(noise):
    rep = verify_variance(FIG3_FORK, {1, 3, 5}, chain=_fork_chain("case2"), trials=20_000, noise=noise, seed=1)
    assert rep["ok"], rep["violations"]
    assert rep["linearity_worst"] < 1e-8


def test_verify_variance_rejects_unknown_noise():
    with pytest.raises(ValueError):
        verify_variance(FIG3_FORK, {1, 3, 5}, trials=10, noise="cauchy")


def test_verify_variance_flags_an_undersized_bound(monkeypatch):
    import zforce.reconstruct as rc
    from zforce.polynomial import Poly

    real = rc.variance_vector_of_chain
    monkeypatch.setattr(rc, "variance_vector_of_chain", lambda g, c: {k: Poly([0]) if k == 4 else p for k, p in real(g, c).items()})
    rep = rc.verify_variance(FIG3_FORK, {1, 3, 5}, trials=5000, seed=0)
    assert not rep["ok"]
    assert {v["kind"] for v in rep["violations"]} >= {"variance"}
