"""``zfs`` command line.

Exit status: 0 on success, 2 when a verification or check fails, 1 on bad
usage or bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import errorvec, forcing, matrices, reconstruct
from .polynomial import Poly
from .graph import BUILTIN_NAMES, GraphParseError, builtin_graph, read_graph

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_set(text: str) -> list[int]:
    try:
        out = [int(tok) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError:
        raise UsageError(f"malformed vertex set {text!r}") from None
    if not out:
        raise UsageError("empty vertex set")
    return sorted(set(out))


def parse_sets(text: str) -> list[list[int]]:
    return [parse_set(part) for part in text.split(";") if part.strip()]


def _graph(args):
    if args.graph and args.builtin:
        raise UsageError("give either -g FILE or --builtin NAME, not both")
    if args.graph:
        try:
            return read_graph(args.graph)
        except OSError as exc:
            raise UsageError(str(exc)) from None
        except GraphParseError as exc:
            raise UsageError(f"{args.graph}: {exc}") from None
    if args.builtin:
        try:
            return builtin_graph(args.builtin, args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    raise UsageError("a graph is required: -g FILE or --builtin NAME")


def _set(args, g):
    if not args.set:
        raise UsageError("a vertex set is required: -s 1,2,3")
    s = parse_set(args.set)
    bad = [v for v in s if not 1 <= v <= g.n]
    if bad:
        raise UsageError(f"vertices {bad} outside 1..{g.n}")
    return s


def _require_zfs(g, s):
    if not forcing.is_zero_forcing_set(g, s):
        raise UsageError(f"{s} is not a zero forcing set")


def _emit(args, data, text_lines):
    if args.json:
        print(json.dumps(data, indent=2, default=_json_default))
    else:
        print("\n".join(text_lines))


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    raise TypeError(f"cannot encode {type(obj).__name__}")


def _fmt_set(s):
    return "{" + ",".join(map(str, sorted(s))) + "}"


def _vec_lines(name, vec):
    width = max(len(str(v)) for v in vec)
    return [f"  {name}_{v:<{width}} = {p}" for v, p in vec.items()]


def cmd_min(args):
    g = _graph(args)
    try:
        z, sets = forcing.minimum_zero_forcing_sets(g, max_vertices=args.max_vertices)
    except forcing.SearchTooLargeError as exc:
        raise UsageError(str(exc)) from None
    data = {"graph": g.to_json(), "Z": z, "sets": [list(s) for s in sets]}
    lines = [f"Z(G) = {z}", f"{len(sets)} minimum zero forcing set(s):"]
    lines += [f"  {_fmt_set(s)}  pt={forcing.propagation_time(g, s)}" for s in sets]
    _emit(args, data, lines)
    return EXIT_OK


def cmd_check(args):
    g = _graph(args)
    s = _set(args, g)
    trace = forcing.closure(g, s)
    ok = len(trace.derived_set) == g.n
    data = {
        "set": s,
        "zero_forcing": ok,
        "pt": trace.time if ok else None,
        "derived_set": sorted(trace.derived_set),
        "rounds": trace.to_json(),
    }
    lines = [f"set {_fmt_set(s)}: {'zero forcing' if ok else 'NOT zero forcing'}"]
    if ok:
        lines.append(f"propagation time: {trace.time}")
    else:
        lines.append(f"derived set: {_fmt_set(trace.derived_set)}")
    for r, colored in enumerate(trace.rounds):
        lines.append(f"  round {r}: {_fmt_set(colored)}")
    _emit(args, data, lines)
    return EXIT_OK


def cmd_chains(args):
    g = _graph(args)
    s = _set(args, g)
    _require_zfs(g, s)
    try:
        chains = forcing.enumerate_forcing_chains(g, s, limit=args.limit)
    except forcing.ChainLimitError as exc:
        print(f"zfs: {exc}", file=sys.stderr)
        return EXIT_FAIL
    data = {"set": s, "count": len(chains), "chains": [c.to_json() for c in chains]}
    lines = [f"{len(chains)} forcing chain(s) for {_fmt_set(s)}:"]
    lines += [f"  [{idx}] {c.describe()}" for idx, c in enumerate(chains)]
    _emit(args, data, lines)
    return EXIT_OK


def cmd_error_poly(args):
    g = _graph(args)
    s = _set(args, g)
    _require_zfs(g, s)
    q, chain = errorvec.error_vector_of_set(g, s)
    v, p = errorvec.max_entry(q)
    data = {
        "set": s,
        "pt": forcing.propagation_time(g, s),
        "chain": chain.to_json(),
        "q": errorvec.polyvec_json(q),
        "q_max": {"vertex": v, "poly": {**p.to_json(), "text": str(p)}},
    }
    lines = [f"error polynomial vector of {_fmt_set(s)} (greedy chain: {chain.describe()})"]
    lines += _vec_lines("q", q)
    lines.append(f"max entry: q_{v} = {p}")
    if args.chain == "all":
        try:
            chains = forcing.enumerate_forcing_chains(g, s, limit=args.limit)
        except forcing.ChainLimitError as exc:
            print(f"zfs: {exc}", file=sys.stderr)
            return EXIT_FAIL
        per_chain = [errorvec.error_vector_of_chain(g, c) for c in chains]
        best, _ = errorvec.entrywise_min(per_chain)
        data["chains"] = [{"chain": c.to_json(), "q": errorvec.polyvec_json(vec)} for c, vec in zip(chains, per_chain)]
        data["greedy_equals_entrywise_min"] = best == q
        for idx, (c, vec) in enumerate(zip(chains, per_chain)):
            lines.append(f"chain [{idx}] {c.describe()}")
            lines += _vec_lines("q", vec)
        lines.append(f"greedy equals entrywise minimum: {best == q}")
    _emit(args, data, lines)
    return EXIT_OK


def cmd_variance_poly(args):
    g = _graph(args)
    s = _set(args, g)
    _require_zfs(g, s)
    try:
        res = errorvec.variance_vector_of_set(g, s, limit=args.limit)
    except forcing.ChainLimitError as exc:
        print(f"zfs: {exc}", file=sys.stderr)
        return EXIT_FAIL
    v, p = errorvec.max_entry(res.V)
    data = {
        "set": s,
        "V": errorvec.polyvec_json(res.V),
        "V_max": {"vertex": v, "poly": {**p.to_json(), "text": str(p)}},
        "witnesses": {str(k): res.chains[i].to_json() for k, i in res.witnesses.items()},
        "chain_count": len(res.chains),
        "V_single_chain": res.single_chain_achieves,
    }
    lines = [f"variance polynomial vector of {_fmt_set(s)} over {len(res.chains)} chain(s)"]
    for k, poly in res.V.items():
        lines.append(f"  V_{k} = {poly}    [chain: {res.chains[res.witnesses[k]].describe()}]")
    lines.append(f"max entry: V_{v} = {p}")
    lines.append(f"one chain achieves every entry: {res.single_chain_achieves}")
    _emit(args, data, lines)
    return EXIT_OK


def cmd_compare(args):
    g = _graph(args)
    sets = parse_sets(args.sets)
    if not sets:
        raise UsageError("--sets needs at least one set")
    for s in sets:
        bad = [v for v in s if not 1 <= v <= g.n]
        if bad:
            raise UsageError(f"vertices {bad} outside 1..{g.n}")
        _require_zfs(g, s)
    try:
        reports = [errorvec.set_report(g, s, limit=args.limit) for s in sets]
    except forcing.ChainLimitError as exc:
        print(f"zfs: {exc}", file=sys.stderr)
        return EXIT_FAIL
    qmax = [Poly.from_json(r["q_max"]["poly"]) for r in reports]
    vmax = [Poly.from_json(r["V_max"]["poly"]) for r in reports]
    best_q = min(range(len(sets)), key=lambda i: (qmax[i], i))
    best_v = min(range(len(sets)), key=lambda i: (vmax[i], i))
    data = {"graph": g.to_json(), "sets": reports, "best_q": sets[best_q], "best_V": sets[best_v]}
    rows = [("set", "pt", "max q", "max V")]
    rows += [(_fmt_set(s), str(r["pt"]), str(a), str(b)) for s, r, a, b in zip(sets, reports, qmax, vmax)]
    widths = [max(len(row[c]) for row in rows) for c in range(4)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    lines.append(f"best by max q: {_fmt_set(sets[best_q])}; best by max V: {_fmt_set(sets[best_v])}")
    _emit(args, data, lines)
    return EXIT_OK


def _pick_chain(args, g, s):
    if args.chain_index is None:
        return forcing.greedy_chain(g, s)
    chains = forcing.enumerate_forcing_chains(g, s, limit=args.limit)
    if not 0 <= args.chain_index < len(chains):
        raise UsageError(f"--chain-index must be in 0..{len(chains) - 1}")
    return chains[args.chain_index]


def cmd_verify(args):
    g = _graph(args)
    s = _set(args, g)
    _require_zfs(g, s)
    if args.trials < 0 or args.eps < 0:
        raise UsageError("--trials and --eps must be nonnegative")
    chain = _pick_chain(args, g, s)
    if args.mode == "bounds":
        threads = args.threads or reconstruct.default_threads()
        rep = reconstruct.verify_bounds(g, s, args.trials, args.seed, args.eps, chain=chain, threads=threads)
        lines = [
            f"bounds check of {_fmt_set(s)} along {chain.describe()}: {args.trials} trials, eps={args.eps}",
            f"violations: {len(rep['violations'])}",
            f"worst observed/bound, (kappa*Delta)^pt bound: {rep['worst_slack']['thm16']:.6g}",
            f"worst observed/bound, per-vertex polynomial bound: {rep['worst_slack']['thm52']:.6g}",
        ]
    else:
        rep = reconstruct.verify_variance(g, s, chain=chain, trials=args.trials, noise=args.noise, seed=args.seed, eps=args.eps)
        lines = [
            f"variance check of {_fmt_set(s)} along {chain.describe()}: {args.trials} trials, "
            f"{args.noise} noise, eps={args.eps}, kappa'={rep['kappa']:.6g}",
            "vertex  bound         sample        mean z",
        ]
        for e in rep["variance"]["per_vertex"]:
            lines.append(f"{e['vertex']:<7} {e['bound']:<13.6g} {e['sample']:<13.6g} {e['z_mean']:+.3f}")
        lines.append(f"violations: {len(rep['violations'])}")
    for viol in rep["violations"][:10]:
        print(f"zfs: violation: {json.dumps({k: viol[k] for k in viol if k != 'matrix'})}", file=sys.stderr)
    _emit(args, rep, lines)
    return EXIT_OK if rep["ok"] else EXIT_FAIL


def cmd_demo(args):
    if args.name == "f2":
        rep = matrices.f2_counterexample_check()
        lines = [
            "K6 minus {1,5},{2,6} over GF(2):",
            f"  det of rows 4-6 / columns 1-3: {rep['minor_det_f2']}",
            f"  columns 1-3 have rank 3 for all {rep['diagonal_assignments']} diagonals: {rep['all_rank_3']}",
            f"  {{4,5,6}} is zero forcing: {rep['set_456_is_zero_forcing']}",
            f"  Z(G) = {rep['Z']}",
        ]
    elif args.name == "path2":
        n = args.n or 9
        if n < 1 or n % 2 == 0:
            raise UsageError("path2 needs odd -n")
        try:
            eps = Fraction(args.eps_exact)
        except (ValueError, ZeroDivisionError):
            raise UsageError("--eps-exact must be an exact decimal or fraction") from None
        rep = reconstruct.path_tightness(n, eps)
        rep.pop("x_hat")
        rep["ok"] = rep["factor"] == rep["expected_factor"]
        lines = [
            f"doubling path, n={n}, sensor at {n} off by {eps}:",
            f"  |x_1 - xhat_1| = {rep['error_at_1']} = {rep['factor']} * eps (expected {rep['expected_factor']})",
            f"  per-vertex polynomial bound at vertex 1: {rep['poly_bound_at_1']} (kappa' = {rep['kappa']})",
        ]
    elif args.name == "kn":
        n = args.n or 5
        try:
            eps, delta = Fraction(args.eps_exact), Fraction(args.delta)
        except (ValueError, ZeroDivisionError):
            raise UsageError("--delta and --eps-exact must be exact decimals or fractions") from None
        if n < 2 or delta <= 0:
            raise UsageError("kn needs -n >= 2 and --delta > 0")
        rep = reconstruct.kn_tightness(n, delta, eps)
        rep["ok"] = rep["factor"] == rep["expected_factor"]
        lines = [
            f"K_{n} with delta={rep['delta']}, every sensor off by +{eps}:",
            f"  |x_1 - xhat_1| = {rep['error_at_1']} = {rep['factor']} * eps (expected (n-1)/delta = {rep['expected_factor']})",
            f"  kappa' = {rep['kappa']}",
        ]
    else:
        g = _graph(args)
        s = _set(args, g)
        if forcing.is_zero_forcing_set(g, s):
            raise UsageError(f"{s} is a zero forcing set; a witness needs a set that is not")
        a, y = matrices.witness_matrix(g, s)
        sums = [sum(a.entry(i, c) for c in y) for i in g.vertices]
        rank = matrices.rational_rank(matrices.columns(a.rows, y))
        rep = {
            "set": s,
            "Y": list(y),
            "matrix": a.to_json(),
            "row_sums_on_Y": [str(v) for v in sums],
            "rank_A_Y": rank,
            "in_pattern": matrices.conforms(g, a.rows),
        }
        rep["ok"] = all(v == 0 for v in sums) and rank < len(y) and rep["in_pattern"]
        lines = [f"witness matrix for {_fmt_set(s)}; uncolored Y = {_fmt_set(y)}"]
        lines += ["  " + " ".join(f"{str(v):>4}" for v in row) for row in a.rows]
        lines.append(f"  A[:,Y] @ 1 = {[str(v) for v in sums]}; rank A[:,Y] = {rank} < |Y| = {len(y)}")
    _emit(args, rep, lines)
    return EXIT_OK if rep["ok"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    gp = argparse.ArgumentParser(add_help=False)
    gp.add_argument("-g", "--graph", metavar="FILE", help="edge-list file")
    gp.add_argument("--builtin", metavar="NAME", help=f"built-in graph: {', '.join(BUILTIN_NAMES)}")
    gp.add_argument("-n", type=int, help="size for parameterized built-in graphs")
    gp.add_argument("--json", action="store_true", help="machine-readable output")
    sp = argparse.ArgumentParser(add_help=False)
    sp.add_argument("-s", "--set", metavar="V,V,...", help="comma-separated 1-based vertices")
    lp = argparse.ArgumentParser(add_help=False)
    lp.add_argument("--limit", type=int, default=errorvec.DEFAULT_CHAIN_LIMIT, help="max forcing chains to enumerate")

    parser = _Parser(prog="zfs", description="Zero forcing sets, error polynomials, and reconstruction checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("min", parents=[gp], help="zero forcing number and all minimum sets")
    p.add_argument("--max-vertices", type=int, default=forcing.DEFAULT_MAX_VERTICES)
    p.set_defaults(func=cmd_min)

    p = sub.add_parser("check", parents=[gp, sp], help="closure trace and propagation time")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("chains", parents=[gp, sp, lp], help="enumerate forcing chains")
    p.set_defaults(func=cmd_chains)

    p = sub.add_parser("error-poly", parents=[gp, sp, lp], help="error polynomial vector")
    p.add_argument("--chain", choices=["greedy", "all"], default="greedy")
    p.set_defaults(func=cmd_error_poly)

    p = sub.add_parser("variance-poly", parents=[gp, sp, lp], help="variance polynomial vector")
    p.set_defaults(func=cmd_variance_poly)

    p = sub.add_parser("compare", parents=[gp, lp], help="max q and max V for several sets")
    p.add_argument("--sets", required=True, help='semicolon-separated sets, e.g. "2,6,9;1,6,9"')
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", parents=[gp, sp, lp], help="sampled-matrix error checks")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["bounds", "variance"], default="bounds")
    p.add_argument("--noise", choices=reconstruct.NOISE_DISTS, default="uniform")
    p.add_argument("--chain-index", type=int, help="use this enumerated chain instead of the greedy one")
    p.add_argument("--threads", type=int, help="worker processes (default: ZFS_THREADS or all cores)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", parents=[gp, sp], help="counterexample constructions")
    p.add_argument("--name", required=True, choices=["kn", "path2", "f2", "witness"])
    p.add_argument("--delta", default="0.01", help="kn: weight on edges at vertex 1 (exact decimal)")
    p.add_argument("--eps-exact", default="1", help="kn/path2: injected error (exact rational)")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"zfs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
