"""Command-line surface: generate, sparsify, sketch, query, verify, bench.

Exit codes: 0 on success, 1 on verification failure, 2 on argument errors.
Randomized commands print the seed they used.  All outputs are byte-stable
for identical (command, inputs, seed).
"""

import argparse
import json
import math
import sys
import time

import numpy as np

from . import fast, forall, foreach, kernels, maxflow, oracle, strength
from ._util import rng_stream
from .errors import BudgetError, ParseError
from .generators import (decode_estimates, gen_eulerian, gen_forall_lb_chain,
                         gen_foreach_lb, gen_gamma_counterexample,
                         gen_matching_family, gen_multiclass)
from .graph import (CutSet, DiGraph, cut_weight, read_edge_list,
                    write_edge_list)
from .serialize import (deserialize_fast, deserialize_foreach, detect_kind,
                        fast_json, foreach_json, serialize_fast,
                        serialize_foreach)


def _read_graph(args):
    if getattr(args, "input", None):
        with open(args.input, "r", encoding="utf-8") as fh:
            return read_edge_list(fh)
    return read_edge_list(sys.stdin.read())


def _emit(text, path=None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_bytes(data, path=None):
    if path:
        with open(path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)


def _cmd_gen(args):
    seed = args.seed
    if args.family == "eulerian":
        g = gen_eulerian(args.n, args.m, seed=seed)
        comments = [f"family=eulerian n={args.n} m={args.m} seed={seed}"]
    elif args.family == "matching":
        g = gen_matching_family(args.n, seed=seed)
        comments = [f"family=matching side={args.n} seed={seed}"]
    elif args.family == "chain":
        g = gen_forall_lb_chain(args.n, args.beta, args.eps, seed=seed)
        comments = [f"family=chain n={args.n} beta={args.beta} eps={args.eps} seed={seed}"]
    elif args.family == "foreach-lb":
        g, queries, bits = gen_foreach_lb(args.n, args.beta, args.eps, seed=seed)
        comments = [f"family=foreach-lb n={args.n} beta={args.beta} eps={args.eps} seed={seed}"]
        if args.queries:
            payload = {
                "n": g.n,
                "beta": args.beta,
                "eps": args.eps,
                "seed": seed,
                "bits": [int(b) for b in bits],
                "queries": [{
                    "bit": q.bit_index,
                    "block": q.block,
                    "u": q.u,
                    "v": q.v,
                    "base": q.base,
                    "cut": list(q.cut.members),
                } for q in queries],
            }
            with open(args.queries, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, sort_keys=True)
    elif args.family == "gamma":
        g = gen_gamma_counterexample(args.n)
        comments = [f"family=gamma n={args.n}"]
    elif args.family == "multiclass":
        g = gen_multiclass(args.n, args.classes, args.m, seed=seed)
        comments = [f"family=multiclass n={args.n} classes={args.classes} "
                    f"m_per_class={args.m} seed={seed}"]
    else:
        raise ValueError(f"unknown family {args.family}")
    _emit(write_edge_list(g, header_comments=comments), args.output)
    return 0


def _cmd_sparsify(args):
    g = _read_graph(args)
    res = forall.sparsify(g, args.beta, args.eps, d=args.d, seed=args.seed)
    comments = [
        f"sparsify beta={args.beta} eps={args.eps} d={args.d} seed={args.seed}",
        f"rho={res.rho!r} kept={res.kept_edges} expected={res.expected_edges!r}",
    ]
    _emit(write_edge_list(res.h, header_comments=comments), args.output)
    return 0


def _cmd_sketch(args):
    g = _read_graph(args)
    if args.fast:
        sk = fast.build_fast_sketch(g, args.beta, args.eps, seed=args.seed,
                                    phi_star=args.phi_star)
        binary, dump = serialize_fast(sk), fast_json(sk)
    else:
        sk = foreach.build_sketch(g, args.beta, args.eps, mode=args.mode,
                                  seed=args.seed)
        binary, dump = serialize_foreach(sk), foreach_json(sk)
    print(f"seed={args.seed} size_bits={len(binary) * 8}", file=sys.stderr)
    if args.format == "json":
        _emit(dump + "\n", args.output)
    else:
        _emit_bytes(binary, args.output)
    return 0


def _parse_cuts(selector, n):
    """Inline comma list, or @file with one bit string per line."""
    if selector.startswith("@"):
        cuts = []
        with open(selector[1:], "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if len(line) != n or set(line) - {"0", "1"}:
                    raise ValueError(f"cut file line {lineno}: expected a "
                                     f"{n}-character bit string")
                cuts.append(CutSet([i for i, c in enumerate(line) if c == "1"], n))
        return cuts
    return [CutSet([int(v) for v in selector.split(",") if v != ""], n)]


def _cmd_strength(args):
    g = _read_graph(args)
    sm = strength.compute_strengths(g)
    lines = []
    for e in range(g.m):
        t, h, w = g.edge(e)
        lines.append(f"{e} {t} {h} {w!r} {float(sm.values[e])!r}")
    total = strength.strength_sum_check(g, sm)
    lines.append(f"# sum weight/strength = {total!r} <= n-1 = {g.n - 1}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0 if total <= g.n - 1 + 1e-9 else 1


def _cmd_maxflow(args):
    g = _read_graph(args)
    res = maxflow.karger_levine(g, args.source, args.sink, seed=args.seed)
    lines = [f"seed={args.seed}"]
    for step in res.trace:
        lines.append(
            f"alpha={step['alpha']} sampled={step['sampled']} "
            f"distinct={step['distinct_arcs']} augmentations={step['augmentations']} "
            f"flow={step['flow']!r}")
    lines.append(f"value={res.value!r}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_query(args):
    with open(args.sketch, "rb") as fh:
        data = fh.read()
    kind = detect_kind(data)
    if kind == "fast":
        sk = deserialize_fast(data)
        query = fast.query_fast
    else:
        sk = deserialize_foreach(data)
        query = foreach.query_sketch
    cuts = _parse_cuts(args.cut, sk.n)
    results = [query(sk, s) for s in cuts]
    if args.format == "json":
        _emit(json.dumps({"kind": kind, "n": sk.n, "estimates": [
            {"cut": list(s.members), "total": r.total, "i_s": r.i_s, "j_s": r.j_s}
            for s, r in zip(cuts, results)]}, sort_keys=True) + "\n", args.output)
    else:
        lines = [f"total={r.total!r} i_s={r.i_s!r} j_s={r.j_s!r}" for r in results]
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def _random_digraph(rng, n, m, w_hi=4):
    edges = []
    for _ in range(m):
        a, b = rng.integers(0, n, 2)
        while a == b:
            a, b = rng.integers(0, n, 2)
        edges.append((int(a), int(b), float(rng.integers(1, w_hi))))
    return DiGraph(n, edges)


def _verify_strength(args):
    failures = 0
    for seed in range(args.trials):
        rng = rng_stream(args.seed, 7001, seed)
        g = _random_digraph(rng, int(rng.integers(3, 9)), int(rng.integers(4, 20)))
        sm = strength.compute_strengths(g)
        for e in range(g.m):
            if oracle.brute_strength(g, e) != sm.values[e]:
                failures += 1
        if strength.strength_sum_check(g, sm) > g.n - 1 + 1e-9:
            failures += 1
    print(f"strength: {args.trials} graphs, {failures} failures")
    return failures


def _verify_balance(args):
    failures = 0
    for seed in range(5):
        g, _, _ = gen_foreach_lb(12, 4, 0.25, seed=args.seed + seed)
        if oracle.exact_graph_balance(g) > 12.0:
            failures += 1
    ok_matching = 0
    for seed in range(5):
        g = gen_matching_family(10, seed=args.seed + seed)
        if oracle.exact_graph_balance(g) <= 80.0:
            ok_matching += 1
    print(f"balance: foreach-lb failures {failures}/5, matching within 8n {ok_matching}/5")
    return failures + (1 if ok_matching < 4 else 0)


def _verify_forall(args):
    g = gen_eulerian(10, 300, seed=args.seed)
    sm = strength.compute_strengths(g)
    s = CutSet(range(0, 10, 2), 10)
    truth = cut_weight(g, s)
    total = 0.0
    runs = max(200, args.trials)
    for i in range(runs):
        res = forall.sample_with_strengths(g, sm, 1.0, 0.9, d=2.5, seed=i)
        total += cut_weight(res.h, s)
    err = abs(total / runs - truth) / truth
    print(f"forall: mean over {runs} runs off truth by {err:.4f}")
    return 0 if err < 0.05 else 1


def _verify_foreach(args):
    cyc = gen_eulerian(8, 8, seed=args.seed)
    sk = foreach.build_sketch(cyc, 4.0, 0.9, mode="exact", seed=args.seed)
    failures = 0
    for cut in oracle.enumerate_cuts(8):
        if abs(foreach.query_sketch(sk, cut).total - cut_weight(cyc, cut)) > 1e-9:
            failures += 1
    print(f"foreach: all-sparse sketch exact on {2**7 - 1} cuts, {failures} failures")
    return failures


def _verify_maxflow(args):
    failures = 0
    for seed in range(args.trials):
        rng = rng_stream(args.seed, 7002, seed)
        n = int(rng.integers(5, 20))
        g = _random_digraph(rng, n, int(rng.integers(n, 4 * n)), w_hi=5)
        bidir = DiGraph(n, g.edge_list() + [(h, t, w) for t, h, w in g.edge_list()])
        exact, _ = oracle.exact_max_flow(bidir, 0, n - 1)
        kl = maxflow.karger_levine(g, 0, n - 1, seed=seed)
        if abs(kl.value - exact) > 1e-9:
            failures += 1
    print(f"maxflow: {args.trials} instances, {failures} failures")
    return failures


def _cmd_verify(args):
    checks = {
        "strength": _verify_strength,
        "balance": _verify_balance,
        "forall": _verify_forall,
        "foreach": _verify_foreach,
        "maxflow": _verify_maxflow,
    }
    failures = checks[args.suite](args)
    print("PASS" if failures == 0 else "FAIL")
    return 0 if failures == 0 else 1


def _size_fit_constant(n, beta, eps, seed):
    g = gen_multiclass(n, int(math.log2(n)) + 1, 24 * n, seed=seed)
    sk = foreach.build_sketch(g, beta, eps, mode="heuristic", seed=seed)
    bits = foreach.sketch_size_bits(sk)
    return bits / (n * math.sqrt(beta) * math.log2(n) ** 3 / eps)


def _cmd_bench_size(args):
    print(f"seed={args.seed}")
    rows = []
    for n in (64, 128, 256):
        for beta in (1.0, 4.0, 16.0):
            c = _size_fit_constant(n, beta, 0.25, args.seed)
            rows.append((n, beta, c))
            print(f"n={n:4d} beta={beta:5.1f} fitted_C={c:.3f}")
    cs = [c for _, _, c in rows]
    print(f"spread max/min = {max(cs) / min(cs):.3f} (stable within 2x: "
          f"{max(cs) <= 2 * min(cs)})")
    return 0


def _variance_worker(payload):
    """One worker's share of sketch rebuild trials; returns order-independent
    aggregates (count, sum, sum of squares)."""
    kind, n, edges, beta, eps, cut_members, seed_lo, seed_hi = payload
    g = DiGraph(n, edges)
    s = CutSet(cut_members, n)
    if kind == "peeling":
        skel = foreach.build_skeleton(g, beta, eps, mode="exact")
        values = (foreach.query_sketch(foreach.sample_skeleton(skel, seed=i), s).total
                  for i in range(seed_lo, seed_hi))
    else:
        skel = fast.build_fast_skeleton(g, beta, eps)
        values = (fast.query_fast(fast.sample_fast_skeleton(skel, seed=i), s).total
                  for i in range(seed_lo, seed_hi))
    total = 0.0
    total_sq = 0.0
    count = 0
    for v in values:
        total += v
        total_sq += v * v
        count += 1
    return count, total, total_sq


def _fan_trials(kind, g, beta, eps, cut, trials, workers):
    bounds = [(trials * w // workers, trials * (w + 1) // workers)
              for w in range(workers)]
    payloads = [(kind, g.n, g.edge_list(), beta, eps, list(cut.members), lo, hi)
                for lo, hi in bounds if hi > lo]
    if workers <= 1:
        parts = [_variance_worker(p) for p in payloads]
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_variance_worker, payloads))
    count = sum(p[0] for p in parts)
    total = sum(p[1] for p in parts)
    total_sq = sum(p[2] for p in parts)
    mean = total / count
    return mean, total_sq / count - mean * mean


def _cmd_bench_variance(args):
    print(f"seed={args.seed}")
    g = gen_eulerian(12, 120, seed=args.seed)
    s = CutSet(range(0, 12, 2), 12)
    truth = cut_weight(g, s)
    for kind in ("peeling", "expander"):
        t0 = time.time()
        mean, var = _fan_trials(kind, g, 1.0, 0.3, s, args.trials, args.workers)
        dt = time.time() - t0
        print(f"{kind}: mean {mean:.3f} (truth {truth}), var {var:.3f} "
              f"over {args.trials} trials in {dt:.2f}s")
    return 0


def _cmd_bench_decode(args):
    print(f"seed={args.seed}")
    g, queries, bits = gen_foreach_lb(20, 25.0, 0.1, seed=args.seed)
    exact = [cut_weight(g, q.cut) for q in queries]
    dec = decode_estimates(queries, exact)
    print(f"exact decode: {int((dec == bits).sum())}/{len(bits)}")
    w_max = max(exact)
    eps_sketch = 0.4 / (5.0 * w_max)
    estimates = []
    sizes = []
    for rep in range(9):
        sk = foreach.build_sketch(g, 25.0, eps_sketch, mode="heuristic",
                                  seed=args.seed + rep)
        sizes.append(foreach.sketch_size_bits(sk))
        estimates.append([foreach.query_sketch(sk, q.cut).total for q in queries])
    med = np.median(np.array(estimates), axis=0)
    dec_sk = decode_estimates(queries, med)
    print(f"median-of-9 sketch decode: {int((dec_sk == bits).sum())}/{len(bits)} "
          f"(sketch eps {eps_sketch:.5f}, size {sizes[0]} bits)")
    return 0


def _cmd_bench_kernels(args):
    print(f"seed={args.seed}")
    rng = rng_stream(args.seed, 9001)
    n, m = 20, 300
    tails = rng.integers(0, n, m).astype(np.int64)
    heads = (tails + 1 + rng.integers(0, n - 1, m)).astype(np.int64) % n
    weights = rng.random(m)
    masks = ((np.arange(1 << (n - 1), dtype=np.uint64) << np.uint64(1))
             | np.uint64(1))[:-1]
    from .kernels import _pykern

    backends = [("python", _pykern)]
    if kernels.BACKEND == "cython":
        from .kernels import _ckern

        backends.insert(0, ("cython", _ckern))
    results = {}
    for name, mod in backends:
        t0 = time.time()
        out_w, in_w = mod.cut_weights(tails, heads, weights, masks)
        dt = time.time() - t0
        results[name] = (out_w, in_w)
        print(f"{name}: {len(masks)} masks x {m} edges in {dt * 1e3:.1f} ms")
    if len(results) == 2:
        same = (np.array_equal(*[results[k][0] for k in results])
                and np.array_equal(*[results[k][1] for k in results]))
        print(f"backends bit-identical: {same}")
    return 0


def _cmd_bench(args):
    return {
        "size": _cmd_bench_size,
        "variance": _cmd_bench_variance,
        "decode": _cmd_bench_decode,
        "kernels": _cmd_bench_kernels,
    }[args.what](args)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cutbal",
        description="Directed-graph cut sparsifiers and sketches by cut balance")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--eps", type=float, default=0.25)
    common.add_argument("--beta", type=float, default=1.0)
    common.add_argument("--mode", choices=("exact", "heuristic"), default="exact")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--input", help="edge-list file (default: stdin)")
    common.add_argument("-o", "--output", help="output file (default: stdout)")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate instance families")
    p.add_argument("family", choices=("eulerian", "matching", "chain",
                                      "foreach-lb", "gamma", "multiclass"))
    p.add_argument("n", type=int)
    p.add_argument("m", type=int, nargs="?", default=0)
    p.add_argument("--classes", type=int, default=4)
    p.add_argument("--queries", help="sidecar JSON for foreach-lb decode cuts")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("sparsify", parents=[common],
                       help="balance-boosted strength sampling")
    p.add_argument("--d", type=float, default=3.0)
    p.set_defaults(func=_cmd_sparsify)

    p = sub.add_parser("sketch", parents=[common], help="build a cut sketch")
    p.add_argument("--fast", action="store_true",
                   help="expander-layered sketch instead of sparse-cut peeling")
    p.add_argument("--phi-star", type=float, default=None,
                   help="conductance target for --fast (default 1/(4 log2(n)^3))")
    p.set_defaults(func=_cmd_sketch)

    p = sub.add_parser("query", parents=[common], help="query a serialized sketch")
    p.add_argument("--sketch", required=True, help="binary sketch file")
    p.add_argument("--cut", required=True,
                   help="comma-separated vertex list, or @file of bit strings")
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("strength", parents=[common],
                       help="per-edge strengths and the weight/strength sum")
    p.set_defaults(func=_cmd_strength)

    p = sub.add_parser("maxflow", parents=[common],
                       help="sampled max flow on an undirected edge list")
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--sink", type=int, required=True)
    p.set_defaults(func=_cmd_maxflow)

    p = sub.add_parser("verify", parents=[common], help="oracle-backed checks")
    p.add_argument("suite", choices=("forall", "foreach", "strength", "balance",
                                     "maxflow"))
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bench", parents=[common], help="measurements")
    p.add_argument("what", choices=("size", "variance", "decode", "kernels"))
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--workers", type=int, default=1,
                   help="fan variance trials across processes")
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ParseError, BudgetError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
