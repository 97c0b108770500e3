"""Command line: ``streamchroma <command> ...``.

Exit codes: 0 verified success, 1 usage or verification failure, 2 the
pipeline stopped with an incomplete report, 3 the exact fallback found no
``(delta-1)``-coloring.  A coloring file is written only on exit 0.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Dict, List, Optional

import numpy as np

from .config import RunConfig, parse_config_file
from .errors import ParameterViolation, PipelineFailure, StreamError

EXIT_OK, EXIT_FAIL, EXIT_INCOMPLETE, EXIT_UNSAT = 0, 1, 2, 3

# the single-block example instance at delta=7, c=6
FIG4_BITS = "10101011011000"

# flags that map onto RunConfig fields
_CFG_FLAGS = {
    "mode": str, "seed": int, "epsilon": float, "rho": int, "alpha": float, "p_SG": float, "p_RT": float,
    "p_ds": float, "p_z": float, "rate_L3": float, "rate_L4": float, "rate_L5": float, "rate_L6": float,
    "beta": float, "fallback_delta": int, "retry_cap": int, "acd_mode": str,
}


def _add_cfg_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value file")
    for name, typ in _CFG_FLAGS.items():
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=typ, default=None)


def effective_config(args) -> RunConfig:
    """Flags over config file over mode defaults."""
    mapping: Dict[str, object] = {}
    if getattr(args, "config", None):
        mapping.update(parse_config_file(args.config))
    cfg = RunConfig.from_mapping(mapping)
    return cfg.with_overrides(**{k: getattr(args, k, None) for k in _CFG_FLAGS})


def _config_text(cfg: RunConfig) -> str:
    return "".join(f"{k}={v}\n" for k, v in cfg.as_dict().items())


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _json(path: str, obj) -> None:
    _write(path, json.dumps(obj, sort_keys=True, indent=1, default=_plain) + "\n")


def _plain(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, (set, frozenset, tuple)):
        return sorted(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)


# ---------------------------------------------------------------- commands

def cmd_gen(args) -> int:
    from .generators import default_mixed_spec, disjoint_cliques, gen_planted_instance, gen_sparse_random_graph
    from .graph import write_edge_stream

    rng = np.random.default_rng(args.seed)
    if args.kind == "planted":
        g, blocks = gen_planted_instance(default_mixed_spec(args.delta, n_background=args.n), args.seed)
    elif args.kind == "sparse":
        g = gen_sparse_random_graph(args.n or 1000, args.delta, args.avg_degree, args.seed)
    elif args.kind == "cliques":
        g = disjoint_cliques(args.count, args.delta + 1)
    else:
        from .gadget import IndexInstance, build_gadget

        t = args.delta * (args.delta - args.c + 1)
        inst = IndexInstance.random(t * args.count, rng)
        g, _ = build_gadget(args.delta, args.c, inst)
        print(f"index i={inst.i} bit={inst.x[inst.i - 1]}", file=sys.stderr)
    edges = list(g.edges())
    if args.shuffle:
        edges = [edges[i] for i in rng.permutation(len(edges))]
    write_edge_stream(args.out, g.n, g.delta, edges)
    print(f"seed={args.seed} n={g.n} delta={g.delta} m={len(edges)} -> {args.out}")
    return EXIT_OK


def _run_pass(args, cfg):
    from .graph import load_graph, read_edge_stream
    from .stream import run_pass

    oracle = load_graph(args.input) if cfg.acd_mode == "oracle" else None
    with open(args.input, "r", encoding="ascii") as fh:
        stream = read_edge_stream(fh, check_duplicates=cfg.check_duplicates)
        return run_pass(stream, cfg, oracle)


def cmd_stream(args) -> int:
    cfg = effective_config(args)
    print(f"seed={cfg.seed}")
    summary = _run_pass(args, cfg)
    summary.save(args.out)
    _write(os.path.join(args.out, "config.txt"), _config_text(summary.cfg))
    print(json.dumps(summary.space.as_dict(), sort_keys=True))
    return EXIT_OK


def cmd_color(args) -> int:
    from .graph import load_graph, verify_coloring, write_coloring
    from .pipeline import run_pipeline

    cfg = effective_config(args)
    print(f"seed={cfg.seed}")
    os.makedirs(args.out, exist_ok=True)
    coloring_path = os.path.join(args.out, "coloring.txt")
    if os.path.exists(coloring_path):
        os.remove(coloring_path)
    try:
        summary = _run_pass(args, cfg)
    except PipelineFailure as exc:
        _write(os.path.join(args.out, "config.txt"), _config_text(cfg))
        _json(os.path.join(args.out, "incomplete.json"), {"status": "incomplete", "failure": exc.as_dict()})
        print(f"incomplete: {exc}", file=sys.stderr)
        return EXIT_INCOMPLETE
    _write(os.path.join(args.out, "config.txt"), _config_text(summary.cfg))
    _json(os.path.join(args.out, "space.json"), summary.space.as_dict())
    res = run_pipeline(summary)
    if res.status == "incomplete":
        _write(os.path.join(args.out, "incomplete.json"), res.text() + "\n")
        print(f"incomplete at {res.failure.get('step')}: {res.failure.get('message')}", file=sys.stderr)
        return EXIT_INCOMPLETE
    if res.status == "fallback-unsat":
        _json(os.path.join(args.out, "fallback.json"),
              {"status": res.status, "q": res.q, "best_q": res.best_q, "certificate": res.certificate})
        print(f"no {res.q}-coloring exists; best palette {res.best_q}", file=sys.stderr)
        return EXIT_UNSAT
    g = load_graph(args.input)
    rep = verify_coloring(g, res.colors, res.q)
    if not rep.ok:
        _json(os.path.join(args.out, "incomplete.json"), {"status": "unverified", "report": str(rep)})
        print(f"unverified coloring: {rep}", file=sys.stderr)
        return EXIT_FAIL
    write_coloring(coloring_path, res.colors)
    _write(os.path.join(args.out, "attribution.log"),
           "fallback exact search\n" if res.fallback else res.attribution_text())
    print(f"colored n={g.n} with {int(res.colors.max(initial=0))} <= {res.q} colors"
          + (" (exact fallback)" if res.fallback else ""))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .graph import load_graph, read_coloring, verify_coloring

    g = load_graph(args.input)
    col = read_coloring(args.coloring, g.n)
    q = args.q if args.q is not None else max(g.delta - 1, 1)
    rep = verify_coloring(g, col, q)
    print(rep)
    return EXIT_OK if rep.ok else EXIT_FAIL


def bench_memory(sizes: List[int], delta: int, avg_degree: float, cfg: RunConfig, seed: int = 0) -> dict:
    """Run the pass at each ``n`` and fit ``log peak`` against ``log n``."""
    from .generators import gen_sparse_random_graph
    from .graph import EdgeStream
    from .stream import StreamEngine

    rows = []
    for n in sizes:
        g = gen_sparse_random_graph(n, delta, avg_degree, seed)
        eng = StreamEngine(n, delta, cfg.with_overrides(seed=seed))
        t0 = time.perf_counter()
        eng.process_edges(list(EdgeStream.from_graph(g)))
        eng.flush()
        rep = eng.space_report()
        rows.append({"n": n, "m": g.m, "peak_bytes": rep.peak_total, "sketch_bytes": rep.bytes_sketches,
                     "sketch_identity": rep.sketch_identity, "identity_ok": rep.bytes_sketches == rep.sketch_identity,
                     "seconds": round(time.perf_counter() - t0, 3)})
    out = {"delta": delta, "rho": eng.cfg.rho if sizes else cfg.rho, "rows": rows}
    if len(rows) >= 2:
        xs = np.log([r["n"] for r in rows])
        ys = np.log([r["peak_bytes"] for r in rows])
        out["slope"] = float(np.polyfit(xs, ys, 1)[0])
    return out


def cmd_bench_mem(args) -> int:
    cfg = effective_config(args)
    print(f"seed={cfg.seed}")
    sizes = [int(s) for s in args.sizes.split(",")]
    rep = bench_memory(sizes, args.delta, args.avg_degree, cfg, cfg.seed)
    for r in rep["rows"]:
        print(f"n={r['n']}\tpeak={r['peak_bytes']}\tsketch={r['sketch_bytes']}\tidentity_ok={r['identity_ok']}")
    if "slope" in rep:
        print(f"log-log slope {rep['slope']:.3f}")
    if args.out:
        _json(args.out, rep)
    return EXIT_OK if all(r["identity_ok"] for r in rep["rows"]) else EXIT_FAIL


def cmd_gadget(args) -> int:
    from .gadget import IndexInstance, build_gadget, decode_bit, simulate_protocol
    from .oracles import exact_color

    if args.fig4:
        inst = IndexInstance.from_string(args.bits or FIG4_BITS, args.index or 1)
        g, layout = build_gadget(7, 6, inst)
        res = exact_color(g, 6)
        bit = decode_bit(g, layout, res.colors, inst.i)
        print(f"delta=7 c=6 blocks={layout.g} block_size={layout.block_size} n={layout.n} "
              f"max_degree={g.max_degree()} decoded={bit} expected={inst.x[inst.i - 1]}")
        return EXIT_OK if bit == inst.x[inst.i - 1] else EXIT_FAIL
    rng = np.random.default_rng(args.seed)
    t = args.delta * (args.delta - args.c + 1)
    rows = []
    for alg in args.algs.split(","):
        correct, guessed, nbytes = 0, 0, []
        for k in range(args.trials):
            inst = IndexInstance.random(t * args.blocks, rng)
            r = simulate_protocol(alg, inst, args.delta, args.c, seed=args.seed + k)
            correct += r["correct"]
            guessed += r["guessed"]
            nbytes.append(r["message_bytes"])
        rows.append({"alg": alg, "delta": args.delta, "c": args.c, "m": t * args.blocks, "trials": args.trials,
                     "correct": correct, "guessed": guessed, "mean_message_bytes": float(np.mean(nbytes))})
        print(f"{alg}\tm={t * args.blocks}\tcorrect={correct}/{args.trials}\tguessed={guessed}"
              f"\tbytes={np.mean(nbytes):.1f}")
    if args.out:
        _json(args.out, {"seed": args.seed, "rows": rows})
    return EXIT_OK


def cmd_stats(args) -> int:
    from . import stats

    print(f"seed={args.seed}")
    if args.write_reference:
        stats.write_reference(args.write_reference, args.trials, args.seed)
        print(f"reference written to {args.write_reference}")
        return EXIT_OK
    names = [args.family] if args.family else list(stats.SWEEPS)
    ok = True
    for name in names:
        params = [int(p) for p in args.params.split(",")] if args.params else None
        res = stats.sweep(name, args.trials, args.seed, params)
        sys.stdout.write(stats.table_text(res))
        if len(res) > 1 and name in stats.MONOTONE:
            mono = stats.is_monotone(res)
            ok &= mono
            print(f"{name}: monotone={mono}")
            if res[0].mean_measure is not None:
                print(f"{name}: fitted slope of mean measure {stats.fitted_slope(res):.4f}")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="streamchroma", description="one-pass (delta-1)-coloring")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", help="write a generated edge stream")
    s.add_argument("--kind", choices=("planted", "sparse", "cliques", "gadget"), default="planted")
    s.add_argument("--delta", type=int, default=32)
    s.add_argument("--n", type=int, default=None, help="background size (planted) or vertex count (sparse)")
    s.add_argument("--avg-degree", type=float, default=8.0)
    s.add_argument("--count", type=int, default=4, help="cliques, or gadget blocks")
    s.add_argument("--c", type=int, default=None, help="gadget palette size")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--shuffle", action="store_true")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("stream", help="run the pass and save the summary")
    s.add_argument("input")
    s.add_argument("--out", required=True)
    _add_cfg_flags(s)
    s.set_defaults(func=cmd_stream)

    s = sub.add_parser("color", help="pass, pipeline and verification")
    s.add_argument("input")
    s.add_argument("--out", required=True)
    _add_cfg_flags(s)
    s.set_defaults(func=cmd_color)

    s = sub.add_parser("verify", help="check a coloring against a stream")
    s.add_argument("input")
    s.add_argument("coloring")
    s.add_argument("--q", type=int, default=None)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bench-mem", help="peak memory of the pass versus n")
    s.add_argument("--sizes", default="4096,8192,16384,32768,65536")
    s.add_argument("--delta", type=int, default=32)
    s.add_argument("--avg-degree", type=float, default=8.0)
    s.add_argument("--out", default=None)
    _add_cfg_flags(s)
    s.set_defaults(func=cmd_bench_mem)

    s = sub.add_parser("gadget", help="one-way protocol experiments on the lower-bound gadget")
    s.add_argument("--delta", type=int, default=8)
    s.add_argument("--c", type=int, default=7)
    s.add_argument("--blocks", type=int, default=1)
    s.add_argument("--algs", default="storeall,dummy")
    s.add_argument("--trials", type=int, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--fig4", action="store_true", help="the delta=7, c=6 single-block instance")
    s.add_argument("--bits", default=None)
    s.add_argument("--index", type=int, default=None)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_gadget)

    s = sub.add_parser("stats", help="slack-generation frequencies with Wilson intervals")
    s.add_argument("--family", default=None)
    s.add_argument("--params", default=None)
    s.add_argument("--trials", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--write-reference", default=None)
    s.set_defaults(func=cmd_stats)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gen" and args.kind == "gadget" and args.c is None:
        args.c = args.delta - 1
    try:
        return args.func(args)
    except (StreamError, ParameterViolation, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
