"""Command-line surface: gen | strategy | eval | opt | gap | sweep | verify.

Exit codes: 0 on success / all checks passed, 1 when a lemma or invariant
check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import SbfeError
from .generators import gen_address, gen_binary_tree, gen_geometric_cost, gen_tribes, gen_ucap
from .harness import (
    check_branching,
    check_branching_exhaustive,
    check_earthmover_batch,
    check_leaf_monotone,
    gap_report,
    sweep,
)
from .heuristics import algorithm1, boros_unyulurt, increasing_cost, round_robin, term_order
from .instance import dump_instance, format_value, load_instance
from .solvers import opt_adaptive, opt_nonadaptive
from .strategy import (
    expected_cost_exact,
    expected_cost_mc,
    materialize_policy,
    strategy_from_dict,
    strategy_to_dict,
)


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _json_out(path: str, obj):
    _write(path, json.dumps(obj, indent=2) + "\n")


def _cmd_gen(args) -> int:
    if args.family == "tribes":
        inst = gen_tribes(args.k, args.w)
    elif args.family == "ucap":
        inst = gen_ucap(args.m, args.l)
    elif args.family == "geomcost":
        inst = gen_geometric_cost(args.l)
    elif args.family == "bintree":
        inst, meta = gen_binary_tree(args.d, Fraction(args.eps))
        meta_path = args.meta_out or (args.out + ".meta.json" if args.out != "-" else "-")
        _json_out(
            meta_path,
            {
                "depth": meta.depth,
                "eps": format_value(meta.eps),
                "leaf_mask": meta.leaf_mask,
                "internal_mask": meta.internal_mask,
            },
        )
    elif args.family == "address":
        inst = gen_address(args.d, Fraction(args.shared_cost))
    else:
        raise SbfeError(f"unknown family {args.family}")
    _write(args.out, dump_instance(inst))
    return 0


_STRATEGIES = {
    "bu": boros_unyulurt,
    "alg1": algorithm1,
    "roundrobin": round_robin,
    "termorder": term_order,
    "cost": increasing_cost,
}


def _cmd_strategy(args) -> int:
    inst = load_instance(_read(args.infile))
    strat = _STRATEGIES[args.name](inst)
    if args.name == "bu":
        strat = materialize_policy(inst, strat)
    _json_out(args.out, strategy_to_dict(strat))
    return 0


def _cmd_eval(args) -> int:
    inst = load_instance(_read(args.infile))
    strat = strategy_from_dict(json.loads(_read(args.strategy)))
    if args.mode == "exact":
        value = expected_cost_exact(inst, strat)
        _json_out(args.out, {"value": format_value(value)})
    else:
        mean, stderr = expected_cost_mc(inst, strat, args.samples, args.seed)
        _json_out(args.out, {"value": mean, "stderr": stderr, "samples": args.samples, "seed": args.seed})
    return 0


def _cmd_opt(args) -> int:
    inst = load_instance(_read(args.infile))
    out = {}
    if args.mode in ("adaptive", "both"):
        res = opt_adaptive(inst)
        out["adaptive"] = {"value": format_value(res.value), "witness": strategy_to_dict(res.witness)}
    if args.mode in ("nonadaptive", "both"):
        res = opt_nonadaptive(inst)
        out["nonadaptive"] = {"value": format_value(res.value), "witness": strategy_to_dict(res.witness)}
    _json_out(args.out, out)
    return 0


def _cmd_gap(args) -> int:
    inst = load_instance(_read(args.infile))
    kwargs = {}
    if args.mode == "mc" or not inst.is_exact:
        kwargs = {"mc_samples": args.samples, "mc_seed": args.seed}
    report = gap_report(inst, **kwargs)
    _json_out(args.out, report.to_dict())
    return 0


def _parse_params(family: str, text: str):
    """Parse "2,3,4" (single-parameter families) or "4x2,8x2" (ucap)."""
    if not text:
        return []
    out = []
    for chunk in text.split(","):
        if family == "ucap":
            m, l = chunk.split("x")
            out.append((int(m), int(l)))
        elif family == "tribes" or family == "geomcost":
            out.append((int(chunk),))
        elif family == "address":
            out.append((int(chunk), Fraction(1)))
        elif family == "bintree":
            out.append((int(chunk), Fraction(1, 4)))
        else:
            raise SbfeError(f"unknown family {family}")
    return out


def _cmd_sweep(args) -> int:
    params = _parse_params(args.family, args.values)
    text = sweep(
        args.family,
        params,
        mode=args.mode,
        mc_samples=args.samples,
        mc_seed=args.seed,
    )
    _write(args.out, text)
    return 0


def _cmd_verify(args) -> int:
    results = []
    which = args.lemma
    if which in ("earthmover", "all"):
        results.append(check_earthmover_batch(args.trials, args.seed))
    if which in ("branching", "all"):
        results.append(check_branching(args.d, Fraction(args.eps), args.samples, args.seed))
        for small_d in (0, 1, 2):
            results.append(check_branching_exhaustive(small_d, Fraction(args.eps)))
    if which in ("leafmono", "all"):
        for eps in (Fraction(1, 4), Fraction(1, 2)):
            results.append(check_leaf_monotone(args.leaf_depth, eps))
    for res in results:
        print(json.dumps(res.to_dict()))
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sbfe", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a lower-bound family instance")
    p.add_argument("family", choices=["tribes", "ucap", "geomcost", "bintree", "address"])
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--w", type=int, default=2)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--l", type=int, default=2)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--eps", default="1/4")
    p.add_argument("--shared-cost", default="1")
    p.add_argument("--out", default="-")
    p.add_argument("--meta-out", default=None)
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("strategy", help="construct a named heuristic strategy")
    p.add_argument("--name", required=True, choices=sorted(_STRATEGIES))
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(fn=_cmd_strategy)

    p = sub.add_parser("eval", help="expected cost of a strategy on an instance")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--strategy", required=True)
    p.add_argument("--mode", choices=["exact", "mc"], default="exact")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("opt", help="optimal adaptive / non-adaptive strategies")
    p.add_argument("--mode", choices=["adaptive", "nonadaptive", "both"], default="both")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(fn=_cmd_opt)

    p = sub.add_parser("gap", help="adaptivity-gap report for one instance")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--mode", choices=["exact", "mc"], default="exact")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(fn=_cmd_gap)

    p = sub.add_parser("sweep", help="CSV gap report over a parameter range")
    p.add_argument("--family", required=True, choices=["tribes", "ucap", "geomcost", "bintree", "address"])
    p.add_argument("--values", default="", help="comma-separated, e.g. 2,3 or 4x2,8x2 for ucap")
    p.add_argument("--mode", choices=["exact", "mc"], default="exact")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("verify", help="run the lemma checkers")
    p.add_argument("--lemma", choices=["earthmover", "branching", "leafmono", "all"], default="all")
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--d", type=int, default=6)
    p.add_argument("--leaf-depth", type=int, default=2)
    p.add_argument("--eps", default="1/4")
    p.set_defaults(fn=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SbfeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
