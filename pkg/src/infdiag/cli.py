"""Batch command-line interface over the engine.

Exit codes: 0 success, 1 domain error (invalid document, failed precondition),
2 usage error.  Transform verbs write a new document instead of mutating the
input; human output uses 6 significant digits unless ``--precision`` says
otherwise, while ``--format json`` always carries full precision.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io as dio
from . import transforms
from .errors import DiagramError
from .lottery import statistics, value_lottery
from .model import CHANCE, DECISION, iter_configs, validate
from .randgen import random_diagram
from .solve import alternative_statistics, solve, value_of_information


def _load(args, *, strict: bool = True):
    data = Path(args.diagram).read_bytes()
    return dio.load(data, renormalize=args.renormalize, strict=strict)


def _fmt(x: float, precision: int) -> str:
    return format(float(x) + 0.0, f".{precision}g")


def cmd_validate(args) -> int:
    d = _load(args, strict=False)
    report = validate(d)
    if args.format == "json":
        print(json.dumps([v.to_dict() for v in report], indent=2))
    else:
        for v in report:
            print(v.message)
        if not report:
            print("valid")
    return 1 if report else 0


def cmd_solve(args) -> int:
    s = solve(_load(args))
    sys.stdout.write(dio.export_report(s, args.format, args.precision).decode("utf-8"))
    return 0


def cmd_reverse(args) -> int:
    d = _load(args)
    Path(args.out).write_bytes(dio.save(transforms.reverse_arc(d, args.source, args.target)))
    return 0


def cmd_remove(args) -> int:
    d = _load(args)
    node = d.node(args.node)
    if not d.children[args.node]:
        after = transforms.remove_barren(d, args.node)
    elif node.kind == CHANCE:
        after = transforms.remove_chance_into_value(d, args.node)
    elif node.kind == DECISION:
        after, policy = transforms.remove_decision_into_value(d, args.node)
        _print_policy(d, policy)
    else:
        after = transforms.remove_barren(d, args.node)  # raises IS_VALUE_NODE
    Path(args.out).write_bytes(dio.save(after))
    return 0


def _print_policy(d, policy) -> None:
    node = d.nodes[policy.decision]
    if not policy.domain:
        print(f"policy {policy.decision}: {node.space.labels[int(policy.choice[0])]}")
        return
    print(f"policy {policy.decision}:")
    for state, alt in zip(iter_configs(policy.domain_cards), policy.choice):
        key = ", ".join(d.nodes[p].space.labels[v] for p, v in zip(policy.domain, state))
        print(f"  {key} -> {node.space.labels[int(alt)]}")


def cmd_voi(args) -> int:
    v = value_of_information(_load(args), args.source, args.target)
    if args.format == "json":
        print(json.dumps({"value_of_information": v}))
    else:
        print(_fmt(v, args.precision))
    return 0


def cmd_lottery(args) -> int:
    d = _load(args)
    s = solve(d)
    lot = value_lottery(s.source, s.policy_map())
    ev, sd, ce = statistics(lot, s.risk)
    if args.format == "json":
        print(json.dumps({
            "atoms": [{"payoff": x, "probability": p} for x, p in lot.atoms],
            "certain_equivalent": ce, "expected_value": ev, "standard_deviation": sd,
        }, indent=2))
        return 0
    for x, p in lot.atoms:
        print(f"{_fmt(x, args.precision)} {_fmt(p, args.precision)}")
    print(f"certain equivalent: {_fmt(ce, args.precision)}")
    print(f"expected value: {_fmt(ev, args.precision)}")
    print(f"standard deviation: {_fmt(sd, args.precision)}")
    return 0


def cmd_stats(args) -> int:
    d = _load(args)
    decision_id = args.decision
    if decision_id is None:
        order = d.decision_order()
        if not order:
            print("error: diagram has no decisions", file=sys.stderr)
            return 1
        decision_id = order[0]
    rows = alternative_statistics(d, decision_id)
    if args.format == "json":
        print(json.dumps([row.__dict__ for row in rows], indent=2))
        return 0
    print("alternative certain_equivalent expected_value standard_deviation")
    for row in rows:
        print(f"{row.alternative} {_fmt(row.certain_equivalent, args.precision)} "
              f"{_fmt(row.expected_value, args.precision)} "
              f"{_fmt(row.standard_deviation, args.precision)}")
    return 0


def cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    d = random_diagram(rng, n_chance=args.chance, n_decisions=args.decisions,
                       gamma=args.gamma)
    data = dio.save(d)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infdiag", description="influence diagram workbench (batch interface)")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, diagram=True):
        if diagram:
            p.add_argument("diagram", help="path to a .idg.json document")
            p.add_argument("--renormalize", action="store_true",
                           help="renormalize table rows that are off by at most 1e-6")
        p.add_argument("--format", choices=["text", "json"], default="text")
        p.add_argument("--precision", type=int, default=6,
                       help="significant digits in human output")

    p = sub.add_parser("validate", help="report structural violations")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="evaluate and print value, policies, statistics")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reverse", help="reverse a chance-chance arc and write the result")
    common(p)
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--out", required=True, help="path for the transformed document")
    p.set_defaults(func=cmd_reverse)

    p = sub.add_parser("remove", help="remove a node (barren, chance, or decision)")
    common(p)
    p.add_argument("node")
    p.add_argument("--out", required=True, help="path for the transformed document")
    p.set_defaults(func=cmd_remove)

    p = sub.add_parser("voi", help="value of observing a node at a decision")
    common(p)
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.set_defaults(func=cmd_voi)

    p = sub.add_parser("lottery", help="value lottery under the optimal policy")
    common(p)
    p.set_defaults(func=cmd_lottery)

    p = sub.add_parser("stats", help="per-alternative (CE, EV, SD) for the first decision")
    common(p)
    p.add_argument("--decision", help="decision node id (default: first decision)")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("gen", help="generate a random valid diagram document")
    common(p, diagram=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--chance", type=int, default=None)
    p.add_argument("--decisions", type=int, default=None)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DiagramError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
