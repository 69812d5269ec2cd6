"""Command-line front end.

Exit codes: 0 success or verified, 1 not verified, 2 input error,
3 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from .dynamics import (
    EXHAUSTIVE_CAP,
    CapExceeded,
    StateIndex,
    attractors,
    state_transition_graph,
    stg_to_dot,
    verify_global_stability,
)
from .expr import ExpressionError
from .fas import DEFAULT_CYCLE_CAP, DEFAULT_OPTIMAL_CAP
from .network import BooleanNetwork, RuleFileError, interaction_digraph, parse_network, to_rules
from .synth import SynthesisError, synthesize

EXIT_OK, EXIT_NOT_VERIFIED, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3

CORPUS = ("ex31", "tlgl6", "tlgl6_controlled")


class InputError(Exception):
    pass


def load_network(source: str) -> BooleanNetwork:
    """Read a rule file, or a bundled network given as ``corpus/NAME``."""
    if source.startswith("corpus/") and not Path(source).exists():
        name = source.split("/", 1)[1].removesuffix(".txt")
        try:
            text = resources.files("pinbn").joinpath("corpus", name + ".txt").read_text("utf-8")
        except FileNotFoundError:
            raise InputError(f"no bundled network {name!r}; available: {', '.join(CORPUS)}") from None
    else:
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(str(exc)) from None
    if not text.strip():
        raise InputError(f"{source}: file is empty")
    try:
        return parse_network(text)
    except (RuleFileError, ExpressionError) as exc:
        raise InputError(f"{source}: {exc}") from None


def _target(args, n: int) -> StateIndex:
    if (args.target is None) == (args.gamma is None):
        raise InputError("give exactly one of --target BITS or --gamma N")
    try:
        if args.target is not None:
            t = StateIndex.from_string(args.target)
        else:
            t = StateIndex.from_gamma(args.gamma, n)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if t.n != n:
        raise InputError(f"target has {t.n} bits but the network has {n} nodes")
    return t


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def digraph_dot(net: BooleanNetwork) -> str:
    g = interaction_digraph(net)
    lines = ["digraph interaction {"]
    lines += [f'  "{name}";' for name in net.nodes]
    lines += [f'  "{net.nodes[u]}" -> "{net.nodes[v]}";' for u, v in g.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_parse(args) -> int:
    from .network import minimize

    net = minimize(load_network(args.file))
    summary = {
        "n": net.n,
        "K": net.max_in_degree,
        "nodes": [{"name": name, "in_degree": len(nb), "in_neighbors": [net.nodes[b] for b in nb]}
                  for name, nb in zip(net.nodes, net.in_neighbors)],
    }
    _emit(_dump(summary), args.out)
    return EXIT_OK


def cmd_graph(args) -> int:
    from .network import minimize

    net = minimize(load_network(args.file))
    if args.format == "json":
        g = interaction_digraph(net)
        _emit(_dump({"nodes": list(net.nodes),
                     "edges": [[net.nodes[u], net.nodes[v]] for u, v in g.edges]}), args.out)
    else:
        _emit(digraph_dot(net), args.out)
    return EXIT_OK


def cmd_stg(args) -> int:
    net = load_network(args.file)
    if args.samples is not None and args.seed is None:
        raise InputError("--samples needs --seed")
    edges = state_transition_graph(net, samples=args.samples, seed=args.seed, cap=args.exhaustive_cap)
    if args.format == "json":
        _emit(_dump({"edges": [[str(s), str(t)] for s, t in edges]}), args.out)
    else:
        _emit(stg_to_dot(edges), args.out)
    return EXIT_OK


def cmd_attractors(args) -> int:
    net = load_network(args.file)
    _emit(_dump(attractors(net, cap=args.exhaustive_cap).to_json()), args.out)
    return EXIT_OK


def _mode(args, n: int) -> str:
    if args.exhaustive:
        return "exhaustive"
    if args.sampled or n > args.exhaustive_cap:
        if args.seed is None:
            raise InputError("sampled verification needs --seed")
        return "sampled"
    return "exhaustive"


def cmd_verify(args) -> int:
    net = load_network(args.file)
    target = _target(args, net.n)
    mode = _mode(args, net.n)
    report = verify_global_stability(net, target, mode, samples=args.samples or 500,
                                     steps=args.steps, seed=args.seed, cap=args.exhaustive_cap)
    _emit(_dump(report.to_json()), args.out)
    return EXIT_OK if report.verified else EXIT_NOT_VERIFIED


def cmd_synthesize(args) -> int:
    net = load_network(args.file)
    target = _target(args, net.n)
    if net.n > args.exhaustive_cap and not args.no_verify and args.seed is None:
        raise InputError("network too large for exhaustive verification; pass --seed for sampling")
    try:
        result = synthesize(
            net, target,
            fas_method="greedy" if args.greedy_fas else "exact",
            objective=args.objective,
            cycle_cap=args.cycle_cap,
            optimal_cap=args.optimal_cap,
            replacement=args.replacement,
            verify=not args.no_verify,
            exhaustive_cap=args.exhaustive_cap,
            samples=args.samples or 500,
            steps=args.steps,
            seed=args.seed if args.seed is not None else 0,
        )
    except SynthesisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_VERIFIED
    plan = result.plan.to_json()
    _emit(_dump(plan), args.out)
    rules = to_rules(result.controlled, header=f"closed loop, target {target} (gamma {target.gamma})")
    if args.rules_out:
        Path(args.rules_out).write_text(rules, encoding="utf-8")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pinbn", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt="json"):
        sp.add_argument("file", help="rule file, or corpus/NAME for a bundled network")
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--format", choices=("dot", "json"), default=fmt)
        sp.add_argument("--exhaustive-cap", type=int, default=EXHAUSTIVE_CAP)

    def target(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--target", help="target state as bits x1..xn, e.g. 100001")
        g.add_argument("--gamma", type=int, help="target state as the index gamma in [1, 2^n]")
        sp.add_argument("--samples", type=int)
        sp.add_argument("--steps", type=int)
        sp.add_argument("--seed", type=int)

    common(sub.add_parser("parse", help="summarize a network"))
    common(sub.add_parser("graph", help="interaction digraph"), "dot")
    sp = sub.add_parser("stg", help="state transition graph")
    common(sp, "dot")
    sp.add_argument("--samples", type=int, help="follow orbits of this many random states")
    sp.add_argument("--seed", type=int)
    common(sub.add_parser("attractors", help="fixed points and cycles"))

    sp = sub.add_parser("verify", help="check global stability to a target")
    common(sp)
    target(sp)
    m = sp.add_mutually_exclusive_group()
    m.add_argument("--exhaustive", action="store_true")
    m.add_argument("--sampled", action="store_true")

    sp = sub.add_parser("synthesize", help="design pinning controllers")
    common(sp)
    target(sp)
    f = sp.add_mutually_exclusive_group()
    f.add_argument("--exact-fas", action="store_true", default=True)
    f.add_argument("--greedy-fas", action="store_true")
    sp.add_argument("--objective", choices=("lexicographic", "vertices"), default="lexicographic")
    sp.add_argument("--cycle-cap", type=int, default=DEFAULT_CYCLE_CAP)
    sp.add_argument("--optimal-cap", type=int, default=DEFAULT_OPTIMAL_CAP)
    sp.add_argument("--replacement", choices=("target", "one", "zero"), default="target")
    sp.add_argument("--rules-out", help="write the closed-loop network as a rule file")
    sp.add_argument("--no-verify", action="store_true")
    return p


COMMANDS = {
    "parse": cmd_parse,
    "graph": cmd_graph,
    "stg": cmd_stg,
    "attractors": cmd_attractors,
    "verify": cmd_verify,
    "synthesize": cmd_synthesize,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
