"""Command-line surface and the JSON formats for networks and transfer plans.

Commands: check (feasibility verdict), synthesize (write a plan), verify
(simulate a plan against its network), export-dot (render to Graphviz).
Exit codes are a stable contract: 0 ok, 1 input error, 2 infeasible demand,
3 synthesis failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from .augment import RESERVED_PREFIX, build_augmented
from .errors import (
    DualcastError,
    InfeasibleDemandError,
    InputError,
    PlanMismatchError,
    UnknownEdgeError,
    UnknownNodeError,
)
from .flow import EdgePath
from .nccode import DEFAULT_MODULI, MulticastCode, get_field
from .netgraph import Demand, Network, expand_capacities
from .planner import TransferPlan, check_feasibility, synthesize_with_diagnostics, verify_plan
from .recolor import ReroutingTrace

PLAN_VERSION = 1

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_SYNTHESIS = 3
EXIT_VERIFY = 4


# ----------------------------------------------------------------------------
# Network file format


def network_from_dict(doc: Any, origin: str = "<network>") -> Network:
    if not isinstance(doc, dict):
        raise InputError(f"{origin}: top level must be an object")
    for key in ("nodes", "edges", "source", "terminals"):
        if key not in doc:
            raise InputError(f"{origin}: missing key {key!r}")
    nodes = doc["nodes"]
    if not isinstance(nodes, list) or not all(isinstance(v, str) for v in nodes):
        raise InputError(f"{origin}: nodes must be a list of strings")
    for label in nodes:
        if label.startswith(RESERVED_PREFIX):
            raise InputError(f"{origin}: node label {label!r} uses the reserved '__' prefix")
    node_set = set(nodes)
    terminals = doc["terminals"]
    if not isinstance(terminals, list) or len(terminals) != 2:
        raise InputError(f"{origin}: terminals must be a pair of labels")
    weighted: list[tuple[str, str, int]] = []
    for i, entry in enumerate(doc["edges"]):
        if not isinstance(entry, dict) or "from" not in entry or "to" not in entry:
            raise InputError(f"{origin}: edge #{i} needs 'from' and 'to'")
        tail, head = entry["from"], entry["to"]
        for label in (tail, head):
            if label not in node_set:
                raise InputError(f"{origin}: edge #{i} references unknown node {label!r}")
        cap = entry.get("cap", 1)
        if not isinstance(cap, int) or isinstance(cap, bool) or cap <= 0:
            raise InputError(f"{origin}: edge #{i} capacity must be a positive integer")
        weighted.append((tail, head, cap))
    for label in (doc["source"], *terminals):
        if label not in node_set:
            raise InputError(f"{origin}: {label!r} is not a declared node")
    try:
        return Network(
            nodes=tuple(nodes),
            edges=tuple(expand_capacities(weighted)),
            source=doc["source"],
            terminals=(terminals[0], terminals[1]),
        )
    except (InputError, UnknownNodeError) as exc:
        raise InputError(f"{origin}: {exc}") from exc


def network_to_dict(net: Network) -> dict[str, Any]:
    grouped: dict[tuple[str, str], int] = {}
    order: list[tuple[str, str]] = []
    for e in net.edges:
        pair = (e.tail, e.head)
        if pair not in grouped:
            order.append(pair)
        grouped[pair] = grouped.get(pair, 0) + 1
    return {
        "nodes": list(net.nodes),
        "edges": [
            {"from": tail, "to": head, "cap": grouped[(tail, head)]}
            for tail, head in order
        ],
        "source": net.source,
        "terminals": list(net.terminals),
    }


def load_network_file(path: str | Path) -> Network:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return network_from_dict(doc, origin=str(path))


# ----------------------------------------------------------------------------
# Plan file format


def _hex(value: int) -> str:
    return f"0x{value:02X}"


def _parse_hex(text: Any, origin: str) -> int:
    if not isinstance(text, str):
        raise InputError(f"{origin}: expected a hex string, got {text!r}")
    try:
        return int(text, 16)
    except ValueError as exc:
        raise InputError(f"{origin}: bad hex value {text!r}") from exc


def plan_to_dict(plan: TransferPlan) -> dict[str, Any]:
    code = plan.multicast
    return {
        "version": PLAN_VERSION,
        "demand": {"h0": plan.demand.h0, "h1": plan.demand.h1, "h2": plan.demand.h2},
        "seed": plan.seed,
        "field": {
            "name": f"GF(2^{code.field_bits})",
            "bits": code.field_bits,
            "modulus": _hex(code.modulus),
        },
        "x1_routes": [list(p.edges) for p in plan.x1_routes],
        "x2_routes": [list(p.edges) for p in plan.x2_routes],
        "support": list(code.support),
        "coding_vectors": {
            str(eid): [_hex(c) for c in code.global_vectors[eid]] for eid in code.support
        },
        "local_coeffs": {
            str(eid): {
                f"{kind}:{ref}": _hex(c) for (kind, ref), c in code.local_coeffs[eid].items()
            }
            for eid in code.support
        },
        "decode": {
            "t1": {
                "inputs": list(code.inputs_t1),
                "matrix": [[_hex(c) for c in row] for row in code.decode_t1],
            },
            "t2": {
                "inputs": list(code.inputs_t2),
                "matrix": [[_hex(c) for c in row] for row in code.decode_t2],
            },
        },
    }


def plan_from_dict(doc: Any, origin: str = "<plan>") -> TransferPlan:
    if not isinstance(doc, dict):
        raise InputError(f"{origin}: top level must be an object")
    if doc.get("version") != PLAN_VERSION:
        raise InputError(
            f"{origin}: unsupported plan version {doc.get('version')!r} "
            f"(expected {PLAN_VERSION})"
        )
    try:
        demand = Demand(**doc["demand"])
        bits = doc["field"]["bits"]
        modulus = _parse_hex(doc["field"]["modulus"], origin)
        x1 = tuple(EdgePath(tuple(int(e) for e in p)) for p in doc["x1_routes"])
        x2 = tuple(EdgePath(tuple(int(e) for e in p)) for p in doc["x2_routes"])

        support = [int(e) for e in doc["support"]]
        local: dict[int, dict[tuple[str, int], int]] = {}
        vectors: dict[int, tuple[int, ...]] = {}
        for eid_text, coeffs in doc["local_coeffs"].items():
            eid = int(eid_text)
            parsed: dict[tuple[str, int], int] = {}
            for key_text, value in coeffs.items():
                kind, _, ref = key_text.partition(":")
                if kind not in ("edge", "msg") or not ref.lstrip("-").isdigit():
                    raise InputError(f"{origin}: bad coefficient key {key_text!r}")
                parsed[(kind, int(ref))] = _parse_hex(value, origin)
            local[eid] = parsed
        for eid_text, vec in doc["coding_vectors"].items():
            vectors[int(eid_text)] = tuple(_parse_hex(v, origin) for v in vec)
        if set(vectors) != set(support) or set(local) != set(support):
            raise InputError(f"{origin}: support, coding_vectors and local_coeffs disagree")
        _check_support_order(support, local)

        dec = doc["decode"]
        code = MulticastCode(
            field_bits=bits,
            modulus=modulus,
            h0=demand.h0,
            support=tuple(support),
            local_coeffs=local,
            global_vectors=vectors,
            inputs_t1=tuple(int(e) for e in dec["t1"]["inputs"]),
            inputs_t2=tuple(int(e) for e in dec["t2"]["inputs"]),
            decode_t1=tuple(
                tuple(_parse_hex(c, origin) for c in row) for row in dec["t1"]["matrix"]
            ),
            decode_t2=tuple(
                tuple(_parse_hex(c, origin) for c in row) for row in dec["t2"]["matrix"]
            ),
        )
        get_field(bits, modulus)  # validates the field parameters
        return TransferPlan(
            demand=demand,
            seed=int(doc["seed"]),
            x1_routes=x1,
            x2_routes=x2,
            multicast=code,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{origin}: malformed plan file ({exc})") from exc


def _check_support_order(support: list[int], local: dict[int, dict[tuple[str, int], int]]) -> None:
    """Every coded edge's inputs must precede it in the stored support order."""
    placed: set[int] = set()
    for eid in support:
        deps = {ref for kind, ref in local[eid] if kind == "edge"}
        if not deps <= placed:
            raise InputError(f"coded edge {eid} consumes an edge listed after it")
        placed.add(eid)


def dump_plan(plan: TransferPlan) -> str:
    return json.dumps(plan_to_dict(plan), indent=2, sort_keys=True) + "\n"


def load_plan_file(path: str | Path) -> TransferPlan:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return plan_from_dict(doc, origin=str(path))


def dump_trace(traces: list[tuple[int, ReroutingTrace]]) -> str:
    """Rerouting steps as JSON lines, tagged with their pass number."""
    lines = []
    for pass_no, trace in traces:
        for step in trace.steps:
            lines.append(
                json.dumps(
                    {
                        "pass": pass_no,
                        "green_index": step.green_index,
                        "shared_edge": step.shared_edge,
                        "red_index": step.red_index,
                        "prefix": list(step.prefix_swapped.edges),
                    },
                    sort_keys=True,
                )
            )
    return "".join(line + "\n" for line in lines)


# ----------------------------------------------------------------------------
# DOT export


def export_dot(
    net: Network,
    plan: TransferPlan | None = None,
    augment_demand: Demand | None = None,
) -> str:
    """Render the network as a DOT digraph.

    With a plan, the x1/x2 route edges get distinct styling and coded edges
    are labelled with their coding vectors. With augment_demand, the virtual
    nodes and bundles are included as dashed edges.
    """
    target = net
    virtual_ids: frozenset[int] = frozenset()
    if augment_demand is not None:
        aug = build_augmented(net, augment_demand)
        target = aug.net
        virtual_ids = aug.virtual_edge_ids

    x1_edges = {eid for p in plan.x1_routes for eid in p.edges} if plan else set()
    x2_edges = {eid for p in plan.x2_routes for eid in p.edges} if plan else set()
    vectors = plan.multicast.global_vectors if plan else {}

    out = ["digraph network {", "  rankdir=LR;"]
    for v in target.nodes:
        attrs = []
        if v == net.source:
            attrs.append("shape=box")
        elif v in net.terminals:
            attrs.append("shape=doublecircle")
        if v.startswith(RESERVED_PREFIX):
            attrs.append("style=dashed")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        out.append(f'  "{v}"{suffix};')
    for e in target.edges:
        attrs = [f'label="e{e.eid}"']
        if e.eid in virtual_ids:
            attrs.append("style=dashed")
        if e.eid in x1_edges:
            attrs.append("color=blue")
            attrs.append("penwidth=2")
            attrs[0] = f'label="e{e.eid} x1"'
        elif e.eid in x2_edges:
            attrs.append("color=red")
            attrs.append("penwidth=2")
            attrs[0] = f'label="e{e.eid} x2"'
        elif e.eid in vectors:
            vec = ",".join(_hex(c) for c in vectors[e.eid])
            attrs[0] = f'label="e{e.eid} [{vec}]"'
        out.append(f'  "{e.tail}" -> "{e.head}" [{", ".join(attrs)}];')
    out.append("}")
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------------------
# Commands


def _demand_from_args(args: argparse.Namespace) -> Demand:
    return Demand(args.h0, args.h1, args.h2)


def cmd_check(args: argparse.Namespace) -> int:
    net = load_network_file(args.network)
    d = _demand_from_args(args)
    report = check_feasibility(net, d)
    names = ("S->T1", "S->T2", "S->{T1,T2}")
    for name, cut, req in zip(names, report.cuts, report.required):
        print(f"min-cut {name}: {cut} (needs >= {req})")
    if report.feasible:
        print(f"FEASIBLE {report.describe()[len('feasible '):]}")
        return EXIT_OK
    print(f"INFEASIBLE {report.describe()[len('infeasible '):]}")
    return EXIT_INFEASIBLE


def cmd_synthesize(args: argparse.Namespace) -> int:
    net = load_network_file(args.network)
    d = _demand_from_args(args)
    plan, passes = synthesize_with_diagnostics(
        net, d, args.seed, field_bits=args.field_bits
    )
    text = dump_plan(plan)
    if args.output:
        Path(args.output).write_text(text)
        print(f"plan written to {args.output}")
    else:
        sys.stdout.write(text)
    if args.trace:
        Path(args.trace).write_text(
            dump_trace([(1, passes.pass1.trace), (2, passes.pass2.trace)])
        )
        print(f"rerouting trace written to {args.trace}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    net = load_network_file(args.network)
    plan = load_plan_file(args.plan)
    report = verify_plan(net, plan, trials=args.trials)
    if report.passed:
        print(f"OK: {report.trials} trials decoded exactly")
        return EXIT_OK
    for failure in report.failures[:10]:
        print(f"FAIL trial {failure.trial} at {failure.terminal}: {failure.detail}")
    print(f"{len(report.failures)} failures over {report.trials} trials")
    return EXIT_VERIFY


def cmd_export_dot(args: argparse.Namespace) -> int:
    net = load_network_file(args.network)
    plan = load_plan_file(args.plan) if args.plan else None
    augment_demand = None
    if args.augmented:
        augment_demand = _demand_from_args(args)
    text = export_dot(net, plan=plan, augment_demand=augment_demand)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualcast",
        description=(
            "Decide feasibility of a two-terminal demand with overlapping "
            "message sets and synthesize a hybrid routing + network-coding "
            "transmission plan. Rates are integers; pre-scale rational rates."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_demand_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
        p.add_argument("--h0", type=int, required=required, default=0,
                       help="shared rate wanted by both terminals")
        p.add_argument("--h1", type=int, required=required, default=0,
                       help="private rate wanted by T1")
        p.add_argument("--h2", type=int, required=required, default=0,
                       help="private rate wanted by T2")

    p_check = sub.add_parser("check", help="feasibility verdict for a demand")
    p_check.add_argument("network", help="network JSON file")
    add_demand_flags(p_check)
    p_check.set_defaults(func=cmd_check)

    p_synth = sub.add_parser("synthesize", help="produce a transfer plan")
    p_synth.add_argument("network", help="network JSON file")
    add_demand_flags(p_synth)
    p_synth.add_argument("--seed", type=int, default=0, help="random seed (recorded in the plan)")
    p_synth.add_argument(
        "--field-bits",
        type=int,
        default=8,
        choices=sorted(DEFAULT_MODULI),
        help="initial symbol field GF(2^m)",
    )
    p_synth.add_argument("-o", "--output", help="plan file to write (default: stdout)")
    p_synth.add_argument("--trace", help="also write the rerouting trace as JSON lines")
    p_synth.set_defaults(func=cmd_synthesize)

    p_verify = sub.add_parser("verify", help="simulate a plan against its network")
    p_verify.add_argument("network", help="network JSON file")
    p_verify.add_argument("plan", help="plan JSON file")
    p_verify.add_argument("--trials", type=int, default=100, help="random message tuples to test")
    p_verify.set_defaults(func=cmd_verify)

    p_dot = sub.add_parser("export-dot", help="render network (and plan) to Graphviz DOT")
    p_dot.add_argument("network", help="network JSON file")
    p_dot.add_argument("plan", nargs="?", help="optional plan JSON file for styling")
    p_dot.add_argument("--augmented", action="store_true",
                       help="include the virtual terminal gadget (needs --h0/--h1/--h2)")
    add_demand_flags(p_dot, required=False)
    p_dot.add_argument("-o", "--output", help="DOT file to write (default: stdout)")
    p_dot.set_defaults(func=cmd_export_dot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleDemandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (InputError, UnknownNodeError, UnknownEdgeError, PlanMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DualcastError as exc:
        print(f"synthesis error: {exc}", file=sys.stderr)
        return EXIT_SYNTHESIS


if __name__ == "__main__":
    sys.exit(main())
