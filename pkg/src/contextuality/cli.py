"""Command-line front end.

Exit codes encode process health, not verdicts: 0 for a completed analysis
(whatever the verdict), 1 for usage errors, 2 for invalid input or blown
enumeration limits.  Reports go to stdout as JSON with stable key order;
diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import analysis, catalog
from .analysis import (
    DEFAULT_LIMIT,
    RealizationLimitExceeded,
    SignalingSystemError,
    classify,
    enumerate_ns_realizations,
)
from .peres import ks_search, orthogonal_triads, peres_rays
from .serialize import SystemFileError, format_rational, loads_system
from .systems import (
    SupportSpec,
    SystemSpec,
    check_nonsignaling,
    context_key,
    count_assignments,
    support_of,
    validate,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2


class InputError(Exception):
    pass


def _load(args) -> SystemSpec | SupportSpec:
    if args.builtin is not None:
        try:
            return catalog.get(args.builtin).system
        except catalog.UnknownSystemError as exc:
            raise InputError(str(exc)) from exc
    try:
        with open(args.path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.path}: {exc}") from exc
    try:
        return loads_system(text)
    except SystemFileError as exc:
        raise InputError(f"{args.path}: {exc}") from exc


def _emit(doc: dict) -> None:
    json.dump(doc, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")


def _witness_doc(w) -> dict:
    return {
        "side": w.side,
        "setting": w.setting,
        "context1": list(w.context1),
        "context2": list(w.context2),
        "marginal1": {o: format_rational(p) for o, p in sorted(w.marginal1.items())},
        "marginal2": {o: format_rational(p) for o, p in sorted(w.marginal2.items())},
    }


def _decomposition_doc(d: analysis.Decomposition) -> list[dict]:
    out = []
    for r, w in d.components:
        out.append(
            {
                "weight": format_rational(w),
                "values": [
                    {"x": ctx.x, "y": ctx.y, "a": a, "b": b}
                    for ctx, (a, b) in sorted(
                        r.assignment.values.items(),
                        key=lambda kv: context_key(kv[0]),
                    )
                ],
            }
        )
    return out


def _bell_witness_doc(w: analysis.BellWitness) -> dict:
    terms = [
        {"x": ctx.x, "y": ctx.y, "a": a, "b": b, "coefficient": format_rational(c)}
        for (ctx, a, b), c in sorted(
            w.coefficients.items(), key=lambda kv: (context_key(kv[0][0]), kv[0][1:])
        )
    ]
    return {"terms": terms, "bound": format_rational(w.bound)}


def cmd_analyze(args) -> int:
    system = _load(args)
    report: dict = {"system": system.name}
    if isinstance(system, SupportSpec):
        try:
            verdict = analysis.classify_support(system, limit=args.limit)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        report["nonsignaling"] = True
        report["verdict"] = verdict.kind
        report["stats"] = {"ns_realizations": verdict.realization_count}
        _emit(report)
        return EXIT_OK
    problems = validate(system)
    if problems:
        raise InputError(f"{system.name}: " + "; ".join(problems))
    try:
        verdict = classify(system, limit=args.limit)
    except SignalingSystemError as exc:
        report["nonsignaling"] = _witness_doc(exc.witness)
        report["verdict"] = "signaling"
        _emit(report)
        return EXIT_OK
    report["nonsignaling"] = True
    report["verdict"] = verdict.kind
    if verdict.decomposition is not None:
        report["decomposition"] = _decomposition_doc(verdict.decomposition)
    if verdict.witness is not None:
        report["witness"] = _bell_witness_doc(verdict.witness)
    report["stats"] = {"ns_realizations": verdict.realization_count}
    _emit(report)
    return EXIT_OK


def cmd_nonsignaling(args) -> int:
    system = _load(args)
    if isinstance(system, SupportSpec):
        raise InputError("nonsignaling needs probabilistic input")
    problems = validate(system)
    if problems:
        raise InputError(f"{system.name}: " + "; ".join(problems))
    witness = check_nonsignaling(system)
    report = {
        "system": system.name,
        "nonsignaling": True if witness is None else _witness_doc(witness),
    }
    _emit(report)
    return EXIT_OK


def cmd_realizations(args) -> int:
    system = _load(args)
    support = support_of(system) if isinstance(system, SystemSpec) else system
    report: dict = {"system": system.name, "mode": args.mode}
    if args.mode == "all":
        count = count_assignments(system, "alphabet")
        report["count"] = str(count)
        if count.base is not None:
            report["value"] = (
                str(count.value) if count.value < 10**40 else None
            )
        else:
            report["value"] = str(count.value)
        if not args.count_only:
            raise InputError("--mode all supports --count-only listings only")
    else:
        realizations = enumerate_ns_realizations(support, args.limit)
        report["count"] = str(len(realizations))
        if not args.count_only:
            report["realizations"] = [
                [
                    {"x": ctx.x, "y": ctx.y, "a": a, "b": b}
                    for ctx, (a, b) in sorted(
                        r.assignment.values.items(),
                        key=lambda kv: context_key(kv[0]),
                    )
                ]
                for r in realizations
            ]
    _emit(report)
    return EXIT_OK


def cmd_peres(args) -> int:
    rays = peres_rays()
    if args.emit == "rays":
        for i, ray in enumerate(rays, start=1):
            pairs = " ".join(f"{c.a}{c.b:+}√2" for c in ray.coords)
            print(f"{i}: {pairs}")
        return EXIT_OK
    triads = orthogonal_triads(rays)
    if args.emit == "triads":
        index = {ray: i + 1 for i, ray in enumerate(rays)}
        # pair-completion rays fall outside the 33; number them 34 onwards
        extras = sorted(
            {r for t in triads for r in t.rays if r not in index},
            key=lambda r: r.key(),
        )
        for j, ray in enumerate(extras, start=len(rays) + 1):
            index[ray] = j
        for i, t in enumerate(triads, start=1):
            members = " ".join(str(index[r]) for r in t.rays)
            print(f"{i}: rays {members}")
        return EXIT_OK
    result = ks_search(rays, triads, rule=args.rule)
    print("FEASIBLE" if result.feasible else "INFEASIBLE")
    print(f"nodes: {result.stats.nodes}")
    return EXIT_OK


def cmd_chsh(args) -> int:
    system = _load(args)
    if isinstance(system, SupportSpec):
        raise InputError("chsh needs probabilistic input")
    problems = validate(system)
    if problems:
        raise InputError(f"{system.name}: " + "; ".join(problems))
    try:
        value = analysis.chsh(system)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    print(format_rational(value))
    return EXIT_OK


def cmd_catalog(args) -> int:
    for id in catalog.catalog_ids():
        print(f"{id}: {catalog.get(id).provenance}")
    return EXIT_OK


def _add_input_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("path", nargs="?", help="system file (JSON)")
    p.add_argument("--builtin", help="built-in system id (see 'catalog')")
    p.add_argument(
        "--limit",
        type=int,
        default=DEFAULT_LIMIT,
        help="cap on enumerated non-signaling realizations",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contextuality",
        description="Exact contextuality analysis of bipartite compound systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="decide contextuality, with certificate")
    _add_input_args(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("nonsignaling", help="check marginal context-independence")
    _add_input_args(p)
    p.set_defaults(func=cmd_nonsignaling)

    p = sub.add_parser("realizations", help="list or count realizations")
    _add_input_args(p)
    p.add_argument("--mode", choices=["ns", "all"], default="ns")
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(func=cmd_realizations)

    p = sub.add_parser("peres", help="Peres rays, triads, and the KS search")
    p.add_argument("--emit", choices=["rays", "triads", "search"], required=True)
    p.add_argument(
        "--rule",
        choices=["exactly-one-zero", "exactly-one-one"],
        default="exactly-one-zero",
    )
    p.set_defaults(func=cmd_peres)

    p = sub.add_parser("chsh", help="CHSH value of a 2x2 binary system")
    _add_input_args(p)
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("catalog", help="list built-in system ids")
    p.set_defaults(func=cmd_catalog)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if getattr(args, "builtin", "absent") is None and getattr(args, "path", None) is None:
        print("error: provide a system file path or --builtin id", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RealizationLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SignalingSystemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
