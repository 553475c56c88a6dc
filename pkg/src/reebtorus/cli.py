"""Command line front end.

    reebtorus analyze FILE   full analysis report
    reebtorus verify FILE    analysis plus property checks and oracle comparison
    reebtorus oracle FILE    oracle comparison only

Exit codes: 0 success, 2 invalid input (no report), 3 unsupported surface,
4 group order above --max-order, 5 a check failed or the oracle disagrees.

Both output formats are rendered from one report dictionary; the machine
format is that dictionary as JSON.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import engine as en
from . import groups as gr
from . import oracle as orc
from . import verify as vf
from .errors import CapExceeded, InvariantViolation, SchemaError, UnsupportedSurface
from .model import load_instance

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNSUPPORTED = 3
EXIT_CAP = 4
EXIT_FAILED = 5


# -- report assembly ------------------------------------------------------------

def _instance_section(instance) -> dict:
    s = instance.surface
    return {
        "surface": {"genus": s.genus, "boundary": s.boundary_count,
                    "orientable": s.orientable, "target": s.target.value,
                    "euler_characteristic": s.euler_characteristic},
        "pieces": [{"kind": t.kind.value, "vertices": len(t.vertices), "edges": len(t.edges)}
                   for t in instance.pieces],
    }


def _piece_section(r: en.PieceResult) -> dict:
    return {"case": r.case, "source": str(r.source), "target": str(r.target),
            "order": gr.order(r.target), "p": r.p, "eta_factor": r.eta_coordinate}


def analysis_report(result: en.AnalysisResult) -> dict:
    G = result.target
    rep = {
        "schema_version": SCHEMA_VERSION,
        "instance": _instance_section(result.instance),
        "pieces": [_piece_section(r) for r in result.pieces],
        "group": {"expression": str(G), "name": result.verdict.group_name, "order": result.order},
        "p": result.p,
        "action": {
            "recipe": str(result.action),
            "generators": [{"element": gr.format_element(G, g), "map": str(A)}
                           for g, A in result.action.generator_maps()],
        },
        "certification": result.certification,
        "freeness": None,
        "pi1": None,
        "h1": None,
        "verdict": {
            "is_torus": result.verdict.is_torus,
            "description": result.verdict.description,
            "homotopy_type": result.verdict.homotopy_type(),
        },
        "generic": result.generic,
        "warnings": list(result.warnings),
    }
    if result.freeness is not None:
        f = result.freeness
        rep["freeness"] = {
            "status": f.status, "elements_checked": f.checked,
            "witnesses": [{"element": gr.format_element(G, g), "fixed_point": str(pt)}
                          for g, pt in f.witnesses.items()],
        }
    if result.crystal is not None:
        rep["pi1"] = result.crystal.summary()
    if result.h1 is not None:
        rep["h1"] = {"rank": result.h1.rank, "torsion": list(result.h1.torsion),
                     "text": str(result.h1)}
    return rep


def _oracle_entry(i, r: orc.OracleReport) -> dict:
    return {
        "piece": i,
        "automorphisms": r.count,
        "histogram": {str(k): v for k, v in sorted(r.histogram.items())},
        "abelianization": list(r.abelianization),
        "engine_order": r.engine_order,
        "verdict": r.verdict,
    }


def _check_entry(c: vf.Check) -> dict:
    return {"name": c.name, "status": c.status, "checked": c.checked,
            "detail": c.detail, "failing": c.failing}


# -- text rendering ---------------------------------------------------------------

def render_text(rep: dict) -> str:
    lines = []
    if "group" in rep:
        inst = rep["instance"]
        s = inst["surface"]
        lines.append(f"surface: genus {s['genus']}, {s['boundary']} boundary circle(s), "
                     f"{'orientable' if s['orientable'] else 'non-orientable'}, "
                     f"target {s['target']}, chi = {s['euler_characteristic']}")
        for i, (pi, pr) in enumerate(zip(inst["pieces"], rep["pieces"])):
            lines.append(f"piece {i} ({pi['kind']}, {pi['vertices']} vertices, case {pr['case']}): "
                         f"source {pr['source']}, target {pr['target']}, p = {pr['p']}")
        g = rep["group"]
        lines.append(f"G = {g['expression']}, order {g['order']}")
        lines.append(f"action on T^{rep['p']}: {rep['action']['recipe']}")
        for gen in rep["action"]["generators"]:
            lines.append(f"  {gen['element']}: {gen['map']}")
        f = rep["freeness"]
        if f is None:
            lines.append(f"certification: {rep['certification']}")
        else:
            lines.append(f"certification: {rep['certification']} "
                         f"({f['status']}, {f['elements_checked']} non-identity elements)")
            for w in f["witnesses"]:
                lines.append(f"  {w['element']} fixes {w['fixed_point']}")
        if rep["pi1"]:
            lines.append(f"pi1: {rep['pi1']}")
        h1 = rep["h1"]["text"] if rep["h1"] else "not computed"
        v = rep["verdict"]
        tail = f" (torus T^{rep['p']})" if v["is_torus"] else ""
        lines.append(f"G ≅ {g['name']}, p = {rep['p']}, H1 = {h1}, "
                     f"homotopy type: {v['homotopy_type']}{tail}")
        lines.append(f"generic: {'yes' if rep['generic'] else 'no'}")
        for w in rep["warnings"]:
            lines.append(f"warning: {w}")
    for c in rep.get("checks", []):
        line = f"[{c['status']}] {c['name']}: {c['detail']}"
        if c["failing"]:
            line += f"; failing element {c['failing']}"
        lines.append(line)
    for o in rep.get("oracle", []):
        lines.append(f"oracle piece {o['piece']}: {o['automorphisms']} automorphisms, "
                     f"abelianization {o['abelianization']}, engine order {o['engine_order']}: "
                     f"{o['verdict']}")
    if "error" in rep:
        lines.append(f"error: {rep['error']}")
    return "\n".join(lines)


def emit(rep: dict, fmt: str, out=None):
    out = out or sys.stdout
    if fmt == "machine":
        out.write(json.dumps(rep, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(render_text(rep) + "\n")


# -- commands ---------------------------------------------------------------------

def _corrupt_targets(result):
    # test fixture: the engine claims Z_(n+1) where the oracle sees n automorphisms
    for r in result.pieces:
        r.target = gr.cyclic(gr.order(r.target) + 1)


def cmd_analyze(args) -> int:
    result = en.analyze_instance(load_instance(args.path), args.max_order)
    emit(analysis_report(result), args.format)
    if result.certification == en.SKIPPED:
        return EXIT_CAP
    return EXIT_OK if result.certification == en.CERTIFIED else EXIT_FAILED


def cmd_verify(args) -> int:
    result = en.analyze_instance(load_instance(args.path), args.max_order)
    if args.inject_fault == "action":
        result.action = vf.FaultyAction(result.action)
    elif args.inject_fault == "target":
        _corrupt_targets(result)
    rep = analysis_report(result)
    try:
        ver = vf.run(result, args.max_order, args.seed, oracle=not args.skip_oracle)
    except CapExceeded as exc:
        rep["error"] = str(exc)
        emit(rep, args.format)
        return EXIT_CAP
    rep["checks"] = [_check_entry(c) for c in ver.checks]
    rep["oracle"] = [_oracle_entry(i, r) for i, r in ver.oracle]
    emit(rep, args.format)
    return EXIT_OK if ver.ok else EXIT_FAILED


def cmd_oracle(args) -> int:
    instance = load_instance(args.path)
    instance.surface.check_supported()
    pieces = [en.analyze_piece(t) for t in instance.pieces]
    if args.inject_fault == "target":
        for r in pieces:
            r.target = gr.cyclic(gr.order(r.target) + 1)
    rep = {"schema_version": SCHEMA_VERSION, "oracle": []}
    try:
        for i, (r, tree) in enumerate(zip(pieces, instance.pieces)):
            rep["oracle"].append(_oracle_entry(i, orc.compare(r, tree, args.max_order)))
    except CapExceeded as exc:
        rep["error"] = str(exc)
        emit(rep, args.format)
        return EXIT_CAP
    emit(rep, args.format)
    return EXIT_OK if all(o["verdict"] == "MATCH" for o in rep["oracle"]) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reebtorus",
                                     description="Homotopy types of stabilizers of Morse maps on surfaces.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, help_ in (("analyze", cmd_analyze, "analyse an instance file"),
                            ("verify", cmd_verify, "analyse and run every property check"),
                            ("oracle", cmd_oracle, "compare with brute-force tree automorphisms")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("path")
        p.add_argument("--format", choices=("text", "machine"), default="text")
        p.add_argument("--max-order", type=int, default=gr.DEFAULT_CAP)
        p.add_argument("--skip-oracle", action="store_true")
        p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
        p.add_argument("--inject-fault", choices=("action", "target"), help=argparse.SUPPRESS)
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedSurface as exc:
        print(f"unsupported surface: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (SchemaError, InvariantViolation) as exc:
        print(f"invalid instance: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"cannot read {args.path}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
