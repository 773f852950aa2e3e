"""Command-line front end: JSON verdicts on standard output.

Exit codes: 0 decided, 2 inconclusive (jet order or budget), 1 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import __version__, blowup, cycles, duval, normal_form, oracle
from .germ import Germ3Fold, GermError
from .ideals import BudgetExceeded, BudgetMeter, GroebnerBudget, PolyIdeal
from .jets import DEFAULT_ORDER, NotACoordinateChange
from .poly import PolyParseError, format_poly, parse_poly

SCHEMA = 1
ORDER_ENV = "DIVCONTRACT_JET_ORDER"
THREEFOLD_VARS = ("x", "y", "z", "t")
SURFACE_VARS = ("u", "v", "w")


class InputError(ValueError):
    pass


class Inconclusive(RuntimeError):
    pass


def _default_order() -> int:
    raw = os.environ.get(ORDER_ENV)
    if raw is None:
        return DEFAULT_ORDER
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"{ORDER_ENV} must be an integer, got {raw!r}")
    return n


def _positive(name: str, value):
    if value is None or value <= 0:
        raise InputError(f"{name} must be positive")
    return value


def _germ(args) -> Germ3Fold:
    if not args.curve:
        raise InputError("--curve is required")
    gens = [g.strip() for g in args.curve.split(",") if g.strip()]
    if len(gens) != 3:
        raise InputError("a 3-fold job needs exactly three curve generators")
    F = parse_poly(args.eq, THREEFOLD_VARS)
    I = PolyIdeal([parse_poly(g, THREEFOLD_VARS) for g in gens], THREEFOLD_VARS)
    return Germ3Fold(F, I, args.order)


def _inputs(args, germ: Germ3Fold | None = None) -> dict:
    out = {"jet_order": args.order}
    if getattr(args, "eq", None) is not None:
        vars = THREEFOLD_VARS if germ is not None or args.command != "classify" else SURFACE_VARS
        out["eq"] = format_poly(parse_poly(args.eq, vars))
    if germ is not None:
        out["curve"] = [format_poly(g) for g in germ.I.gens]
    return out


def _budget(args) -> GroebnerBudget:
    return GroebnerBudget(max_seconds=_positive("--groebner-seconds", args.groebner_seconds))


# commands ---------------------------------------------------------------------

def cmd_classify(args) -> dict:
    f = parse_poly(args.eq, SURFACE_VARS)
    cl = duval.classify(f, args.order)
    res = cl.to_json()
    if cl.type.family == "Undetermined":
        raise Inconclusive(json.dumps(res))
    return {"verdict": cl.type.label, "evidence": res}


def cmd_section(args) -> dict:
    g = _germ(args)
    sec = oracle.find_general_section(g, _positive("--samples", args.samples), seed=args.seed)
    if isinstance(sec, oracle.NoDuValSection):
        return {"verdict": "NoDuValSection", "evidence": sec.to_json()}
    return {"verdict": sec.type.label, "position": sec.position.label if sec.position else None,
            "evidence": sec.to_json()}


def cmd_blowup(args) -> dict:
    g = _germ(args)
    res = blowup.blowup_curve(g)
    out = {"verdict": {"d": res.d}, "evidence": res.to_json()}
    if res.d >= 1:
        try:
            q = blowup.qfactorialize(res, budget=_budget(args))
            out["evidence"]["qfactorialization"] = q.to_json()
        except blowup.UnsupportedRegime as exc:
            out["evidence"]["qfactorialization"] = {"unsupported": str(exc)}
    return out


def cmd_cycle(args) -> dict:
    try:
        t = duval.DuValType.parse(args.type)
    except ValueError as exc:
        raise InputError(str(exc))
    meeting = args.meeting.strip().upper()
    if not meeting.startswith("E") or not meeting[1:].isdigit():
        raise InputError("--meeting must look like E3")
    sol = cycles.select_edge(cycles.DynkinGraph.of(t), int(meeting[1:]))
    js = sol.to_json()
    return {"verdict": {"d": js["d"], "E": js["E"], "coefficients": js["coefficients"]},
            "evidence": js}


def cmd_normal_form(args) -> dict:
    g = _germ(args)
    nf = normal_form.normalize(g, args.form)
    return {"verdict": nf.form_tag,
            "evidence": {**nf.to_json(), "certificate_holds": nf.certificate_holds(g.F),
                         "violations": nf.violations()}}


def cmd_contract(args) -> dict:
    g = _germ(args)
    v = oracle.decide_contraction(g, _positive("--samples", args.samples), seed=args.seed,
                                  groebner_budget=_budget(args))
    out = {"verdict": {"kind": v.kind, "stratum": v.stratum}, "evidence": v.to_json()}
    if v.payload is not None:
        out["verdict"].update(v.payload.to_json())
    return out


def cmd_verify(args) -> dict:
    g = _germ(args)
    meter = BudgetMeter(budget=_budget(args))
    cv = oracle.verify_by_charts(g, _budget(args), meter)
    return {"verdict": cv.regime, "evidence": cv.to_json(), "budgets": meter.to_json()}


def cmd_sympow(args) -> dict:
    g = _germ(args)
    chk = oracle.check_generator_degrees(g, _positive("--bound", args.bound),
                                         _positive("--dmax", args.dmax), _budget(args))
    return {"verdict": chk.passed, "evidence": chk.to_json()}


COMMANDS = {
    "classify": (cmd_classify, "Du Val type of a surface germ in u, v, w"),
    "section": (cmd_section, "general hyperplane section through the curve"),
    "blowup": (cmd_blowup, "blow-up charts, E1, d*E2 and singular loci"),
    "cycle": (cmd_cycle, "total-transform cycle of a curve on a Du Val graph"),
    "normal-form": (cmd_normal_form, "normal form of the curve on a D_n or A_3 section"),
    "contract": (cmd_contract, "full verdict on terminal contractions"),
    "verify": (cmd_verify, "chart-level regime check"),
    "sympow": (cmd_sympow, "generator degrees of the symbolic Rees algebra"),
}


def build_parser(default_order: int) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="divcontract", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        s = sub.add_parser(name, help=help_)
        s.add_argument("--order", type=int, default=default_order,
                       help=f"jet order (default from {ORDER_ENV} or {DEFAULT_ORDER})")
        s.add_argument("--no-evidence", action="store_true", help="omit the evidence trail")
        s.add_argument("--format", choices=("json", "text"), default="json")
        if name == "cycle":
            s.add_argument("--type", required=True, help="Du Val type, e.g. D7")
            s.add_argument("--meeting", required=True, help="vertex met by the curve, e.g. E6")
            continue
        s.add_argument("--eq", required=True, help="equation, e.g. 'x^2+y^2*z+t^3'")
        if name == "classify":
            continue
        s.add_argument("--curve", required=True, help="three comma-separated generators")
        s.add_argument("--groebner-seconds", type=float, default=300.0)
        if name in ("section", "contract"):
            s.add_argument("--samples", type=int, default=24)
            s.add_argument("--seed", type=int, default=0)
        if name == "normal-form":
            s.add_argument("--form", choices=normal_form.FORM_TAGS, default=None)
        if name == "sympow":
            s.add_argument("--bound", type=int, default=2)
            s.add_argument("--dmax", type=int, default=4)
    return p


def _text(report: dict) -> str:
    lines = [f"{report['command']}: {json.dumps(report.get('verdict'), sort_keys=True)}"]
    for k, v in sorted(report.get("inputs", {}).items()):
        lines.append(f"  {k} = {v}")
    return "\n".join(lines)


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    """Run one command; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        default_order = _default_order()
        args = build_parser(default_order).parse_args(argv)
        _positive("--order", args.order)
        handler = COMMANDS[args.command][0]
        result = handler(args)
        germ = None
        if args.command not in ("classify", "cycle"):
            germ = _germ(args)
        report = {"schema": SCHEMA, "command": args.command, "inputs": _inputs(args, germ),
                  "jet_order": args.order, **result}
        if getattr(args, "seed", None) is not None:
            report["inputs"]["seed"] = args.seed
            report["inputs"]["samples"] = args.samples
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    except (Inconclusive, oracle.InconclusiveSampling, BudgetExceeded,
            normal_form.JetOrderInsufficient) as exc:
        print(f"inconclusive: {exc}", file=err)
        return 2
    except oracle.CrossCheckError as exc:
        print(f"cross-check failure: {exc}: {json.dumps(exc.record.to_json(), sort_keys=True)}",
              file=err)
        return 1
    except (InputError, PolyParseError, GermError, NotACoordinateChange, duval.NotAGerm,
            cycles.CycleError, normal_form.NormalFormError, oracle.OracleError,
            blowup.BlowupError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    if args.no_evidence:
        report.pop("evidence", None)
    if args.format == "text":
        print(_text(report), file=out)
    else:
        print(json.dumps(report, sort_keys=True, indent=2), file=out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
