"""Command-line entry point: ``lcpspin <command> ...``.

JSON goes to --out when given (a short human summary is printed instead),
otherwise to standard output. Errors exit nonzero with an error JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from lcpspin import acceptance, conegeo, groups
from lcpspin.exterior import Form, OrthMap, stabilizer_dim
from lcpspin.octonion import Octonion
from lcpspin.structures import (
    g2_form,
    lee_constant_g2,
    lee_constant_spin7,
    spin7_form,
    spin7_form_octonionic,
    spin7_witness,
    torsion_g2,
    torsion_spin7,
)

FORMS = {"g2": g2_form, "spin7": spin7_form, "spin7-oct": spin7_form_octonionic}

EXIT_FAIL = 1
EXIT_ERROR = 2


class CliError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _emit(args, payload: dict, summary: str | None = None):
    text = _dump(payload)
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n")
        if summary:
            print(summary)
    else:
        print(text)
        if summary and getattr(args, "summary", False):
            print(summary)


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc


def _positive(kind):
    def parse(text):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value

    return parse


def _load_form(args) -> Form:
    if getattr(args, "input", None):
        try:
            return Form.from_json(_load_json(args.input))
        except (KeyError, ValueError) as exc:
            raise CliError(f"malformed form file: {exc}") from exc
    return FORMS[args.form]()


# commands -------------------------------------------------------------------------


def cmd_form(args):
    f = _load_form(args)
    _emit(args, f.to_json(), summary=str(f))
    return 0


def cmd_stab(args):
    f = _load_form(args)
    _emit(args, {"stabilizer_dim": stabilizer_dim(f)})
    return 0


def cmd_lee(args):
    if args.lee_command == "check":
        return _report(args, conegeo.lee_closedness_check(args.case, args.samples, args.h, args.tol, args.seed))
    c, c2 = lee_constant_g2(), lee_constant_spin7()
    payload = {
        "g2_lee_constant": str(c["constant"]) if c["stable"] else None,
        "g2_lee_constant_stable": c["stable"],
        "spin7_lee_constant": str(c2["constant"]) if c2["stable"] else None,
        "spin7_lee_constant_stable": c2["stable"],
        "spin7_form_witness": spin7_witness(),
    }
    _emit(args, payload)
    return 0 if c["stable"] and c2["stable"] else EXIT_FAIL


def cmd_torsion(args):
    comps = [Fraction(x) for x in args.theta.split(",")]
    if args.case == "g2":
        if len(comps) != 7:
            raise CliError("g2 Lee form needs 7 components")
        T = torsion_g2(Form.covector(comps), g2_form())
    else:
        if len(comps) != 8:
            raise CliError("spin7 Lee form needs 8 components")
        T = torsion_spin7(Form.covector(comps), spin7_form())
    _emit(args, T.to_json(), summary=str(T))
    return 0


def _frame_from_args(args) -> list[Octonion]:
    if args.frame:
        return groups.parse_frame(args.frame)
    data = _load_json(args.frame_file)
    return [Octonion.from_json(x) for x in data]


def cmd_group_gen(args):
    if args.generators:
        data = _load_json(args.generators)
        items = data["generators"] if isinstance(data, dict) else data
        G = groups.closure([OrthMap.from_json(g) for g in items], cap=args.cap)
        payload = G.to_json()
        status = 0
    else:
        frame = _frame_from_args(args)
        G = groups.frame_group(frame, cap=args.cap, check_order=False)
        expected = 2 ** (len(frame) + 1)
        payload = G.to_json()
        payload["frame"] = [x.to_json() for x in frame]
        payload["expected_order"] = expected
        payload["order_matches"] = G.order == expected
        status = 0 if G.order == expected else EXIT_FAIL
    _emit(args, payload, summary=f"order {G.order}")
    return status


def cmd_group_classify(args):
    try:
        G = groups.FiniteGroup.from_json(_load_json(args.input))
    except (KeyError, ValueError) as exc:
        raise CliError(f"malformed group file: {exc}") from exc
    report = groups.classify(G, FORMS[args.form]())
    _emit(args, report.to_json(), summary=report.table())
    if not getattr(args, "out", None):
        print(report.table(), file=sys.stderr)
    return 0


def _report(args, report: conegeo.ResidualReport) -> int:
    _emit(args, report.to_json())
    print(report.line())
    return 0 if report.passed else EXIT_FAIL


def cmd_cone(args):
    form = FORMS[args.form]()
    return _report(
        args,
        conegeo.verify_cone_identity(form, args.samples, args.h, args.tol, args.seed, min_ratio=args.min_ratio, name=f"cone identity ({args.form})"),
    )


def cmd_nk(args):
    return _report(args, conegeo.nearly_kaehler_check(args.samples, args.h, args.tol, args.seed))


def cmd_dilation(args):
    return _report(args, conegeo.dilation_invariance_check(args.samples, args.tol, args.seed))


def cmd_verify_all(args):
    results = acceptance.run_all(echo=print)
    payload = {"passed": all(r.passed for r in results), "criteria": [r.to_json() for r in results]}
    if args.out:
        Path(args.out).write_text(_dump(payload) + "\n")
    n_ok = sum(r.passed for r in results)
    print(f"{n_ok}/{len(results)} criteria passed")
    return 0 if payload["passed"] else EXIT_FAIL


# parser ---------------------------------------------------------------------------


def _numeric_opts(p, samples=50, h=1e-4, tol=1e-6):
    p.add_argument("--samples", type=_positive(int), default=samples)
    p.add_argument("--h", type=_positive(float), default=h)
    p.add_argument("--tol", type=_positive(float), default=tol)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lcpspin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("form", help="print a canonical form as JSON")
    p.add_argument("--form", choices=FORMS, default="g2")
    p.add_argument("--out")
    p.set_defaults(func=cmd_form)

    p = sub.add_parser("stab", help="dimension of the stabilizer algebra of a form")
    p.add_argument("--form", choices=FORMS, default="g2")
    p.add_argument("--in", dest="input", help="form JSON file instead of --form")
    p.add_argument("--out")
    p.set_defaults(func=cmd_stab)

    p = sub.add_parser("lee", help="exact Lee constants, or 'lee check' for the numeric cylinder test")
    p.add_argument("--out")
    p.set_defaults(func=cmd_lee, lee_command=None)
    lsub = p.add_subparsers(dest="lee_command")
    lc = lsub.add_parser("check")
    lc.add_argument("--case", choices=["g2", "spin7"], default="g2")
    _numeric_opts(lc)

    p = sub.add_parser("torsion", help="torsion 3-form for a constant Lee form")
    p.add_argument("--case", choices=["g2", "spin7"], default="g2")
    p.add_argument("--theta", required=True, help="comma-separated rational components")
    p.add_argument("--out")
    p.set_defaults(func=cmd_torsion)

    p = sub.add_parser("group", help="finite subgroups of SO(8)")
    gsub = p.add_subparsers(dest="group_command", required=True)
    gen = gsub.add_parser("gen")
    src = gen.add_mutually_exclusive_group(required=True)
    src.add_argument("--frame", help="comma-separated imaginary units, e.g. e1,e2,e3")
    src.add_argument("--frame-file", help="JSON list of exact octonions")
    src.add_argument("--generators", help="JSON list of OrthMap generators")
    gen.add_argument("--cap", type=_positive(int), default=groups.DEFAULT_CAP)
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_group_gen)
    cl = gsub.add_parser("classify")
    cl.add_argument("--in", dest="input", required=True)
    cl.add_argument("--form", choices=["spin7", "spin7-oct"], default="spin7-oct")
    cl.add_argument("--out")
    cl.set_defaults(func=cmd_group_classify)

    p = sub.add_parser("cone", help="cone identities over the unit sphere")
    csub = p.add_subparsers(dest="cone_command", required=True)
    cv = csub.add_parser("verify")
    cv.add_argument("--form", choices=["g2", "spin7", "spin7-oct"], default="g2")
    cv.add_argument("--min-ratio", type=_positive(float), default=3.5)
    _numeric_opts(cv)
    cv.set_defaults(func=cmd_cone)

    p = sub.add_parser("nk", help="nearly Kaehler check on S^6")
    nsub = p.add_subparsers(dest="nk_command", required=True)
    nc = nsub.add_parser("check")
    _numeric_opts(nc)
    nc.set_defaults(func=cmd_nk)

    p = sub.add_parser("dilation", help="dilation invariance of the rescaled Cayley form")
    dsub = p.add_subparsers(dest="dilation_command", required=True)
    dc = dsub.add_parser("check")
    dc.add_argument("--samples", type=_positive(int), default=100)
    dc.add_argument("--tol", type=_positive(float), default=1e-12)
    dc.add_argument("--seed", type=int, default=0)
    dc.add_argument("--out")
    dc.set_defaults(func=cmd_dilation)

    p = sub.add_parser("verify-all", help="run every acceptance criterion")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_all)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, groups.GroupError, ValueError, ZeroDivisionError) as exc:
        print(_dump({"error": str(exc), "type": type(exc).__name__}))
        return EXIT_ERROR


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
