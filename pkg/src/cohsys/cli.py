"""Command-line entry point: ``cohsys <subcommand> ...``.

Exit status: 0 success, 2 validation error, 3 candidate box too large or
empty, 1 internal failure (including a failed ``verify`` suite).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .curve import MAX_COMPONENTS, curve_from_json, leaf_component, subcurve_data
from .dualspan import (
    brill_noether,
    dimension_report,
    dual_span,
    line_system_from_json,
    prop3_hypotheses,
    thm2_nonemptiness,
)
from .errors import BoundsError, CohsysError, ValidationError
from .sheaf import (
    chi_bounds,
    chi_total,
    line_bundle_criteria,
    sheaf_from_json,
    w_deg,
    w_rank,
    w_slope,
)
from .stability import (
    H_RANGE_NOTE,
    NUMERICAL_DISCLAIMER,
    Bounds,
    StabHypotheses,
    SubsystemCandidate,
    SystemType,
    alpha_g,
    alpha_slope,
    check_alpha,
    default_max_candidates,
    format_rational,
    property_star,
    representative,
    strong_instability_check,
    theorem_stab_verdict,
    wall_for_candidate,
    walls,
)
from .verify import SUITES, TrialConfig, results_to_json, run_suite

EXIT_OK, EXIT_INTERNAL, EXIT_VALIDATION, EXIT_BOUNDS = 0, 1, 2, 3


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer literal; floats are rejected."""
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def nonnegative_alpha(text: str) -> Fraction:
    try:
        value = parse_rational(text)
    except ValueError:
        raise argparse.ArgumentTypeError("alpha must be a nonnegative rational") from None
    if value < 0:
        raise argparse.ArgumentTypeError("alpha must be a nonnegative rational")
    return value


def int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def to_jsonable(obj):
    """Rationals become "p/q" strings; containers are converted recursively."""
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def render_text(report: dict) -> str:
    lines = []

    def scalar(v) -> str:
        if v is None:
            return "null"
        if isinstance(v, bool):
            return "true" if v else "false"
        return str(v)

    def walk(prefix, value):
        if isinstance(value, dict):
            if not value:
                lines.append((prefix, "{}"))
            for k, v in value.items():
                walk(f"{prefix}.{k}" if prefix else str(k), v)
        elif isinstance(value, list) and any(isinstance(v, (dict, list, str)) for v in value):
            for i, v in enumerate(value):
                walk(f"{prefix}[{i}]", v)
        elif isinstance(value, list):
            lines.append((prefix, ", ".join(scalar(v) for v in value) if value else "[]"))
        else:
            lines.append((prefix, scalar(value)))

    walk("", report)
    width = max((len(k) for k, _ in lines), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in lines)


def emit(report: dict, as_json: bool) -> None:
    report = to_jsonable(report)
    if as_json:
        print(json.dumps(report, indent=2))
    else:
        print(render_text(report))


def _load_json(path: str | None, field: str) -> dict:
    if path is None:
        raise ValidationError("required", f"--{field}")
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}", f"--{field}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON in {path}: {exc.msg}", f"--{field}") from None


def _curve(args):
    return curve_from_json(
        _load_json(args.curve, "curve"),
        allow_smooth=args.allow_smooth,
        allow_low_genus=args.allow_low_genus,
        max_components=MAX_COMPONENTS,
    )


def _system(args, curve) -> SystemType:
    doc = _load_json(args.system, "system")
    if "k" not in doc:
        raise ValidationError("missing", "k")
    return SystemType(sheaf_from_json(curve, doc), doc["k"])


def _bounds(args) -> Bounds:
    floor = 0 if args.degree_floor is None else args.degree_floor
    return Bounds(degree_floor=floor, max_candidates=default_max_candidates())


def _curve_summary(curve) -> dict:
    return {
        "gamma": curve.gamma,
        "delta": curve.delta,
        "p_a": curve.p_a,
        "weights": list(curve.weights),
        "ample_total": curve.ample_total,
    }


def _class_json(system, curve, bounds, key) -> dict:
    cand = representative(system, curve, key, bounds)
    return {
        "multirank": list(key.multirank),
        "chi": key.chi,
        "h": key.h,
        "wrank": w_rank(cand.sheaf, curve),
        "wdeg": w_deg(cand.sheaf, curve),
        "representative": cand.to_json(),
    }


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_genus(args) -> dict:
    curve = _curve(args)
    report = {"curve": _curve_summary(curve), "genera": list(curve.genera)}
    report["leaf_component"] = leaf_component(curve) if curve.gamma >= 2 else None
    if args.subcurve:
        data = subcurve_data(curve, args.subcurve)
        report["subcurve"] = {
            "members": sorted(args.subcurve),
            "p_a": data.genus,
            "connected_components": data.connected_components,
            "boundary_nodes": [list(e) for e in data.boundary],
            "complement": None if data.complement is None else sorted(data.complement.members),
            "complement_p_a": data.complement_genus,
            "genus_identity_holds": data.identity_holds,
        }
    report["notes"] = curve.hypotheses_weakened
    return report


def cmd_invariants(args) -> dict:
    curve = _curve(args)
    doc = _load_json(args.system, "system")
    sheaf = sheaf_from_json(curve, doc)
    lo, hi = chi_bounds(sheaf, curve)
    report = {
        "curve": _curve_summary(curve),
        "sheaf": sheaf.to_json(),
        "chi": chi_total(sheaf, curve),
        "chi_bounds": [lo, hi],
        "wrank": w_rank(sheaf, curve),
        "wdeg": w_deg(sheaf, curve),
        "w_slope": w_slope(sheaf, curve),
    }
    if sheaf.multirank == (1,) * curve.gamma:
        report["line_bundle_criteria"] = line_bundle_criteria(curve, sheaf.degrees)._asdict()
    if "k" in doc:
        system = SystemType(sheaf, doc["k"])
        if sheaf.is_uniform and system.k >= 1 and w_deg(sheaf, curve) >= 0:
            ag = alpha_g(curve, system.rank, w_deg(sheaf, curve), system.k)
            report["alpha_g"] = ag.alpha_g
            report["k_alpha_g"] = ag.k_alpha_g
    return report


def cmd_alpha_g(args) -> dict:
    curve = _curve(args)
    ag = alpha_g(curve, args.r, args.d, args.k)
    return {"curve": _curve_summary(curve), "r": args.r, "d": args.d, "k": args.k,
            "alpha_g": ag.alpha_g, "k_alpha_g": ag.k_alpha_g}


def cmd_check(args) -> dict:
    if args.alpha is None:
        raise ValidationError("required", "--alpha")
    curve = _curve(args)
    system = _system(args, curve)
    bounds = _bounds(args)
    verdict, witness = check_alpha(system, curve, args.alpha, bounds, args.workers)
    report = {
        "alpha": args.alpha,
        "system_slope": alpha_slope(system, args.alpha, curve),
        "verdict": verdict,
        "witness": None if witness is None else _class_json(system, curve, bounds, witness),
    }
    if witness is not None:
        report["witness"]["slope"] = alpha_slope(representative(system, curve, witness, bounds), args.alpha, curve)
    report["bounds"] = bounds.to_json()
    report["notes"] = [NUMERICAL_DISCLAIMER, H_RANGE_NOTE, *curve.hypotheses_weakened]
    return report


def cmd_walls(args) -> dict:
    curve = _curve(args)
    system = _system(args, curve)
    bounds = _bounds(args)
    rep = walls(system, curve, bounds, args.workers)
    upto = args.alpha_max
    wall_list = []
    for w in rep.walls:
        if upto is not None and w.alpha > upto:
            continue
        wall_list.append({
            "alpha": w.alpha,
            "witness_count": len(w.witnesses),
            "witnesses": [
                {**_class_json(system, curve, bounds, key), "destabilizing_side": side}
                for key, side in w.witnesses[: args.max_witnesses]
            ],
        })
    chambers = []
    for ch in rep.chambers:
        if upto is not None and ch.lower >= upto:
            continue
        chambers.append({
            "lower": ch.lower,
            "upper": "inf" if ch.upper is None else ch.upper,
            "sample_alpha": ch.sample,
            "verdict": ch.verdict,
            "witness": None if ch.witness is None else _class_json(system, curve, bounds, ch.witness),
        })
    return {
        "curve": _curve_summary(curve),
        "system": system.to_json(),
        "wdeg": w_deg(system.sheaf, curve),
        "alpha_g": rep.alpha_g,
        "k_alpha_g": rep.k_alpha_g,
        "wall_count": len(rep.walls),
        "walls": wall_list,
        "chambers": chambers,
        "stabilizes_below_k_alpha_g": rep.stabilizes_below_k_alpha_g,
        "k_alpha_g_bound_asserted": rep.thm_a_shadow_checked,
        "strongly_unstable_witness": None
        if rep.strongly_unstable_witness is None
        else _class_json(system, curve, bounds, rep.strongly_unstable_witness),
        "candidate_count": rep.candidate_count,
        "classes_scanned": rep.classes_scanned,
        "bounds": bounds.to_json(),
        "settings": {"alpha_max": upto, "max_witnesses": args.max_witnesses},
        "notes": list(rep.notes),
    }


def cmd_star(args) -> dict:
    curve = _curve(args)
    system = _system(args, curve)
    doc = _load_json(args.candidate, "candidate")
    if "h" not in doc:
        raise ValidationError("missing", "h")
    h = doc["h"]
    if not isinstance(h, int) or not 0 <= h <= system.k:
        raise ValidationError(f"h must be an integer in [0, {system.k}]", "h")
    cand = SubsystemCandidate(sheaf_from_json(curve, doc), h)
    star = property_star(system, cand, curve, strict=not args.weak)
    wall = wall_for_candidate(system, cand, curve)
    return {
        "candidate": cand.to_json(),
        "candidate_wrank": w_rank(cand.sheaf, curve),
        "candidate_wdeg": w_deg(cand.sheaf, curve),
        "property": "star'" if args.weak else "star",
        **star._asdict(),
        "strongly_unstable": strong_instability_check(system, cand, curve),
        "wall": None if wall is None else {"alpha": wall.alpha, "destabilizing_side": wall.destabilizing_side},
    }


def cmd_stab(args) -> dict:
    curve = _curve(args)
    system = _system(args, curve)
    hyp = StabHypotheses(args.generically_generated, args.restrictions_full_k,
                         args.restrictions_alpha_stable, args.w_stable)
    v = theorem_stab_verdict(system, curve, hyp)
    return {"conditional_stable": v.conditional_stable, "threshold": v.threshold,
            "coprime": v.coprime, "failing": list(v.failing), "verdict": v.label}


def cmd_dual_span(args) -> dict:
    curve = _curve(args)
    ls = line_system_from_json(curve, _load_json(args.system, "system"), args.assume_generic)
    res = dual_span(ls, curve)
    prop3 = prop3_hypotheses(curve, ls.degrees, ls.r)
    return {
        "line_system": ls.to_json(),
        "assume_generic": args.assume_generic,
        "prop3_hypotheses": list(prop3.per_component),
        "dual_span": {**res.system.to_json(), "chi": res.chi, "wdeg": res.wdeg},
        "stability_threshold": res.stability_threshold,
        "verdict": res.verdict,
        "restrictions": [
            {"component": v.component, "stable": v.stable, "threshold": v.threshold,
             "destabilizing_ranks": list(v.destabilizing_ranks), "verdict": v.label}
            for v in res.restriction_verdicts
        ],
    }


def cmd_bn(args) -> dict:
    curve = _curve(args)
    return {"p_a": curve.p_a, "r": args.r, "d": args.d, "k": args.k,
            "brill_noether": brill_noether(curve, args.r, args.d, args.k)}


def cmd_dims(args) -> dict:
    curve = _curve(args)
    if args.degrees is None:
        raise ValidationError("required", "--degrees")
    rep = dimension_report(curve, args.r, args.degrees)
    return {
        "r": rep.r, "d": rep.d, "degrees": list(args.degrees),
        "dim_X": rep.dim_x, "dim_Y": rep.dim_y, "dim_product": rep.dim_product,
        "fiber_dim": rep.fiber_dim, "dim_S": rep.dim_s,
        "grassmannian_fiber_dim": rep.grassmannian_fiber_dim,
        "identities": rep.identities,
        "nonempty_threshold_met": thm2_nonemptiness(curve, rep.r, rep.d),
        "label": rep.label,
    }


def cmd_verify(args) -> tuple[dict, bool]:
    config = TrialConfig(seed=args.seed, trials=args.trials, suite=args.suite)
    results = run_suite(config)
    doc = results_to_json(config, results)
    if args.save_counterexamples:
        save_counterexamples(doc, Path(args.save_counterexamples))
    return doc, doc["ok"]


def save_counterexamples(doc: dict, directory: Path) -> list[Path]:
    """One JSON file per serialized object, named ``<suite>.<object>.json``."""
    written = []
    for suite in doc["suites"]:
        example = suite["counterexample"]
        if example is None:
            continue
        directory.mkdir(parents=True, exist_ok=True)
        for name, value in example.items():
            path = directory / f"{suite['suite']}.{name}.json"
            path.write_text(json.dumps(to_jsonable(value), indent=2) + "\n")
            written.append(path)
    return written


COMMANDS = {
    "genus": cmd_genus,
    "invariants": cmd_invariants,
    "check": cmd_check,
    "walls": cmd_walls,
    "alpha-g": cmd_alpha_g,
    "star": cmd_star,
    "stab": cmd_stab,
    "dual-span": cmd_dual_span,
    "bn": cmd_bn,
    "dims": cmd_dims,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--curve", metavar="FILE", help="curve JSON")
    common.add_argument("--system", metavar="FILE", help="system / sheaf / line-system JSON")
    common.add_argument("--json", action="store_true", help="emit JSON instead of aligned text")
    common.add_argument("--allow-smooth", action="store_true", help="admit a single component")
    common.add_argument("--allow-low-genus", action="store_true", help="admit components of genus < 2")

    box = argparse.ArgumentParser(add_help=False)
    box.add_argument("--degree-floor", type=int, metavar="N", help="lowest candidate degree (default 0)")
    box.add_argument("--workers", type=int, default=1, metavar="N", help="parallel scan workers")

    numbers = argparse.ArgumentParser(add_help=False)
    numbers.add_argument("-r", type=int, required=True)
    numbers.add_argument("-d", type=int, required=True)
    numbers.add_argument("-k", type=int, required=True)

    parser = argparse.ArgumentParser(prog="cohsys", description="Exact analysis of coherent systems on curves of compact type.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("genus", parents=[common], help="curve arithmetic")
    p.add_argument("--subcurve", type=int_list, metavar="IDS", help="comma-separated component ids")

    sub.add_parser("invariants", parents=[common], help="numerical invariants of a sheaf class")

    p = sub.add_parser("check", parents=[common, box], help="numerical verdict at one alpha")
    p.add_argument("--alpha", type=nonnegative_alpha, metavar="p/q")

    p = sub.add_parser("walls", parents=[common, box], help="walls and chambers in alpha")
    p.add_argument("--alpha-max", type=nonnegative_alpha, metavar="p/q", help="only list walls up to this alpha")
    p.add_argument("--max-witnesses", type=int, default=3, metavar="N")

    sub.add_parser("alpha-g", parents=[common, numbers], help="the threshold alpha_g and k*alpha_g")

    p = sub.add_parser("star", parents=[common], help="property (star) for one candidate")
    p.add_argument("--candidate", metavar="FILE", help="candidate JSON (sheaf class plus h)")
    p.add_argument("--weak", action="store_true", help="use the non-strict branch (star')")

    p = sub.add_parser("stab", parents=[common], help="sufficient condition for stability above k*alpha_g")
    for flag in ("generically-generated", "restrictions-full-k", "restrictions-alpha-stable", "w-stable"):
        p.add_argument(f"--{flag}", action="store_true")

    p = sub.add_parser("dual-span", parents=[common], help="dual span of a line-bundle system")
    p.add_argument("--assume-generic", action="store_true",
                   help="set generation and R_i = 0 when the general-W degree bounds hold")

    sub.add_parser("bn", parents=[common, numbers], help="Brill-Noether number")

    p = sub.add_parser("dims", parents=[common], help="component and fiber dimensions")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--degrees", type=int_list, metavar="D1,D2,...")

    p = sub.add_parser("verify", help="randomized checks against brute-force oracles")
    p.add_argument("--suite", default="all", choices=[*SUITES, "all"])
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--json", action="store_true")
    p.add_argument("--save-counterexamples", metavar="DIR",
                   help="write each failing suite's first counterexample as CLI input files")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_VALIDATION
    try:
        if args.command == "verify":
            report, ok = cmd_verify(args)
            if args.json:
                emit(report, True)
            else:
                for s in report["suites"]:
                    status = "PASS" if s["failed"] == 0 else "FAIL"
                    print(f"{status}  {s['suite']:<26} {s['passed']}/{s['trials']}")
                    if s["counterexample"] is not None:
                        print(json.dumps(s["counterexample"], indent=2))
            return EXIT_OK if ok else EXIT_INTERNAL
        emit(COMMANDS[args.command](args), args.json)
        return EXIT_OK
    except ValidationError as exc:
        print(f"cohsys: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except BoundsError as exc:
        print(f"cohsys: bounds: {exc}", file=sys.stderr)
        return EXIT_BOUNDS
    except CohsysError as exc:
        print(f"cohsys: error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"cohsys: internal failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
