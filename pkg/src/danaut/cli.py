"""Command-line driver.

Subcommands: analyze | exp | apply | degree | gr | irreducible | genus.
Input is a JSON presentation file with exact rational coefficients; output
is a human-readable summary or, with --json, a byte-stable report.

Exit codes: 0 success, 1 parse/validation error, 2 unsupported regime.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .autgroup import aut_structure, group_element_map, verify_automorphism
from .derivations import exp_replica, gr_leading_form, tilde_degree
from .poly import MultiPoly, parse_poly, poly_str
from .report import build_report, degenerate_report
from .varieties import (
    REGIME_UNSUPPORTED,
    SpecError,
    VarietySpec,
    irreducibility,
    genus,
    make_variety,
    normalize,
)
from .poly import from_univar


class CliError(Exception):
    def __init__(self, message: str, code: int = 1):
        super().__init__(message)
        self.code = code


def parse_coeff(text: str) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"coefficient {text!r} is not an exact rational: {exc}")


def load_spec_file(path: str) -> tuple:
    """Parse and validate a presentation file; returns (spec, options)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise CliError("presentation file must be a JSON object")
    weights = data.get("weights")
    if not isinstance(weights, list) or not all(
        isinstance(k, int) and k >= 1 for k in weights
    ):
        raise CliError("weights must be a list of positive integers")
    x_present = data.get("x_present", False)
    if not isinstance(x_present, bool):
        raise CliError("x_present must be a boolean")
    terms = data.get("P")
    if not isinstance(terms, list) or not terms:
        raise CliError("P must be a nonempty list of term records")
    m = len(weights)
    vars = (("x",) if x_present else ()) + tuple(f"y{i+1}" for i in range(m)) + ("z",)
    poly_terms: dict = {}
    for rec in terms:
        if not isinstance(rec, dict):
            raise CliError("each P term must be an object")
        ye = rec.get("y_exponents")
        ze = rec.get("z_exponent")
        if not isinstance(ye, list) or len(ye) != m or not all(
            isinstance(e, int) and e >= 0 for e in ye
        ):
            raise CliError(
                f"y_exponents must list {m} nonnegative integers (one per weight)"
            )
        if not isinstance(ze, int) or ze < 0:
            raise CliError("z_exponent must be a nonnegative integer")
        c = parse_coeff(rec.get("coeff", "1"))
        exps = [0] * len(vars)
        for i, e in enumerate(ye):
            exps[vars.index(f"y{i+1}")] = e
        exps[vars.index("z")] = ze
        key = tuple(exps)
        poly_terms[key] = poly_terms.get(key, Fraction(0)) + c
    P = MultiPoly(vars, poly_terms)
    options = data.get("options", {})
    if not isinstance(options, dict):
        raise CliError("options must be an object")
    try:
        spec = make_variety(weights, x_present, P)
    except SpecError as exc:
        raise CliError(str(exc))
    if spec.d < 2:
        raise CliError("z-degree must be at least 2")
    return spec, options


def prepare(path: str, args) -> tuple:
    """Load, optionally normalize, and gate on the regime."""
    raw, options = load_spec_file(path)
    do_normalize = options.get("normalize", True) and not args.no_normalize
    if not do_normalize and not raw.is_normalized():
        raise CliError(
            "presentation is not normalized (nonzero z^(d-1) coefficient) and "
            "--no-normalize was given"
        )
    spec = normalize(raw) if do_normalize else raw
    if spec.regime == REGIME_UNSUPPORTED:
        raise CliError(f"unsupported presentation: {spec.regime_note}", code=2)
    bound = args.max_enum_order or options.get("enum_order_bound", 360)
    return raw, spec, bound


def emit_json(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False))
    sys.stdout.write("\n")


def cmd_analyze(args) -> int:
    raw, spec, bound = prepare(args.spec, args)
    if spec.regime == "Degenerate":
        report = degenerate_report(raw, spec)
    else:
        aut = aut_structure(spec, enum_order_bound=bound)
        report = build_report(raw, spec, aut)
    if args.json:
        emit_json(report)
        return 0
    if spec.regime == "Degenerate":
        print(f"regime: {report['regime']}")
        print(f"equation: {report['normalized_equation']}")
        print(f"Aut structure: {report['structure_pretty']}")
        for w in report["warnings"]:
            print(f"warning: {w}")
        return 0
    print(f"regime: {report['regime']}")
    print(f"equation: {report['normalized_equation']}")
    if report["normalization_shift"]:
        print(f"normalized via z -> z - ({report['normalization_shift']})")
    inv = report["invariants"]
    print(f"irreducible: {inv['irreducible']}   rigid: {inv['rigid']}")
    if inv["genus"] is not None:
        print(f"genus: {inv['genus']}")
    print(f"ML generators: {', '.join(inv['ml_generators']) or '(all of the ring)'}")
    for key in ("H", "D", "Dbar", "Dhat"):
        g = report["groups"].get(key)
        if g:
            print(f"{key}: {g['type']['pretty']}")
    if report["groups"]["S"]:
        print(f"S: {report['groups']['S']['pretty']}")
    G = report["groups"]["G"]
    if G:
        print(f"canonical group: {G['summary']}")
        if G["elements"] is not None:
            for e in G["elements"]:
                print(f"  {e['id']}: {e['signature']}")
        if G["splits_note"]:
            print(f"  {G['splits_note']}")
    print(f"Aut structure: {report['structure_pretty']}")
    v = report["verdicts"]
    print(
        f"verdicts: commutative={v['commutative']} torus={v['torus']} "
        f"solvable={v['solvable']}"
    )
    print(f"citations: {', '.join(report['citations'])}")
    for w in report["warnings"]:
        print(f"warning: {w}")
    return 0


def cmd_exp(args) -> int:
    raw, spec, bound = prepare(args.spec, args)
    extra = tuple(
        sorted(
            name
            for name in _free_names(args.h)
            if name not in spec.vars
        )
    )
    ctx = spec.vars + extra
    try:
        h = parse_poly(args.h, ctx)
    except ValueError as exc:
        raise CliError(str(exc))
    try:
        gm = exp_replica(spec, h)
    except (ValueError, SpecError) as exc:
        raise CliError(str(exc))
    if not verify_automorphism(spec, gm):
        raise CliError("internal error: exponential failed verification")
    payload = {
        "images": {name: poly_str(gm.images[name]) for name in spec.vars},
        "inverse_images": {
            name: poly_str(gm.inverse_images[name]) for name in spec.vars
        },
        "warnings": _exp_warnings(spec),
    }
    if args.json:
        emit_json(payload)
        return 0
    for name in spec.vars:
        print(f"{name} -> {payload['images'][name]}")
    print("inverse:")
    for name in spec.vars:
        print(f"{name} -> {payload['inverse_images'][name]}")
    for w in payload["warnings"]:
        print(f"warning: {w}")
    return 0


def _exp_warnings(spec: VarietySpec) -> list:
    # A widely circulated form of the m=1, w=2, d=3 example maps z to z+y*h;
    # that variant does not preserve the defining ideal.  The canonical
    # derivation sends z to the full non-unit weight monomial, and the maps
    # emitted here follow it (ideal preservation is checked above).
    if spec.x_present and spec.weights == (2,) and spec.d == 3:
        return [
            "the emitted map uses the canonical derivation image of z (the "
            "weight monomial y1^2); a commonly printed variant with z -> z + "
            "y1*h does not preserve the defining ideal"
        ]
    return []


def _free_names(text: str) -> set:
    names = set()
    token = ""
    for ch in text + " ":
        if ch.isalnum() or ch == "_":
            token += ch
        else:
            if token and not token[0].isdigit():
                names.add(token)
            token = ""
    return names


def _parse_in_spec(spec: VarietySpec, text: str) -> MultiPoly:
    try:
        return parse_poly(text, spec.vars)
    except ValueError as exc:
        raise CliError(str(exc))


def cmd_apply(args) -> int:
    raw, spec, bound = prepare(args.spec, args)
    f = _parse_in_spec(spec, args.poly)
    if args.element:
        aut = aut_structure(spec, enum_order_bound=bound)
        if aut.canonical is None or aut.canonical.elements is None:
            raise CliError("no enumerated elements available for this presentation")
        gm = None
        from .report import canonical_dict

        cd = canonical_dict(aut.canonical)
        for entry, (sigma, t) in zip(cd["elements"], aut.canonical.elements):
            if args.element in (entry["id"], entry["signature"]):
                gm = group_element_map(spec, sigma, t)
                break
        if gm is None:
            raise CliError(f"unknown element identifier {args.element!r}")
    elif args.map:
        try:
            mapping = json.loads(args.map)
        except json.JSONDecodeError as exc:
            raise CliError(f"--map is not valid JSON: {exc}")
        if not isinstance(mapping, dict):
            raise CliError("--map must be a JSON object of generator images")
        from .derivations import GeneratorMap

        images = {}
        for name in spec.vars:
            if name not in mapping:
                raise CliError(f"--map is missing an image for {name}")
            images[name] = _parse_in_spec(spec, mapping[name])
        gm = GeneratorMap(spec, images, validate=False)
    else:
        raise CliError("one of --element or --map is required")
    if not verify_automorphism(spec, gm):
        raise CliError("the supplied map is not a verified automorphism")
    result = gm.apply_to(f)
    if args.json:
        emit_json({"result": poly_str(result)})
    else:
        print(poly_str(result))
    return 0


def cmd_degree(args) -> int:
    raw, spec, bound = prepare(args.spec, args)
    f = _parse_in_spec(spec, args.poly)
    try:
        deg = tilde_degree(f, spec)
    except ValueError as exc:
        raise CliError(str(exc))
    if args.json:
        emit_json({"degree": deg})
    else:
        print(deg)
    return 0


def cmd_gr(args) -> int:
    raw, spec, bound = prepare(args.spec, args)
    f = _parse_in_spec(spec, args.poly)
    try:
        lead = gr_leading_form(f, spec)
    except ValueError as exc:
        raise CliError(str(exc))
    if args.json:
        emit_json({"leading_form": poly_str(lead)})
    else:
        print(poly_str(lead))
    return 0


def cmd_irreducible(args) -> int:
    raw, spec, bound = prepare(args.spec, args)
    irr = irreducibility(spec)
    payload = {
        "irreducible": not irr.reducible,
        "l": irr.l,
        "Q": poly_str(irr.Q) if irr.Q is not None else None,
        "note": irr.note,
    }
    if args.json:
        emit_json(payload)
    else:
        if irr.reducible:
            print(f"reducible: l={irr.l}, Q = {payload['Q']}")
        else:
            print(f"irreducible ({irr.note})")
    return 0


def cmd_genus(args) -> int:
    raw, spec, bound = prepare(args.spec, args)
    if spec.m != 1 or spec.x_present:
        raise CliError("genus needs a curve presentation y1^k = P(z)")
    P = from_univar(("z",), "z", spec.P_univar_coeffs())
    try:
        g = genus(spec.weights[0], P)
    except ValueError as exc:
        raise CliError(str(exc))
    if args.json:
        emit_json({"genus": g})
    else:
        print(g)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="danaut",
        description="Exact invariants and automorphism groups of "
        "unit-weight/suspension variety presentations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("spec", help="presentation JSON file")
        p.add_argument("--json", action="store_true", help="machine output")
        p.add_argument(
            "--pretty", action="store_true", help="human output (default)"
        )
        p.add_argument(
            "--max-enum-order",
            type=int,
            default=None,
            metavar="N",
            help="enumeration bound for cyclotomic orders (default 360)",
        )
        p.add_argument(
            "--no-normalize",
            action="store_true",
            help="reject non-normalized input instead of shifting z",
        )

    p = sub.add_parser("analyze", help="full invariant and structure report")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("exp", help="exponential automorphism of a kernel element")
    common(p)
    p.add_argument("h", help="kernel polynomial (y variables and free symbols)")
    p.set_defaults(func=cmd_exp)

    p = sub.add_parser("apply", help="apply an automorphism to a polynomial")
    common(p)
    p.add_argument("poly", help="polynomial in the presentation variables")
    p.add_argument("--element", help="element id or signature from a report")
    p.add_argument("--map", help="inline JSON map of generator images")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("degree", help="filtration degree of a polynomial")
    common(p)
    p.add_argument("poly")
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("gr", help="leading form in the associated graded ring")
    common(p)
    p.add_argument("poly")
    p.set_defaults(func=cmd_gr)

    p = sub.add_parser("irreducible", help="irreducibility of the presentation")
    common(p)
    p.set_defaults(func=cmd_irreducible)

    p = sub.add_parser("genus", help="genus of a curve presentation")
    common(p)
    p.set_defaults(func=cmd_genus)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
