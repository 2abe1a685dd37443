"""Assembly of machine-readable analysis reports.

The JSON shape is stable (sorted keys, exact scalars as strings) so golden
reports are byte-reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .autgroup import AutReport, _sigma_str, group_element_map
from .cyclotomic import zeta, canonical_scalar
from .derivations import GeneratorMap, canonical_lnd, exp_replica
from .fmt import scalar_json, scalar_str
from .lattice import DiagGroupType, solve_torus_system
from .poly import MultiPoly, poly_str
from .varieties import (
    REGIME_ALL_GE2,
    REGIME_DANIELEWSKI,
    REGIME_ONE_UNIT,
    VarietySpec,
    genus_formula,
    irreducibility,
    ml_invariant,
    rigidity,
)


def type_dict(t: Optional[DiagGroupType]) -> Optional[dict]:
    if t is None:
        return None
    return {
        "rank": t.torus_rank,
        "factors": list(t.invariant_factors),
        "pretty": t.pretty(),
    }


def quasitorus_dict(q) -> Optional[dict]:
    if q is None:
        return None
    return {
        "which": q.which,
        "type": type_dict(q.type),
        "effective_type": type_dict(q.effective_type),
        "action": [[name, e] for name, e in q.action],
        "reference_index": (q.reference_index + 1) if q.reference_index is not None else None,
        "note": q.note,
    }


def sym_dict(s) -> dict:
    return {
        "blocks": [list(b) for b in s.blocks],
        "sizes": list(s.sizes),
        "pretty": s.pretty(),
        "order": s.order(),
    }


def canonical_dict(G) -> Optional[dict]:
    if G is None:
        return None
    branches = []
    for b in G.branches:
        entry = {
            "sigma": _sigma_str(b.sigma),
            "feasible": b.feasible,
            "kill_reason": b.kill_reason,
        }
        if b.solutions is not None:
            entry["structure"] = type_dict(b.solutions.structure)
            entry["consistent"] = b.solutions.consistent
            entry["coset_note"] = b.solutions.coset_note
            entry["equations"] = [
                {"exponents": list(row), "target": str(t)}
                for row, t in zip(b.solutions.exponents, b.solutions.targets)
            ]
        branches.append(entry)
    elements = None
    if G.elements is not None:
        elements = []
        for i, (sigma, t) in enumerate(G.elements):
            elements.append(
                {
                    "id": f"e{i}",
                    "sigma": _sigma_str(sigma),
                    "scalars": [scalar_json(x) for x in t],
                    "signature": f"({_sigma_str(sigma)}; "
                    + ", ".join(scalar_str(x) for x in t)
                    + ")",
                }
            )
    return {
        "summary": G.summary,
        "order": G.order,
        "is_trivial": G.is_trivial,
        "splits_note": G.splits_note,
        "branches": branches,
        "elements": elements,
    }


def finite_part_dict(fp) -> Optional[dict]:
    if fp is None:
        return None
    return {
        "order": fp.order,
        "abelian": fp.abelian,
        "abelian_invariants": list(fp.invariant_factors),
        "splits_note": fp.splits_note,
        "elements": [fp.element_signature(i) for i in range(fp.order)],
    }


def _exp_family_images(spec: VarietySpec) -> Optional[dict]:
    if spec.x_role is None:
        return None
    h = MultiPoly.variable(spec.vars + ("h",), "h")
    gm = exp_replica(spec, h)
    return {name: poly_str(gm.images[name]) for name in spec.vars}


def sample_generator_maps(report: AutReport) -> list:
    """Concrete automorphisms witnessing every listed generator family."""
    spec = report.spec
    maps = []
    ctx = spec.vars
    m = spec.m

    def diag_map(scal):
        images = {}
        for i in range(m):
            images[f"y{i+1}"] = MultiPoly.variable(ctx, f"y{i+1}") * scal[i]
        images["z"] = MultiPoly.variable(ctx, "z") * scal[m]
        if spec.x_present:
            inv = Fraction(1)
            for i, k in enumerate(spec.weights):
                inv = inv * scal[i] ** k
            images["x"] = MultiPoly.variable(ctx, "x") * (scal[m] ** spec.d / inv)
        return GeneratorMap(spec, images)

    if report.regime in (REGIME_ALL_GE2, REGIME_ONE_UNIT):
        H = report.groups["H"]
        sol = solve_torus_system(
            [list(r) for r in H.subgroup.lattice], [Fraction(1)] * len(H.subgroup.lattice),
            ncols=m + 1,
        )
        for gen in sol.torsion_generators:
            maps.append(diag_map(list(gen)))
        for direction in sol.torus_directions:
            maps.append(diag_map([Fraction(2) ** w for w in direction]))
        # scaling family: the image of a generating parameter value
        aqD = report.groups["D"]
        if aqD.type.torus_rank:
            t = Fraction(3)
            scal = [Fraction(1)] * (m + 1)
            for name, e in aqD.action:
                idx = m if name == "z" else int(name[1:]) - 1
                scal[idx] = t**e
            maps.append(diag_map(scal))
        elif aqD.type.invariant_factors:
            order = aqD.type.invariant_factors[-1]
            w = zeta(order)
            scal = [Fraction(1)] * (m + 1)
            for name, e in aqD.action:
                idx = m if name == "z" else int(name[1:]) - 1
                scal[idx] = canonical_scalar(w**e)
            maps.append(diag_map(scal))
        S = report.groups["S"]
        for block in S.blocks:
            if len(block) > 1:
                i, j = block[0], block[1]
                images = {
                    name: MultiPoly.variable(ctx, name) for name in ctx
                }
                images[f"y{i}"] = MultiPoly.variable(ctx, f"y{j}")
                images[f"y{j}"] = MultiPoly.variable(ctx, f"y{i}")
                maps.append(GeneratorMap(spec, images))
        if report.special_family:
            a, b = Fraction(5, 4), Fraction(3, 4)
            y, z = MultiPoly.variable(ctx, "y1"), MultiPoly.variable(ctx, "z")
            maps.append(
                GeneratorMap(
                    spec,
                    {"y1": y * a + z * b, "z": y * b + z * a},
                    {"y1": y * a - z * b, "z": y * (-b) + z * a},
                )
            )
    if report.regime == REGIME_ONE_UNIT:
        h = MultiPoly.variable(ctx, spec.yvars[1 if spec.unit_index == 0 else 0])
        maps.append(exp_replica(spec, h))
    if report.regime == REGIME_DANIELEWSKI:
        for sigma, t in (report.canonical.elements or []):
            maps.append(group_element_map(spec, sigma, t))
        h = MultiPoly.variable(ctx, "y1")
        maps.append(exp_replica(spec, h))
        maps.append(exp_replica(spec, MultiPoly.const(ctx, Fraction(1))))
    return maps


def spec_to_dict(spec: VarietySpec) -> dict:
    """Presentation-file form of a spec (round-trips through the parser)."""
    terms = []
    for exps, c in spec.P().sorted_terms():
        ye = [0] * spec.m
        for i in range(spec.m):
            ye[i] = exps[spec.vars.index(f"y{i+1}")]
        terms.append(
            {
                "y_exponents": ye,
                "z_exponent": exps[spec.vars.index("z")],
                "coeff": str(Fraction(c)),
            }
        )
    return {
        "weights": list(spec.weights),
        "x_present": spec.x_present,
        "P": terms,
    }


def degenerate_report(raw: VarietySpec, spec: VarietySpec) -> dict:
    """Report for presentations isomorphic to an affine line.

    These sit outside the structure theorems; the automorphism group is the
    full affine group of the line and is reported as such, flagged.
    """
    return {
        "schema": "danaut-report-v1",
        "regime": spec.regime,
        "regime_note": spec.regime_note,
        "equation": raw.equation_str(),
        "normalized_equation": spec.equation_str(),
        "normalization_shift": poly_str(spec.shift) if spec.shift is not None else None,
        "invariants": {
            "irreducible": True,
            "reducibility_witness": None,
            "rigid": False,
            "rigidity_reason": "the variety is an affine line",
            "genus": 0 if spec.m <= 1 else None,
            "ml_generators": [],
        },
        "groups": {k: None for k in (
            "H", "T", "D", "Dbar", "Dhat", "S", "G", "H_cap_Dbar",
            "structure_lattice_exact")},
        "structure": {"leaf": "affine-line-group"},
        "structure_pretty": "K^x |x K (the affine group of the line)",
        "verdicts": {"commutative": False, "torus": False, "solvable": "yes"},
        "generators": [
            {"kind": "affine-line", "images": "z -> a*z + b, a nonzero"}
        ],
        "citations": [],
        "warnings": [
            "degenerate presentation: the variety is an affine line; the "
            "structure theorems do not apply and the automorphism group is "
            "the affine group of the line"
        ],
    }


def build_report(raw: VarietySpec, spec: VarietySpec, aut: AutReport) -> dict:
    """Full analysis report for a classified, normalized presentation."""
    warnings = list(aut.warnings)
    inv: dict = {"ml_generators": list(ml_invariant(spec))}
    irr = irreducibility(spec)
    inv["irreducible"] = not irr.reducible
    inv["reducibility_witness"] = (
        {"l": irr.l, "Q": poly_str(irr.Q)} if irr.reducible else None
    )
    inv["genus"] = None
    if spec.regime == REGIME_ALL_GE2:
        rig = rigidity(spec)
        inv["rigid"] = rig.rigid
        inv["rigidity_reason"] = rig.reason
        if spec.m == 1 and not irr.reducible:
            from .poly import from_univar, derivative, univar_gcd

            P = from_univar(("z",), "z", spec.P_univar_coeffs())
            if univar_gcd(P, derivative(P, "z"), "z").total_degree() == 0:
                inv["genus"] = genus_formula(spec.weights[0], spec.d)
    else:
        inv["rigid"] = False
        inv["rigidity_reason"] = "the canonical derivation is a nonzero locally nilpotent derivation"

    groups: dict = {}
    for key in ("H", "T", "D", "Dbar", "Dhat"):
        q = aut.groups.get(key)
        groups[key] = quasitorus_dict(q)
    groups["S"] = sym_dict(aut.groups["S"]) if "S" in aut.groups else None
    groups["G"] = canonical_dict(aut.canonical)
    inter = aut.groups.get("H_cap_Dbar")
    groups["H_cap_Dbar"] = type_dict(inter) if inter is not None else None
    if aut.quotient is not None:
        groups["structure_lattice_exact"] = type_dict(aut.quotient.lattice_exact)
    else:
        groups["structure_lattice_exact"] = None

    generators: list = []
    if aut.regime in (REGIME_ALL_GE2, REGIME_ONE_UNIT):
        generators.append(
            {
                "kind": "weight-monomial-stabilizer",
                "type": type_dict(aut.groups["H"].type),
            }
        )
        generators.append(
            {
                "kind": "scaling-family",
                "type": type_dict(aut.groups["Dbar"].type),
                "action": [[n, e] for n, e in aut.groups["Dbar"].action],
            }
        )
        S = aut.groups["S"]
        if not S.is_trivial():
            generators.append({"kind": "permutations", "sym": sym_dict(S)})
        if aut.special_family:
            generators.append({"kind": "special-family", "relation": "a^2-b^2=1"})
    if aut.regime in (REGIME_ONE_UNIT, REGIME_DANIELEWSKI):
        der = canonical_lnd(spec)
        generators.append(
            {
                "kind": "exponential-family",
                "derivation": {
                    name: poly_str(g) for name, g in der.images.items() if not g.is_zero()
                },
                "images": _exp_family_images(spec),
            }
        )
    if aut.canonical is not None and aut.canonical.elements is not None:
        for i, (sigma, t) in enumerate(aut.canonical.elements):
            generators.append(
                {
                    "kind": "canonical-element",
                    "id": f"e{i}",
                    "sigma": _sigma_str(sigma),
                    "scalars": [scalar_json(x) for x in t],
                }
            )

    return {
        "schema": "danaut-report-v1",
        "regime": spec.regime,
        "regime_note": spec.regime_note,
        "equation": raw.equation_str(),
        "normalized_equation": spec.equation_str(),
        "normalization_shift": poly_str(spec.shift) if spec.shift is not None else None,
        "invariants": inv,
        "groups": groups,
        "structure": aut.structure,
        "structure_pretty": aut.structure_pretty,
        "verdicts": {
            "commutative": aut.verdicts.commutative,
            "torus": aut.verdicts.torus,
            "solvable": aut.verdicts.solvable,
        },
        "generators": generators,
        "citations": aut.citations,
        "warnings": warnings,
    }
