"""Variety presentations and their geometric invariants.

A presentation is x*y1^k1*...*ym^km = P(y,z) (or without x for plain
suspensions over a line), P monic in z of degree d >= 2.  This module
classifies presentations into regimes, normalizes the z^(d-1) coefficient
away, and computes irreducibility, rigidity, genus, the stabilizer
quasitorus of the weight monomial, the scaling quasitorus of P, the
permutation symmetries, and the intersection of all derivation kernels.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd
from typing import Optional

from .cyclotomic import zeta
from .lattice import DiagGroupType, DiagSubgroup
from .poly import (
    MultiPoly,
    as_univar,
    derivative,
    from_univar,
    perfect_power_root,
    reduce_by_rule,
    substitute,
    univar_gcd,
)

REGIME_ALL_GE2 = "LineSuspensionAllGe2"
REGIME_ONE_UNIT = "LineSuspensionOneUnit"
REGIME_DANIELEWSKI = "Danielewski"
REGIME_DEGENERATE = "Degenerate"
REGIME_UNSUPPORTED = "Unsupported"


class SpecError(ValueError):
    """Invalid presentation (violated invariant named in the message)."""


@dataclass(frozen=True)
class VarietySpec:
    """A classified presentation.

    weights are the y-exponents k_1..k_m; s[i] is the coefficient of z^i in
    P (a polynomial in the y variables, constant in suspension regimes);
    shift records the substitution z -> z - shift applied by normalize, so
    automorphisms can be pulled back to the original coordinates.
    """

    m: int
    weights: tuple
    d: int
    x_present: bool
    s: tuple
    regime: str
    regime_note: str = ""
    unit_index: Optional[int] = None
    shift: Optional[MultiPoly] = None

    @property
    def vars(self) -> tuple:
        ys = tuple(f"y{i+1}" for i in range(self.m))
        return (("x",) if self.x_present else ()) + ys + ("z",)

    @property
    def yvars(self) -> tuple:
        return tuple(f"y{i+1}" for i in range(self.m))

    @property
    def x_role(self) -> Optional[str]:
        """The unit-weight variable carrying the canonical derivation."""
        if self.x_present:
            return "x"
        if self.unit_index is not None:
            return f"y{self.unit_index+1}"
        return None

    def weight_monomial(self) -> MultiPoly:
        powers = {f"y{i+1}": k for i, k in enumerate(self.weights)}
        return MultiPoly.monomial(self.vars, powers, 1)

    def kernel_monomial(self) -> MultiPoly:
        """The image of z under the canonical derivation: the y-part of the lead monomial."""
        powers = {f"y{i+1}": k for i, k in enumerate(self.weights)}
        if not self.x_present and self.unit_index is not None:
            powers.pop(f"y{self.unit_index+1}")
        return MultiPoly.monomial(self.vars, powers, 1)

    def P(self) -> MultiPoly:
        z = MultiPoly.variable(self.vars, "z")
        result = z**self.d
        for i, si in enumerate(self.s):
            if not si.is_zero():
                result = result + si.embed(self.vars) * z**i
        return result

    def P_univar_coeffs(self) -> list:
        """Dense rational coefficients of P; requires constant s_i."""
        coeffs = []
        for si in self.s:
            if not si.is_constant():
                raise SpecError("P depends on y; univariate form unavailable")
            coeffs.append(si.constant_term())
        coeffs.append(Fraction(1))
        return coeffs

    def lead_monomial(self) -> MultiPoly:
        lead = self.weight_monomial()
        if self.x_present:
            lead = lead * MultiPoly.variable(self.vars, "x")
        return lead

    def defining_polynomial(self) -> MultiPoly:
        return self.lead_monomial() - self.P()

    def is_normalized(self) -> bool:
        return self.d < 1 or self.s[self.d - 1].is_zero()

    def equation_str(self) -> str:
        from .poly import poly_str

        return f"{poly_str(self.lead_monomial())} = {poly_str(self.P())}"


def _extract_s(P: MultiPoly, m: int, vars: tuple) -> tuple:
    """Split P into coefficients of powers of z; validates monicity in z."""
    zi = P.vars.index("z")
    d = P.degree_in("z")
    if d < 0:
        raise SpecError("P must be nonzero")
    buckets: list = [dict() for _ in range(d + 1)]
    for exps, c in P.terms.items():
        rest = list(exps)
        e = rest[zi]
        rest[zi] = 0
        buckets[e][tuple(rest)] = c
    top = MultiPoly(P.vars, buckets[d])
    if not (top.is_constant() and top.constant_term() == 1):
        raise SpecError(
            "P must be monic in z (leading z-term with coefficient 1 and no y part)"
        )
    s = []
    for i in range(d):
        s.append(MultiPoly(P.vars, buckets[i]).embed(vars))
    return tuple(s), d


def make_variety(weights, x_present: bool, P: MultiPoly) -> VarietySpec:
    """Build and classify a presentation from weights and the polynomial P."""
    weights = tuple(int(k) for k in weights)
    if any(k < 1 for k in weights):
        raise SpecError("weights must be positive integers")
    m = len(weights)
    ys = tuple(f"y{i+1}" for i in range(m))
    vars = (("x",) if x_present else ()) + ys + ("z",)
    for name in P.vars:
        if P.depends_on(name) and name not in vars:
            raise SpecError(f"P uses unknown variable {name!r}")
    if "x" in P.vars and P.depends_on("x"):
        raise SpecError("P must not involve x")
    P = P.embed(vars)
    s, d = _extract_s(P, m, vars)
    regime, note, unit_index = _classify(weights, x_present, d, s, m)
    return VarietySpec(
        m=m,
        weights=weights,
        d=d,
        x_present=x_present,
        s=s,
        regime=regime,
        regime_note=note,
        unit_index=unit_index,
    )


def _classify(weights, x_present, d, s, m):
    units = [i for i, k in enumerate(weights) if k == 1]
    if d < 2:
        return REGIME_UNSUPPORTED, "z-degree must be at least 2", None
    if x_present and units:
        return (
            REGIME_UNSUPPORTED,
            "two unit weights: outside the structure theorems",
            None,
        )
    if not x_present and len(units) >= 2:
        return (
            REGIME_UNSUPPORTED,
            "two unit weights: outside the structure theorems",
            None,
        )
    if m == 0:
        return REGIME_DEGENERATE, "no y variables: the variety is an affine line", None
    constant_s = all(si.is_constant() for si in s)
    if x_present:
        return REGIME_DANIELEWSKI, "", None
    if not constant_s:
        return (
            REGIME_UNSUPPORTED,
            "coefficients depend on y but no x variable is present; "
            "present the variety in x-form",
            None,
        )
    if not units:
        return REGIME_ALL_GE2, "", None
    # exactly one unit weight
    if m == 1:
        return (
            REGIME_DEGENERATE,
            "single unit weight with m=1: the variety is an affine line",
            units[0],
        )
    return REGIME_ONE_UNIT, "", units[0]


def normalize(spec: VarietySpec) -> VarietySpec:
    """Shift z by s_{d-1}/d so the z^(d-1) coefficient vanishes (idempotent)."""
    if spec.is_normalized():
        return spec
    b = spec.s[spec.d - 1] * Fraction(1, spec.d)
    images = {name: MultiPoly.variable(spec.vars, name) for name in spec.vars}
    images["z"] = MultiPoly.variable(spec.vars, "z") - b.embed(spec.vars)
    newP = substitute(spec.P(), images)
    s, d = _extract_s(newP, spec.m, spec.vars)
    regime, note, unit_index = _classify(spec.weights, spec.x_present, d, s, spec.m)
    return replace(
        spec,
        s=s,
        d=d,
        regime=regime,
        regime_note=note,
        unit_index=unit_index,
        shift=b.embed(spec.vars),
    )


def normal_form(f: MultiPoly, spec: VarietySpec) -> MultiPoly:
    """Unique representative modulo the defining relation.

    Rewrites every monomial divisible by the lead monomial (x times the
    weight monomial) by the corresponding multiple of P; requires a regime
    carrying a unit-weight variable so the rule terminates on its degree.
    """
    x_role = spec.x_role
    if x_role is None:
        raise SpecError("normal form needs a regime with a unit-weight variable")
    ctx = f.vars
    for name in spec.vars:
        if name not in ctx:
            raise ValueError(f"polynomial context is missing variable {name!r}")
    lead = [0] * len(ctx)
    for i, k in enumerate(spec.weights):
        lead[ctx.index(f"y{i+1}")] = k
    if spec.x_present:
        lead[ctx.index("x")] = 1
    return reduce_by_rule(f, tuple(lead), spec.P().embed(ctx))


def ideal_member(f: MultiPoly, spec: VarietySpec) -> bool:
    """Whether f lies in the principal ideal of the defining polynomial."""
    if spec.x_role is not None:
        return normal_form(f, spec).is_zero()
    # no unit variable: divide by the relation using its z^d lead term
    ctx = f.vars
    lead = [0] * len(ctx)
    lead[ctx.index("z")] = spec.d
    z = MultiPoly.variable(ctx, "z")
    replacement = spec.weight_monomial().embed(ctx) - (
        spec.P().embed(ctx) - z**spec.d
    )
    return reduce_by_rule(f, tuple(lead), replacement).is_zero()


# -- irreducibility -----------------------------------------------------------


@dataclass(frozen=True)
class Irreducibility:
    reducible: bool
    l: Optional[int] = None
    Q: Optional[MultiPoly] = None
    note: str = ""


def irreducibility(spec: VarietySpec) -> Irreducibility:
    """Reducibility witness (maximal l with l | all k_i and P = Q^l), if any."""
    if spec.regime == REGIME_DANIELEWSKI:
        return Irreducibility(False, note="unit-weight presentations are irreducible")
    g = gcd(*spec.weights) if spec.m > 1 else spec.weights[0]
    if g <= 1:
        return Irreducibility(False, note="weight gcd is 1")
    coeffs = spec.P_univar_coeffs()
    P = from_univar(("z",), "z", coeffs)
    for l in sorted((l for l in range(2, g + 1) if g % l == 0), reverse=True):
        if spec.d % l != 0:
            continue
        Q = perfect_power_root(P, l)
        if Q is not None:
            return Irreducibility(True, l=l, Q=Q)
    return Irreducibility(False, note="P is not a perfect power matching the weights")


def reconstruct_reducible_product(spec: VarietySpec, l: int, Q: MultiPoly) -> MultiPoly:
    """Product over all l-th roots of unity of (W - eps*Q), W = prod y^(k/l).

    Used as the exactness oracle for reducibility verdicts: the product must
    reproduce the defining polynomial.
    """
    vars = spec.vars
    W = MultiPoly.monomial(
        vars, {f"y{i+1}": k // l for i, k in enumerate(spec.weights)}, 1
    )
    Qv = Q.embed(vars)
    result = MultiPoly.const(vars, 1)
    for j in range(l):
        eps = zeta(l, j)
        result = result * (W - Qv * eps)
    return result


# -- rigidity and genus -------------------------------------------------------


@dataclass(frozen=True)
class Rigidity:
    rigid: bool
    reason: str


def rigidity(spec: VarietySpec) -> Rigidity:
    """Rigidity verdict for suspensions with all weights >= 2."""
    if spec.regime != REGIME_ALL_GE2:
        raise SpecError(
            "rigidity applies to suspensions with all weights >= 2; "
            "a unit-weight presentation carries the canonical derivation"
        )
    if spec.m >= 2:
        return Rigidity(True, "all weights are at least 2")
    irr = irreducibility(spec)
    if irr.reducible:
        return Rigidity(True, "reducible curve")
    coeffs = spec.P_univar_coeffs()
    P = from_univar(("z",), "z", coeffs)
    if not _is_squarefree(P):
        return Rigidity(True, "singular curve: P has a multiple root")
    k = spec.weights[0]
    if (k, spec.d) == (2, 2):
        return Rigidity(True, "smooth curve isomorphic to the punctured line")
    g = genus_formula(k, spec.d)
    return Rigidity(True, f"curve of positive genus {g}")


def _is_squarefree(P: MultiPoly) -> bool:
    g = univar_gcd(P, derivative(P, "z"), "z")
    return g.total_degree() == 0


def genus_formula(k: int, d: int) -> int:
    """Genus of the smooth model of y^k = P(z), deg P = d, P squarefree."""
    num = (d - 1) * (k - 1) + 1 - gcd(k, d)
    if num % 2 != 0:
        raise AssertionError("genus formula produced a non-integer")
    return num // 2


def genus(k: int, P: MultiPoly) -> int:
    """Exact genus of V(y^k - P(z)); P must be squarefree and the pair irreducible."""
    if k < 2:
        raise ValueError("need k >= 2")
    coeffs = as_univar(P, "z")
    d = len(coeffs) - 1
    if d < 2:
        raise ValueError("need deg P >= 2")
    if not _is_squarefree(P):
        raise ValueError("P has a multiple root")
    if coeffs[-1] == 1:
        for l in range(2, k + 1):
            if k % l == 0 and d % l == 0 and perfect_power_root(P, l) is not None:
                raise ValueError("reducible pairing: P is an l-th power with l | k")
    return genus_formula(k, d)


# -- quasitori and permutation symmetries -------------------------------------


@dataclass(frozen=True)
class QuasitorusData:
    """One of the diagonal symmetry groups, with its acting characters.

    The ambient torus scales the coordinates (y1..ym, z); action lists the
    exponent of the acting parameter on each coordinate.  For the scaling
    family of P the reported type follows the tabulated classification,
    while effective_type is the honest image in the automorphism group
    (the two can differ; downstream structure uses the image subgroup).
    """

    which: str
    type: DiagGroupType
    action: tuple
    reference_index: Optional[int] = None
    subgroup: Optional[DiagSubgroup] = None
    effective_type: Optional[DiagGroupType] = None
    note: str = ""


def proper_quasitorus(spec: VarietySpec) -> QuasitorusData:
    """Stabilizer of the weight monomial in the diagonal torus, fixing z."""
    if spec.m == 0:
        raise SpecError("no y variables")
    n = spec.m + 1
    chars = [list(spec.weights) + [0], [0] * spec.m + [1]]
    sub = DiagSubgroup.from_defining_characters(n, chars)
    g = gcd(*spec.weights) if spec.m > 1 else spec.weights[0]
    typ = DiagGroupType(spec.m - 1, (g,) if g > 1 else ())
    assert sub.group_type() == typ
    which = "H" if typ.invariant_factors else "T"
    return QuasitorusData(
        which="H",
        type=typ,
        action=tuple((f"y{i+1}", 1) for i in range(spec.m)),
        subgroup=sub,
        effective_type=typ,
        note="connected: equals the proper torus" if which == "T" else "",
    )


@dataclass(frozen=True)
class AdditionalQuasitorus:
    u: Optional[int]
    v: Optional[int]  # None when P is a pure power of z
    pure_power: bool
    D: QuasitorusData
    Dbar: QuasitorusData
    Dhat: QuasitorusData


def additional_quasitorus(spec: VarietySpec) -> AdditionalQuasitorus:
    """Scaling symmetries of P under z -> t^k1 z, y_ref -> t^d y_ref.

    u is the multiplicity of the zero root and v the maximal integer with
    P = z^u Q(z^v); reports the tabulated types (Z_{v k1}, Z_{lcm(k1,v)},
    Z_v, or three copies of K^x for P = z^d) alongside the effective image.
    """
    if spec.regime == REGIME_DANIELEWSKI:
        raise SpecError(
            "the scaling family is superseded by the canonical group in the "
            "unit-weight regime"
        )
    if spec.regime not in (REGIME_ALL_GE2, REGIME_ONE_UNIT):
        raise SpecError("additional quasitorus needs a suspension regime")
    if not spec.is_normalized():
        raise SpecError("normalize the presentation first")
    ref = spec.unit_index if spec.regime == REGIME_ONE_UNIT else 0
    k_ref = spec.weights[ref]
    coeffs = spec.P_univar_coeffs()
    support = [e for e, c in enumerate(coeffs) if c != 0]
    u = min(support)
    n = spec.m + 1
    weight_vec = [0] * n
    weight_vec[ref] = spec.d
    weight_vec[spec.m] = k_ref
    action = ((f"y{ref+1}", spec.d), ("z", k_ref))

    if support == [spec.d]:
        torus = DiagGroupType(1)
        sub = DiagSubgroup.image_of_parameter(n, weight_vec, 0)

        def data(which):
            return QuasitorusData(
                which=which,
                type=torus,
                action=action,
                reference_index=ref,
                subgroup=sub,
                effective_type=sub.group_type(),
            )

        return AdditionalQuasitorus(
            u=spec.d, v=None, pure_power=True,
            D=data("D"), Dbar=data("Dbar"), Dhat=data("Dhat"),
        )

    v = 0
    for e in support:
        v = gcd(v, e - u)
    order_D = v * k_ref
    sub = DiagSubgroup.image_of_parameter(n, weight_vec, order_D)
    eff = sub.group_type()
    lcm_kv = k_ref * v // gcd(k_ref, v)
    D = QuasitorusData(
        which="D",
        type=DiagGroupType(0, (order_D,) if order_D > 1 else ()),
        action=action,
        reference_index=ref,
        subgroup=None,
        effective_type=None,
    )
    mismatch = eff != DiagGroupType(0, (lcm_kv,) if lcm_kv > 1 else ())
    Dbar = QuasitorusData(
        which="Dbar",
        type=DiagGroupType(0, (lcm_kv,) if lcm_kv > 1 else ()),
        action=action,
        reference_index=ref,
        subgroup=sub,
        effective_type=eff,
        note=(
            "tabulated type differs from the effective image; structure uses the image"
            if mismatch
            else ""
        ),
    )
    Dhat = QuasitorusData(
        which="Dhat",
        type=DiagGroupType(0, (v,) if v > 1 else ()),
        action=action,
        reference_index=ref,
    )
    return AdditionalQuasitorus(u=u, v=v, pure_power=False, D=D, Dbar=Dbar, Dhat=Dhat)


@dataclass(frozen=True)
class SymGroupData:
    """Permutations of y variables preserving the weights, by blocks."""

    blocks: tuple  # tuple of tuples of 1-based indices with equal weight
    sizes: tuple  # block sizes > 1

    def order(self) -> int:
        result = 1
        for b in self.blocks:
            for i in range(2, len(b) + 1):
                result *= i
        return result

    def is_trivial(self) -> bool:
        return self.order() == 1

    def pretty(self) -> str:
        if self.is_trivial():
            return "1"
        return " x ".join(f"S{len(b)}" for b in self.blocks if len(b) > 1)


def symmetric_group(spec: VarietySpec) -> SymGroupData:
    groups: dict = {}
    for i, k in enumerate(spec.weights):
        groups.setdefault(k, []).append(i + 1)
    blocks = tuple(tuple(v) for _, v in sorted(groups.items()))
    sizes = tuple(len(b) for b in blocks if len(b) > 1)
    return SymGroupData(blocks=blocks, sizes=sizes)


def ml_invariant(spec: VarietySpec) -> tuple:
    """Generators of the intersection of all derivation kernels."""
    if spec.regime == REGIME_DANIELEWSKI:
        return spec.yvars
    if spec.regime == REGIME_ONE_UNIT:
        return tuple(y for i, y in enumerate(spec.yvars) if i != spec.unit_index)
    if spec.regime == REGIME_ALL_GE2:
        return spec.yvars + ("z",)
    if spec.regime == REGIME_DEGENERATE:
        return ()
    raise SpecError("unsupported regime")
