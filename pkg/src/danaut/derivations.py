"""Derivations of the coordinate ring, given by generator images.

Everything is exact: applying a derivation runs the Leibniz rule monomial
by monomial and reduces to normal form; exponentials of kernel multiples of
the canonical derivation are finite Taylor sums with exact 1/k! factors.
Extra variables beyond the presentation's own (for a formal kernel
parameter h) are treated as kernel constants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Optional

from .poly import MultiPoly, derivative, substitute
from .varieties import (
    REGIME_DANIELEWSKI,
    REGIME_ONE_UNIT,
    SpecError,
    VarietySpec,
    ideal_member,
    normal_form,
)


@dataclass
class Derivation:
    """A derivation of the quotient ring, by images of the coordinates.

    Well-definedness (the image of the defining polynomial reduces to zero)
    is checked eagerly at construction.
    """

    spec: VarietySpec
    images: dict

    def __post_init__(self):
        for name in self.images:
            if name not in self.spec.vars:
                raise ValueError(f"image given for unknown generator {name!r}")
        imgs = {}
        for name in self.spec.vars:
            g = self.images.get(name)
            if g is None:
                g = MultiPoly.zero(self.spec.vars)
            imgs[name] = normal_form(g.embed(self.spec.vars), self.spec)
        self.images = imgs
        check = apply_derivation(self, self.spec.defining_polynomial(), reduce=False)
        if not normal_form(check, self.spec).is_zero():
            raise ValueError(
                "derivation does not annihilate the defining relation modulo the ideal"
            )

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.images.values())

    def scaled(self, h: MultiPoly) -> "Derivation":
        return Derivation(
            self.spec, {v: h.embed(self.spec.vars) * g for v, g in self.images.items()}
        )


def apply_derivation(
    der: Derivation, f: MultiPoly, reduce: bool = True
) -> MultiPoly:
    """Leibniz-rule application; variables outside the presentation map to 0."""
    ctx = f.vars
    spec = der.spec
    images = {}
    for name in ctx:
        if name in der.images:
            images[name] = der.images[name].embed(ctx)
        else:
            images[name] = MultiPoly.zero(ctx)
    result = MultiPoly.zero(ctx)
    for exps, c in f.terms.items():
        for i, e in enumerate(exps):
            if e == 0:
                continue
            img = images[ctx[i]]
            if img.is_zero():
                continue
            lowered = list(exps)
            lowered[i] = e - 1
            result = result + MultiPoly(ctx, {tuple(lowered): c * Fraction(e)}) * img
    if reduce:
        result = normal_form(result, spec)
    return result


def canonical_lnd(spec: VarietySpec) -> Derivation:
    """The distinguished locally nilpotent derivation of a unit-weight regime.

    Kills every y, sends z to the non-unit part of the weight monomial, and
    the unit-weight variable to dP/dz.
    """
    if spec.regime not in (REGIME_DANIELEWSKI, REGIME_ONE_UNIT):
        raise SpecError(
            "no canonical derivation: the regime is rigid or outside scope"
        )
    x_role = spec.x_role
    images = {
        x_role: derivative(spec.P(), "z"),
        "z": spec.kernel_monomial(),
    }
    return Derivation(spec, images)


def nilpotency_index(
    der: Derivation, f: MultiPoly, bound: int = 64
) -> int:
    """Least n with der^n(f) = 0 in the quotient; errors past the bound."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    g = normal_form(f.embed(der.spec.vars) if f.vars != der.spec.vars else f, der.spec)
    n = 0
    while not g.is_zero():
        if n >= bound:
            raise ValueError(f"derivation not nilpotent on input within bound {bound}")
        g = apply_derivation(der, g)
        n += 1
    return n


@dataclass
class GeneratorMap:
    """An algebra endomorphism by images of the coordinate generators.

    Construction checks that the defining polynomial maps into its own
    ideal, and, when an inverse is supplied, that both compositions fix
    every generator.
    """

    spec: VarietySpec
    images: dict
    inverse_images: Optional[dict] = None
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if not self.validate:
            return
        ctx = self.context()
        defining = self.spec.defining_polynomial().embed(ctx)
        if not ideal_member(substitute(defining, self.images), self.spec):
            raise ValueError("map does not preserve the defining ideal")
        if self.inverse_images is not None:
            for name in self.spec.vars:
                v = MultiPoly.variable(ctx, name)
                fwd = substitute(self.images[name], self.inverse_images)
                bwd = substitute(self.inverse_images[name], self.images)
                if not ideal_member(fwd - v, self.spec) or not ideal_member(
                    bwd - v, self.spec
                ):
                    raise ValueError("supplied inverse is not a two-sided inverse")

    def context(self) -> tuple:
        for g in self.images.values():
            return g.vars
        return self.spec.vars

    def apply_to(self, f: MultiPoly) -> MultiPoly:
        ctx = self.context()
        images = dict(self.images)
        for name in f.vars:
            if f.depends_on(name) and name not in images:
                raise ValueError(f"map has no image for variable {name!r}")
        return normal_form(substitute(f, images), self.spec)

    def compose(self, other: "GeneratorMap") -> "GeneratorMap":
        """self after other (as ring maps: v -> self(other(v)))."""
        imgs = {v: self.apply_to(g) for v, g in other.images.items()}
        inv = None
        if self.inverse_images and other.inverse_images:
            inv_other = GeneratorMap(self.spec, other.inverse_images)
            inv = {
                v: inv_other.apply_to(g) for v, g in self.inverse_images.items()
            }
        return GeneratorMap(self.spec, imgs, inv)

    def fixes_generators(self) -> bool:
        ctx = self.context()
        for name in self.spec.vars:
            if self.images[name] != MultiPoly.variable(ctx, name):
                return False
        return True


def identity_map(spec: VarietySpec, extra: tuple = ()) -> GeneratorMap:
    ctx = spec.vars + tuple(extra)
    imgs = {v: MultiPoly.variable(ctx, v) for v in ctx}
    return GeneratorMap(spec, imgs, dict(imgs))


def exp_replica(spec: VarietySpec, h: MultiPoly) -> GeneratorMap:
    """The automorphism exp(h * canonical derivation), h in the kernel.

    h may mention the presentation's y variables and any extra formal
    symbols (which are treated as kernel constants); images come with the
    exp(-h) inverse filled in.
    """
    x_role = spec.x_role
    if x_role is None:
        raise SpecError("no canonical derivation in this regime")
    banned = {x_role, "z"}
    for name in h.vars:
        if h.depends_on(name) and name in banned:
            raise ValueError(f"h must lie in the kernel; it depends on {name!r}")
    extra = tuple(n for n in h.vars if n not in spec.vars)
    ctx = spec.vars + extra
    der = canonical_lnd(spec)
    cap = spec.d + sum(spec.weights) + 8
    h = h.embed(ctx)

    def taylor(hh: MultiPoly) -> dict:
        images = {}
        for name in ctx:
            if name in extra:
                images[name] = MultiPoly.variable(ctx, name)
                continue
            total = MultiPoly.variable(ctx, name)
            term = MultiPoly.variable(ctx, name)
            k = 0
            hpow = MultiPoly.const(ctx, 1)
            while True:
                term = apply_derivation(der, term, reduce=True)
                if term.is_zero():
                    break
                k += 1
                if k > cap:
                    raise AssertionError(
                        "Taylor sum exceeded the nilpotency cap; derivation not "
                        "locally nilpotent?"
                    )
                hpow = hpow * hh
                total = total + hpow.embed(ctx) * term.embed(ctx) * Fraction(
                    1, factorial(k)
                )
            images[name] = normal_form(total, spec)
        return images

    return GeneratorMap(spec, taylor(h), taylor(-h))


def homogeneous_decompose(
    der: Derivation, weights: dict
) -> list:
    """Split a derivation into graded components for a weight grading.

    weights must grade the quotient (the defining polynomial has to be
    homogeneous); returns (degree, component) pairs with nonzero components
    summing back to the derivation.
    """
    spec = der.spec
    for name in spec.vars:
        if name not in weights:
            raise ValueError(f"missing weight for variable {name!r}")

    def mono_weight(exps) -> int:
        return sum(e * weights[name] for e, name in zip(exps, spec.vars))

    rel = spec.defining_polynomial()
    rel_weights = {mono_weight(e) for e in rel.terms}
    if len(rel_weights) > 1:
        raise ValueError("weights do not make the defining polynomial homogeneous")

    pieces: dict = {}
    for name in spec.vars:
        img = der.images[name]
        w0 = weights[name]
        for exps, c in img.terms.items():
            deg = mono_weight(exps) - w0
            pieces.setdefault(deg, {}).setdefault(name, {})[exps] = c
    out = []
    for deg in sorted(pieces):
        images = {
            name: MultiPoly(spec.vars, terms) for name, terms in pieces[deg].items()
        }
        out.append((deg, Derivation(spec, images)))
    return out


def tilde_degree(f: MultiPoly, spec: VarietySpec) -> int:
    """Nilpotency filtration degree: y's weigh 0, z weighs 1, x weighs d."""
    nf = normal_form(f, spec)
    if nf.is_zero():
        raise ValueError("the zero class has no degree (sentinel -infinity)")
    return max(_filtration_weight(e, nf.vars, spec) for e in nf.terms)


def _filtration_weight(exps, ctx, spec: VarietySpec) -> int:
    x_role = spec.x_role
    if x_role is None:
        raise SpecError("filtration degree needs the canonical derivation")
    w = 0
    for e, name in zip(exps, ctx):
        if e == 0:
            continue
        if name == x_role:
            w += e * spec.d
        elif name == "z":
            w += e
    return w


def gr_leading_form(f: MultiPoly, spec: VarietySpec) -> MultiPoly:
    """Top filtration part of f, i.e. its image in the associated graded ring."""
    nf = normal_form(f, spec)
    if nf.is_zero():
        raise ValueError("the zero class has no leading form")
    top = max(_filtration_weight(e, nf.vars, spec) for e in nf.terms)
    return MultiPoly(
        nf.vars,
        {
            e: c
            for e, c in nf.terms.items()
            if _filtration_weight(e, nf.vars, spec) == top
        },
    )
