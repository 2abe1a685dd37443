"""Canonical groups, structure assembly, verdicts, and soundness checks."""

import random
from fractions import Fraction

import pytest

from danaut import (
    DiagGroupType,
    GeneratorMap,
    SpecError,
    aut_structure,
    canonical_group,
    compose_elements,
    exp_replica,
    group_element_map,
    identity_element,
    invert_element,
    make_variety,
    normal_form,
    parse_poly,
    stabilizer_permutations,
    verify_automorphism,
)
from danaut.report import sample_generator_maps
from conftest import random_kernel_poly, variety


@pytest.fixture
def e4():
    return variety([2, 2], True, "z^3+z+y1-y2")


def scalars(*vals):
    return tuple(Fraction(v) for v in vals)


def test_stabilizer_permutations():
    spec = variety([2, 2, 3], True, "z^2+1")
    assert stabilizer_permutations(spec) == [(0, 1, 2), (1, 0, 2)]
    spec2 = variety([2, 3], True, "z^2+1")
    assert stabilizer_permutations(spec2) == [(0, 1)]


def test_canonical_group_e2_trivial():
    e2 = variety([2], True, "z^3+(y1+1)z+1")
    G = canonical_group(e2)
    assert G.finite and G.order == 1 and G.is_trivial


def test_canonical_group_e4(e4):
    G = canonical_group(e4)
    assert G.finite and G.order == 4 and not G.is_trivial
    expected = {
        ((0, 1), scalars(1, 1, 1)),
        ((0, 1), scalars(-1, -1, -1)),
        ((1, 0), scalars(-1, -1, 1)),
        ((1, 0), scalars(1, 1, -1)),
    }
    assert {(s, tuple(t)) for s, t in G.elements} == expected
    assert "does not split" in G.splits_note


def test_canonical_group_threevar():
    X = variety([2, 2, 3], True, "z^2 + y1^2*y2^3*y3^4 + y3^3 + 1")
    G = canonical_group(X)
    assert not G.finite
    feas = G.feasible_branches()
    assert [b.sigma for b in feas] == [(0, 1, 2), (1, 0, 2)]
    for b in feas:
        assert b.solutions.structure == DiagGroupType(2, (6,))


def test_canonical_group_requires_normalized():
    raw = make_variety(
        [2, 2], True, parse_poly("z^2 + z + y1", ("x", "y1", "y2", "z"))
    )
    with pytest.raises(SpecError):
        canonical_group(raw)


def test_element_composition_and_inverse(e4):
    G = canonical_group(e4)
    elems = {(s, tuple(t)) for s, t in G.elements}
    for a in G.elements:
        inv = invert_element(a, e4.m)
        assert compose_elements(a, inv, e4.m) == identity_element(e4.m)
        for b in G.elements:
            c = compose_elements(a, b, e4.m)
            assert (c[0], tuple(c[1])) in elems  # closure
            # composition of generator maps agrees with element composition
            ga = group_element_map(e4, *a)
            gb = group_element_map(e4, *b)
            gc = group_element_map(e4, *c)
            comp = ga.compose(gb)
            for name in e4.vars:
                assert comp.images[name] == gc.images[name]


def test_element_maps_verify(e4):
    G = canonical_group(e4)
    for s, t in G.elements:
        assert verify_automorphism(e4, group_element_map(e4, s, t))


def test_element_application(e4):
    G = canonical_group(e4)
    target = None
    for s, t in G.elements:
        if s == (1, 0) and t == scalars(-1, -1, 1):
            target = group_element_map(e4, s, t)
    f = parse_poly("y1-y2", e4.vars)
    # y1 -> -y2, y2 -> -y1: the difference is fixed
    assert target.apply_to(f) == f
    g = parse_poly("y1+y2", e4.vars)
    assert target.apply_to(g) == -g


def test_finite_part_e4(e4):
    rep = aut_structure(e4)
    fp = rep.finite_part
    assert fp.order == 4
    assert fp.abelian
    assert fp.invariant_factors == (2, 2)
    assert "does not split" in fp.splits_note


def test_finite_part_splitting_case():
    # s_0 = y1 + y2 is symmetric: the pure swap is in the group, so it splits
    X = variety([2, 2], True, "z^3 + z + y1 + y2")
    rep = aut_structure(X)
    fp = rep.finite_part
    assert fp.order == 4
    assert "splits" in fp.splits_note and "does not" not in fp.splits_note


def test_finite_part_cyclic_z12():
    Y = variety([4, 2], False, "z^6+1")
    rep = aut_structure(Y)
    fp = rep.finite_part
    assert fp.order == 12
    assert fp.abelian and fp.invariant_factors == (12,)


def test_aut_structure_s5_family():
    expected = {
        (0, 0): DiagGroupType(2),
        (0, 1): DiagGroupType(1, (3,)),
        (1, 0): DiagGroupType(1, (2,)),
        (1, 1): DiagGroupType(1),
    }
    for (a, b), want in expected.items():
        Y = variety([2, 3], False, f"z^4 + {a}*z^2 + {b}*z")
        rep = aut_structure(Y)
        assert rep.structure_group == want, (a, b)


def test_aut_structure_y14y22():
    Y = variety([4, 2], False, "z^6+1")
    rep = aut_structure(Y)
    assert rep.groups["H"].type == DiagGroupType(1, (2,))
    assert rep.groups["Dbar"].type == DiagGroupType(0, (12,))
    assert rep.groups["H_cap_Dbar"] == DiagGroupType(0, (2,))
    assert rep.structure_group == DiagGroupType(1, (12,))
    assert rep.structure_group != DiagGroupType(1, (2, 6))
    assert rep.quotient.lattice_exact == DiagGroupType(1, (2, 6))
    assert any("disagree" in w for w in rep.warnings)


def test_aut_structure_e4(e4):
    rep = aut_structure(e4)
    assert rep.canonical.order == 4
    assert rep.structure["op"] == "semidirect"
    assert rep.structure["args"][1]["leaf"] == "unipotent"
    assert not rep.verdicts.commutative


def test_aut_structure_one_unit():
    Y = make_variety([1, 2, 2], False, parse_poly("z^3+1", ("y1", "y2", "y3", "z")))
    rep = aut_structure(Y)
    assert rep.regime == "LineSuspensionOneUnit"
    assert rep.structure["op"] == "semidirect"  # S |x ((T x D) |x U)
    assert not rep.verdicts.commutative
    assert rep.verdicts.solvable == "yes"
    assert rep.groups["H"].type == DiagGroupType(2)  # the proper torus
    assert rep.groups["D"].type == DiagGroupType(0, (3,))


def test_aut_structure_degenerate_rejected():
    D = make_variety([1], False, parse_poly("z^2+1", ("y1", "z")))
    with pytest.raises(SpecError):
        aut_structure(D)


def test_verdict_examples():
    torus = aut_structure(variety([2, 3], False, "z^4 + z^2 + z"))
    assert torus.verdicts.torus and torus.verdicts.commutative

    five = aut_structure(variety([2] * 5, False, "z^3+1"))
    assert five.verdicts.solvable == "no"

    five_d = aut_structure(variety([2] * 5, True, "z^3 + z + y1"))
    assert five_d.verdicts.solvable == "unknown"

    e2rep = aut_structure(variety([2], True, "z^3+(y1+1)z+1"))
    assert e2rep.verdicts.commutative


def test_verdict_consistency():
    cases = [
        variety([2, 3], False, "z^4+z^2+z"),
        variety([2, 3], False, "z^4"),
        variety([2, 2], False, "z^4+2z^2+1"),
        variety([4, 2], False, "z^6+1"),
        variety([2, 2], True, "z^3+z+y1-y2"),
        variety([2], True, "z^3+(y1+1)z+1"),
        make_variety([1, 2], False, parse_poly("z^2+1", ("y1", "y2", "z"))),
    ]
    for spec in cases:
        rep = aut_structure(spec)
        if rep.verdicts.torus:
            assert rep.verdicts.commutative
        if rep.verdicts.commutative:
            assert rep.verdicts.solvable == "yes"


def test_generator_soundness_all_regimes():
    """Every emitted generator family has a verified concrete witness."""
    for spec in [
        variety([2, 3], False, "z^4+z"),
        variety([4, 2], False, "z^6+1"),
        variety([2, 2, 3], False, "z^6+1"),
        variety([2], False, "z^2+1"),  # special family case
        make_variety([1, 2, 2], False, parse_poly("z^3+1", ("y1", "y2", "y3", "z"))),
        variety([2, 2], True, "z^3+z+y1-y2"),
        variety([2], True, "z^3+(y1+1)z+1"),
    ]:
        rep = aut_structure(spec)
        maps = sample_generator_maps(rep)
        assert maps, spec.regime
        for gm in maps:
            assert verify_automorphism(spec, gm), (spec.regime, gm.images)


def test_verify_rejects_non_automorphism():
    Y = variety([2, 3], False, "z^4")
    bad = GeneratorMap(
        Y,
        {
            "y1": parse_poly("2*y1", Y.vars),
            "y2": parse_poly("y2", Y.vars),
            "z": parse_poly("z", Y.vars),
        },
        validate=False,
    )
    assert not verify_automorphism(Y, bad)
    # eager construction without the opt-out rejects the same map
    with pytest.raises(ValueError):
        GeneratorMap(Y, dict(bad.images))


def test_verify_exponentials_random(e4):
    rng = random.Random(20240614)
    for _ in range(20):
        h = random_kernel_poly(rng, e4)
        assert verify_automorphism(e4, exp_replica(e4, h))


def test_conjugation_stability(e4):
    """g o u o g^-1 stays an automorphism and scales each y (normality)."""
    rng = random.Random(31)
    G = canonical_group(e4)
    gmaps = [group_element_map(e4, s, t) for s, t in G.elements]
    for _ in range(10):
        h = random_kernel_poly(rng, e4)
        u = exp_replica(e4, h)
        for g in gmaps:
            ginv = GeneratorMap(e4, g.inverse_images, g.images)
            conj = g.compose(u).compose(ginv)
            assert verify_automorphism(e4, conj)
            for name in e4.yvars:
                img = conj.images[name]
                assert len(img.terms) == 1
                (exps, _), = img.terms.items()
                assert sum(exps) == 1


def test_ideal_preservation_of_exponentials(e4):
    rng = random.Random(4)
    defining = e4.defining_polynomial()
    for _ in range(20):
        h = random_kernel_poly(rng, e4)
        gm = exp_replica(e4, h)
        from danaut import substitute

        assert normal_form(substitute(defining, gm.images), e4).is_zero()
