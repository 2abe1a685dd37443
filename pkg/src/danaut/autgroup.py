"""Automorphism-group assembly.

For unit-weight presentations the group is a semidirect product of the
canonical group (permutations and scalings stabilizing the coordinate ring,
found by solving monomial equations over a torus) with the commutative
family of exponentials of the canonical derivation.  For suspensions with
all weights >= 2 it is generated by the weight-monomial stabilizer, the
permutation symmetries, and the scaling family of P.

Branches over different permutations are independent of each other and are
evaluated (deterministically, in lexicographic order) one after another.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from .cyclotomic import CycElem, canonical_scalar, s_inv, s_mul, s_pow, zeta
from .derivations import GeneratorMap
from .lattice import (
    DiagGroupType,
    QuotientResult,
    TorusSolutionSet,
    diag_group_quotient,
    normalize_invariant_factors,
    solve_torus_system,
)
from .poly import MultiPoly, substitute
from .varieties import (
    REGIME_ALL_GE2,
    REGIME_DANIELEWSKI,
    REGIME_DEGENERATE,
    REGIME_ONE_UNIT,
    AdditionalQuasitorus,
    SpecError,
    VarietySpec,
    additional_quasitorus,
    ideal_member,
    ml_invariant,
    normal_form,
    proper_quasitorus,
    symmetric_group,
)

MAX_TABLE_ORDER = 512
MAX_PERMUTATIONS = 5040


# -- canonical group elements --------------------------------------------------


def stabilizer_permutations(spec: VarietySpec) -> list:
    """All permutations of the y indices preserving the weights (0-based maps)."""
    blocks: dict = {}
    for i, k in enumerate(spec.weights):
        blocks.setdefault(k, []).append(i)
    count = 1
    for members in blocks.values():
        for i in range(2, len(members) + 1):
            count *= i
    if count > MAX_PERMUTATIONS:
        raise SpecError(f"permutation stabilizer too large to enumerate ({count})")
    per_block = []
    for _, members in sorted(blocks.items()):
        per_block.append([list(p) for p in itertools.permutations(members)])
    sigmas = []
    for combo in itertools.product(*per_block):
        sigma = [0] * spec.m
        for (_, members), perm in zip(sorted(blocks.items()), combo):
            for src, dst in zip(members, perm):
                sigma[src] = dst
        sigmas.append(tuple(sigma))
    sigmas.sort()
    return sigmas


def compose_elements(g, gp, m: int):
    """(sigma, t) * (sigma', t'): the map of g applied after the map of gp."""
    sig, t = g
    sigp, tp = gp
    sig2 = tuple(sig[sigp[i]] for i in range(m))
    t2 = tuple(canonical_scalar(s_mul(tp[i], t[sigp[i]])) for i in range(m))
    tau2 = canonical_scalar(s_mul(t[m], tp[m]))
    return (sig2, t2 + (tau2,))


def invert_element(g, m: int):
    sig, t = g
    inv = [0] * m
    for i, s in enumerate(sig):
        inv[s] = i
    u = tuple(canonical_scalar(s_inv(t[inv[i]])) for i in range(m))
    return (tuple(inv), u + (canonical_scalar(s_inv(t[m])),))


def identity_element(m: int):
    return (tuple(range(m)), tuple([Fraction(1)] * (m + 1)))


def _divide_by_monomial(f: MultiPoly, exps) -> MultiPoly:
    out = {}
    for e, c in f.terms.items():
        q = tuple(a - b for a, b in zip(e, exps))
        if any(x < 0 for x in q):
            raise AssertionError("polynomial not divisible by the weight monomial")
        out[q] = c
    return MultiPoly(f.vars, out)


def _element_images(spec: VarietySpec, sigma, scalars) -> dict:
    """Generator images of a canonical-group element.

    y_i maps to t_i*y_{sigma(i)}, z to tau*z, and x picks up the pure
    scaling tau^d / prod t^k plus corrections from coefficient monomials
    divisible by the weight monomial.
    """
    m = spec.m
    ctx = spec.vars
    tau = scalars[m]
    images = {}
    for i in range(m):
        images[f"y{i+1}"] = MultiPoly.variable(ctx, f"y{sigma[i]+1}") * scalars[i]
    images["z"] = MultiPoly.variable(ctx, "z") * tau
    prod_tk = Fraction(1)
    for i, k in enumerate(spec.weights):
        prod_tk = s_mul(prod_tk, s_pow(scalars[i], k))
    inv_ptk = s_inv(prod_tk)
    ximg = MultiPoly.variable(ctx, "x") * s_mul(s_pow(tau, spec.d), inv_ptk)
    Mexps = [0] * len(ctx)
    for i, k in enumerate(spec.weights):
        Mexps[ctx.index(f"y{i+1}")] = k
    z = MultiPoly.variable(ctx, "z")
    for i, si in enumerate(spec.s):
        if si.is_zero():
            continue
        sub_imgs = {
            f"y{j+1}": MultiPoly.variable(ctx, f"y{sigma[j]+1}") * scalars[j]
            for j in range(m)
        }
        transformed = substitute(si.embed(ctx), sub_imgs)
        delta = transformed - si.embed(ctx) * s_pow(tau, spec.d - i)
        if delta.is_zero():
            continue
        R = _divide_by_monomial(delta, tuple(Mexps))
        ximg = ximg + R * z**i * s_mul(s_pow(tau, i), inv_ptk)
    images["x"] = ximg
    return images


def group_element_map(spec: VarietySpec, sigma, scalars) -> GeneratorMap:
    """Concrete generator map of a canonical-group element, inverse included."""
    if spec.regime != REGIME_DANIELEWSKI:
        raise SpecError("canonical-group elements need the unit-weight regime")
    inv_sigma, inv_scalars = invert_element((sigma, scalars), spec.m)
    return GeneratorMap(
        spec,
        _element_images(spec, sigma, scalars),
        _element_images(spec, inv_sigma, inv_scalars),
    )


# -- canonical group (constraint solving) --------------------------------------


@dataclass
class Branch:
    sigma: tuple
    feasible: bool
    kill_reason: str = ""
    solutions: Optional[TorusSolutionSet] = None


@dataclass
class CanonicalGroup:
    """Solution of the stabilizer constraints, branch by permutation."""

    spec: VarietySpec
    branches: list
    finite: bool
    order: Optional[int]
    elements: Optional[list]  # (sigma, scalars) pairs when finite and small
    is_trivial: bool
    splits_note: str
    summary: str

    def feasible_branches(self) -> list:
        return [b for b in self.branches if b.feasible]

    def element_maps(self) -> list:
        if self.elements is None:
            return []
        return [group_element_map(self.spec, s, t) for s, t in self.elements]


def _branch_constraints(spec: VarietySpec, sigma):
    """Rows, targets, and a kill reason (if a zero pairs with a nonzero)."""
    m = spec.m
    rows, targets = [], []
    yidx = [spec.vars.index(f"y{i+1}") for i in range(m)]
    for i, si in enumerate(spec.s):
        supp = {}
        for exps, c in si.terms.items():
            key = tuple(exps[j] for j in yidx)
            if not isinstance(c, Fraction):
                raise SpecError("constraint extraction needs rational coefficients")
            supp[key] = c
        candidates = set(supp)
        for b in supp:
            e = tuple(b[sigma.index(p)] for p in range(m))
            candidates.add(e)
        for e in sorted(candidates):
            if all(a >= k for a, k in zip(e, spec.weights)):
                continue  # divisible by the weight monomial: no condition
            b = tuple(e[sigma[j]] for j in range(m))
            c_src = supp.get(b, Fraction(0))
            c_dst = supp.get(e, Fraction(0))
            if c_src == 0 and c_dst == 0:
                continue
            if c_src == 0 or c_dst == 0:
                return (
                    None,
                    None,
                    f"coefficient of y^{e} pairs zero with nonzero in s_{i}",
                )
            row = [0] * (m + 1)
            for j in range(m):
                row[j] += e[sigma[j]]
            row[m] = -(spec.d - i)
            rows.append(row)
            targets.append(c_dst / c_src)
    return rows, targets, ""


def canonical_group(spec: VarietySpec, enum_order_bound: int = 360) -> CanonicalGroup:
    """Permutation-and-scaling stabilizer of the coordinate ring."""
    if spec.regime != REGIME_DANIELEWSKI:
        raise SpecError("canonical group requires the unit-weight regime")
    if not spec.is_normalized():
        raise SpecError("normalize the presentation before the canonical group")
    m = spec.m
    branches = []
    for sigma in stabilizer_permutations(spec):
        rows, targets, reason = _branch_constraints(spec, sigma)
        if rows is None:
            branches.append(Branch(sigma, False, reason))
            continue
        sol = solve_torus_system(
            rows, targets, ncols=m + 1, enum_order_bound=enum_order_bound
        )
        if not sol.consistent:
            branches.append(
                Branch(sigma, False, f"inconsistent targets: {sol.coset_note}", sol)
            )
            continue
        branches.append(Branch(sigma, True, "", sol))

    feasible = [b for b in branches if b.feasible]
    finite = all(b.solutions.structure.is_finite() for b in feasible)
    order = None
    elements = None
    if finite:
        order = sum(b.solutions.structure.order() for b in feasible)
        if order <= MAX_TABLE_ORDER:
            elements = []
            ok = True
            for b in feasible:
                sols = b.solutions.enumerate_solutions(MAX_TABLE_ORDER)
                if sols is None:
                    ok = False
                    break
                for t in sols:
                    elements.append((b.sigma, t))
            if not ok:
                elements = None

    is_trivial = bool(
        elements is not None
        and len(elements) == 1
        and elements[0] == identity_element(m)
    )
    splits_note = ""
    if elements is not None:
        splits_note = _split_note(elements, m)
    if finite:
        summary = f"finite of order {order}"
    else:
        parts = []
        for b in feasible:
            parts.append(f"{_sigma_str(b.sigma)}: {b.solutions.structure.pretty()}")
        summary = "infinite; per-branch structure: " + "; ".join(parts)
    return CanonicalGroup(
        spec=spec,
        branches=branches,
        finite=finite,
        order=order,
        elements=elements,
        is_trivial=is_trivial,
        splits_note=splits_note,
        summary=summary,
    )


def _sigma_str(sigma) -> str:
    """Cycle notation on 1-based indices."""
    seen = set()
    cycles = []
    for start in range(len(sigma)):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        nxt = sigma[start]
        while nxt != start:
            cycle.append(nxt)
            seen.add(nxt)
            nxt = sigma[nxt]
        if len(cycle) > 1:
            cycles.append("(" + ",".join(str(i + 1) for i in cycle) + ")")
    return "".join(cycles) if cycles else "id"


def _split_note(elements, m: int) -> str:
    """Whether the table decomposes as (pure permutations) x (pure scalings).

    A decomposition G = A * B with A a subgroup of pure permutations and B
    a subgroup of pure scalings exists if and only if the pure-permutation
    elements of G already realize every permutation appearing in G.
    """
    perms_in_g = {sig for sig, _ in elements}
    one = tuple([Fraction(1)] * (m + 1))
    pure_perms = {sig for sig, t in elements if t == one}
    if perms_in_g == pure_perms:
        return "splits as (permutation part) x (scaling part)"
    return (
        "does not split: no subgroup of pure permutations realizes the "
        "permutation image of the group"
    )


# -- finite part tables ---------------------------------------------------------


def _scalar_key(x, order: int):
    if isinstance(x, CycElem):
        return x.lift(order).coords
    return CycElem.from_rational(x).lift(order).coords


def _common_order(elements) -> int:
    L = 1
    for _, t in elements:
        for x in t:
            if isinstance(x, CycElem):
                L = L * x.order // gcd(L, x.order)
    return L


@dataclass
class FinitePart:
    elements: list  # (sigma, scalars)
    order: int
    abelian: bool
    invariant_factors: tuple  # abelian invariants when abelian, else ()
    splits_note: str
    table: dict  # (i, j) -> k composition indices

    def element_signature(self, idx: int) -> str:
        from .fmt import scalar_str

        sigma, t = self.elements[idx]
        return f"({_sigma_str(sigma)}; " + ", ".join(scalar_str(x) for x in t) + ")"


def finite_part_from_elements(elements, m: int, bound: int = MAX_TABLE_ORDER) -> FinitePart:
    """Close a finite element list under composition and analyze it."""
    L = _common_order(elements)
    keyed = {}
    for g in list(elements) + [identity_element(m)]:
        keyed[_element_key(g, L)] = g
    # closure
    changed = True
    while changed:
        changed = False
        current = list(keyed.values())
        if len(current) > bound:
            raise SpecError(f"finite part exceeds table bound {bound}")
        for a in current:
            for b in current:
                c = compose_elements(a, b, m)
                k = _element_key(c, L)
                if k not in keyed:
                    keyed[k] = c
                    changed = True
    elems = list(keyed.values())
    elems.sort(key=lambda g: (g[0], [_scalar_key(x, L) for x in g[1]]))
    index = {_element_key(g, L): i for i, g in enumerate(elems)}
    table = {}
    abelian = True
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            k = index[_element_key(compose_elements(a, b, m), L)]
            table[(i, j)] = k
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            if table[(i, j)] != table[(j, i)]:
                abelian = False
                break
        if not abelian:
            break
    invariants = _abelian_invariants(table, len(elems), m, elems) if abelian else ()
    return FinitePart(
        elements=elems,
        order=len(elems),
        abelian=abelian,
        invariant_factors=invariants,
        splits_note=_split_note(elems, m),
        table=table,
    )


def _element_key(g, L: int):
    sig, t = g
    return (sig, tuple(_scalar_key(x, L) for x in t))


def _abelian_invariants(table, n: int, m: int, elems) -> tuple:
    """Invariant factors of an abelian table via element-order counts."""
    ident_idx = None
    ident = identity_element(m)
    L = _common_order(elems)
    target = _element_key(ident, L)
    for i, g in enumerate(elems):
        if _element_key(g, L) == target:
            ident_idx = i
            break
    if ident_idx is None:
        raise AssertionError("identity missing from the table")

    def power(i: int, e: int) -> int:
        result = ident_idx
        base = i
        while e:
            if e & 1:
                result = table[(result, base)]
            base = table[(base, base)]
            e >>= 1
        return result

    primes = set()
    k = n
    p = 2
    while p * p <= k:
        if k % p == 0:
            primes.add(p)
            while k % p == 0:
                k //= p
        p += 1
    if k > 1:
        primes.add(k)

    # Count solutions of g^(p^j) = e; their p-logarithms determine the
    # partition of the p-part (parts >= j occur logs[j]-logs[j-1] times).
    prime_powers = []
    for p in sorted(primes):
        logs = [0]
        j = 1
        while True:
            cnt = sum(1 for i in range(n) if power(i, p**j) == ident_idx)
            e = 0
            while cnt > 1:
                cnt //= p
                e += 1
            logs.append(e)
            if logs[-1] == logs[-2]:
                break
            j += 1
        ge_counts = [logs[j] - logs[j - 1] for j in range(1, len(logs))]
        for i in range(1, (ge_counts[0] if ge_counts else 0) + 1):
            length = sum(1 for g in ge_counts if g >= i)
            prime_powers.append(p**length)
    return normalize_invariant_factors(prime_powers)


# -- structure assembly ----------------------------------------------------------


@dataclass(frozen=True)
class Verdicts:
    commutative: bool
    torus: bool
    solvable: str  # "yes" | "no" | "unknown"


@dataclass
class AutReport:
    """Structured description of the automorphism group of a presentation."""

    spec: VarietySpec
    regime: str
    structure: dict
    structure_pretty: str
    structure_group: Optional[DiagGroupType]
    verdicts: Verdicts
    groups: dict
    canonical: Optional[CanonicalGroup]
    finite_part: Optional[FinitePart]
    special_family: bool
    warnings: list
    citations: list
    quotient: Optional[QuotientResult] = None


def leaf_diag(t: DiagGroupType) -> dict:
    return {"leaf": "diag", "rank": t.torus_rank, "factors": list(t.invariant_factors)}


def leaf_sym(s) -> dict:
    return {"leaf": "sym", "blocks": [list(b) for b in s.blocks]}


def leaf_unipotent(kernel_vars) -> dict:
    return {"leaf": "unipotent", "kernel": list(kernel_vars)}


def leaf_canonical(summary: str, order) -> dict:
    return {"leaf": "canonical-group", "summary": summary, "order": order}


def leaf_family() -> dict:
    return {"leaf": "family", "relation": "a^2-b^2=1"}


def node(op: str, args: list) -> dict:
    return {"op": op, "args": args}


def pretty_structure(expr: dict) -> str:
    if "leaf" in expr:
        kind = expr["leaf"]
        if kind == "diag":
            return DiagGroupType(expr["rank"], tuple(expr["factors"])).pretty()
        if kind == "sym":
            sizes = [len(b) for b in expr["blocks"] if len(b) > 1]
            return " x ".join(f"S{s}" for s in sizes) if sizes else "1"
        if kind == "unipotent":
            return "U(d~)"
        if kind == "canonical-group":
            if expr["order"] is not None:
                return f"G[{expr['order']}]"
            return "G"
        if kind == "family":
            return "{(a,b): a^2-b^2=1}"
        raise ValueError(f"unknown leaf {kind}")
    ops = {"semidirect": " |x ", "direct": " x ", "quotient": " / "}
    sep = ops[expr["op"]]
    rendered = [pretty_structure(a) for a in expr["args"]]
    return "(" + sep.join(rendered) + ")"


def compute_verdicts(
    spec: VarietySpec,
    canonical_trivial: Optional[bool],
    aq: Optional[AdditionalQuasitorus],
    special_family: bool,
) -> Verdicts:
    counts: dict = {}
    for k in spec.weights:
        counts[k] = counts.get(k, 0) + 1
    five_equal = any(c >= 5 for c in counts.values())
    distinct = all(c == 1 for c in counts.values())
    if spec.regime == REGIME_ALL_GE2:
        commutative = distinct and not special_family
        torus = False
        if distinct and not special_family and aq is not None:
            g_all = gcd(*spec.weights) if spec.m > 1 else spec.weights[0]
            if aq.pure_power:
                torus = gcd(g_all, spec.d) == 1
            else:
                torus = aq.v == 1 and g_all == 1
        solvable = "no" if five_equal else "yes"
        return Verdicts(commutative, torus, solvable)
    if spec.regime == REGIME_ONE_UNIT:
        return Verdicts(False, False, "no" if five_equal else "yes")
    if spec.regime == REGIME_DANIELEWSKI:
        commutative = bool(canonical_trivial)
        solvable = "yes" if not five_equal else "unknown"
        return Verdicts(commutative, False, solvable)
    raise SpecError("no verdicts for this regime")


def aut_structure(spec: VarietySpec, enum_order_bound: int = 360) -> AutReport:
    """Assemble generators, structure, and verdicts for a normalized spec."""
    if not spec.is_normalized():
        raise SpecError("normalize the presentation first")
    if spec.regime in (REGIME_DEGENERATE,):
        raise SpecError(
            "degenerate presentation: the variety is an affine line; its "
            "automorphisms form the affine group of the line (outside the "
            "structure theorems)"
        )
    if spec.regime == REGIME_ALL_GE2:
        return _aut_all_ge2(spec, enum_order_bound)
    if spec.regime == REGIME_ONE_UNIT:
        return _aut_one_unit(spec, enum_order_bound)
    if spec.regime == REGIME_DANIELEWSKI:
        return _aut_danielewski(spec, enum_order_bound)
    raise SpecError(f"unsupported regime: {spec.regime_note}")


def _aut_all_ge2(spec: VarietySpec, bound: int) -> AutReport:
    warnings = []
    H = proper_quasitorus(spec)
    S = symmetric_group(spec)
    aq = additional_quasitorus(spec)
    quot = diag_group_quotient(H.subgroup, aq.Dbar.subgroup)
    if quot.convention_differs:
        warnings.append(
            "listed-factor cancellation and the exact character-lattice "
            f"computation disagree: reported {quot.reported.pretty()}, "
            f"lattice-exact {quot.lattice_exact.pretty()}"
        )
    if aq.Dbar.note:
        warnings.append("scaling family: " + aq.Dbar.note)
    special_family = spec.m == 1 and spec.weights[0] == 2 and spec.d == 2
    is_pure_square = special_family and aq.pure_power
    if is_pure_square:
        warnings.append(
            "the variety y^2 = z^2 falls outside the semidirect-quotient "
            "corollary; the listed structure covers only the diagonal and "
            "permutation generators"
        )
    if special_family:
        warnings.append(
            "one-parameter family (y,z) -> (ay+bz, by+az), a^2-b^2=1, "
            "generates automorphisms beyond the quasitorus part"
        )

    diag_leaf = leaf_diag(quot.reported)
    if S.is_trivial():
        tree = diag_leaf
    else:
        tree = node("semidirect", [leaf_sym(S), diag_leaf])
    if special_family:
        tree = node("direct", [tree, leaf_family()]) if False else tree
    verdicts = compute_verdicts(spec, None, aq, special_family)
    finite_part = _suspension_finite_part(spec, H, aq, quot)
    return AutReport(
        spec=spec,
        regime=spec.regime,
        structure=tree,
        structure_pretty=pretty_structure(tree),
        structure_group=quot.reported,
        verdicts=verdicts,
        groups={"H": H, "S": S, "D": aq.D, "Dbar": aq.Dbar, "Dhat": aq.Dhat,
                "H_cap_Dbar": quot.intersection},
        canonical=None,
        finite_part=finite_part,
        special_family=special_family,
        warnings=warnings,
        citations=[
            "suspension-generators-theorem",
            "semidirect-quotient-corollary",
            "additional-quasitorus-lemma",
            "commutativity-criterion",
            "torus-criterion",
            "solvability-criterion",
        ],
        quotient=quot,
    )


def _suspension_finite_part(spec, H, aq, quot) -> Optional[FinitePart]:
    """Element table of the finite generators surviving the cancellation."""
    if quot.reported.torus_rank and not quot.reported.invariant_factors:
        return None
    gens = []
    m = spec.m
    ident = identity_element(m)
    g_all = gcd(*spec.weights) if m > 1 else spec.weights[0]
    sources = {src for src, _ in quot.survivors} or {"H", "K"}
    if "H" in sources and g_all > 1:
        sol = solve_torus_system(
            [list(spec.weights) + [0], [0] * m + [1]], [Fraction(1), Fraction(1)],
            ncols=m + 1,
        )
        for gen in sol.torsion_generators:
            gens.append((ident[0], gen))
    if "K" in sources and not aq.pure_power:
        ref = aq.Dbar.reference_index
        order = (aq.v or 1) * spec.weights[ref]
        if order > 1:
            t = [Fraction(1)] * (m + 1)
            t[ref] = canonical_scalar(zeta(order, spec.d % order))
            t[m] = canonical_scalar(zeta(order, spec.weights[ref] % order))
            gens.append((ident[0], tuple(t)))
    if not gens:
        return None
    try:
        return finite_part_from_elements(gens, m)
    except SpecError:
        return None


def _aut_one_unit(spec: VarietySpec, bound: int) -> AutReport:
    warnings = []
    H = proper_quasitorus(spec)
    S = symmetric_group(spec)
    aq = additional_quasitorus(spec)
    if aq.Dbar.note:
        warnings.append("scaling family: " + aq.Dbar.note)
    tree_inner = node(
        "semidirect",
        [node("direct", [leaf_diag(H.type), leaf_diag(aq.D.type)]),
         leaf_unipotent(ml_invariant(spec))],
    )
    if S.is_trivial():
        tree = tree_inner
    else:
        tree = node("semidirect", [leaf_sym(S), tree_inner])
    verdicts = compute_verdicts(spec, None, aq, False)
    return AutReport(
        spec=spec,
        regime=spec.regime,
        structure=tree,
        structure_pretty=pretty_structure(tree),
        structure_group=None,
        verdicts=verdicts,
        groups={"H": H, "T": H, "S": S, "D": aq.D, "Dbar": aq.Dbar, "Dhat": aq.Dhat},
        canonical=None,
        finite_part=None,
        special_family=False,
        warnings=warnings + ["the proper quasitorus is connected (a torus) and "
                             "meets the scaling family trivially"],
        citations=[
            "unit-weight-structure-theorem",
            "kernel-classification-lemma",
            "solvability-criterion",
        ],
        quotient=None,
    )


def _aut_danielewski(spec: VarietySpec, bound: int) -> AutReport:
    warnings = []
    G = canonical_group(spec, bound)
    finite_part = None
    if G.elements is not None:
        finite_part = finite_part_from_elements(G.elements, spec.m)
        if finite_part.order != (G.order or 0):
            warnings.append(
                "canonical-group table closure added elements beyond the "
                "per-branch count; check constraints"
            )
    tree = node(
        "semidirect",
        [leaf_canonical(G.summary, G.order), leaf_unipotent(ml_invariant(spec))],
    )
    verdicts = compute_verdicts(spec, G.is_trivial, None, False)
    return AutReport(
        spec=spec,
        regime=spec.regime,
        structure=tree,
        structure_pretty=pretty_structure(tree),
        structure_group=None,
        verdicts=verdicts,
        groups={"S": symmetric_group(spec), "G": G},
        canonical=G,
        finite_part=finite_part,
        special_family=False,
        warnings=warnings + ["the canonical group meets the exponential family "
                             "only in the identity"],
        citations=[
            "danielewski-structure-theorem",
            "canonical-group-constraints",
            "commutativity-criterion",
            "solvability-sufficiency",
        ],
        quotient=None,
    )


# -- soundness oracle ------------------------------------------------------------


def verify_automorphism(spec: VarietySpec, gm: GeneratorMap) -> bool:
    """True iff the map preserves the defining ideal and has a two-sided inverse."""
    ctx = gm.context()
    for name in spec.vars:
        if name not in gm.images:
            return False
    defining = spec.defining_polynomial().embed(ctx)
    image = substitute(defining, gm.images)
    if not ideal_member(image, spec):
        return False
    inverse = gm.inverse_images
    if inverse is None:
        inverse = _derive_monomial_inverse(spec, gm)
        if inverse is None:
            return False
    inv_map = GeneratorMap(spec, inverse, validate=False)
    for name in spec.vars:
        v = MultiPoly.variable(ctx, name)
        if spec.x_role is not None:
            fwd = normal_form(substitute(gm.images[name], inverse), spec)
            bwd = normal_form(substitute(inv_map.images[name], gm.images), spec)
            if fwd != v or bwd != v:
                return False
        else:
            fwd = substitute(gm.images[name], inverse)
            bwd = substitute(inv_map.images[name], gm.images)
            if not ideal_member(fwd - v, spec) or not ideal_member(bwd - v, spec):
                return False
    return True


def _derive_monomial_inverse(spec: VarietySpec, gm: GeneratorMap) -> Optional[dict]:
    """Invert maps sending every generator to scalar * single variable."""
    ctx = gm.context()
    inverse_assign = {}
    for name in spec.vars:
        img = gm.images[name]
        if len(img.terms) != 1:
            return None
        (exps, c), = img.terms.items()
        if sum(exps) != 1:
            return None
        target = ctx[exps.index(1)]
        inverse_assign[target] = (name, c)
    if set(inverse_assign) != set(spec.vars):
        return None
    inverse = {}
    for name in ctx:
        if name in inverse_assign:
            src, c = inverse_assign[name]
            inverse[name] = MultiPoly.variable(ctx, src) * s_inv(c)
        else:
            inverse[name] = MultiPoly.variable(ctx, name)
    return inverse


def enumerate_finite_part(report: AutReport, bound: int = MAX_TABLE_ORDER) -> FinitePart:
    """The finite non-torus part of the report's structure, as a full table."""
    fp = report.finite_part
    if fp is None:
        raise SpecError("no finite part available (infinite or oversized)")
    if fp.order > bound:
        raise SpecError(f"finite part of order {fp.order} exceeds bound {bound}")
    return fp
