"""Invariant sweeps over the built-in algebras.

Each check returns :class:`CheckResult` rows; the first failing input is kept
as the witness.  The sweeps are deliberately small (arity <= 3, words of
length <= 4) so the whole table runs in well under a minute.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import product as iproduct

from .catalog import random_commutative, standard_catalog
from .correlator import (
    CyclicWord,
    SurfaceDecoration,
    dualize_slots,
    integral_functional,
    surface_correlator,
    verify_annulus_exhaustive,
    verify_torus_exhaustive,
)
from .descriptors import COPRODUCT, IDENTITY, PRODUCT, degree, naive_dual, trs_dual
from .expressions import parse_element, render
from .graded import Tensor
from .hochschild import (
    basis_cochains,
    boundary,
    calibrate_signs,
    coproduct,
    coproduct_correlator,
    cup,
    differential,
    evaluate,
    is_normalized,
    naive_dual_pairing,
    project,
    swap_factors,
    unit_cochain,
)


@dataclass
class CheckResult:
    identity: str
    algebra: str
    ok: bool
    detail: str = ""


def _first_failure(identity, name, items, predicate, describe=repr):
    count = 0
    for item in items:
        count += 1
        if not predicate(item):
            return CheckResult(identity, name, False, f"witness: {describe(item)}")
    return CheckResult(identity, name, True, f"{count} cases")


# frobenius -----------------------------------------------------------------

def check_euler(A):
    value = A.integral(A.euler)
    chi = A.euler_characteristic()
    ok = value == chi if A.connected_graded else True
    return CheckResult("integral(e) = Euler characteristic", A.name, ok, f"integral(e) = {value}, chi = {chi}")


def check_casimir_square(A):
    if not A.connected_graded or not A.socle_degree:
        return None
    sq = A.factorwise_product(A.casimir, A.casimir, koszul=True)
    top = A.top_index
    expected = Tensor(A.basis, 2, {(top, top): A.integral(A.euler)})
    return CheckResult("Delta(1)^2 = eps(e) top(x)top", A.name, sq == expected, render(sq))


def check_comultiply_adjoint(A):
    E = [A.basis_element(i) for i in range(A.dim)]

    def ok(t):
        a, b, c = t
        bc = Tensor(A.basis, 2, {(b, c): 1})
        return A.tensor_pairing(A.comultiply(E[a]), bc) == A.pairing(E[a], A.multiply(E[b], E[c]))

    return _first_failure("<Delta a, b(x)c> = <a, bc>", A.name, iproduct(range(A.dim), repeat=3), ok)


# hochschild ----------------------------------------------------------------

def check_d_squared(A, max_arity=3):
    fs = (f for n in range(max_arity + 1) for f in basis_cochains(A, n))
    return _first_failure("d d = 0", A.name, fs, lambda f: differential(differential(f)).is_zero())


def check_cup(A, max_arity=3):
    one = unit_cochain(A)
    fs = [f for n in range(max_arity) for f in basis_cochains(A, n)]
    E = [A.basis_element(i) for i in range(A.dim)]

    def unit_ok(f):
        return cup(one, f) == f and cup(f, one) == f

    r = _first_failure("cup unit", A.name, fs, unit_ok)
    if not r.ok:
        return r

    def contract_ok(pair):
        f, g = pair
        if f.arity + g.arity > max_arity:
            return True
        h = cup(f, g)
        for args in iproduct(E, repeat=h.arity):
            lhs = evaluate(h, list(args))
            rhs = A.multiply(evaluate(f, list(args[: f.arity])), evaluate(g, list(args[f.arity:])))
            if lhs != rhs:
                return False
        return True

    small = [f for f in fs if f.arity <= 1]
    return _first_failure("cup evaluation contract", A.name, iproduct(small, small), contract_ok)


def check_coproduct_bidegrees(A, max_arity=3):
    fs = (f for n in range(1, max_arity + 1) for f in basis_cochains(A, n))
    return _first_failure(
        "coproduct bidegrees p+q = n-1",
        A.name,
        fs,
        lambda f: all(p + q == f.arity - 1 for p, q in coproduct(f).bidegrees()),
    )


def check_correlator_action(A, max_arity=2):
    def triples():
        for n in range(1, max_arity + 1):
            for f in basis_cochains(A, n):
                for p in range(n):
                    for v in basis_cochains(A, p):
                        for w in basis_cochains(A, n - 1 - p):
                            yield f, v, w

    def ok(t):
        f, v, w = t
        return naive_dual_pairing(coproduct(f), (v, w)) == coproduct_correlator(f, v, w)

    return _first_failure("pairing(coproduct f, v(x)w) = correlator(f, v, w)", A.name, triples(), ok)


def check_boundary_swap(A, max_arity=3):
    fs = (f for n in range(max_arity + 1) for f in basis_cochains(A, n))
    return _first_failure("boundary_1 = tau boundary_0", A.name, fs, lambda f: swap_factors(boundary(0, f)) == boundary(1, f))


def check_reduced_vanishing(A, max_arity=3):
    if not A.connected_graded or not A.socle_degree:
        return None
    fs = (f for n in range(max_arity + 1) for f in basis_cochains(A, n))
    return _first_failure(
        "reduced projection kills boundaries",
        A.name,
        fs,
        lambda f: project("reduced", boundary(0, f)).is_zero() and project("reduced", boundary(1, f)).is_zero(),
    )


def check_boundary_euler(A, max_arity=2):
    if not A.connected_graded or not A.socle_degree:
        return None
    fs = [f for n in range(max_arity + 1) for f in basis_cochains(A, n)]
    vanishes = all(boundary(s, f).is_zero() for f in fs for s in (0, 1))
    ok = vanishes == (A.integral(A.euler) == 0)
    return CheckResult("boundary = 0 iff integral(e) = 0", A.name, ok, f"boundary vanishes: {vanishes}")


def check_normalized_stability(A, max_arity=2):
    if not A.connected_graded or not A.socle_degree:
        return None
    fs = [f for n in range(max_arity + 1) for f in basis_cochains(A, n) if is_normalized(f)]

    def ok(f):
        outs = [differential(f), boundary(0, f), boundary(1, f)]
        if f.arity:
            outs.append(coproduct(f))
        return all(is_normalized(x) for x in outs)

    return _first_failure("normalized cochains stay normalized", A.name, fs, ok)


def check_dg_compat(A, max_arity=2):
    good = calibrate_signs(A, max_arity)
    return CheckResult(
        "D(coproduct) = s1 coproduct(d) + s2 (boundary_0 - boundary_1)",
        A.name,
        bool(good),
        f"sign pairs that work: {good}" if good else "no sign pair works",
    )


# correlator ----------------------------------------------------------------

def check_otft(A, max_len=4):
    ca, fa = verify_annulus_exhaustive(A, max_len)
    ct, ft = verify_torus_exhaustive(A, max_len)
    rows = [
        CheckResult("annulus cut invariance", A.name, not fa, f"witness: {fa[0]}" if fa else f"{ca} cases"),
        CheckResult("torus cut invariance", A.name, not ft, f"witness: {ft[0]}" if ft else f"{ct} cases"),
    ]
    return rows


def check_surface(A, max_len=2):
    words = [CyclicWord.from_indices(A, idx) for n in range(1, max_len + 1) for idx in iproduct(range(A.dim), repeat=n)]

    def ok(pair):
        w1, w2 = pair
        base = surface_correlator(SurfaceDecoration(1, [w1, w2]))
        swapped = surface_correlator(SurfaceDecoration(1, [w2, w1]))
        rotated = surface_correlator(SurfaceDecoration(1, [w1.rotate(1), w2]))
        return base == swapped == rotated

    return _first_failure("surface correlator symmetric under reordering/rotation", A.name, iproduct(words, words), ok)


def check_dualization(A):
    E = [A.basis_element(i) for i in range(A.dim)]
    I3 = integral_functional(A, 3)
    mu = dualize_slots(I3, [3])
    de = dualize_slots(I3, [2, 3])
    ok = all(mu.apply(a, b) == A.multiply(a, b) for a in E for b in E) and all(de.apply(a) == A.comultiply(a) for a in E)
    return CheckResult("dualized integral_3 gives mu and Delta", A.name, ok)


def check_round_trip(A):
    ts = [A.casimir, A.euler, A.comultiply(A.unit)]
    ok = all(parse_element(render(t), A, t.arity) == t for t in ts)
    return CheckResult("parse(render(t)) = t", A.name, ok)


def check_descriptors():
    ok = (
        degree(PRODUCT) == 0
        and degree(COPRODUCT) == 1
        and trs_dual(COPRODUCT) == PRODUCT
        and trs_dual(PRODUCT) == COPRODUCT
        and all(degree(naive_dual(d)) == degree(d) for d in (PRODUCT, COPRODUCT, IDENTITY))
        and all(trs_dual(trs_dual(d)) == d and naive_dual(naive_dual(d)) == d for d in (PRODUCT, COPRODUCT, IDENTITY))
    )
    return CheckResult("descriptor degree and duality arithmetic", "-", ok)


def run_selftest(max_arity: int = 2, max_word_len: int = 3, algebras=None):
    """Run every check; returns ``(rows, seconds)``."""
    start = time.time()
    algs = algebras if algebras is not None else standard_catalog() + [random_commutative(s) for s in range(2)]
    rows: list = []
    for A in algs:
        small = A.dim <= 4
        for check in (check_euler, check_casimir_square, check_comultiply_adjoint, check_round_trip, check_dualization):
            rows.append(check(A))
        if small:
            rows.append(check_d_squared(A, max_arity + 1))
            rows.append(check_cup(A, max_arity))
            rows.append(check_coproduct_bidegrees(A, max_arity + 1))
            rows.append(check_correlator_action(A, max_arity))
            rows.append(check_boundary_swap(A, max_arity))
            rows.append(check_reduced_vanishing(A, max_arity))
            rows.append(check_boundary_euler(A, max_arity))
            rows.append(check_normalized_stability(A, max_arity))
            rows.append(check_dg_compat(A, max_arity))
            rows.extend(check_otft(A, max_word_len))
            rows.append(check_surface(A))
    rows.append(check_descriptors())
    return [r for r in rows if r is not None], time.time() - start


def format_table(rows) -> str:
    w1 = max(len(r.identity) for r in rows)
    w2 = max(len(r.algebra) for r in rows)
    lines = []
    for r in rows:
        status = "PASS" if r.ok else "FAIL"
        lines.append(f"{status}  {r.algebra:<{w2}}  {r.identity:<{w1}}  {r.detail}".rstrip())
    failed = sum(not r.ok for r in rows)
    lines.append(f"{len(rows) - failed} passed, {failed} failed")
    return "\n".join(lines)
