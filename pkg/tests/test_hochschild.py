from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from frobhoch.catalog import builtin
from frobhoch.errors import AlgebraMismatch, ArityMismatch, CalibrationFailure, NotConnectedGraded, ZeroArity
from frobhoch.graded import Tensor
from frobhoch.hochschild import (
    BiCochain,
    basis_cochain,
    basis_cochains,
    bicochain_differential,
    boundary,
    boundary_correlator,
    calibrate_signs,
    coproduct,
    coproduct_correlator,
    cup,
    degree_zero_part,
    dg_compat_defect,
    differential,
    evaluate,
    from_values,
    is_normalized,
    make_cochain,
    naive_dual_pairing,
    project,
    swap_factors,
    symmetrize_coproduct,
    unit_cochain,
    values,
)

from conftest import el

S2, T2, CP2, M2 = (builtin(n) for n in ("S2", "T2", "CP2", "M2"))
SMALL = [S2, T2, CP2, M2, builtin("S3"), builtin("Trunc3")]
GORENSTEIN = [A for A in SMALL if A.socle_degree]


def ch(A, expr):
    return make_cochain(A, el(A, expr))


def bi(A, *terms):
    """``bi(A, (c, "x", "x⊗x"), ...)`` builds a bicochain from named bodies."""
    out = {}
    idx = A.basis.index
    for c, left, right in terms:
        k = (tuple(idx(n) for n in left.split("⊗")), tuple(idx(n) for n in right.split("⊗")))
        out[k] = out.get(k, 0) + Fraction(c)
    return BiCochain(A, out)


def cochains(A, arity):
    keys = st.tuples(*[st.integers(0, A.dim - 1)] * (arity + 1))
    coeffs = st.integers(-3, 3)
    return st.dictionaries(keys, coeffs, max_size=3).map(lambda d: make_cochain(A, Tensor(A.basis, arity + 1, d)))


# construction and evaluation ------------------------------------------------------

def test_make_cochain_examples():
    assert ch(S2, "1⊗x").arity == 1
    assert ch(S2, "x").arity == 0
    z = make_cochain(S2, Tensor(S2.basis, 2))
    assert z.is_zero() and z.arity == 1
    with pytest.raises(ZeroArity):
        make_cochain(S2, Tensor.scalar(S2.basis, 1))
    with pytest.raises(AlgebraMismatch):
        make_cochain(S2, el(T2, "a"))


def test_evaluate_examples():
    f = ch(S2, "1⊗x")
    assert evaluate(f, [el(S2, "1")]) == el(S2, "1")
    assert evaluate(f, [el(S2, "x")]).is_zero()
    assert evaluate(ch(S2, "x"), []) == el(S2, "x")
    with pytest.raises(ArityMismatch):
        evaluate(f, [])


@pytest.mark.parametrize("A", SMALL, ids=lambda A: A.name)
def test_values_round_trip(A):
    for n in range(3):
        for f in basis_cochains(A, n):
            assert from_values(A, values(f)) == f


@pytest.mark.parametrize("A", SMALL, ids=lambda A: A.name)
def test_values_agree_with_evaluate(A):
    E = [A.basis_element(i) for i in range(A.dim)]
    for f in basis_cochains(A, 2):
        V = values(f)
        for args in product(range(A.dim), repeat=2):
            got = evaluate(f, [E[i] for i in args])
            assert got == Tensor(A.basis, 1, {(k,): V.coeff((k,) + args) for k in range(A.dim)})


# differential -------------------------------------------------------------------

def test_differential_examples():
    f = ch(M2, "E11")
    df = differential(f)
    assert df.arity == 1
    assert evaluate(df, [el(M2, "E12")]) == el(M2, "-1*E12")
    for a in ("1", "x"):
        assert differential(ch(S2, a)).is_zero()
    assert differential(differential(ch(S2, "1⊗x"))).is_zero()


def _coboundary_oracle(f, args):
    # (df)(a1..a_{n+1}) from the textbook formula, via evaluate
    A = f.algebra
    n = f.arity
    out = A.multiply(args[0], evaluate(f, args[1:]))
    for i in range(n):
        merged = args[:i] + [A.multiply(args[i], args[i + 1])] + args[i + 2:]
        out = out + (-1) ** (i + 1) * evaluate(f, merged)
    return out + (-1) ** (n + 1) * A.multiply(evaluate(f, args[:n]), args[n])


@pytest.mark.parametrize("A", SMALL, ids=lambda A: A.name)
def test_differential_matches_textbook_formula(A):
    E = [A.basis_element(i) for i in range(A.dim)]
    for n in range(3):
        for f in basis_cochains(A, n):
            df = differential(f)
            for args in product(E, repeat=n + 1):
                assert evaluate(df, list(args)) == _coboundary_oracle(f, list(args))


@pytest.mark.parametrize("A", SMALL, ids=lambda A: A.name)
def test_d_squared(A):
    top = 4 if A.dim <= 3 else 3
    for n in range(top + 1):
        for f in basis_cochains(A, n):
            assert differential(differential(f)).is_zero()


# cup -------------------------------------------------------------------------------

def test_cup_examples():
    assert cup(ch(S2, "1⊗x"), ch(S2, "1⊗x")) == ch(S2, "1⊗x⊗x")
    assert cup(ch(S2, "x"), ch(S2, "x")).is_zero()
    one = unit_cochain(S2)
    f = ch(S2, "1⊗x + 2*x⊗1")
    assert cup(one, f) == f == cup(f, one)
    assert unit_cochain(M2) == ch(M2, "E11 + E22")


@pytest.mark.parametrize("A", [S2, T2, M2], ids=lambda A: A.name)
def test_cup_evaluation_contract(A):
    E = [A.basis_element(i) for i in range(A.dim)]
    fs = [f for n in range(2) for f in basis_cochains(A, n)]
    for f, g in product(fs, repeat=2):
        h = cup(f, g)
        for args in product(E, repeat=h.arity):
            args = list(args)
            expected = A.multiply(evaluate(f, args[: f.arity]), evaluate(g, args[f.arity:]))
            assert evaluate(h, args) == expected


@settings(max_examples=40, deadline=None)
@given(cochains(M2, 1), cochains(M2, 0), cochains(M2, 1))
def test_cup_associative(f, g, h):
    assert cup(cup(f, g), h) == cup(f, cup(g, h))


@settings(max_examples=40, deadline=None)
@given(cochains(S2, 1), cochains(S2, 1))
def test_cup_is_leibniz_up_to_sign(f, g):
    # d(f u g) = df u g + (-1)^|f| f u dg on ungraded-sign examples
    lhs = differential(cup(f, g))
    rhs = cup(differential(f), g) + (-1) ** f.arity * cup(f, differential(g))
    assert lhs == rhs


# coproduct ----------------------------------------------------------------------

def test_coproduct_examples():
    assert coproduct(ch(S2, "1⊗x")) == bi(S2, (1, "x", "x"))
    assert coproduct(ch(S2, "1⊗x⊗x")) == bi(S2, (1, "x", "x⊗x"), (1, "x⊗x", "x"))
    assert coproduct(ch(S2, "x")).is_zero()


@pytest.mark.parametrize("A", SMALL, ids=lambda A: A.name)
def test_coproduct_bidegrees(A):
    for n in range(1, 4):
        for f in basis_cochains(A, n):
            assert all(p + q == n - 1 for p, q in coproduct(f).bidegrees())


def test_coproduct_correlator_examples():
    assert coproduct_correlator(ch(S2, "1⊗x"), ch(S2, "1"), ch(S2, "1")) == 1
    assert coproduct_correlator(ch(S2, "1⊗x⊗x"), ch(S2, "1⊗x"), ch(S2, "1⊗x")) == 0
    assert coproduct_correlator(ch(S2, "x⊗x"), ch(S2, "1"), ch(S2, "1")) == 0


def _correlator_oracle(u, v, w):
    # literal product of integrals, built with integral_n only
    A = u.algebra
    n, p, q = u.arity, v.arity, w.arity
    if p + q != n - 1:
        return 0
    E = A.basis_element
    total = 0
    for ka, ca in u.body.items():
        for kb, cb in v.body.items():
            for kc, cc in w.body.items():
                val = ca * cb * cc * A.integral_n([E(ka[0]), E(kb[0]), E(ka[p + 1]), E(kc[0])])
                for i in range(1, p + 1):
                    val *= A.integral_n([E(ka[i]), E(kb[i])])
                for j in range(1, q + 1):
                    val *= A.integral_n([E(ka[p + 1 + j]), E(kc[j])])
                total += val
    return total


@pytest.mark.parametrize("A", [S2, T2, M2], ids=lambda A: A.name)
def test_correlator_matches_oracle(A):
    for n in range(1, 3):
        for u in basis_cochains(A, n):
            for p in range(n):
                for v in basis_cochains(A, p):
                    for w in basis_cochains(A, n - 1 - p):
                        assert coproduct_correlator(u, v, w) == _correlator_oracle(u, v, w)


@pytest.mark.parametrize("A", [S2, T2, CP2, M2], ids=lambda A: A.name)
def test_correlator_action_equivalence(A):
    top = 3 if A.dim <= 3 else 2
    for n in range(1, top + 1):
        for f in basis_cochains(A, n):
            cp = coproduct(f)
            for p in range(n):
                for v in basis_cochains(A, p):
                    for w in basis_cochains(A, n - 1 - p):
                        assert naive_dual_pairing(cp, (v, w)) == coproduct_correlator(f, v, w)


def test_naive_dual_pairing_basics():
    assert naive_dual_pairing(coproduct(ch(S2, "1⊗x")), (ch(S2, "1"), ch(S2, "1"))) == 1
    assert naive_dual_pairing(BiCochain(S2), (ch(S2, "1"), ch(S2, "1"))) == 0
    # bidegree mismatch pairs to zero rather than raising
    assert naive_dual_pairing(coproduct(ch(S2, "1⊗x")), (ch(S2, "1⊗x"), ch(S2, "1"))) == 0
    with pytest.raises(ArityMismatch):
        naive_dual_pairing(coproduct(ch(S2, "1⊗x")), ch(S2, "1"))
    assert naive_dual_pairing(ch(S2, "1⊗x"), ch(S2, "x⊗1")) == 1


# boundaries -----------------------------------------------------------------------

def test_boundary_examples():
    assert boundary(0, ch(S2, "1⊗x")) == bi(S2, (2, "x⊗x", "x"))
    assert boundary(1, ch(S2, "1⊗x")) == bi(S2, (2, "x", "x⊗x"))
    assert boundary(0, ch(S2, "x⊗x")).is_zero()
    assert boundary(0, ch(S2, "x⊗1")).is_zero()
    with pytest.raises(ValueError):
        boundary(2, ch(S2, "x"))


@pytest.mark.parametrize("A", SMALL, ids=lambda A: A.name)
def test_boundary_swap_relation(A):
    for n in range(4 if A.dim <= 3 else 3):
        for f in basis_cochains(A, n):
            assert swap_factors(boundary(0, f)) == boundary(1, f)


@pytest.mark.parametrize("A", SMALL, ids=lambda A: A.name)
def test_boundary_bidegrees(A):
    for n in range(3):
        for f in basis_cochains(A, n):
            assert boundary(0, f).bidegrees() <= {(n, 0)}
            assert boundary(1, f).bidegrees() <= {(0, n)}


def _apply_side0(x, args):
    # evaluate the CH^n factor, leave the CH^0 factor as an element: A (x) A
    A = x.algebra
    out = {}
    for (k1, k2), c in x.items():
        for (i,), ci in evaluate(basis_cochain(A, k1), args).items():
            out[(i, k2[0])] = out.get((i, k2[0]), 0) + c * ci
    return Tensor(A.basis, 2, out)


@pytest.mark.parametrize("A", [S2, CP2, M2, T2], ids=lambda A: A.name)
def test_boundary_closed_form(A):
    E = [A.basis_element(i) for i in range(A.dim)]
    for n in range(3 if A.dim <= 3 else 2):
        for f in basis_cochains(A, n):
            b0 = boundary(0, f)
            for args in product(E, repeat=n):
                args = list(args)
                expected = A.factorwise_product(A.casimir, A.comultiply(evaluate(f, args)))
                assert _apply_side0(b0, args) == expected


@pytest.mark.parametrize("A", [S2, CP2, M2], ids=lambda A: A.name)
def test_boundary_correlator_matches_pairing(A):
    for n in range(3):
        for f in basis_cochains(A, n):
            b0 = boundary(0, f)
            for v in basis_cochains(A, n):
                for w in basis_cochains(A, 0):
                    assert naive_dual_pairing(b0, (v, w)) == boundary_correlator(f, v, w)


def test_boundary_vanishes_iff_euler_integral_vanishes():
    for A in GORENSTEIN:
        vanish = all(boundary(s, f).is_zero() for n in range(3) for f in basis_cochains(A, n) for s in (0, 1))
        assert vanish == (A.integral(A.euler) == 0), A.name


def test_symmetrize_examples():
    assert symmetrize_coproduct(ch(S2, "1⊗x⊗x")) == bi(S2, (2, "x", "x⊗x"), (2, "x⊗x", "x"))
    assert symmetrize_coproduct(make_cochain(S2, Tensor(S2.basis, 3))).is_zero()


@pytest.mark.parametrize("A", [T2, M2, CP2], ids=lambda A: A.name)
def test_swap_is_involution(A):
    for n in range(1, 3):
        for f in basis_cochains(A, n):
            x = coproduct(f)
            assert swap_factors(swap_factors(x)) == x
            s = symmetrize_coproduct(f)
            assert swap_factors(s) == s


def test_swap_sign_on_odd_factors():
    # (a) has total degree 1; swapping two of them costs a sign
    x = bi(T2, (1, "a", "b"))
    assert swap_factors(x) == bi(T2, (-1, "b", "a"))


# projections ---------------------------------------------------------------------

def test_project_examples():
    # a slot is killed when it pairs with the unit, i.e. has a top component
    assert project("reduced", ch(S2, "1⊗x")).is_zero()
    assert project("reduced", ch(S2, "1⊗1")) == ch(S2, "1⊗1")
    assert project("normalized", ch(S2, "x⊗1")) == ch(S2, "x⊗1")
    assert project("reduced", ch(S2, "x⊗1")).is_zero()
    assert degree_zero_part(ch(S2, "1⊗x + x⊗x")) == ch(S2, "1⊗x")
    with pytest.raises(NotConnectedGraded):
        project("reduced", ch(M2, "E11"))
    with pytest.raises(ValueError):
        project("cyclic", ch(S2, "x"))


@pytest.mark.parametrize("A", GORENSTEIN, ids=lambda A: A.name)
def test_normalized_means_vanishing_on_unit(A):
    E = [A.basis_element(i) for i in range(A.dim)]
    for n in range(1, 3):
        for f in basis_cochains(A, n):
            vanishes = all(
                evaluate(f, [E[i] for i in args]).is_zero()
                for args in product(range(A.dim), repeat=n)
                if A.unit_index in args
            )
            assert vanishes == is_normalized(f)


@pytest.mark.parametrize("A", GORENSTEIN, ids=lambda A: A.name)
def test_reduced_projection_kills_boundaries(A):
    for n in range(4):
        for f in basis_cochains(A, n):
            for s in (0, 1):
                assert project("reduced", boundary(s, f)).is_zero()


@pytest.mark.parametrize("A", GORENSTEIN, ids=lambda A: A.name)
def test_normalized_stability(A):
    fs = [f for n in range(4) for f in basis_cochains(A, n) if is_normalized(f)]
    for f in fs:
        if f.arity < 3:
            assert is_normalized(differential(f))
        if f.arity:
            assert is_normalized(coproduct(f))
        assert is_normalized(boundary(0, f)) and is_normalized(boundary(1, f))
    for f, g in product(fs, repeat=2):
        if f.arity + g.arity <= 3:
            assert is_normalized(cup(f, g))


# dg compatibility -------------------------------------------------------------------

def test_bicochain_differential_squares_to_zero():
    for A in (S2, T2, M2):
        for n in range(1, 3):
            for f in basis_cochains(A, n):
                x = coproduct(f)
                assert bicochain_differential(bicochain_differential(x)).is_zero()


def test_dg_compat_sign_search_is_empty_off_S2():
    # no sign pair closes the cell relation on T2 or M2 (see the acceptance suite)
    assert calibrate_signs(T2, 2) == []
    assert calibrate_signs(M2, 1) == []


def test_dg_compat_arity_zero_closes_on_M2():
    # in arity 0 the boundary difference is exactly the coproduct of df
    f = ch(M2, "E11")
    assert coproduct(f).is_zero()
    assert boundary(0, f) - boundary(1, f) == coproduct(differential(f))
    assert calibrate_signs(M2, 0) == [(1, -1), (-1, 1)]


def test_dg_compat_witness_on_M2():
    # M2 is ungraded, so no Koszul sign choice can be at fault here
    f = ch(M2, "E11⊗E11")
    for signs in product((1, -1), repeat=2):
        assert not dg_compat_defect(f, signs).is_zero()


def test_dg_compat_witness_on_T2():
    # the boundary vanishes, and D(coproduct f) and coproduct(df) have disjoint support
    f = ch(T2, "1⊗1")
    assert (boundary(0, f) - boundary(1, f)).is_zero()
    D, c = bicochain_differential(coproduct(f)), coproduct(differential(f))
    assert not D.is_zero() and not c.is_zero()
    assert not set(k for k, _ in D.items()) & set(k for k, _ in c.items())


def test_uncalibrated_defect_raises():
    with pytest.raises(CalibrationFailure):
        dg_compat_defect(ch(S2, "1⊗x"))
