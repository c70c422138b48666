"""Hochschild cochains of a Frobenius algebra in the dual representation.

A cochain of arity ``n`` is stored as a tensor ``a0 (x) a1 (x) ... (x) an``
meaning the multilinear map ``f(b1, ..., bn) = a0 * prod_i <ai, bi>``.
Pairs of cochains (elements of ``CH (x) CH``) are :class:`BiCochain`.

All formulas are applied as written, factor by factor and without Koszul
signs; the grading enters only through the factor swap of
:func:`swap_factors`.  The differential is obtained by transporting the
standard Hochschild coboundary through the functional form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Sequence

from .errors import AlgebraMismatch, ArityMismatch, CalibrationFailure, NotConnectedGraded, ZeroArity
from .frobenius import FrobeniusAlgebra
from .graded import Tensor, contract_slot, render_tensor


@dataclass(frozen=True)
class Cochain:
    algebra: FrobeniusAlgebra
    body: Tensor

    @property
    def arity(self) -> int:
        return self.body.arity - 1

    def __add__(self, other):
        _same(self, other)
        return Cochain(self.algebra, self.body + other.body)

    def __sub__(self, other):
        _same(self, other)
        return Cochain(self.algebra, self.body - other.body)

    def __neg__(self):
        return Cochain(self.algebra, -self.body)

    def __rmul__(self, c):
        return Cochain(self.algebra, c * self.body)

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.algebra is other.algebra and self.body == other.body

    def __hash__(self):
        return hash(self.body)

    def is_zero(self):
        return self.body.is_zero()

    def __repr__(self):
        return f"Cochain[{self.arity}]({render_tensor(self.body)})"


def _same(f, g):
    if f.algebra is not g.algebra:
        raise AlgebraMismatch(f"{f.algebra.name} vs {g.algebra.name}")


def make_cochain(A: FrobeniusAlgebra, t: Tensor) -> Cochain:
    if t.basis != A.basis:
        raise AlgebraMismatch(f"tensor over {t.basis.name} used with {A.name}")
    if t.arity < 1:
        raise ZeroArity("a cochain body needs at least the a0 slot")
    return Cochain(A, t)


def basis_cochain(A: FrobeniusAlgebra, key: Sequence[int], coeff=1) -> Cochain:
    return Cochain(A, Tensor(A.basis, len(key), {tuple(key): coeff}))


def basis_cochains(A: FrobeniusAlgebra, arity: int):
    for key in iproduct(range(A.dim), repeat=arity + 1):
        yield basis_cochain(A, key)


def internal_degree(A: FrobeniusAlgebra, key: Sequence[int]) -> int:
    """Degree of the cochain ``key`` counting each dualized slot as ``deg - socle``."""
    shift = A.socle_degree or 0
    degs = A.basis.degrees
    return sum(degs[i] for i in key) - shift * (len(key) - 1)


def total_degree(A: FrobeniusAlgebra, key: Sequence[int]) -> int:
    return (len(key) - 1) + internal_degree(A, key)


# functional form ------------------------------------------------------------

def values(f: Cochain) -> Tensor:
    """Tensor ``V`` with ``V[k, b1..bn]`` the ``D_k`` coefficient of ``f(D_b1, ..., D_bn)``."""
    t = f.body
    for slot in range(1, t.arity):
        t = contract_slot(t, slot, f.algebra.gram_rows)
    return t


def from_values(A: FrobeniusAlgebra, V: Tensor) -> Cochain:
    """Inverse of :func:`values`: the cochain whose basis values are ``V``."""
    # body[k, a] = sum_c V[k, c] prod g^{c_i a_i}
    t = V
    for slot in range(1, t.arity):
        t = contract_slot(t, slot, A.gram_inv_rows)
    return Cochain(A, t)


def evaluate(f: Cochain, args: Sequence[Tensor]) -> Tensor:
    """``f(b1, ..., bn) = a0 * prod <ai, bi>`` extended multilinearly."""
    A = f.algebra
    if len(args) != f.arity:
        raise ArityMismatch(f"cochain of arity {f.arity} applied to {len(args)} arguments")
    for b in args:
        if b.basis != A.basis:
            raise AlgebraMismatch(f"argument over {b.basis.name} for {A.name}")
    # pair each slot with its argument once
    pairs = [
        [A.pairing(A.basis_element(i), b) for i in range(A.dim)] for b in args
    ]
    out: dict = {}
    for key, c in f.body.items():
        v = c
        for slot, i in enumerate(key[1:]):
            v *= pairs[slot][i]
            if not v:
                break
        if v:
            out[(key[0],)] = out.get((key[0],), 0) + v
    return Tensor(A.basis, 1, out)


def hochschild_coboundary_values(A: FrobeniusAlgebra, V: Tensor) -> Tensor:
    """Standard coboundary on the functional form.

    ``(df)(x1..x_{n+1}) = x1 f(x2..) + sum_i (-1)^i f(.., xi x_{i+1}, ..) + (-1)^{n+1} f(..xn) x_{n+1}``
    """
    n = V.arity - 1
    table = A.table
    out: dict = {}

    def add(key, c):
        out[key] = out.get(key, 0) + c

    for key, c in V.items():
        k, args = key[0], key[1:]
        for x in range(A.dim):
            for z, m in table[x][k].items():
                add((z, x) + args, c * m)
            for z, m in table[k][x].items():
                add((z,) + args + (x,), (-1) ** (n + 1) * c * m)
        for i in range(n):
            sign = -1 if i % 2 == 0 else 1  # position i is the (i+1)-th argument
            for u, v, m in A.factorizations[args[i]]:
                add((k,) + args[:i] + (u, v) + args[i + 1:], sign * c * m)
    return Tensor(A.basis, n + 2, out)


def differential(f: Cochain) -> Cochain:
    A = f.algebra
    return from_values(A, hochschild_coboundary_values(A, values(f)))


def cup(f: Cochain, g: Cochain) -> Cochain:
    """``(a0 (x) a) cup (b0 (x) b) = a0 b0 (x) a (x) b``."""
    _same(f, g)
    A = f.algebra
    out: dict = {}
    for kf, cf in f.body.items():
        for kg, cg in g.body.items():
            for z, m in A.table[kf[0]][kg[0]].items():
                key = (z,) + kf[1:] + kg[1:]
                out[key] = out.get(key, 0) + cf * cg * m
    return Cochain(A, Tensor(A.basis, f.body.arity + g.body.arity - 1, out))


def unit_cochain(A: FrobeniusAlgebra) -> Cochain:
    return Cochain(A, A.unit)


# pairs of cochains ----------------------------------------------------------

class BiCochain:
    """Formal sum of ``(first body key, second body key) -> coefficient``."""

    __slots__ = ("algebra", "_terms")

    def __init__(self, algebra: FrobeniusAlgebra, terms=None):
        self.algebra = algebra
        clean = {}
        for (k1, k2), c in sorted((terms or {}).items()):
            if c != 0:
                if len(k1) < 1 or len(k2) < 1:
                    raise ArityMismatch("cochain keys need an a0 slot")
                clean[(tuple(k1), tuple(k2))] = Fraction(c)
        self._terms = clean

    @classmethod
    def from_pair(cls, f: Cochain, g: Cochain) -> "BiCochain":
        _same(f, g)
        return cls(f.algebra, {(k1, k2): c1 * c2 for k1, c1 in f.body.items() for k2, c2 in g.body.items()})

    def items(self):
        return self._terms.items()

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def _combine(self, other, s):
        if self.algebra is not other.algebra:
            raise AlgebraMismatch(f"{self.algebra.name} vs {other.algebra.name}")
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + s * v
        return BiCochain(self.algebra, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return BiCochain(self.algebra, {k: -v for k, v in self._terms.items()})

    def __rmul__(self, c):
        return BiCochain(self.algebra, {k: c * v for k, v in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, BiCochain):
            return NotImplemented
        return self.algebra is other.algebra and self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def bidegrees(self) -> set:
        return {(len(k1) - 1, len(k2) - 1) for k1, k2 in self._terms}

    def component(self, p: int, q: int) -> "BiCochain":
        return BiCochain(
            self.algebra,
            {k: v for k, v in self._terms.items() if len(k[0]) == p + 1 and len(k[1]) == q + 1},
        )

    def render(self) -> str:
        if not self._terms:
            return "0"
        names = self.algebra.basis.names
        parts = []
        for (k1, k2), c in self._terms.items():
            a = "⊗".join(names[i] for i in k1)
            b = "⊗".join(names[i] for i in k2)
            parts.append(f"{c}*({a})|({b})")
        return " + ".join(parts)

    def __repr__(self):
        return f"BiCochain({self.render()})"


def swap_factors(x: BiCochain) -> BiCochain:
    """``tau(F (x) G) = (-1)^{|F||G|} G (x) F`` with total cochain degrees."""
    A = x.algebra
    out = {}
    for (k1, k2), c in x.items():
        sign = -1 if total_degree(A, k1) % 2 and total_degree(A, k2) % 2 else 1
        out[(k2, k1)] = sign * c
    return BiCochain(A, out)


def bicochain_differential(x: BiCochain) -> BiCochain:
    """``D(F (x) G) = dF (x) G + (-1)^{|F|} F (x) dG``."""
    A = x.algebra
    out: dict = {}
    for (k1, k2), c in x.items():
        dF = differential(basis_cochain(A, k1)).body
        for key, v in dF.items():
            out[(key, k2)] = out.get((key, k2), 0) + c * v
        sign = -1 if total_degree(A, k1) % 2 else 1
        dG = differential(basis_cochain(A, k2)).body
        for key, v in dG.items():
            out[(k1, key)] = out.get((k1, key), 0) + sign * c * v
    return BiCochain(A, out)


# the coproduct and its boundary ---------------------------------------------

def coproduct(f: Cochain) -> BiCochain:
    """``a0 (x) ... (x) an -> sum_{p<n} Delta(a0)(1 (x) a_{p+1}) | (a1..ap) (x) (a_{p+2}..an)``.

    The first leg of ``Delta(a0)(1 (x) a_{p+1})`` becomes the ``a0`` slot of the
    first output cochain, the second leg that of the second.  Arity-0 input
    gives the empty sum.
    """
    A = f.algebra
    out: dict = {}
    for key, c in f.body.items():
        n = len(key) - 1
        delta = A.comultiply(A.basis_element(key[0]))
        for p in range(n):
            t = A.expand(delta, 1, A.basis_element(key[p + 1]), side="right")
            head, tail = key[1:p + 1], key[p + 2:]
            for (x, y), v in t.items():
                k = ((x,) + head, (y,) + tail)
                out[k] = out.get(k, 0) + c * v
    return BiCochain(A, out)


def coproduct_correlator(u: Cochain, v: Cochain, w: Cochain) -> Fraction:
    """``int(a0 b0 a_{p+1} c0) prod int(ai bi) prod int(a_{p+1+j} cj)`` if ``p+q = n-1`` else 0."""
    _same(u, v)
    _same(u, w)
    A = u.algebra
    n, p, q = u.arity, v.arity, w.arity
    if p + q != n - 1:
        return Fraction(0)
    total = Fraction(0)
    g = A.gram
    for ka, ca in u.body.items():
        for kb, cb in v.body.items():
            lead = A._mul_dicts(A._mul_dicts({ka[0]: Fraction(1)}, {kb[0]: Fraction(1)}), {ka[p + 1]: Fraction(1)})
            if not lead:
                continue
            head = ca * cb
            for i in range(1, p + 1):
                head *= g[ka[i]][kb[i]]
                if not head:
                    break
            if not head:
                continue
            for kc, cc in w.body.items():
                val = head * cc * A._integral_dict(A._mul_dicts(lead, {kc[0]: Fraction(1)}))
                for j in range(1, q + 1):
                    if not val:
                        break
                    val *= g[ka[p + 1 + j]][kc[j]]
                total += val
    return total


def _boundary_tensor(A: FrobeniusAlgebra, a0: int, side: int) -> Tensor:
    """``C * Delta(a0)`` for side 0, ``Delta(a0) * C`` for side 1 (factorwise).

    The two agree up to the leg swap, which is the cell relation between the
    endpoints; for commutative algebras they coincide.
    """
    delta = A.comultiply(A.basis_element(a0))
    if side == 0:
        return A.factorwise_product(A.casimir, delta)
    return A.factorwise_product(delta, A.casimir)


def boundary(side: int, f: Cochain) -> BiCochain:
    """The two endpoint operations of the coproduct cell.

    Side 0 lands in ``CH^n (x) CH^0``: the first leg of
    ``sum g^{ij} D_i a0' (x) D_j a0'' = C * Delta(a0)`` decorates ``a1 .. an``
    and the second leg is the ``CH^0`` output.  Side 1 lands in
    ``CH^0 (x) CH^n``: the first leg of ``Delta(a0) * C`` is the ``CH^0``
    output and the second decorates ``a1 .. an``.
    """
    if side not in (0, 1):
        raise ValueError("side must be 0 or 1")
    A = f.algebra
    out: dict = {}
    cache: dict = {}
    for key, c in f.body.items():
        t = cache.get(key[0])
        if t is None:
            t = cache[key[0]] = _boundary_tensor(A, key[0], side)
        for (x, y), v in t.items():
            k = ((x,) + key[1:], (y,)) if side == 0 else ((x,), (y,) + key[1:])
            out[k] = out.get(k, 0) + c * v
    return BiCochain(A, out)


def symmetrize_coproduct(f: Cochain) -> BiCochain:
    x = coproduct(f)
    return x + swap_factors(x)


# normalized and reduced complexes -------------------------------------------

def _require_socle(A: FrobeniusAlgebra):
    if not A.connected_graded or A.socle_degree is None:
        raise NotConnectedGraded(f"{A.name} is not connected graded Gorenstein")


def project(mode: str, f):
    """Project onto the normalized or the reduced (cyclic) subcomplex.

    A slot lies in the normalized part when it pairs trivially with the unit,
    i.e. has no ``D_top`` component.  ``normalized`` applies this to the
    argument slots ``a1..an``; ``reduced`` also to ``a0``, which is how the
    cyclic complex sees the coefficient slot.  Works on cochains and on
    bicochains (factorwise).
    """
    if mode not in ("normalized", "reduced"):
        raise ValueError("mode must be 'normalized' or 'reduced'")
    A = f.algebra
    _require_socle(A)
    top = A.top_index
    start = 0 if mode == "reduced" else 1

    def keep(key):
        return top not in key[start:]

    if isinstance(f, Cochain):
        return Cochain(A, Tensor(A.basis, f.body.arity, {k: c for k, c in f.body.items() if keep(k)}))
    return BiCochain(A, {(k1, k2): c for (k1, k2), c in f.items() if keep(k1) and keep(k2)})


def degree_zero_part(f: Cochain) -> Cochain:
    """Keep only the terms whose ``a0`` slot has degree 0."""
    A = f.algebra
    _require_socle(A)
    degs = A.basis.degrees
    return Cochain(A, Tensor(A.basis, f.body.arity, {k: c for k, c in f.body.items() if degs[k[0]] == 0}))


def is_normalized(f) -> bool:
    return project("normalized", f) == f


# dg compatibility -----------------------------------------------------------

def dg_compat_defect(f: Cochain, signs=None) -> BiCochain:
    """``D(coproduct f) - s1 coproduct(df) - s2 (boundary_0 f - boundary_1 f)``."""
    s1, s2 = signs if signs is not None else calibrated_signs()
    return (
        bicochain_differential(coproduct(f))
        - s1 * coproduct(differential(f))
        - s2 * (boundary(0, f) - boundary(1, f))
    )


_SIGN_CANDIDATES = tuple(iproduct((1, -1), repeat=2))
_calibrated = None


def calibrate_signs(A: FrobeniusAlgebra, max_arity: int = 3):
    """All sign pairs that kill the defect on every basis cochain of arity <= max_arity."""
    parts = []
    for n in range(max_arity + 1):
        for f in basis_cochains(A, n):
            parts.append(
                (bicochain_differential(coproduct(f)), coproduct(differential(f)), boundary(0, f) - boundary(1, f))
            )
    good = []
    for s1, s2 in _SIGN_CANDIDATES:
        if all((D - s1 * c - s2 * b).is_zero() for D, c, b in parts):
            good.append((s1, s2))
    return good


def calibrated_signs():
    """The sign pair fixed on H*(S^2), arity <= 3; raises if none works."""
    global _calibrated
    if _calibrated is None:
        from .catalog import builtin

        good = calibrate_signs(builtin("S2"), 3)
        if len(good) != 1:
            raise CalibrationFailure(f"expected exactly one sign pair on S2, found {good}")
        _calibrated = good[0]
    return _calibrated


# pairing outputs against test cochains ---------------------------------------

def naive_dual_pairing(output, test) -> Fraction:
    """Pair an operation output with test cochains slot by slot.

    ``output`` is a :class:`BiCochain` and ``test`` a pair of cochains, or both
    are single cochains.  Bodies are paired factorwise with the Frobenius
    form; bicochain components whose bidegree differs from the test arities
    contribute zero.
    """
    if isinstance(output, Cochain):
        if not isinstance(test, Cochain):
            raise ArityMismatch("a single cochain pairs with a single test cochain")
        if output.arity != test.arity:
            raise ArityMismatch(f"arity {output.arity} vs {test.arity}")
        return output.algebra.tensor_pairing(output.body, test.body)
    if not isinstance(test, (tuple, list)) or len(test) != 2:
        raise ArityMismatch("a bicochain pairs with a pair of test cochains")
    v, w = test
    A = output.algebra
    g = A.gram
    total = Fraction(0)
    for (k1, k2), c in output.items():
        if len(k1) != v.body.arity or len(k2) != w.body.arity:
            continue
        for kv, cv in v.body.items():
            a = c * cv
            for x, y in zip(k1, kv):
                a *= g[x][y]
                if not a:
                    break
            if not a:
                continue
            for kw, cw in w.body.items():
                b = a * cw
                for x, y in zip(k2, kw):
                    b *= g[x][y]
                    if not b:
                        break
                total += b
    return total


def boundary_correlator(f: Cochain, v: Cochain, w: Cochain) -> Fraction:
    """``sum g^{ij} int(a0 b0 D_i c0 D_j) prod int(ai bi)`` for ``v`` of the
    arity of ``f`` and ``w`` of arity 0."""
    A = f.algebra
    if v.arity != f.arity or w.arity != 0:
        return Fraction(0)
    g = A.gram
    total = Fraction(0)
    for ka, ca in f.body.items():
        for kb, cb in v.body.items():
            head = ca * cb
            for x, y in zip(ka[1:], kb[1:]):
                head *= g[x][y]
                if not head:
                    break
            if not head:
                continue
            for kc, cc in w.body.items():
                s = Fraction(0)
                for i, row in enumerate(A.gram_inv_rows):
                    for j, gij in row.items():
                        word = [ka[0], kb[0], i, kc[0], j]
                        s += gij * A.integral_n([A.basis_element(x) for x in word])
                total += head * cc * s
    return total
