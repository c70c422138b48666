"""Finite-dimensional graded Frobenius algebras over the rationals.

An algebra is given by a basis with degrees, a multiplication table and the
values of the counit on the basis.  Everything else (pairing matrix, its
inverse, Casimir element, comultiplication, Euler class) is derived and the
structural axioms are checked at build time.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product as iproduct
from pathlib import Path
from typing import Sequence

from .errors import (
    AlgebraMismatch,
    AlgebraSpecError,
    DegeneratePairing,
    GradingViolation,
    NoUnit,
    NotAssociative,
)
from .graded import GradedBasis, Tensor, format_scalar, parse_scalar


class NonIntegralWarning(UserWarning):
    """An integral multiplication table produced a non-integral Casimir."""


class AsymmetricPairing(AlgebraSpecError):
    """The pairing is not graded symmetric."""


@dataclass
class AlgebraSpec:
    """Input description of an algebra, mirroring the on-disk JSON format.

    ``unit`` is a basis name, or a list of ``[coefficient, name]`` pairs when
    the identity is not itself a basis element (matrix units, for example).
    """

    name: str
    basis: list
    unit: object
    products: list
    counit: list
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "AlgebraSpec":
        missing = {"name", "basis", "unit", "products", "counit"} - set(data)
        if missing:
            raise AlgebraSpecError(f"algebra spec lacks fields {sorted(missing)}")
        basis = []
        for entry in data["basis"]:
            if not isinstance(entry.get("degree"), int) or isinstance(entry.get("degree"), bool):
                raise AlgebraSpecError(f"basis entry {entry!r} needs an integer degree")
            basis.append((str(entry["name"]), entry["degree"]))
        return cls(
            name=str(data["name"]),
            basis=basis,
            unit=data["unit"],
            products=[list(p) for p in data["products"]],
            counit=[list(c) for c in data["counit"]],
        )

    def to_dict(self) -> dict:
        unit = self.unit
        if not isinstance(unit, str):
            unit = [[format_scalar(parse_scalar(c)), n] for c, n in unit]
        return {
            "name": self.name,
            "basis": [{"name": n, "degree": d} for n, d in self.basis],
            "unit": unit,
            "products": [
                [l, r, [[format_scalar(parse_scalar(c)), n] for c, n in terms]]
                for l, r, terms in self.products
            ],
            "counit": [[n, format_scalar(parse_scalar(c))] for n, c in self.counit],
        }


def load_spec(path) -> AlgebraSpec:
    with open(Path(path), encoding="utf-8") as fh:
        return AlgebraSpec.from_dict(json.load(fh))


def invert_matrix(rows: Sequence[Sequence[Fraction]]):
    """Exact inverse by Gauss-Jordan elimination; ``None`` if singular."""
    n = len(rows)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [row[n:] for row in m]


def _sparse_rows(matrix):
    return tuple({j: v for j, v in enumerate(row) if v != 0} for row in matrix)


class FrobeniusAlgebra:
    """A validated Frobenius algebra.  Immutable after construction."""

    def __init__(self, name, basis: GradedBasis, unit: Tensor, table, counit):
        self.name = name
        self.basis = basis
        self.dim = len(basis)
        self.unit = unit
        # table[i][j] = {k: c} with Delta_i Delta_j = sum c Delta_k
        self.table = tuple(tuple(dict(table[i][j]) for j in range(self.dim)) for i in range(self.dim))
        self.counit = tuple(Fraction(c) for c in counit)
        self._validate_structure()

        self.gram = tuple(
            tuple(self._integral_dict(self.table[i][j]) for j in range(self.dim)) for i in range(self.dim)
        )
        inv = invert_matrix(self.gram)
        if inv is None:
            raise DegeneratePairing(f"{name}: pairing matrix is singular")
        self.gram_inv = tuple(tuple(row) for row in inv)
        self.gram_rows = _sparse_rows(self.gram)
        self.gram_inv_rows = _sparse_rows(self.gram_inv)
        self._validate_pairing()

        self.unit_index = idx = self._find_unit_index()
        self.commutative = all(
            self.table[i][j] == self.table[j][i] for i in range(self.dim) for j in range(i)
        )
        self.graded_commutative = all(
            self.table[i][j]
            == {k: (-1 if basis.parity(i) and basis.parity(j) else 1) * c for k, c in self.table[j][i].items()}
            for i in range(self.dim)
            for j in range(i)
        )
        self.connected_graded = idx is not None and basis.degrees[idx] == 0 and all(
            d > 0 for i, d in enumerate(basis.degrees) if i != idx
        )
        self.socle_degree, self.top_index = self._detect_socle()
        self.counit_parity = self._counit_parity()
        self._check_integrality()

    # construction checks --------------------------------------------------

    def _find_unit_index(self):
        if len(self.unit) == 1:
            (key, c), = self.unit.items()
            if c == 1:
                return key[0]
        return None

    def _validate_structure(self):
        b = self.basis
        n = self.dim
        for i in range(n):
            e = Tensor(b, 1, {(i,): 1})
            if self.multiply(self.unit, e) != e or self.multiply(e, self.unit) != e:
                raise NoUnit(f"{self.name}: unit fails on basis element {b.names[i]!r}")
        for i, j in iproduct(range(n), repeat=2):
            for k in self.table[i][j]:
                if b.degrees[k] != b.degrees[i] + b.degrees[j]:
                    raise GradingViolation(
                        f"{self.name}: {b.names[i]}*{b.names[j]} has component {b.names[k]} "
                        f"of degree {b.degrees[k]} != {b.degrees[i] + b.degrees[j]}"
                    )
        for i, j, k in iproduct(range(n), repeat=3):
            left = self._mul_dicts(self.table[i][j], {k: Fraction(1)})
            right = self._mul_dicts({i: Fraction(1)}, self.table[j][k])
            if left != right:
                raise NotAssociative(
                    f"{self.name}: ({b.names[i]}*{b.names[j]})*{b.names[k]} != "
                    f"{b.names[i]}*({b.names[j]}*{b.names[k]})"
                )

    def _validate_pairing(self):
        b = self.basis
        n = self.dim
        for i, j in iproduct(range(n), repeat=2):
            sign = -1 if b.parity(i) and b.parity(j) else 1
            if self.gram[i][j] != sign * self.gram[j][i]:
                raise AsymmetricPairing(
                    f"{self.name}: <{b.names[i]},{b.names[j]}> is not graded symmetric"
                )
        for i, j, k in iproduct(range(n), repeat=3):
            lhs = self._integral_dict(self._mul_dicts(self.table[i][j], {k: Fraction(1)}))
            rhs = self._integral_dict(self._mul_dicts({i: Fraction(1)}, self.table[j][k]))
            assert lhs == rhs, "invariance follows from associativity"

    def _detect_socle(self):
        if not self.connected_graded:
            return None, None
        degs = self.basis.degrees
        top = max(degs)
        tops = [i for i, d in enumerate(degs) if d == top]
        support = [i for i, c in enumerate(self.counit) if c != 0]
        if len(tops) == 1 and support == tops:
            return top, tops[0]
        return None, None

    def _counit_parity(self):
        parities = {self.basis.parity(i) for i, c in enumerate(self.counit) if c != 0}
        if len(parities) == 1:
            return parities.pop()
        # inhomogeneous counit only occurs for ungraded-by-parity data
        return 0

    def _check_integrality(self):
        entries = [c for row in self.table for cell in row for c in cell.values()] + list(self.counit)
        if all(Fraction(c).denominator == 1 for c in entries):
            if any(x.denominator != 1 for row in self.gram_inv for x in row):
                warnings.warn(
                    f"{self.name}: integral structure constants but the Casimir is not integral",
                    NonIntegralWarning,
                    stacklevel=3,
                )

    # low-level helpers ----------------------------------------------------

    def _mul_dicts(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for i, ca in a.items():
            row = self.table[i]
            for j, cb in b.items():
                for k, c in row[j].items():
                    out[k] = out.get(k, 0) + ca * cb * c
        return {k: v for k, v in out.items() if v != 0}

    def _integral_dict(self, a: dict) -> Fraction:
        return sum((c * self.counit[k] for k, c in a.items()), Fraction(0))

    def _check(self, *elements):
        for x in elements:
            if x.basis != self.basis:
                raise AlgebraMismatch(f"element of {x.basis.name} used with {self.name}")

    def basis_element(self, i) -> Tensor:
        if isinstance(i, str):
            i = self.basis.index(i)
        return Tensor(self.basis, 1, {(i,): 1})

    def element(self, coeffs) -> Tensor:
        """Element from ``{name_or_index: coefficient}``."""
        out = {}
        for k, c in coeffs.items():
            i = self.basis.index(k) if isinstance(k, str) else k
            out[(i,)] = out.get((i,), 0) + parse_scalar(c)
        return Tensor(self.basis, 1, out)

    def __repr__(self):
        return f"<FrobeniusAlgebra {self.name} dim={self.dim}>"

    # public operations ----------------------------------------------------

    def multiply(self, a: Tensor, b: Tensor) -> Tensor:
        self._check(a, b)
        out = self._mul_dicts({k[0]: c for k, c in a.items()}, {k[0]: c for k, c in b.items()})
        return Tensor(self.basis, 1, {(k,): c for k, c in out.items()})

    def product(self, *elements: Tensor) -> Tensor:
        """Left-to-right product; the empty product is the unit."""
        acc = self.unit
        for e in elements:
            acc = self.multiply(acc, e)
        return acc

    def integral(self, a: Tensor) -> Fraction:
        self._check(a)
        return sum((c * self.counit[k[0]] for k, c in a.items()), Fraction(0))

    def pairing(self, a: Tensor, b: Tensor) -> Fraction:
        """``<a, b> = integral(a*b)``."""
        self._check(a, b)
        total = Fraction(0)
        for (i,), ca in a.items():
            row = self.gram_rows[i]
            for (j,), cb in b.items():
                g = row.get(j)
                if g:
                    total += ca * cb * g
        return total

    def integral_n(self, word: Sequence[Tensor]) -> Fraction:
        if not word:
            raise ValueError("integral_n needs at least one letter")
        return self.integral(self.product(*word))

    @cached_property
    def casimir(self) -> Tensor:
        """``C = sum g^{ij} D_i (x) D_j``, with the Koszul sign of moving an odd
        counit past ``D_i`` (only relevant when the counit has odd degree)."""
        b = self.basis
        out = {}
        for i, row in enumerate(self.gram_inv_rows):
            sign = -1 if self.counit_parity and b.parity(i) else 1
            for j, g in row.items():
                out[(i, j)] = sign * g
        return Tensor(b, 2, out)

    @cached_property
    def euler(self) -> Tensor:
        return self.multiply_legs(self.casimir)

    def euler_class(self) -> Tensor:
        return self.euler

    def multiply_legs(self, t: Tensor) -> Tensor:
        """The multiplication map applied to an arity-2 tensor."""
        out: dict = {}
        for (i, j), c in t.items():
            for k, m in self.table[i][j].items():
                out[(k,)] = out.get((k,), 0) + c * m
        return Tensor(self.basis, 1, out)

    @cached_property
    def _triple(self):
        """``_triple[a][i][k] = integral(D_a D_i D_k)``."""
        n = self.dim
        return [
            [[self._integral_dict(self._mul_dicts(self.table[a][i], {k: Fraction(1)})) for k in range(n)] for i in range(n)]
            for a in range(n)
        ]

    @cached_property
    def _coproduct_basis(self):
        n = self.dim
        ginv = self.gram_inv_rows
        out = []
        for a in range(n):
            terms: dict = {}
            tri = self._triple[a]
            for i in range(n):
                for k in range(n):
                    v = tri[i][k]
                    if not v:
                        continue
                    for j, gij in ginv[i].items():
                        for l, gkl in ginv[k].items():
                            terms[(j, l)] = terms.get((j, l), 0) + v * gij * gkl
            out.append(Tensor(self.basis, 2, terms))
        return out

    def comultiply(self, a: Tensor) -> Tensor:
        """Adjoint of multiplication: ``<Delta(a), b (x) c> = <a, b c>``,
        tensors being paired factor by factor."""
        self._check(a)
        out: dict = {}
        for (i,), c in a.items():
            for k, v in self._coproduct_basis[i].items():
                out[k] = out.get(k, 0) + c * v
        return Tensor(self.basis, 2, out)

    def tensor_pairing(self, s: Tensor, t: Tensor) -> Fraction:
        """Factorwise pairing ``<a(x)b, c(x)d> = <a,c><b,d>`` of equal-arity tensors."""
        self._check(s, t)
        if s.arity != t.arity:
            from .errors import ArityMismatch

            raise ArityMismatch(f"pairing arity {s.arity} with {t.arity}")
        total = Fraction(0)
        rows = self.gram_rows
        for ks, cs in s.items():
            for kt, ct in t.items():
                v = cs * ct
                for x, y in zip(ks, kt):
                    g = rows[x].get(y)
                    if not g:
                        v = 0
                        break
                    v *= g
                total += v
        return total

    def factorwise_product(self, s: Tensor, t: Tensor, koszul: bool = False) -> Tensor:
        """``(a(x)b)(c(x)d) = ac (x) bd`` in ``A^{(x)k}``.

        Unsigned by default, which is the convention of the cochain
        operations.  With ``koszul=True`` the product of the graded tensor
        algebra is used: each factor of ``t`` picks up the sign of moving past
        the later factors of ``s``.
        """
        self._check(s, t)
        par = self.basis.parity
        out: dict = {}
        for ks, cs in s.items():
            for kt, ct in t.items():
                c = cs * ct
                if koszul:
                    for pos, y in enumerate(kt):
                        if par(y) and sum(par(x) for x in ks[pos + 1:]) % 2:
                            c = -c
                partial = {(): c}
                for x, y in zip(ks, kt):
                    nxt: dict = {}
                    for pre, pc in partial.items():
                        for z, m in self.table[x][y].items():
                            nk = pre + (z,)
                            nxt[nk] = nxt.get(nk, 0) + pc * m
                    partial = nxt
                for k, v in partial.items():
                    out[k] = out.get(k, 0) + v
        return Tensor(self.basis, s.arity, out)

    def expand(self, t: Tensor, slot: int, by: Tensor, side: str = "left") -> Tensor:
        """Multiply factor ``slot`` of ``t`` by the element ``by`` on the given side."""
        out: dict = {}
        for key, c in t.items():
            for (y,), cy in by.items():
                cell = self.table[y][key[slot]] if side == "left" else self.table[key[slot]][y]
                for z, m in cell.items():
                    nk = key[:slot] + (z,) + key[slot + 1:]
                    out[nk] = out.get(nk, 0) + c * cy * m
        return Tensor(self.basis, t.arity, out)

    @cached_property
    def factorizations(self):
        """``factorizations[k]`` lists ``(u, v, c)`` with ``c`` the ``D_k`` coefficient of ``D_u D_v``."""
        out = [[] for _ in range(self.dim)]
        for u in range(self.dim):
            for v in range(self.dim):
                for k, c in self.table[u][v].items():
                    out[k].append((u, v, c))
        return out

    def dual_basis_element(self, i: int) -> Tensor:
        """``D^i`` with ``<D_k, D^i> = delta_{ki}``."""
        return Tensor(self.basis, 1, {(k,): self.gram_inv[k][i] for k in range(self.dim)})

    def euler_characteristic(self) -> int:
        return sum(-1 if d % 2 else 1 for d in self.basis.degrees)

    def to_spec(self) -> AlgebraSpec:
        names = self.basis.names
        unit = (
            names[self.unit_index]
            if self.unit_index is not None
            else [[c, names[k[0]]] for k, c in self.unit.items()]
        )
        products = []
        for i, j in iproduct(range(self.dim), repeat=2):
            if self.unit_index in (i, j):
                continue
            products.append([names[i], names[j], [[c, names[k]] for k, c in sorted(self.table[i][j].items())]])
        counit = [[names[i], c] for i, c in enumerate(self.counit) if c != 0]
        return AlgebraSpec(self.name, list(zip(names, self.basis.degrees)), unit, products, counit)


def build_algebra(spec: AlgebraSpec | dict) -> FrobeniusAlgebra:
    """Validate a spec and derive the full Frobenius structure."""
    if isinstance(spec, dict):
        spec = AlgebraSpec.from_dict(spec)
    try:
        basis = GradedBasis(spec.name, tuple(n for n, _ in spec.basis), tuple(int(d) for _, d in spec.basis))
    except ValueError as exc:
        raise AlgebraSpecError(str(exc)) from None
    n = len(basis)
    if isinstance(spec.unit, str):
        unit = Tensor(basis, 1, {(basis.index(spec.unit),): 1})
        unit_idx = basis.index(spec.unit)
    else:
        terms: dict = {}
        for c, name in spec.unit:
            k = (basis.index(name),)
            terms[k] = terms.get(k, 0) + parse_scalar(c)
        unit = Tensor(basis, 1, terms)
        unit_idx = None

    table: list = [[None] * n for _ in range(n)]
    for entry in spec.products:
        if len(entry) != 3:
            raise AlgebraSpecError(f"product entry {entry!r} must be [left, right, terms]")
        left, right, terms = entry
        i, j = basis.index(left), basis.index(right)
        if table[i][j] is not None:
            raise AlgebraSpecError(f"duplicate product entry for {left}*{right}")
        cell: dict = {}
        for c, name in terms:
            k = basis.index(name)
            cell[k] = cell.get(k, 0) + parse_scalar(c)
        table[i][j] = {k: v for k, v in cell.items() if v != 0}
    for i in range(n):
        for j in range(n):
            if table[i][j] is not None:
                continue
            if unit_idx == i:
                table[i][j] = {j: Fraction(1)}
            elif unit_idx == j:
                table[i][j] = {i: Fraction(1)}
            else:
                raise AlgebraSpecError(
                    f"{spec.name}: missing product entry {basis.names[i]}*{basis.names[j]} "
                    "(write an empty term list for zero)"
                )
    counit = [Fraction(0)] * n
    for name, c in spec.counit:
        counit[basis.index(name)] += parse_scalar(c)
    return FrobeniusAlgebra(spec.name, basis, unit, table, counit)


# free-function spellings of the public operations

def multiply(A: FrobeniusAlgebra, a: Tensor, b: Tensor) -> Tensor:
    return A.multiply(a, b)


def pairing(A: FrobeniusAlgebra, a: Tensor, b: Tensor) -> Fraction:
    return A.pairing(a, b)


def comultiply(A: FrobeniusAlgebra, a: Tensor) -> Tensor:
    return A.comultiply(a)


def euler_class(A: FrobeniusAlgebra) -> Tensor:
    return A.euler


def integral_n(A: FrobeniusAlgebra, word: Sequence[Tensor]) -> Fraction:
    return A.integral_n(word)
