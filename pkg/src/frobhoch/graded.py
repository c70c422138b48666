"""Exact scalars, graded bases and sparse tensors over a graded basis.

Scalars are :class:`fractions.Fraction`.  A :class:`Tensor` of arity ``k`` is a
finite linear combination of pure basis tensors ``e_{i1} (x) ... (x) e_{ik}``,
stored as a mapping from index tuples to nonzero coefficients.  Algebra
elements are tensors of arity 1.

Sign convention: the only source of signs in this module is the transposition
of two homogeneous factors, which contributes ``(-1)**(|a|*|b|)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import AlgebraMismatch, ArityMismatch, ParseError, SlotOutOfRange

Scalar = Fraction

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_scalar(text) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` into a Fraction; ints and Fractions pass through."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"not a rational literal: {text!r}")
    m = _RATIONAL.match(text)
    if m is None:
        raise ParseError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_scalar(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class BasisIndex(NamedTuple):
    algebra: str
    index: int
    name: str
    degree: int


@dataclass(frozen=True)
class GradedBasis:
    """Ordered basis with integer degrees.  Equality is structural."""

    name: str
    names: tuple
    degrees: tuple

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise ValueError("names and degrees differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate basis names in {self.name}")

    def __len__(self):
        return len(self.names)

    def __getitem__(self, i) -> BasisIndex:
        return BasisIndex(self.name, i, self.names[i], self.degrees[i])

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            from .errors import UnknownBasisName

            raise UnknownBasisName(f"unknown basis name {name!r} for {self.name}") from None

    def parity(self, i: int) -> int:
        return self.degrees[i] % 2

    def key_degree(self, key: Sequence[int]) -> int:
        return sum(self.degrees[i] for i in key)


def _clean(terms: Mapping) -> dict:
    return {k: Fraction(v) for k, v in sorted(terms.items()) if v != 0}


class Tensor:
    """Immutable sparse element of ``A^{(x) arity}``.

    ``terms`` maps index tuples (length ``arity``) to nonzero Fractions and is
    kept sorted lexicographically so iteration, rendering and equality are
    deterministic.
    """

    __slots__ = ("basis", "arity", "_terms", "_hash")

    def __init__(self, basis: GradedBasis, arity: int, terms: Mapping | None = None):
        self.basis = basis
        self.arity = arity
        clean = _clean(terms or {})
        for key in clean:
            if len(key) != arity:
                raise ArityMismatch(f"key {key} has length {len(key)}, expected {arity}")
        self._terms = clean
        self._hash = None

    # construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, basis, arity):
        return cls(basis, arity)

    @classmethod
    def basis_tensor(cls, basis, key, coeff=1):
        key = tuple(key)
        return cls(basis, len(key), {key: coeff})

    @classmethod
    def scalar(cls, basis, c):
        return cls(basis, 0, {(): c})

    # mapping-like access --------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def keys(self):
        return self._terms.keys()

    def coeff(self, key) -> Fraction:
        return self._terms.get(tuple(key), Fraction(0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    # arithmetic -----------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        if self.basis != other.basis:
            raise AlgebraMismatch(f"{self.basis.name} vs {other.basis.name}")
        if self.arity != other.arity:
            raise ArityMismatch(f"arity {self.arity} vs {other.arity}")
        return True

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return Tensor(self.basis, self.arity, out)

    def __neg__(self):
        return Tensor(self.basis, self.arity, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return Tensor(self.basis, self.arity, {k: c * v for k, v in self._terms.items()})
        return NotImplemented

    def __matmul__(self, other):
        return tensor_product(self, other)

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return (
            self.basis == other.basis
            and self.arity == other.arity
            and self._terms == other._terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.basis, self.arity, tuple(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Tensor({self.basis.name}, {render_tensor(self)})"

    # structure ------------------------------------------------------------

    def degrees(self) -> set:
        """Set of total internal degrees occurring in the tensor."""
        return {self.basis.key_degree(k) for k in self._terms}

    def permuted(self, perm: Sequence[int]) -> "Tensor":
        """Reorder factors so that output slot ``s`` holds input slot ``perm[s]``.

        The Koszul sign of the permutation is applied term by term.
        """
        if sorted(perm) != list(range(self.arity)):
            raise SlotOutOfRange(f"{perm} is not a permutation of {self.arity} slots")
        out = {}
        for key, c in self._terms.items():
            out[tuple(key[p] for p in perm)] = c * permutation_sign(self.basis, key, perm)
        return Tensor(self.basis, self.arity, out)


def permutation_sign(basis: GradedBasis, key: Sequence[int], perm: Sequence[int]) -> int:
    """Koszul sign of rearranging homogeneous factors ``key`` into ``key[perm[0]], ...``."""
    sign = 1
    n = len(perm)
    for a in range(n):
        pa = basis.parity(key[perm[a]])
        if not pa:
            continue
        for b in range(a + 1, n):
            # inversion: perm[a] > perm[b] means these two factors crossed
            if perm[a] > perm[b] and basis.parity(key[perm[b]]):
                sign = -sign
    return sign


def combine(coeffs: Sequence, tensors: Sequence[Tensor]) -> Tensor:
    """Return ``sum(coeffs[i] * tensors[i])`` in canonical form."""
    if len(coeffs) != len(tensors):
        raise ValueError("coeffs and tensors differ in length")
    if not tensors:
        raise ValueError("combine needs at least one tensor")
    first = tensors[0]
    out: dict = {}
    for c, t in zip(coeffs, tensors):
        if t.basis != first.basis:
            raise AlgebraMismatch(f"{first.basis.name} vs {t.basis.name}")
        if t.arity != first.arity:
            raise ArityMismatch(f"arity {first.arity} vs {t.arity}")
        c = Fraction(c)
        for k, v in t.items():
            out[k] = out.get(k, 0) + c * v
    return Tensor(first.basis, first.arity, out)


def tensor_product(u: Tensor, v: Tensor) -> Tensor:
    """Concatenate factors; no sign is introduced by concatenation."""
    if u.basis != v.basis:
        raise AlgebraMismatch(f"{u.basis.name} vs {v.basis.name}")
    out = {}
    for ku, cu in u.items():
        for kv, cv in v.items():
            out[ku + kv] = cu * cv
    return Tensor(u.basis, u.arity + v.arity, out)


def koszul_swap(t: Tensor, i: int) -> Tensor:
    """Swap factors ``i`` and ``i+1`` with sign ``(-1)**(deg_i*deg_{i+1})``."""
    if not 0 <= i < t.arity - 1:
        raise SlotOutOfRange(f"slot {i} invalid for arity {t.arity}")
    b = t.basis
    out = {}
    for key, c in t.items():
        sign = -1 if b.parity(key[i]) and b.parity(key[i + 1]) else 1
        new = key[:i] + (key[i + 1], key[i]) + key[i + 2:]
        out[new] = sign * c
    return Tensor(b, t.arity, out)


def contract_slot(t: Tensor, slot: int, matrix: Sequence[Mapping[int, Fraction]]) -> Tensor:
    """Replace ``e_a`` in ``slot`` by ``sum_c matrix[a][c] e_c`` (no signs)."""
    if not 0 <= slot < t.arity:
        raise SlotOutOfRange(f"slot {slot} invalid for arity {t.arity}")
    out: dict = {}
    for key, c in t.items():
        for new_idx, m in matrix[key[slot]].items():
            nk = key[:slot] + (new_idx,) + key[slot + 1:]
            out[nk] = out.get(nk, 0) + c * m
    return Tensor(t.basis, t.arity, out)


def render_tensor(t: Tensor, sep: str = "⊗") -> str:
    """Render as ``c*name(x)name + ...``; the inverse of the CLI parser."""
    if not t:
        return "0"
    parts = []
    for key, c in t.items():
        body = sep.join(t.basis.names[i] for i in key) if key else "1"
        parts.append(f"{format_scalar(c)}*{body}")
    return " + ".join(parts)


def element(basis: GradedBasis, spec: Mapping[str, object] | Iterable[tuple] | str) -> Tensor:
    """Build an arity-1 tensor from a basis name or a ``{name: coeff}`` mapping."""
    if isinstance(spec, str):
        return Tensor(basis, 1, {(basis.index(spec),): 1})
    items = spec.items() if isinstance(spec, Mapping) else spec
    out: dict = {}
    for name, c in items:
        k = (basis.index(name),)
        out[k] = out.get(k, 0) + parse_scalar(c)
    return Tensor(basis, 1, out)
