"""Cyclic words, surface correlators, cut invariance and slot dualization.

``<a1 ... an>`` denotes ``integral(a1 * ... * an)``.  Casimir insertions
``sum g^{pq} ... D_p ... D_q ...`` are always evaluated as the literal index
sums; for speed the sums are tabulated once per tuple of basis blocks and then
extended multilinearly, which does not change what is being summed.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement, product as iproduct
from typing import Sequence

from .errors import AlgebraMismatch, BadShuffle, CutOutOfRange, EmptyWord, GradingViolation, SlotOutOfRange
from .frobenius import FrobeniusAlgebra
from .graded import Tensor


def _letter_parity(x: Tensor) -> int:
    parities = {x.basis.key_degree(k) % 2 for k in x.keys()}
    if len(parities) > 1:
        raise GradingViolation("letter is not homogeneous, rotation sign undefined")
    return parities.pop() if parities else 0


class CyclicWord:
    """Letters ``a1 ... an`` read cyclically, with an overall coefficient.

    Rotating moves the leading letters to the back and records the Koszul
    sign of moving them past the remaining letters, so ``bracket`` is
    invariant under rotation.  The empty word stands for the single letter 1.
    """

    __slots__ = ("algebra", "letters", "coeff")

    def __init__(self, algebra: FrobeniusAlgebra, letters: Sequence[Tensor] = (), coeff=1):
        for x in letters:
            if x.basis != algebra.basis or x.arity != 1:
                raise AlgebraMismatch(f"letter is not an element of {algebra.name}")
        self.algebra = algebra
        self.letters = tuple(letters)
        self.coeff = Fraction(coeff)

    @classmethod
    def from_names(cls, algebra: FrobeniusAlgebra, names: Sequence[str]) -> "CyclicWord":
        return cls(algebra, [algebra.basis_element(n) for n in names])

    @classmethod
    def from_indices(cls, algebra: FrobeniusAlgebra, indices: Sequence[int]) -> "CyclicWord":
        return cls(algebra, [algebra.basis_element(i) for i in indices])

    def __len__(self):
        return len(self.letters)

    def effective_letters(self):
        """The letters, or ``(1,)`` for the empty word."""
        return self.letters if self.letters else (self.algebra.unit,)

    def rotate(self, k: int) -> "CyclicWord":
        """``a_{k+1} ... a_n a_1 ... a_k`` with the sign of the block swap."""
        n = len(self.letters)
        if n == 0:
            return self
        k %= n
        head, tail = self.letters[:k], self.letters[k:]
        ph = sum(_letter_parity(x) for x in head) % 2
        pt = sum(_letter_parity(x) for x in tail) % 2
        sign = -1 if ph and pt else 1
        return CyclicWord(self.algebra, tail + head, sign * self.coeff)

    def _lead(self):
        return tuple(min(x.keys()) if x else (-1,) for x in self.letters)

    def canonical(self) -> "CyclicWord":
        """Rotation whose leading-term index sequence is lexicographically least."""
        if not self.letters:
            return self
        best = min(range(len(self.letters)), key=lambda k: (self.rotate(k)._lead(), k))
        return self.rotate(best)

    def __eq__(self, other):
        if not isinstance(other, CyclicWord):
            return NotImplemented
        if self.algebra is not other.algebra or len(self) != len(other):
            return False
        if not self.letters:
            return self.coeff == other.coeff
        for k in range(len(self.letters)):
            r = self.rotate(k)
            if r.letters == other.letters and r.coeff == other.coeff:
                return True
        return False

    def __hash__(self):
        # a rotation can flip the sign (<a a> = -<a a> for odd a), so hash |coeff|
        c = self.canonical()
        return hash((c.letters, abs(c.coeff)))

    def __repr__(self):
        names = self.algebra.basis.names
        parts = []
        for x in self.letters:
            (key, c), = x.items() if len(x) == 1 else ((None, None),)
            if c == 1:
                parts.append(names[key[0]])
            else:
                parts.append(f"({x!r})")
        prefix = "" if self.coeff == 1 else f"{self.coeff}*"
        return f"{prefix}<{' '.join(parts) or '1'}>"


def bracket(w: CyclicWord) -> Fraction:
    """``<a1 ... an> = integral(a1 ... an)``, times the word's coefficient."""
    if not w.letters:
        raise EmptyWord("the bracket of an empty word is undefined")
    return w.coeff * w.algebra.integral_n(list(w.letters))


class SurfaceDecoration:
    """Genus and an ordered list of decorated boundary circles."""

    __slots__ = ("genus", "boundaries")

    def __init__(self, genus: int, boundaries: Sequence[CyclicWord]):
        if genus < 0:
            raise ValueError("genus must be non-negative")
        if not boundaries:
            raise ValueError("a surface needs at least one boundary")
        alg = boundaries[0].algebra
        for w in boundaries:
            if w.algebra is not alg:
                raise AlgebraMismatch("all boundary words must be over one algebra")
        self.genus = genus
        self.boundaries = tuple(boundaries)

    @property
    def algebra(self) -> FrobeniusAlgebra:
        return self.boundaries[0].algebra

    def __repr__(self):
        return f"SurfaceDecoration(g={self.genus}, {list(self.boundaries)})"


def casimir_conjugate(A: FrobeniusAlgebra, x: Tensor) -> Tensor:
    """``sum g^{st} D_s x D_t``."""
    out = A.basis_element(0) - A.basis_element(0)
    for s, row in enumerate(A.gram_inv_rows):
        left = A.multiply(A.basis_element(s), x)
        for t, g in row.items():
            out = out + g * A.multiply(left, A.basis_element(t))
    return out


def handle_element(A: FrobeniusAlgebra) -> Tensor:
    """``sum g^{pq} g^{rs} D_p D_r D_q D_s``."""
    cache = A.__dict__.setdefault("_corr_cache", {})
    if "handle" not in cache:
        rows = A.gram_inv_rows
        out: dict = {}
        for p, row_p in enumerate(rows):
            for r, row_r in enumerate(rows):
                pr = A._mul_dicts({p: Fraction(1)}, {r: Fraction(1)})
                if not pr:
                    continue
                for q, gpq in row_p.items():
                    prq = A._mul_dicts(pr, {q: Fraction(1)})
                    if not prq:
                        continue
                    for s, grs in row_r.items():
                        for k, c in A._mul_dicts(prq, {s: Fraction(1)}).items():
                            out[(k,)] = out.get((k,), 0) + gpq * grs * c
        cache["handle"] = Tensor(A.basis, 1, out)
    return cache["handle"]


def surface_correlator(S: SurfaceDecoration) -> Fraction:
    """``int W1 * prod_{l>=2} (sum g^{st} D_s W_l D_t) * prod_genus (sum g^{pq}g^{rs} D_p D_r D_q D_s)``.

    ``W_l`` is the product of the letters of the ``l``-th boundary (the unit for
    an empty word) times the word's coefficient.
    """
    A = S.algebra
    words = []
    for w in S.boundaries:
        words.append(w.coeff * A.product(*w.letters))
    acc = words[0]
    for W in words[1:]:
        acc = A.multiply(acc, casimir_conjugate(A, W))
    if S.genus:
        h = handle_element(A)
        for _ in range(S.genus):
            acc = A.multiply(acc, h)
    return A.integral(acc)


# literal Casimir-insertion sums -------------------------------------------

def _block(A: FrobeniusAlgebra, letters) -> dict:
    acc = {k[0]: c for k, c in A.unit.items()}
    for x in letters:
        acc = A._mul_dicts(acc, {k[0]: c for k, c in x.items()})
    return acc


def _inserted_table(A: FrobeniusAlgebra, labels: str, pairs: Sequence[str]):
    """Memo for ``T(X0, ..., Xm) = sum prod g^{uv} int(X0 D_{l1} X1 ... D_{lm} Xm)``
    on basis blocks; ``labels`` names the inserted index at each gap and
    ``pairs`` lists the contracted label pairs (first label is ``g``'s row)."""
    cache = A.__dict__.setdefault("_corr_cache", {})
    key = ("ins", labels, tuple(pairs))
    table = cache.get(key)
    if table is None:
        table = cache[key] = {}
    return table


def _inserted_basis_value(A: FrobeniusAlgebra, blocks: tuple, labels: str, pairs: Sequence[str]) -> Fraction:
    table = _inserted_table(A, labels, pairs)
    v = table.get(blocks)
    if v is not None:
        return v
    rows = A.gram_inv_rows
    assignments = [{}]
    for u, w in pairs:
        nxt = []
        for asg in assignments:
            for i, row in enumerate(rows):
                for j, g in row.items():
                    d = dict(asg)
                    d[u], d[w] = i, j
                    d[(u, w)] = g
                    nxt.append(d)
        assignments = nxt
    total = Fraction(0)
    for asg in assignments:
        coeff = Fraction(1)
        for u, w in pairs:
            coeff *= asg[(u, w)]
        acc = {blocks[0]: Fraction(1)}
        for lab, b in zip(labels, blocks[1:]):
            acc = A._mul_dicts(acc, {asg[lab]: Fraction(1)})
            if not acc:
                break
            acc = A._mul_dicts(acc, {b: Fraction(1)})
            if not acc:
                break
        if acc:
            total += coeff * A._integral_dict(acc)
    table[blocks] = total
    return total


def _inserted(A: FrobeniusAlgebra, blocks: Sequence[dict], labels: str, pairs: Sequence[str]) -> Fraction:
    total = Fraction(0)
    for combo in iproduct(*[list(b.items()) for b in blocks]):
        c = Fraction(1)
        for _, v in combo:
            c *= v
        total += c * _inserted_basis_value(A, tuple(k for k, _ in combo), labels, pairs)
    return total


def annulus_side(w1: CyclicWord, w2: CyclicWord, i: int, k: int, cut_labels=("p", "q")) -> Fraction:
    """``sum g^{uv} <a1..ai D_x b_k..b_m b_1..b_{k-1} D_y a_{i+1}..a_n>``.

    ``cut_labels`` gives the labels ``(x, y)`` of the two inserted basis
    elements; the contracted pair is always ``g^{p q}`` (or ``g^{r s}``).
    """
    A = w1.algebra
    a = w1.effective_letters()
    n = len(a)
    rot = w2.rotate(k - 1) if w2.letters else w2
    b = rot.effective_letters()
    x, y = cut_labels
    pair = tuple(sorted((x, y)))
    blocks = [_block(A, a[:i]), _block(A, b), _block(A, a[i:n])]
    return w1.coeff * rot.coeff * _inserted(A, blocks, x + y, [pair])


def _check_word(w: CyclicWord):
    if not w.letters:
        raise EmptyWord("cut verification needs non-empty words")


def verify_annulus(w1: CyclicWord, w2: CyclicWord, i: int, k: int, j: int, l: int):
    """Compare the two Casimir-insertion forms of the annulus for cuts ``(i,k)`` and ``(j,l)``.

    ``1 <= i, j <= len(w1)`` and ``1 <= k, l <= len(w2)``.  Returns
    ``(left, right, left == right)``.
    """
    _check_word(w1)
    _check_word(w2)
    if w1.algebra is not w2.algebra:
        raise AlgebraMismatch("words over different algebras")
    n, m = len(w1), len(w2)
    for c, bound in ((i, n), (j, n), (k, m), (l, m)):
        if not 1 <= c <= bound:
            raise CutOutOfRange(f"cut {c} outside 1..{bound}")
    left = annulus_side(w1, w2, i, k, ("p", "q"))
    right = annulus_side(w1, w2, j, l, ("s", "r"))
    return left, right, left == right


def torus_sides(w: CyclicWord, cuts):
    """Both sides of the one-holed torus identity for ``cuts = (i, j, k, l)``.

    Left: ``sum g^{pq}g^{rs} <a1..ai D_p a_{k+1}..a_l D_r a_{j+1}..a_k D_q a_{i+1}..a_j D_s a_{l+1}..a_n>``;
    right: ``sum g^{pq}g^{rs} <a1..an D_p D_r D_q D_s>``.
    """
    A = w.algebra
    a = w.letters
    i, j, k, l = cuts
    pairs = [("p", "q"), ("r", "s")]
    blocks = [a[:i], a[k:l], a[j:k], a[i:j], a[l:]]
    left = _inserted(A, [_block(A, b) for b in blocks], "prqs", pairs)
    std = [a, (), (), (), ()]
    right = _inserted(A, [_block(A, b) for b in std], "prqs", pairs)
    return w.coeff * left, w.coeff * right


def verify_torus(w: CyclicWord, cuts):
    """Cuts must satisfy ``0 <= i <= j <= k <= l <= n``; returns ``(left, right, equal)``."""
    _check_word(w)
    if len(cuts) != 4:
        raise CutOutOfRange("torus cuts are four positions (i, j, k, l)")
    n = len(w)
    i, j, k, l = cuts
    if not (0 <= i <= j <= k <= l <= n):
        raise CutOutOfRange(f"cuts {tuple(cuts)} not ordered within 0..{n}")
    left, right = torus_sides(w, cuts)
    return left, right, left == right


def annulus_cut_choices(n: int, m: int):
    for i, k, j, l in iproduct(range(1, n + 1), range(1, m + 1), range(1, n + 1), range(1, m + 1)):
        yield i, k, j, l


def torus_cut_choices(n: int):
    return combinations_with_replacement(range(n + 1), 4)


def words_up_to(A: FrobeniusAlgebra, max_len: int, min_len: int = 1):
    for length in range(min_len, max_len + 1):
        for idx in iproduct(range(A.dim), repeat=length):
            yield CyclicWord.from_indices(A, idx)


def verify_annulus_exhaustive(A: FrobeniusAlgebra, max_total: int = 4):
    """All basis word pairs of total length ``<= max_total`` and all cuts.

    Returns ``(checked, failures)`` with failures as
    ``(w1, w2, cuts, left, right)``.
    """
    checked, failures = 0, []
    for total in range(2, max_total + 1):
        for n in range(1, total):
            m = total - n
            for ia in iproduct(range(A.dim), repeat=n):
                w1 = CyclicWord.from_indices(A, ia)
                for ib in iproduct(range(A.dim), repeat=m):
                    w2 = CyclicWord.from_indices(A, ib)
                    for cuts in annulus_cut_choices(n, m):
                        left, right, ok = verify_annulus(w1, w2, *cuts)
                        checked += 1
                        if not ok:
                            failures.append((w1, w2, cuts, left, right))
    return checked, failures


def verify_torus_exhaustive(A: FrobeniusAlgebra, max_len: int = 4):
    checked, failures = 0, []
    for w in words_up_to(A, max_len):
        for cuts in torus_cut_choices(len(w)):
            left, right, ok = verify_torus(w, cuts)
            checked += 1
            if not ok:
                failures.append((w, cuts, left, right))
    return checked, failures


# slot dualization -----------------------------------------------------------

class Functional:
    """A multilinear functional ``A^{(x)n} -> k`` stored by its basis values."""

    __slots__ = ("algebra", "values")

    def __init__(self, algebra: FrobeniusAlgebra, values: Tensor):
        if values.basis != algebra.basis:
            raise AlgebraMismatch("values over a different basis")
        self.algebra = algebra
        self.values = values

    @property
    def arity(self) -> int:
        return self.values.arity

    def __call__(self, *args: Tensor) -> Fraction:
        if len(args) != self.arity:
            raise SlotOutOfRange(f"functional of arity {self.arity} given {len(args)} arguments")
        total = Fraction(0)
        for key, c in self.values.items():
            v = c
            for slot, idx in enumerate(key):
                v *= args[slot].coeff((idx,))
                if not v:
                    break
            total += v
        return total


def integral_functional(A: FrobeniusAlgebra, n: int) -> Functional:
    """``(a1, ..., an) -> integral(a1 ... an)``."""
    if n < 1:
        raise ValueError("integral_n needs n >= 1")
    out = {}
    for key in iproduct(range(A.dim), repeat=n):
        acc = {key[0]: Fraction(1)}
        for k in key[1:]:
            acc = A._mul_dicts(acc, {k: Fraction(1)})
            if not acc:
                break
        if acc:
            out[key] = A._integral_dict(acc)
    return Functional(A, Tensor(A.basis, n, out))


class SlotDualization:
    """A map ``A^{(x)p} -> A^{(x)q}`` given by ``tensor[in..., out...]``:
    the image of ``D_in`` is ``sum_out tensor[in, out] D_out``."""

    __slots__ = ("algebra", "p", "q", "tensor")

    def __init__(self, algebra, p, q, tensor):
        self.algebra = algebra
        self.p = p
        self.q = q
        self.tensor = tensor

    def apply(self, *inputs: Tensor) -> Tensor:
        if len(inputs) != self.p:
            raise SlotOutOfRange(f"map takes {self.p} inputs, got {len(inputs)}")
        out: dict = {}
        for key, c in self.tensor.items():
            v = c
            for slot in range(self.p):
                v *= inputs[slot].coeff((key[slot],))
                if not v:
                    break
            if v:
                k = key[self.p:]
                out[k] = out.get(k, 0) + v
        return Tensor(self.algebra.basis, self.q, out)

    def __call__(self, *inputs):
        return self.apply(*inputs)


def shuffle_for(n: int, out_slots: Sequence[int]):
    """The ``(p,q)``-shuffle sending inputs to the complement of ``out_slots``
    (1-based, in order) and the dualized variables to ``out_slots``.

    Returned as ``sigma`` with ``sigma[r]`` the position (0-based) of the
    ``r``-th entry of ``a1..ap, D_{i1}..D_{iq}``."""
    outs = sorted(out_slots)
    ins = [s for s in range(1, n + 1) if s not in outs]
    return tuple(s - 1 for s in ins + outs)


def _check_shuffle(n: int, p: int, sigma: Sequence[int]):
    if sorted(sigma) != list(range(n)):
        raise BadShuffle(f"{tuple(sigma)} is not a permutation of {n} slots")
    first, second = sigma[:p], sigma[p:]
    if list(first) != sorted(first) or list(second) != sorted(second):
        raise BadShuffle(f"{tuple(sigma)} is not a ({p},{n - p})-shuffle")


def dualize_slots(Y: Functional, out_slots: Sequence[int], shuffle: Sequence[int] | None = None) -> SlotDualization:
    """``a -> sum Y(sigma(a1..ap, D_{i1}..D_{iq})) g^{i1 j1}..g^{iq jq} D_{j1} (x) .. (x) D_{jq}``.

    ``out_slots`` are 1-based positions of the dualized variables.  If a
    shuffle is given it must be a ``(p,q)``-shuffle placing the dualized
    variables exactly at ``out_slots``.
    """
    A = Y.algebra
    n = Y.arity
    outs = list(out_slots)
    if len(set(outs)) != len(outs) or any(not 1 <= s <= n for s in outs):
        raise SlotOutOfRange(f"out slots {outs} invalid for arity {n}")
    q = len(outs)
    p = n - q
    expected = shuffle_for(n, outs)
    if shuffle is not None:
        _check_shuffle(n, p, shuffle)
        if tuple(shuffle) != expected:
            raise BadShuffle(f"shuffle {tuple(shuffle)} does not place outputs at {sorted(outs)}")
    sigma = expected
    rows = A.gram_inv_rows
    out: dict = {}
    for key, val in Y.values.items():
        # key lists basis indices by slot; read off inputs and dual variables
        ins = tuple(key[sigma[r]] for r in range(p))
        dual = [key[sigma[r]] for r in range(p, n)]
        for js in iproduct(*[list(rows[i].items()) for i in dual]):
            c = val
            for _, g in js:
                c *= g
            k = ins + tuple(j for j, _ in js)
            out[k] = out.get(k, 0) + c
    return SlotDualization(A, p, q, Tensor(A.basis, n, out))
