"""Built-in algebras.  Each is produced as an :class:`AlgebraSpec` first so the
file format and the catalog go through the same validation path."""

from __future__ import annotations

import random
import re
from fractions import Fraction
from functools import lru_cache

from .errors import AlgebraSpecError
from .frobenius import AlgebraSpec, FrobeniusAlgebra, build_algebra, invert_matrix, load_spec
from .graded import format_scalar

BUILTIN_NAMES = ("S1", "S2", "S3", "S4", "CP1", "CP2", "CP3", "T2", "Trunc{k}", "M2")


def sphere_spec(n: int) -> AlgebraSpec:
    """H*(S^n): 1 in degree 0, x in degree n, x^2 = 0."""
    return AlgebraSpec(
        name=f"S{n}",
        basis=[("1", 0), ("x", n)],
        unit="1",
        products=[["x", "x", []]],
        counit=[["x", "1"]],
    )


def _power_name(k):
    return "1" if k == 0 else ("h" if k == 1 else f"h{k}")


def projective_spec(n: int) -> AlgebraSpec:
    """H*(CP^n) = Q[h]/(h^{n+1}), h in degree 2."""
    names = [_power_name(k) for k in range(n + 1)]
    products = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            terms = [["1", names[i + j]]] if i + j <= n else []
            products.append([names[i], names[j], terms])
    return AlgebraSpec(
        name=f"CP{n}",
        basis=[(names[k], 2 * k) for k in range(n + 1)],
        unit="1",
        products=products,
        counit=[[names[n], "1"]],
    )


def torus_spec() -> AlgebraSpec:
    """H*(T^2): exterior algebra on a, b of degree 1, w = ab, integral(w) = 1."""
    return AlgebraSpec(
        name="T2",
        basis=[("1", 0), ("a", 1), ("b", 1), ("w", 2)],
        unit="1",
        products=[
            ["a", "a", []],
            ["a", "b", [["1", "w"]]],
            ["a", "w", []],
            ["b", "a", [["-1", "w"]]],
            ["b", "b", []],
            ["b", "w", []],
            ["w", "a", []],
            ["w", "b", []],
            ["w", "w", []],
        ],
        counit=[["w", "1"]],
    )


def truncated_spec(k: int) -> AlgebraSpec:
    """Q[x]/(x^k), ungraded, integral(x^{k-1}) = 1."""
    if k < 1:
        raise AlgebraSpecError("Trunc{k} needs k >= 1")
    names = ["1"] + ["x" if i == 1 else f"x{i}" for i in range(1, k)]
    products = []
    for i in range(1, k):
        for j in range(1, k):
            terms = [["1", names[i + j]]] if i + j < k else []
            products.append([names[i], names[j], terms])
    return AlgebraSpec(
        name=f"Trunc{k}",
        basis=[(n, 0) for n in names],
        unit="1",
        products=products,
        counit=[[names[k - 1], "1"]],
    )


def matrix_spec() -> AlgebraSpec:
    """M_2(Q) with the trace form; the unit E11 + E22 is not a basis element."""
    names = ["E11", "E12", "E21", "E22"]
    pos = {"E11": (1, 1), "E12": (1, 2), "E21": (2, 1), "E22": (2, 2)}
    products = []
    for a in names:
        for b in names:
            (i, j), (k, l) = pos[a], pos[b]
            terms = [["1", f"E{i}{l}"]] if j == k else []
            products.append([a, b, terms])
    return AlgebraSpec(
        name="M2",
        basis=[(n, 0) for n in names],
        unit=[["1", "E11"], ["1", "E22"]],
        products=products,
        counit=[["E11", "1"], ["E22", "1"]],
    )


def random_commutative_spec(seed: int) -> AlgebraSpec:
    """A 3-dimensional commutative Frobenius algebra isomorphic to Trunc3.

    The basis is ``1, u, v`` with ``u = r + x + p x^2`` and ``v = q + t x + s x^2``
    (an upper-triangular change of basis away from ``1, x, x^2`` with random
    rational entries), and the counit takes random values with a nonzero
    coefficient on ``x^2`` so the pairing stays nondegenerate.
    """
    rng = random.Random(seed)

    def rnd(nonzero=False):
        while True:
            c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
            if c or not nonzero:
                return c

    r, p = rnd(), rnd()
    q, t, s = rnd(), rnd(), rnd(nonzero=True)
    # rows: new basis vectors in old coordinates (1, x, x^2)
    new = [(Fraction(1), Fraction(0), Fraction(0)), (r, Fraction(1), p), (q, t, s)]
    # coordinates in the new basis: solve c . new = vec
    back = invert_matrix(new)

    def old_product(a, b):
        out = [Fraction(0)] * 3
        for i in range(3):
            for j in range(3 - i):
                out[i + j] += a[i] * b[j]
        return out

    def to_new(vec):
        return [sum(vec[m] * back[m][k] for m in range(3)) for k in range(3)]

    names = ["1", "u", "v"]
    products = []
    for i in (1, 2):
        for j in (1, 2):
            coeffs = to_new(old_product(new[i], new[j]))
            products.append([names[i], names[j], [[format_scalar(c), names[k]] for k, c in enumerate(coeffs) if c]])
    counit_old = (rnd(), rnd(), rnd(nonzero=True))
    counit = [sum(a * e for a, e in zip(new[k], counit_old)) for k in range(3)]
    return AlgebraSpec(
        name=f"Rand3_{seed}",
        basis=[(n, 0) for n in names],
        unit="1",
        products=products,
        counit=[[names[k], format_scalar(c)] for k, c in enumerate(counit) if c],
    )


_PATTERNS = [
    (re.compile(r"^S([1-9]\d*)$"), lambda m: sphere_spec(int(m.group(1)))),
    (re.compile(r"^CP([1-9]\d*)$"), lambda m: projective_spec(int(m.group(1)))),
    (re.compile(r"^T2$"), lambda m: torus_spec()),
    (re.compile(r"^Trunc([1-9]\d*)$"), lambda m: truncated_spec(int(m.group(1)))),
    (re.compile(r"^M2$"), lambda m: matrix_spec()),
    (re.compile(r"^Rand3_(\d+)$"), lambda m: random_commutative_spec(int(m.group(1)))),
]


def builtin_spec(name: str) -> AlgebraSpec:
    for pattern, make in _PATTERNS:
        m = pattern.match(name)
        if m:
            return make(m)
    raise KeyError(f"no built-in algebra named {name!r}; known: {', '.join(BUILTIN_NAMES)}")


@lru_cache(maxsize=None)
def builtin(name: str) -> FrobeniusAlgebra:
    """Built-in algebra by name (``S2``, ``CP2``, ``T2``, ``Trunc3``, ``M2``, ...)."""
    return build_algebra(builtin_spec(name))


def random_commutative(seed: int) -> FrobeniusAlgebra:
    return builtin(f"Rand3_{seed}")


def resolve(source: str) -> FrobeniusAlgebra:
    """A built-in name, or a path to an algebra spec file."""
    try:
        return builtin(source)
    except KeyError:
        pass
    from pathlib import Path

    if Path(source).exists():
        return build_algebra(load_spec(source))
    raise KeyError(f"{source!r} is neither a built-in algebra nor an existing spec file")


def standard_catalog():
    """Every named built-in, with Trunc{k} for k = 1..4."""
    names = ["S1", "S2", "S3", "S4", "CP1", "CP2", "CP3", "T2", "Trunc1", "Trunc2", "Trunc3", "Trunc4", "M2"]
    return [builtin(n) for n in names]
