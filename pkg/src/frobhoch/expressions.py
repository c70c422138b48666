"""Reading and writing tensors as text.

Grammar: a sum of terms ``coef*name⊗name⊗...`` separated by ``+`` or ``-``.
The coefficient is an exact rational (``3``, ``-1/2``) and may be omitted;
``(x)`` is accepted in place of ``⊗``.  ``0`` is the zero tensor.
"""

from __future__ import annotations

import re

from .errors import ParseError, UnknownBasisName
from .frobenius import FrobeniusAlgebra
from .graded import Tensor, parse_scalar, render_tensor

_SEP = "⊗"
_COEF = re.compile(r"[+-]?\d+(?:/\d+)?$")


def _split_terms(text: str):
    """Return ``(start, sign, body)`` for each ``+``/``-`` separated term.

    Signs directly after another sign or at the start fold into the term's
    sign; a sign after ``*`` or ``/`` is left to the coefficient parser.
    """
    terms = []
    n = len(text)
    pos, sign = 0, 1

    def leading_signs(pos, sign):
        while pos < n and (text[pos].isspace() or text[pos] in "+-"):
            if text[pos] == "-":
                sign = -sign
            pos += 1
        return pos, sign

    pos, sign = leading_signs(pos, sign)
    start = pos
    while pos < n:
        ch = text[pos]
        if ch in "+-":
            before = text[start:pos].rstrip()
            if before and before[-1] not in "*/":
                terms.append((start, sign, text[start:pos]))
                pos, sign = leading_signs(pos, 1)
                start = pos
                continue
        pos += 1
    terms.append((start, sign, text[start:]))
    return terms


def parse_element(expr: str, A: FrobeniusAlgebra, arity: int | None = None) -> Tensor:
    """Parse ``expr`` into a tensor over ``A``.  ``arity`` is required only to
    give the zero tensor ``"0"`` an arity (default 1)."""
    text = expr.replace("(x)", _SEP)
    if not text.strip():
        raise ParseError("empty expression", 0)
    if text.strip() == "0":
        return Tensor(A.basis, arity if arity is not None else 1)
    out: dict = {}
    found_arity = None
    for start, sign, body in _split_terms(text):
        offset = start + (len(body) - len(body.lstrip()))
        body = body.strip()
        if not body:
            raise ParseError("missing term", start)
        if "*" in body:
            coef_text, names_text = body.split("*", 1)
            coef_text = coef_text.strip()
            if not _COEF.match(coef_text.replace(" ", "")):
                raise ParseError(f"bad coefficient {coef_text!r}", offset)
            try:
                coef = parse_scalar(coef_text.replace(" ", ""))
            except ParseError as exc:
                raise ParseError(f"bad coefficient {coef_text!r}: {exc}", offset) from None
            name_offset = offset + body.index("*") + 1
        else:
            coef, names_text, name_offset = parse_scalar(1), body, offset
        names = [s.strip() for s in names_text.split(_SEP)]
        key = []
        for name in names:
            if not name:
                raise ParseError("missing basis name", name_offset)
            try:
                key.append(A.basis.index(name))
            except UnknownBasisName:
                raise UnknownBasisName(f"unknown basis name {name!r} for {A.name}", name_offset) from None
        if found_arity is None:
            found_arity = len(key)
        elif found_arity != len(key):
            raise ParseError(f"term has {len(key)} factors, expected {found_arity}", offset)
        k = tuple(key)
        out[k] = out.get(k, 0) + sign * coef
    if arity is not None and found_arity != arity:
        raise ParseError(f"expected {arity} tensor factors, got {found_arity}", 0)
    return Tensor(A.basis, found_arity, out)


def render(t: Tensor) -> str:
    return render_tensor(t, _SEP)


def tensor_to_machine(t: Tensor):
    """``[[coefficient, [names...]], ...]``."""
    names = t.basis.names
    return [[_fmt(c), [names[i] for i in key]] for key, c in t.items()]


def _fmt(c):
    from .graded import format_scalar

    return format_scalar(c)
