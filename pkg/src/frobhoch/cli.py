"""Command line front end.

    frobhoch VERB --algebra NAME|PATH [operands] [--format text|machine]

Exit status: 0 success, 1 validation or verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .catalog import BUILTIN_NAMES, resolve
from .correlator import (
    CyclicWord,
    SurfaceDecoration,
    surface_correlator,
    verify_annulus_exhaustive,
    verify_torus_exhaustive,
)
from .errors import AlgebraSpecError, FrobHochError, ParseError
from .expressions import parse_element, render, tensor_to_machine
from .graded import format_scalar
from .hochschild import BiCochain, boundary, coproduct, coproduct_correlator, cup, differential, make_cochain

VERBS = (
    "validate",
    "casimir",
    "euler",
    "integral",
    "coproduct",
    "boundary",
    "cup",
    "differential",
    "correlator",
    "surface",
    "verify-otft",
    "selftest",
)

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Command:
    verb: str
    algebra: str | None = None
    operands: dict = field(default_factory=dict)
    format: str = "text"


@dataclass
class Outcome:
    status: int
    text: str
    data: object = None


# rendering -------------------------------------------------------------------

def render_bicochain(x: BiCochain) -> str:
    if x.is_zero():
        return "0"
    names = x.algebra.basis.names
    lines = []
    for bideg in sorted(x.bidegrees()):
        part = x.component(*bideg)
        terms = []
        for (k1, k2), c in part.items():
            a = "⊗".join(names[i] for i in k1)
            b = "⊗".join(names[i] for i in k2)
            terms.append(f"{format_scalar(c)}*({a}) ⊗ ({b})")
        lines.append(f"({bideg[0]},{bideg[1]}): " + " + ".join(terms))
    return "\n".join(lines)


def bicochain_to_machine(x: BiCochain):
    names = x.algebra.basis.names
    return [
        [format_scalar(c), [names[i] for i in k1], [names[i] for i in k2]]
        for (k1, k2), c in x.items()
    ]


# verbs -----------------------------------------------------------------------

def _cochain(A, expr):
    if expr is None:
        raise UsageError("--cochain is required")
    return make_cochain(A, parse_element(expr, A))


def _algebra(cmd):
    if not cmd.algebra:
        raise UsageError("--algebra is required")
    try:
        return resolve(cmd.algebra)
    except KeyError as exc:
        raise UsageError(f"{exc.args[0]}; built-ins: {', '.join(BUILTIN_NAMES)}") from None


def _validate(cmd):
    try:
        A = _algebra(cmd)
    except AlgebraSpecError as exc:
        return Outcome(FAILED, f"invalid algebra: {exc}", {"valid": False, "error": str(exc)})
    flags = {
        "dimension": A.dim,
        "degrees": dict(zip(A.basis.names, A.basis.degrees)),
        "commutative": A.commutative,
        "graded_commutative": A.graded_commutative,
        "connected_graded": A.connected_graded,
        "socle_degree": A.socle_degree,
    }
    lines = [f"{A.name}: valid Frobenius algebra"] + [f"  {k}: {v}" for k, v in flags.items()]
    return Outcome(OK, "\n".join(lines), {"valid": True, **flags})


def _casimir(cmd):
    A = _algebra(cmd)
    C = A.casimir
    return Outcome(OK, render(C), {"casimir": tensor_to_machine(C)})


def _euler(cmd):
    A = _algebra(cmd)
    e = A.euler
    c = A.integral(e)
    return Outcome(OK, f"{render(e)} (counit: {format_scalar(c)})", {"euler": tensor_to_machine(e), "counit": format_scalar(c)})


def _integral(cmd):
    A = _algebra(cmd)
    exprs = cmd.operands.get("elements") or []
    if not exprs:
        raise UsageError("integral needs at least one element")
    letters = [parse_element(e, A, 1) for e in exprs]
    value = A.integral_n(letters)
    return Outcome(OK, format_scalar(value), {"integral": format_scalar(value)})


def _bicochain_outcome(x):
    return Outcome(OK, render_bicochain(x), {"terms": bicochain_to_machine(x)})


def _coproduct(cmd):
    A = _algebra(cmd)
    return _bicochain_outcome(coproduct(_cochain(A, cmd.operands.get("cochain"))))


def _boundary(cmd):
    A = _algebra(cmd)
    side = cmd.operands.get("side")
    if side not in (0, 1):
        raise UsageError("--side must be 0 or 1")
    return _bicochain_outcome(boundary(side, _cochain(A, cmd.operands.get("cochain"))))


def _cochain_outcome(f):
    return Outcome(OK, render(f.body), {"arity": f.arity, "body": tensor_to_machine(f.body)})


def _cup(cmd):
    A = _algebra(cmd)
    exprs = cmd.operands.get("cochains") or []
    if len(exprs) != 2:
        raise UsageError("cup needs exactly two --cochain operands")
    return _cochain_outcome(cup(_cochain(A, exprs[0]), _cochain(A, exprs[1])))


def _differential(cmd):
    A = _algebra(cmd)
    return _cochain_outcome(differential(_cochain(A, cmd.operands.get("cochain"))))


def _correlator(cmd):
    A = _algebra(cmd)
    exprs = cmd.operands.get("cochains") or []
    if len(exprs) != 3:
        raise UsageError("correlator needs three --cochain operands (u, v, w)")
    u, v, w = (_cochain(A, e) for e in exprs)
    value = coproduct_correlator(u, v, w)
    return Outcome(OK, format_scalar(value), {"correlator": format_scalar(value)})


def _parse_word(A, text):
    text = text.strip()
    if not text:
        return CyclicWord(A, [])
    return CyclicWord(A, [parse_element(part, A, 1) for part in text.split(",")])


def _surface(cmd):
    A = _algebra(cmd)
    words = cmd.operands.get("words")
    if not words:
        raise UsageError("surface needs at least one --word")
    genus = cmd.operands.get("genus", 0)
    if genus < 0:
        raise UsageError("--genus must be non-negative")
    value = surface_correlator(SurfaceDecoration(genus, [_parse_word(A, w) for w in words]))
    return Outcome(OK, format_scalar(value), {"surface": format_scalar(value)})


def _verify_otft(cmd):
    A = _algebra(cmd)
    n = cmd.operands.get("max_word_len") or 3
    ca, fa = verify_annulus_exhaustive(A, n)
    ct, ft = verify_torus_exhaustive(A, n)
    lines = [
        f"annulus: {ca} cut choices, {len(fa)} unequal",
        f"torus: {ct} cut choices, {len(ft)} unequal",
    ]
    for w1, w2, cuts, left, right in fa[:5]:
        lines.append(f"  annulus {w1} {w2} cuts (i,k,j,l)={cuts}: {left} != {right}")
    for w, cuts, left, right in ft[:5]:
        lines.append(f"  torus {w} cuts {cuts}: {left} != {right}")
    data = {
        "annulus": {"checked": ca, "failures": len(fa)},
        "torus": {"checked": ct, "failures": len(ft)},
    }
    return Outcome(FAILED if fa or ft else OK, "\n".join(lines), data)


def _selftest(cmd):
    from .selftest import format_table, run_selftest

    algebras = [_algebra(cmd)] if cmd.algebra else None
    rows, secs = run_selftest(
        max_arity=cmd.operands.get("arity") or 2,
        max_word_len=cmd.operands.get("max_word_len") or 3,
        algebras=algebras,
    )
    failed = [r for r in rows if not r.ok]
    data = [{"identity": r.identity, "algebra": r.algebra, "ok": r.ok, "detail": r.detail} for r in rows]
    return Outcome(FAILED if failed else OK, format_table(rows) + f"\n({secs:.1f}s)", data)


HANDLERS = {
    "validate": _validate,
    "casimir": _casimir,
    "euler": _euler,
    "integral": _integral,
    "coproduct": _coproduct,
    "boundary": _boundary,
    "cup": _cup,
    "differential": _differential,
    "correlator": _correlator,
    "surface": _surface,
    "verify-otft": _verify_otft,
    "selftest": _selftest,
}


def run(cmd: Command) -> Outcome:
    """Execute a command; never raises for user errors."""
    if cmd.verb not in HANDLERS:
        return Outcome(USAGE, f"unknown verb {cmd.verb!r}; expected one of {', '.join(VERBS)}")
    if cmd.format not in ("text", "machine"):
        return Outcome(USAGE, f"unknown format {cmd.format!r}")
    try:
        return HANDLERS[cmd.verb](cmd)
    except (UsageError, ParseError) as exc:
        return Outcome(USAGE, f"usage error: {exc}")
    except AlgebraSpecError as exc:
        return Outcome(FAILED, f"invalid algebra: {exc}")
    except FrobHochError as exc:
        return Outcome(FAILED, f"{type(exc).__name__}: {exc}")


# argument parsing --------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="frobhoch", description="Frobenius algebra and Hochschild cochain calculator")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("elements", nargs="*", help="element expressions (integral)")
    p.add_argument("--algebra", help="built-in name or path to an algebra spec (JSON)")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--cochain", action="append", default=[], help="cochain body, e.g. '1⊗x⊗x'")
    p.add_argument("--side", type=int, choices=(0, 1))
    p.add_argument("--word", action="append", default=None, help="boundary word, letters separated by commas")
    p.add_argument("--genus", type=int, default=0)
    p.add_argument("--max-word-len", type=int, default=None)
    p.add_argument("--arity", type=int, default=None)
    return p


def parse_command(argv) -> Command:
    ns = build_parser().parse_intermixed_args(argv)
    operands = {
        "elements": ns.elements,
        "cochain": ns.cochain[0] if len(ns.cochain) == 1 else None,
        "cochains": ns.cochain,
        "side": ns.side,
        "words": ns.word,
        "genus": ns.genus,
        "max_word_len": ns.max_word_len,
        "arity": ns.arity,
    }
    return Command(ns.verb, ns.algebra, operands, ns.format)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cmd = parse_command(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE
    out = run(cmd)
    if cmd.format == "machine":
        payload = {"verb": cmd.verb, "status": out.status}
        if out.data is not None:
            payload["result"] = out.data
        else:
            payload["message"] = out.text
        print(json.dumps(payload, ensure_ascii=False))
    else:
        stream = sys.stdout if out.status != USAGE else sys.stderr
        print(out.text, file=stream)
    return out.status


if __name__ == "__main__":
    sys.exit(main())
