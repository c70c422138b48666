"""Degree and duality bookkeeping for operations given by arc cells.

An ``n`` to ``m`` operation has degree ``#arcs - #(boundaries that must be
hit)``; ordinarily those are the ``n`` inputs.  Time reversal swaps inputs
and outputs on the unweighted arc graph and re-imposes the hitting condition
on the new inputs, so the degree changes by ``n - m``.  The naive duality
swaps the labels but keeps the conditions on the old inputs, so the degree
(and the correlator) is unchanged.

Empty output boundaries (bubbling off constant loops) add ``A^{(x) r}``
factors to the Hom signature; under time reversal they move to the input
side.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace


def _power(base: str, k: int) -> str:
    return f"{base}^⊗{k}"


@dataclass(frozen=True)
class OpDescriptor:
    inputs: int
    outputs: int
    arcs: int
    empty: int = 0
    label: str = field(default="", compare=False)
    # which labelled boundaries carry the hit / normalization conditions
    normalized: str = "in"
    # side on which the r empty boundaries appear in the Hom signature
    empty_side: str = "out"

    def __post_init__(self):
        if min(self.inputs, self.outputs, self.arcs, self.empty) < 0:
            raise ValueError("descriptor counts must be non-negative")
        if self.normalized not in ("in", "out") or self.empty_side not in ("in", "out"):
            raise ValueError("sides are 'in' or 'out'")
        if not self.empty:
            # no empty boundaries: the side is meaningless, keep one normal form
            object.__setattr__(self, "empty_side", "out")

    @property
    def degree(self) -> int:
        return degree(self)

    def signature(self) -> str:
        return signature(self)

    def __str__(self):
        name = f"{self.label}: " if self.label else ""
        return f"{name}{signature(self)}"


def degree(d: OpDescriptor) -> int:
    """``#arcs - #normalized boundaries`` (``arcs - inputs`` unless naive-dualized)."""
    hit = d.inputs if d.normalized == "in" else d.outputs
    return d.arcs - hit


def trs_dual(d: OpDescriptor) -> OpDescriptor:
    """Run the cell backwards: swap in and out, keep the arcs."""
    return replace(
        d,
        inputs=d.outputs,
        outputs=d.inputs,
        empty_side="in" if d.empty_side == "out" else "out",
        label=f"trs({d.label})" if d.label else "",
    )


def naive_dual(d: OpDescriptor) -> OpDescriptor:
    """Swap the in and out labels, leaving the hit conditions where they were."""
    return replace(
        d,
        inputs=d.outputs,
        outputs=d.inputs,
        normalized="out" if d.normalized == "in" else "in",
        empty_side="in" if d.empty_side == "out" else "out",
        label=f"naive({d.label})" if d.label else "",
    )


def _hom(d: OpDescriptor) -> str:
    src, tgt = _power("CH", d.inputs), _power("CH", d.outputs)
    if d.empty:
        extra = _power("A", d.empty)
        if d.empty_side == "out":
            tgt = f"{tgt}⊗{extra}"
        else:
            src = f"{src}⊗{extra}"
    return f"Hom({src}, {tgt})"


def signature(d: OpDescriptor) -> str:
    """E.g. ``Hom(CH^⊗2, CH^⊗1), deg 0``."""
    return f"{_hom(d)}, deg {degree(d)}"


def ambient_signature(d: OpDescriptor) -> str:
    """The larger Hom space containing an operation with empty boundaries."""
    if d.empty_side == "out":
        return f"Hom({_power('CH', d.inputs)}, {_power('CH', d.outputs + d.empty)})"
    return f"Hom({_power('CH', d.inputs + d.empty)}, {_power('CH', d.outputs)})"


def correlator_signature(d: OpDescriptor) -> str:
    base = _power("CH", d.inputs + d.outputs)
    if d.empty:
        base = f"{base}⊗{_power('A', d.empty)}"
    return f"Hom({base}, k)"


PRODUCT = OpDescriptor(2, 1, 2, label="product")
COPRODUCT = OpDescriptor(1, 2, 2, label="coproduct")
IDENTITY = OpDescriptor(1, 1, 1, label="identity")
