"""Exact Frobenius algebras, Hochschild cochain operations and surface correlators."""

from .errors import *  # noqa: F401,F403
from .graded import GradedBasis, Scalar, Tensor, element, koszul_swap, render_tensor, tensor_product
from .frobenius import AlgebraSpec, FrobeniusAlgebra, build_algebra, load_spec
from .catalog import builtin, random_commutative, resolve, standard_catalog
from .hochschild import (
    BiCochain,
    Cochain,
    boundary,
    coproduct,
    coproduct_correlator,
    cup,
    differential,
    dg_compat_defect,
    evaluate,
    make_cochain,
    naive_dual_pairing,
    project,
    symmetrize_coproduct,
)
from .correlator import (
    CyclicWord,
    SurfaceDecoration,
    bracket,
    dualize_slots,
    integral_functional,
    surface_correlator,
    verify_annulus,
    verify_torus,
)
from .descriptors import COPRODUCT, IDENTITY, PRODUCT, OpDescriptor, degree, naive_dual, trs_dual

__version__ = "0.1.0"
