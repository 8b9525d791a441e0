"""Four-dimensional GLV scalar multiplication on quadratic twists.

Curves from a small catalog of families with two commuting efficient
endomorphisms Phi (CM) and Psi (twist Frobenius) admit a decomposition
k*P = k1*P + k2*Phi(P) + k3*Psi(P) + k4*Psi(Phi(P)) with coefficients
of roughly a quarter the length of k, computed from a short basis of
the 4-dimensional decomposition lattice obtained by a Euclidean
algorithm over the Gaussian integers.
"""

from .catalog import (
    FAMILIES,
    Family,
    GlvCurve,
    TwistInstance,
    catalog_get,
    find_group_order,
    load_instance,
    make_twist,
    save_instance,
)
from .curve import Curve, Point
from .errors import Glv4Error
from .fields import OpCounter, PrimeField, QuadExt
from .lattice import (
    BoundConstants,
    DecompBasis,
    Decomposition,
    GaussianInt,
    babai_decompose,
    bound_constants,
    cornacchia_z,
    cornacchia_zi,
    glv2_reduce,
    kernel_basis_raw,
    lll_reduce,
    rect_norm,
)
from .multiscalar import (
    MsmStats,
    PrecompTable,
    WnafDigits,
    build_table,
    glv_multiply,
    msm_interleaved,
    wnaf_encode,
)

__version__ = "1.0.0"

__all__ = [
    "FAMILIES",
    "Family",
    "GlvCurve",
    "TwistInstance",
    "catalog_get",
    "find_group_order",
    "load_instance",
    "make_twist",
    "save_instance",
    "Curve",
    "Point",
    "Glv4Error",
    "OpCounter",
    "PrimeField",
    "QuadExt",
    "BoundConstants",
    "DecompBasis",
    "Decomposition",
    "GaussianInt",
    "babai_decompose",
    "bound_constants",
    "cornacchia_z",
    "cornacchia_zi",
    "glv2_reduce",
    "kernel_basis_raw",
    "lll_reduce",
    "rect_norm",
    "MsmStats",
    "PrecompTable",
    "WnafDigits",
    "build_table",
    "glv_multiply",
    "msm_interleaved",
    "wnaf_encode",
]
