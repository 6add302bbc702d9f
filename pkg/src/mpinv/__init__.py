"""Dense complex linear algebra centred on the Moore-Penrose pseudoinverse."""

from .decomp import PolarFactors, SvdFactors, polar, polar_left, singular_values, sqrt_psd, svd_rect, svd_square
from .eigen import (
    CharPoly,
    HermitianEigen,
    SpectralDecomposition,
    apply_poly,
    char_poly,
    distinct_spectrum,
    gram_eig,
    hermitian_eig,
    hermitian_eigenvalues,
    projectors_by_polynomial,
    spectral_projectors,
)
from .errors import (
    DegenerateSeparation,
    NoConvergence,
    NonFiniteEntry,
    NotHermitian,
    NotPSD,
    NumericalError,
    RouteFailed,
    ShapeMismatch,
    SingularMatrix,
)
from .lstsq import LeastSquaresSolution, kernel_projector, minimizing_set_sample, range_projector, solve_least_squares
from .matrix import (
    ComplexMatrix,
    EmbeddingShape,
    adjoint,
    as_matrix,
    embed_square,
    extract_rect,
    frobenius_norm,
    identity,
    inner_product,
    matmul,
    solve_linear,
    zeros,
)
from .pinv import (
    PenroseReport,
    PinvOptions,
    PinvResult,
    PolynomialInstability,
    pinv,
    pinv_fullrank,
    pinv_polynomial,
    pinv_spectral,
    pinv_svd,
    pinv_tikhonov,
    pinv_via_AstarA,
    regularized_inverse,
    tikhonov_path,
    verify_penrose,
)

__version__ = "0.1.0"
