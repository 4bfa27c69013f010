"""Central extensions and explicit spectral measures of matrix covariance
sequences on the unit circle."""

from .caratheodory import (
    CaratheodoryQuotient,
    caratheodory_check,
    caratheodory_first_failure,
    central_quotient,
    pd_polynomials,
    phi_at,
    radial_atom_limit,
    rational_values,
    taylor_coefficients,
)
from .central import (
    NOT_CENTRAL,
    GammaSeq,
    central_extend,
    central_order,
    covariance_from_gamma,
    gamma_from_covariance,
)
from .errors import (
    DegenerateZeroError,
    DimensionError,
    InvalidInputError,
    MatSpecError,
    ModelError,
    MultiplicityError,
    NoLimitError,
)
from .linalg import (
    adjugate,
    im_mat,
    is_nonneg_hermitian,
    is_unitary,
    numerical_rank,
    pinv,
    psd_sqrt,
    re_mat,
    spec_norm,
)
from .matpoly import (
    MatPoly,
    UnimodularRoot,
    adjugate_poly,
    det_poly,
    matpoly_mul,
    pole_limit,
    unimodular_roots,
)
from .measure import (
    ArOrderMismatchWarning,
    Atom,
    Provenance,
    RecoveryReport,
    SpectralMeasure,
    ar_spectrum,
    atomic_measure,
    central_measure,
    compute_atoms,
    density_at,
    fourier_coeff,
    herglotz_transform,
    pd_density,
    pd_measure,
    verify_recovery,
)
from .serialize import (
    doc_to_measure,
    doc_to_sequence,
    dumps,
    hermitian_from_lower,
    loads,
    mat_to_wire,
    measure_to_doc,
    sequence_to_doc,
    wire_to_mat,
)
from .toeplitz import (
    Classification,
    HermSeq,
    MatrixBall,
    ToeplitzBundle,
    ball_membership,
    ball_params,
    build_bundle,
    classify,
    conjugate_by_unitary,
    first_violation,
    rank_drop,
    toeplitz_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "adjugate",
    "adjugate_poly",
    "ar_spectrum",
    "ArOrderMismatchWarning",
    "Atom",
    "atomic_measure",
    "ball_membership",
    "ball_params",
    "build_bundle",
    "caratheodory_check",
    "caratheodory_first_failure",
    "CaratheodoryQuotient",
    "central_extend",
    "central_measure",
    "central_order",
    "central_quotient",
    "Classification",
    "classify",
    "compute_atoms",
    "conjugate_by_unitary",
    "covariance_from_gamma",
    "DegenerateZeroError",
    "density_at",
    "det_poly",
    "DimensionError",
    "doc_to_measure",
    "doc_to_sequence",
    "dumps",
    "first_violation",
    "fourier_coeff",
    "gamma_from_covariance",
    "GammaSeq",
    "herglotz_transform",
    "hermitian_from_lower",
    "HermSeq",
    "im_mat",
    "InvalidInputError",
    "is_nonneg_hermitian",
    "is_unitary",
    "loads",
    "mat_to_wire",
    "MatPoly",
    "matpoly_mul",
    "MatrixBall",
    "MatSpecError",
    "measure_to_doc",
    "ModelError",
    "MultiplicityError",
    "NoLimitError",
    "NOT_CENTRAL",
    "numerical_rank",
    "pd_density",
    "pd_measure",
    "pd_polynomials",
    "phi_at",
    "pinv",
    "pole_limit",
    "Provenance",
    "psd_sqrt",
    "radial_atom_limit",
    "rank_drop",
    "rational_values",
    "re_mat",
    "RecoveryReport",
    "sequence_to_doc",
    "spec_norm",
    "SpectralMeasure",
    "taylor_coefficients",
    "toeplitz_matrix",
    "ToeplitzBundle",
    "unimodular_roots",
    "UnimodularRoot",
    "verify_recovery",
    "wire_to_mat",
]
