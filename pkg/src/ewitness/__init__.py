"""Entanglement witnesses W = rho - c*I for bipartite states."""
from .detection import (
    DetectConfig,
    DetectionReport,
    SpectrumCandidate,
    build_commuting_candidate,
    detect,
    mirrored_spectrum,
    ppt_test,
    sweep_family,
)
from .errors import (
    BadBasis,
    BadDimension,
    ConstraintViolation,
    CountMismatch,
    DimMismatch,
    InvalidC,
    MissingDims,
    NoWitnessExists,
    NotDensityMatrix,
    NotHermitian,
    OutOfRange,
    StateFileError,
    WitnessError,
)
from .linalg import (
    SpectralDecomposition,
    eig_hermitian,
    is_hermitian,
    kron,
    partial_trace,
    partial_transpose,
    trace_bounds,
    trace_inner,
)
from .states import (
    DensityMatrix,
    KrausSet,
    ProductVector,
    bell_example_state,
    kraus_from_state,
    max_entangled,
    random_product_vector,
    rho_q_family,
    state_from_kraus,
    werner_family,
)
from .witness import (
    CMaxResult,
    SeeSawConfig,
    Witness,
    c_bound_closed_form,
    c_max_exact,
    evaluate,
    make_witness,
    min_eigenvalue_check,
)

__version__ = "0.1.0"
