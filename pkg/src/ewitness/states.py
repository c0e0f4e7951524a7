"""Validated bipartite states, the standard state families, and Choi conversions."""
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadDimension,
    ConstraintViolation,
    DimMismatch,
    NotDensityMatrix,
    OutOfRange,
)
from .linalg import HERMITIAN_TOL, SpectralDecomposition, eig_hermitian, is_hermitian

PSD_TOL = 1e-9
TRACE_TOL = 1e-9
KRAUS_CUTOFF = 1e-12
UNIT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A Hermitian PSD operator on C^d_A (x) C^d_B.

    Validated at construction; the spectral decomposition is computed eagerly
    with eigenvalues in ``[-PSD_TOL, 0)`` clamped to zero. ``normalized=False``
    admits states whose trace differs from one, e.g. images of maps that are
    not trace preserving.
    """

    mat: np.ndarray
    dims: tuple
    normalized: bool = True
    spectral: SpectralDecomposition = field(init=False, repr=False)

    def __post_init__(self):
        m = np.array(self.mat, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimMismatch(f"density matrix must be square, got shape {m.shape}")
        dA, dB = (int(d) for d in self.dims)
        if dA < 1 or dB < 1 or dA * dB != m.shape[0]:
            raise DimMismatch(f"dims ({dA}, {dB}) do not match size {m.shape[0]}")
        if not np.all(np.isfinite(m)):
            raise NotDensityMatrix("matrix has non-finite entries")
        if not is_hermitian(m, HERMITIAN_TOL):
            raise NotDensityMatrix(f"matrix is not Hermitian within {HERMITIAN_TOL:g}")
        m = 0.5 * (m + m.conj().T)
        spec = eig_hermitian(m)
        if spec.eigenvalues[0] < -PSD_TOL:
            raise NotDensityMatrix(f"negative eigenvalue {spec.eigenvalues[0]:.3e}")
        tr = float(np.trace(m).real)
        if self.normalized and abs(tr - 1.0) > TRACE_TOL:
            raise NotDensityMatrix(f"trace {tr:.12g} != 1 (pass normalized=False to allow)")
        if tr <= 0.0:
            raise NotDensityMatrix("trace must be positive")
        spec = SpectralDecomposition(np.maximum(spec.eigenvalues, 0.0), spec.eigenvectors,
                                     spec.sweeps)
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)
        object.__setattr__(self, "dims", (dA, dB))
        object.__setattr__(self, "spectral", spec)

    @property
    def dim(self):
        return self.mat.shape[0]

    @property
    def trace(self):
        return float(np.trace(self.mat).real)

    @property
    def eigenvalues(self):
        return self.spectral.eigenvalues

    @property
    def lambda_min(self):
        return float(self.spectral.eigenvalues[0])

    @property
    def min_diagonal(self):
        return float(np.min(np.diag(self.mat).real))

    def tensor(self):
        """Entries as a ``(d_A, d_B, d_A, d_B)`` array, ``[i, j, k, l] = <ij|rho|kl>``."""
        dA, dB = self.dims
        return self.mat.reshape(dA, dB, dA, dB)

    def scaled(self, gamma):
        return DensityMatrix(gamma * self.mat, self.dims, normalized=False)


@dataclass(frozen=True, eq=False)
class ProductVector:
    mu: np.ndarray
    nu: np.ndarray
    joint: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=np.complex128).ravel()
        nu = np.asarray(self.nu, dtype=np.complex128).ravel()
        for name, v in (("mu", mu), ("nu", nu)):
            if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
                raise ConstraintViolation(f"{name} is not a unit vector")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "joint", np.kron(mu, nu))

    @classmethod
    def normalized(cls, mu, nu):
        mu = np.asarray(mu, dtype=np.complex128)
        nu = np.asarray(nu, dtype=np.complex128)
        return cls(mu / np.linalg.norm(mu), nu / np.linalg.norm(nu))

    @property
    def dims(self):
        return (self.mu.shape[0], self.nu.shape[0])

    def projector(self):
        return np.outer(self.joint, self.joint.conj())

    def expectation(self, op):
        op = getattr(op, "mat", op)
        return float(np.real(self.joint.conj() @ op @ self.joint))


@dataclass(frozen=True)
class KrausSet:
    """Kraus operators U_r of a map from C^d_A to C^d_B; each is ``(d_B, d_A)``."""

    ops: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(u, dtype=np.complex128) for u in self.ops)
        if not ops:
            raise DimMismatch("Kraus set must be nonempty")
        shape = ops[0].shape
        if len(shape) != 2 or any(u.shape != shape for u in ops):
            raise DimMismatch("Kraus operators must share one 2-D shape")
        object.__setattr__(self, "ops", ops)

    def __len__(self):
        return len(self.ops)

    @property
    def dims(self):
        dB, dA = self.ops[0].shape
        return dA, dB

    def apply(self, X):
        return sum(u @ X @ u.conj().T for u in self.ops)

    def is_trace_preserving(self, tol=1e-9):
        s = sum(u.conj().T @ u for u in self.ops)
        return bool(np.max(np.abs(s - np.eye(s.shape[0]))) <= tol)


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _pure(psi, dims):
    psi = np.asarray(psi, dtype=np.complex128)
    return DensityMatrix(np.outer(psi, psi.conj()), dims)


def bell_vector():
    return np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2)


def max_entangled(d):
    """Projector onto d^(-1/2) sum_i |i>|i>."""
    if int(d) != d or d < 2:
        raise BadDimension(f"d must be an integer >= 2, got {d}")
    d = int(d)
    beta = np.zeros(d * d, dtype=np.complex128)
    beta[np.arange(d) * (d + 1)] = 1.0 / np.sqrt(d)
    return _pure(beta, (d, d))


def maximally_mixed(dA, dB):
    n = dA * dB
    return DensityMatrix(np.eye(n) / n, (dA, dB))


def werner_family(p):
    """p |psi><psi| + (1 - p) I/4 for the Bell vector |psi> = (|00> + |11>)/sqrt(2)."""
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"p must lie in [0, 1], got {p}")
    psi = bell_vector()
    return DensityMatrix(p * np.outer(psi, psi.conj()) + (1.0 - p) * np.eye(4) / 4, (2, 2))


def rho_q_family(q):
    """The two-qubit state with diagonal ((1+q)/4, (1-q)/4, (1-q)/4, (1+q)/4) and corners q/2."""
    if not -1.0 / 3.0 - 1e-15 <= q < 0.0:
        raise OutOfRange(f"q must lie in [-1/3, 0), got {q}")
    a, b = (1 + q) / 4, (1 - q) / 4
    m = np.diag([a, b, b, a]).astype(np.complex128)
    m[0, 3] = m[3, 0] = q / 2
    return DensityMatrix(m, (2, 2))


def bell_example_basis():
    """Columns |psi>, |01>, |10>, |phi> with |phi> = (-|00> + |11>)/sqrt(2)."""
    s = 1 / np.sqrt(2)
    return np.array([
        [s, 0, 0, -s],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [s, 0, 0, s],
    ], dtype=np.complex128)


def bell_example_state(a, b):
    """a|psi><psi| + b(|01><01| + |10><10| + |phi><phi|) with a + 3b = 1, b > a > 0."""
    if a <= 0 or b <= 0:
        raise ConstraintViolation("a and b must be positive")
    if abs(a + 3 * b - 1) > 1e-12:
        raise ConstraintViolation(f"a + 3b must equal 1, got {a + 3 * b!r}")
    if not b > a:
        raise ConstraintViolation("require b > a")
    basis = bell_example_basis()
    return DensityMatrix((basis * np.array([a, b, b, b])) @ basis.conj().T, (2, 2))


def random_product_vector(dA, dB, seed=None):
    """Haar-random unit vectors on each factor (normalized complex Gaussians)."""
    if dA < 2 or dB < 2:
        raise BadDimension("factor dimensions must be >= 2")
    rng = _rng(seed)
    mu = rng.normal(size=dA) + 1j * rng.normal(size=dA)
    nu = rng.normal(size=dB) + 1j * rng.normal(size=dB)
    return ProductVector.normalized(mu, nu)


def random_density_matrix(dims, seed=None, rank=None):
    """Ginibre-induced random state of the given rank (full rank by default)."""
    rng = _rng(seed)
    n = dims[0] * dims[1]
    k = n if rank is None else rank
    G = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    m = G @ G.conj().T
    return DensityMatrix(m / np.trace(m).real, dims)


def random_separable_state(dims, seed=None, terms=None):
    """Convex mixture of Haar-random pure product states with Dirichlet weights."""
    rng = _rng(seed)
    dA, dB = dims
    k = terms if terms is not None else int(rng.integers(1, dA * dB + 3))
    weights = rng.dirichlet(np.ones(k))
    m = np.zeros((dA * dB, dA * dB), dtype=np.complex128)
    for w in weights:
        pv = random_product_vector(dA, dB, rng)
        m += w * pv.projector()
    return DensityMatrix(m, dims)


def state_from_kraus(k):
    """(I (x) Lambda)(P_+) for Lambda(X) = sum_r U_r X U_r^dagger.

    ``P_+`` lives on C^d_A (x) C^d_A; the result is on C^d_A (x) C^d_B and is
    flagged unnormalized when its trace is not one.
    """
    if not isinstance(k, KrausSet):
        k = KrausSet(tuple(k))
    dA, dB = k.dims
    # (I (x) U)|beta> has amplitude U[n, m] / sqrt(dA) on |m>|n>
    vecs = np.stack([u.T.reshape(-1) for u in k.ops]) / np.sqrt(dA)
    m = vecs.T @ vecs.conj()
    tr = float(np.trace(m).real)
    return DensityMatrix(m, (dA, dB), normalized=abs(tr - 1.0) <= TRACE_TOL)


def kraus_from_state(rho):
    """Kraus operators U_r = sqrt(lambda_r) V_r with V_r[n, m] = sqrt(d_A) <mn|psi_r>.

    Eigenpairs with lambda_r <= 1e-12 are dropped.
    """
    dA, dB = rho.dims
    ops = []
    for lam, psi in zip(rho.spectral.eigenvalues, rho.spectral.eigenvectors.T):
        if lam <= KRAUS_CUTOFF:
            continue
        a = psi.reshape(dA, dB)
        ops.append(np.sqrt(lam) * np.sqrt(dA) * a.T)
    return KrausSet(tuple(ops))


def depolarizing_kraus(dA, dB, p=1.0):
    """Kraus set of X -> p tr(X) I/d_B: operators sqrt(p/d_B) |j><i|."""
    ops = []
    for i in range(dA):
        for j in range(dB):
            e = np.zeros((dB, dA), dtype=np.complex128)
            e[j, i] = np.sqrt(p / dB)
            ops.append(e)
    return KrausSet(tuple(ops))
