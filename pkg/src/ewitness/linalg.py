"""Dense complex linear algebra for small bipartite operators.

Operators are plain ``numpy`` arrays of shape ``(n, n)``. Functions that need
the bipartite split take ``dims=(d_A, d_B)``; anything carrying ``.mat`` and
``.dims`` attributes (e.g. :class:`ewitness.states.DensityMatrix`) is accepted
in place of the array and supplies its own dims.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimMismatch, MissingDims, NotHermitian

HERMITIAN_TOL = 1e-9
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues ascending; ``eigenvectors[:, r]`` belongs to ``eigenvalues[r]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    @property
    def min(self):
        return float(self.eigenvalues[0])


def _unwrap(M, dims=None):
    if hasattr(M, "mat"):
        return np.asarray(M.mat), dims if dims is not None else getattr(M, "dims", None)
    return np.asarray(M), dims


def _square(M):
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise DimMismatch(f"expected a non-empty square matrix, got shape {M.shape}")


def _check_dims(M, dims):
    if dims is None:
        raise MissingDims("bipartite dims (d_A, d_B) are required")
    dA, dB = (int(d) for d in dims)
    if dA < 1 or dB < 1 or dA * dB != M.shape[0]:
        raise DimMismatch(f"dims {dims} do not factor matrix size {M.shape[0]}")
    return dA, dB


def is_hermitian(M, tol=HERMITIAN_TOL):
    M, _ = _unwrap(M)
    _square(M)
    return bool(np.max(np.abs(M - M.conj().T)) <= tol)


def _canonical_phase(v):
    k = int(np.argmax(np.round(np.abs(v), 12)))
    return v * (abs(v[k]) / v[k])


def eig_hermitian(M, tol=HERMITIAN_TOL):
    """Hermitian eigendecomposition by cyclic Jacobi rotations.

    Output is deterministic: each eigenvector is rotated so its largest
    component is real positive, eigenvalues ascend, and near-equal
    eigenvalues are ordered by their canonicalized vectors.
    """
    M, _ = _unwrap(M)
    _square(M)
    if not is_hermitian(M, tol):
        raise NotHermitian(f"matrix is not Hermitian within {tol:g}")
    H = 0.5 * (M + M.conj().T)
    w, v, sweeps = kernels.jacobi_eigh(H.astype(np.complex128), JACOBI_TOL, JACOBI_MAX_SWEEPS)
    v = np.column_stack([_canonical_phase(v[:, r]) for r in range(v.shape[1])])
    order = _tie_broken_order(w, v)
    return SpectralDecomposition(w[order], v[:, order], int(sweeps))


def _tie_broken_order(w, v):
    order = list(np.argsort(w, kind="stable"))
    scale = max(1.0, float(np.max(np.abs(w))))
    out, group = [], [order[0]]
    for idx in order[1:]:
        if w[idx] - w[group[-1]] <= 1e-12 * scale:
            group.append(idx)
        else:
            out.extend(sorted(group, key=lambda r: _vector_key(v[:, r])))
            group = [idx]
    out.extend(sorted(group, key=lambda r: _vector_key(v[:, r])))
    return np.array(out, dtype=int)


def _vector_key(vec):
    return tuple(np.round(np.column_stack([vec.real, vec.imag]).ravel(), 12) * -1)


def kron(A, B):
    """Kronecker product; returns ``(matrix, (dim A, dim B))``."""
    A, _ = _unwrap(A)
    B, _ = _unwrap(B)
    return np.kron(A, B), (A.shape[0], B.shape[0])


def partial_transpose(M, subsystem="B", dims=None):
    """Transpose the indices of one tensor factor.

    For ``subsystem="A"`` the entry ``<ij|M|kl>`` moves to ``<kj|M|il>``;
    for ``"B"`` it moves to ``<il|M|kj>``.
    """
    M, dims = _unwrap(M, dims)
    _square(M)
    dA, dB = _check_dims(M, dims)
    t = M.reshape(dA, dB, dA, dB)
    if subsystem == "A":
        t = t.transpose(2, 1, 0, 3)
    elif subsystem == "B":
        t = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return t.reshape(dA * dB, dA * dB).copy()


def partial_trace(M, keep="A", dims=None):
    """Trace out the factor not named by ``keep``."""
    M, dims = _unwrap(M, dims)
    _square(M)
    dA, dB = _check_dims(M, dims)
    t = M.reshape(dA, dB, dA, dB)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def _hermitian_pair(H, K, tol):
    H, _ = _unwrap(H)
    K, _ = _unwrap(K)
    _square(H)
    _square(K)
    if H.shape != K.shape:
        raise DimMismatch(f"shapes differ: {H.shape} vs {K.shape}")
    for name, X in (("H", H), ("K", K)):
        if not is_hermitian(X, tol):
            raise NotHermitian(f"{name} is not Hermitian within {tol:g}")
    return H, K


def trace_inner(H, K, tol=HERMITIAN_TOL):
    """Real value of tr(HK) for Hermitian H, K."""
    H, K = _hermitian_pair(H, K, tol)
    val = np.sum(H * K.T)
    scale = max(1.0, float(np.linalg.norm(H) * np.linalg.norm(K)))
    if abs(val.imag) > 1e-12 * scale + tol * scale:
        raise NotHermitian(f"tr(HK) has imaginary part {val.imag:g}")
    return float(val.real)


def trace_bounds(H, K, tol=HERMITIAN_TOL):
    """Spectral bounds ``(lower, upper)`` on tr(HK).

    ``lower`` pairs the eigenvalues of H and K in opposite orders, ``upper``
    in the same order.
    """
    H, K = _hermitian_pair(H, K, tol)
    h = eig_hermitian(H, tol).eigenvalues
    k = eig_hermitian(K, tol).eigenvalues
    return float(np.dot(h, k[::-1])), float(np.dot(h, k))
