"""Witnesses W = rho - c*I and the constants that make them valid.

Two routes to the admissible constant:

* :func:`c_bound_closed_form` minimizes an entrywise lower bound on
  ``<mu nu|rho|mu nu>`` that depends only on the magnitude profiles
  ``|d_i|^2`` and ``|f_j|^2`` of the product vector.
* :func:`c_max_exact` estimates ``inf <mu nu|rho|mu nu>`` over unit product
  vectors by see-saw: alternately replace one factor by the minimum
  eigenvector of the operator conditioned on the other factor.

``rho - c*I`` is a witness iff ``lambda_min(rho) < c <= c_max``.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .errors import DimMismatch, InvalidC, MissingDims, NoWitnessExists
from .linalg import JACOBI_MAX_SWEEPS, JACOBI_TOL, trace_inner
from .states import DensityMatrix, ProductVector

WITNESS_GAP_TOL = 1e-10
C_MAX_TOL = 1e-10

PGD_RESTARTS = 20
PGD_STEP = 0.1
PGD_ITERS = 200


@dataclass(frozen=True)
class SeeSawConfig:
    restarts: int = 50
    max_iters: int = 500
    tol: float = 1e-12
    seed: int = 0


@dataclass(frozen=True, eq=False)
class CMaxResult:
    value: float
    minimizer: ProductVector
    restarts_used: int
    converged: bool
    history: np.ndarray
    iterations: np.ndarray = field(repr=False)
    max_rise: float = 0.0


@dataclass(frozen=True, eq=False)
class Certificate:
    value: float
    minimizer: Optional[ProductVector]
    method: str


@dataclass(frozen=True, eq=False)
class Witness:
    """W = rho - c*I, optionally carrying the c_max certificate it was checked against."""

    rho: DensityMatrix
    c: float
    certificate: Optional[Certificate] = None

    @property
    def dims(self):
        return self.rho.dims

    @property
    def matrix(self):
        return self.rho.mat - self.c * np.eye(self.rho.dim)

    def expectation(self, pv):
        return pv.expectation(self.rho) - self.c * float(np.vdot(pv.joint, pv.joint).real)


def _profile_coefficients(rho, part):
    """Quadratic-form pieces of the closed-form bound.

    The bound equals ``x.D.y - x.P.x - y.Q.y`` for magnitude profiles
    ``x_i = |d_i|^2`` and ``y_j = |f_j|^2``.
    """
    if rho.dims is None:
        raise MissingDims("closed-form bound needs bipartite dims")
    dA, dB = rho.dims
    t = rho.tensor()
    if part == "real":
        mag = np.abs(t.real)
    elif part == "modulus":
        mag = np.abs(t)
    else:
        raise ValueError(f"part must be 'real' or 'modulus', got {part!r}")
    D = np.einsum("ijij->ij", t.real).copy()
    upper_b = np.triu(np.ones((dB, dB)), 1)
    upper_a = np.triu(np.ones((dA, dA)), 1)
    # same A index, j < l
    same_a = np.einsum("ijil->ijl", mag) * upper_b
    # i < k, all j, l
    cross = mag * upper_a[:, None, :, None]
    P = np.diag(2.0 * same_a.sum(axis=(1, 2)))
    off = cross.sum(axis=(1, 3))
    P = P + off + off.T
    M = 2.0 * same_a.sum(axis=0) + 2.0 * cross.sum(axis=(0, 2))
    Q = 0.5 * (M + M.T)
    return D, P, Q


def closed_form_value(rho, x, y, part="real"):
    """Evaluate the closed-form bound at magnitude profiles ``x``, ``y``."""
    D, P, Q = _profile_coefficients(rho, part)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(x @ D @ y - x @ P @ x - y @ Q @ y)


def closed_form_minimize(rho, part="real", restarts=PGD_RESTARTS, seed=0):
    """Minimize the closed-form bound over both simplices; returns ``(value, x, y)``.

    Starts: the barycenter, every vertex pair, and ``restarts`` Dirichlet
    draws; projected gradient descent with fixed step from each.
    """
    D, P, Q = _profile_coefficients(rho, part)
    dA, dB = rho.dims
    rng = np.random.default_rng(seed)
    xs = [np.full(dA, 1.0 / dA)]
    ys = [np.full(dB, 1.0 / dB)]
    for i in range(dA):
        for j in range(dB):
            xs.append(np.eye(dA)[i])
            ys.append(np.eye(dB)[j])
    xs.extend(rng.dirichlet(np.ones(dA), size=restarts))
    ys.extend(rng.dirichlet(np.ones(dB), size=restarts))
    best, bx, by = kernels.simplex_pgd(D, P, Q, np.array(xs), np.array(ys), PGD_STEP, PGD_ITERS)
    k = int(np.argmin(best))
    return float(best[k]), bx[k], by[k]


def c_bound_closed_form(rho, part="real"):
    """Smallest value of the closed-form bound over all product-vector magnitude profiles.

    With ``part="real"`` only real parts of the off-diagonal entries enter,
    which is a valid bound for real ``rho``. ``part="modulus"`` uses ``|rho_ijkl|``
    and stays valid for complex entries. A negative result certifies nothing.
    """
    return closed_form_minimize(rho, part)[0]


def _start_vectors(dims, restarts, seed):
    dA, dB = dims
    children = np.random.SeedSequence(seed).spawn(restarts)
    mus = np.empty((restarts + 1, dA), dtype=np.complex128)
    nus = np.empty((restarts + 1, dB), dtype=np.complex128)
    for r, child in enumerate(children):
        rng = np.random.default_rng(child)
        mu = rng.normal(size=dA) + 1j * rng.normal(size=dA)
        nu = rng.normal(size=dB) + 1j * rng.normal(size=dB)
        mus[r] = mu / np.linalg.norm(mu)
        nus[r] = nu / np.linalg.norm(nu)
    return mus, nus


def c_max_exact(rho, config=None):
    """Estimate ``inf <mu nu|rho|mu nu>`` over unit product vectors.

    Runs the see-saw from ``config.restarts`` seeded random product vectors
    plus the computational basis vector on the smallest diagonal entry, and
    keeps the lowest final value (earliest restart on ties). The value is an
    upper estimate of the infimum: it is attained by the returned minimizer.
    """
    config = config or SeeSawConfig()
    dA, dB = rho.dims
    mus, nus = _start_vectors(rho.dims, config.restarts, config.seed)
    k = int(np.argmin(np.diag(rho.mat).real))
    mus[-1] = np.eye(dA)[k // dB]
    nus[-1] = np.eye(dB)[k % dB]
    out_mu, out_nu, values, iters, conv, rise = kernels.seesaw_restarts(
        np.ascontiguousarray(rho.tensor()), mus, nus, config.tol, config.max_iters,
        JACOBI_TOL, JACOBI_MAX_SWEEPS)
    best = int(np.argmin(values))
    minimizer = ProductVector.normalized(out_mu[best], out_nu[best])
    return CMaxResult(
        value=minimizer.expectation(rho),
        minimizer=minimizer,
        restarts_used=len(values),
        converged=bool(conv[best]),
        history=np.asarray(values),
        iterations=np.asarray(iters),
        max_rise=float(np.max(rise)),
    )


def certify(rho, method="see_saw", config=None, part="real"):
    if method == "see_saw":
        res = c_max_exact(rho, config)
        return Certificate(res.value, res.minimizer, "see_saw")
    if method == "closed_form":
        value, x, y = closed_form_minimize(rho, part)
        return Certificate(value, ProductVector.normalized(np.sqrt(x), np.sqrt(y)), "closed_form")
    raise ValueError(f"unknown method {method!r}")


def make_witness(rho, c=None, config=None, method="see_saw", part="real", certificate=None):
    """Build ``rho - c*I`` after checking ``lambda_min(rho) < c <= c_max``.

    ``c`` defaults to the certified ``c_max``. Raises :class:`NoWitnessExists`
    when ``c_max`` does not exceed ``lambda_min`` and :class:`InvalidC` when a
    supplied ``c`` falls outside the admissible interval.
    """
    cert = certificate or certify(rho, method, config, part)
    lam = rho.lambda_min
    if cert.value <= lam + WITNESS_GAP_TOL:
        raise NoWitnessExists(
            f"c_max = {cert.value:.12g} does not exceed lambda_min = {lam:.12g}")
    if c is None:
        c = cert.value
    c = float(c)
    if not lam < c <= cert.value + C_MAX_TOL:
        raise InvalidC(f"c = {c:.12g} outside ({lam:.12g}, {cert.value:.12g}]")
    if c > rho.min_diagonal + C_MAX_TOL:
        raise InvalidC(f"c = {c:.12g} exceeds the smallest diagonal entry {rho.min_diagonal:.12g}")
    return Witness(rho, c, cert)


def evaluate(w, pi):
    """tr(W pi) = tr(rho pi) - c tr(pi); negative values certify that ``pi`` is entangled."""
    if w.rho.dims != pi.dims:
        raise DimMismatch(f"witness dims {w.rho.dims} vs state dims {pi.dims}")
    return trace_inner(w.rho.mat, pi.mat) - w.c * pi.trace


def min_eigenvalue_check(w):
    """lambda_min(W) = lambda_min(rho) - c, negative for every valid witness."""
    return w.rho.lambda_min - w.c


def scale_witness(w, gamma):
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    cert = w.certificate
    if cert is not None:
        cert = Certificate(gamma * cert.value, cert.minimizer, cert.method)
    return Witness(w.rho.scaled(gamma), gamma * w.c, cert)


def sampled_product_minimum(w, samples=10_000, seed=0):
    """Smallest ``<mu nu|W|mu nu>`` over Haar-random product vectors."""
    dA, dB = w.dims
    rng = np.random.default_rng(seed)
    mu = rng.normal(size=(samples, dA)) + 1j * rng.normal(size=(samples, dA))
    nu = rng.normal(size=(samples, dB)) + 1j * rng.normal(size=(samples, dB))
    mu /= np.linalg.norm(mu, axis=1, keepdims=True)
    nu /= np.linalg.norm(nu, axis=1, keepdims=True)
    joint = np.einsum("ri,rj->rij", mu, nu).reshape(samples, dA * dB)
    vals = np.einsum("ri,ij,rj->r", joint.conj(), w.matrix, joint).real
    return float(vals.min())
