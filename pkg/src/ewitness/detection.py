"""Spectral-reversal entanglement detection with a PPT cross-check.

For a target state ``pi`` with eigenpairs ``(lambda_i, psi_i)`` sorted
ascending, a candidate spectrum ``gamma`` (also ascending) yields the
commuting state ``rho = sum_i gamma[n-1-i] |psi_i><psi_i|``. Pairing the
orders this way minimizes tr(rho pi) among states with spectrum ``gamma``.
Each candidate is turned into ``W = rho - c*I`` and ``tr(W pi) < 0`` proves
``pi`` entangled. The loop never proves separability.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    BadBasis,
    CountMismatch,
    InvalidC,
    NoWitnessExists,
    OutOfRange,
)
from .linalg import eig_hermitian, partial_transpose
from .states import DensityMatrix, werner_family
from .witness import SeeSawConfig, Witness, certify, evaluate, make_witness

TRACE_TOL = 1e-10
PPT_TOL = 1e-10
DEGENERACY_TOL = 1e-9
EIGENVECTOR_TOL = 1e-8

ENTANGLED_WITNESSED = "entangled_witnessed"
PPT_ENTANGLED_UNWITNESSED = "ppt_entangled_unwitnessed"
NO_WITNESS_FOUND = "no_witness_found"
PPT_SEPARABLE_LIKELY = "ppt_separable_likely"


@dataclass(frozen=True, eq=False)
class SpectrumCandidate:
    gammas: np.ndarray
    source: str

    def __post_init__(self):
        g = np.sort(np.asarray(self.gammas, dtype=float))
        if g.size == 0 or g[0] < 0:
            raise ValueError("candidate spectrum must be nonempty and non-negative")
        if self.source not in ("mirrored", "random_simplex", "user"):
            raise ValueError(f"unknown candidate source {self.source!r}")
        object.__setattr__(self, "gammas", g)


@dataclass(frozen=True)
class DetectConfig:
    """Search budget and witness options.

    ``c_fraction`` places c at ``lambda_min + c_fraction*(c_max - lambda_min)``;
    ``forced_c`` fixes it outright. ``gammas``/``basis`` add a user candidate
    in front of the schedule; ``basis`` columns must be eigenvectors of the
    target state.
    """

    max_candidates: int = 200
    random_candidates: Optional[int] = None
    seed: int = 0
    c_method: str = "exact"
    forced_c: Optional[float] = None
    c_fraction: Optional[float] = None
    gammas: Optional[tuple] = None
    basis: Optional[np.ndarray] = None
    seesaw: SeeSawConfig = field(default_factory=SeeSawConfig)

    def __post_init__(self):
        if self.c_method not in ("exact", "closed_form"):
            raise ValueError(f"c_method must be 'exact' or 'closed_form', got {self.c_method!r}")
        if self.forced_c is not None and self.c_fraction is not None:
            raise ValueError("forced_c and c_fraction are mutually exclusive")
        if self.c_fraction is not None and not 0.0 < self.c_fraction <= 1.0:
            raise ValueError("c_fraction must lie in (0, 1]")
        if self.max_candidates < 1:
            raise ValueError("max_candidates must be >= 1")


@dataclass(frozen=True, eq=False)
class DetectionReport:
    verdict: str
    witness: Optional[Witness]
    trace_value: Optional[float]
    ppt_min_eigenvalue: float
    iterations: int
    trace_log: list
    candidate: Optional[SpectrumCandidate] = None

    @property
    def witnessed(self):
        return self.verdict == ENTANGLED_WITNESSED

    def to_dict(self):
        w = None
        if self.witness is not None:
            cert = self.witness.certificate
            w = {
                "c": self.witness.c,
                "rho": _complex_rows(self.witness.rho.mat),
                "dims": list(self.witness.dims),
                "c_max": None if cert is None else cert.value,
                "c_max_method": None if cert is None else cert.method,
            }
        return {
            "verdict": self.verdict,
            "trace_value": self.trace_value,
            "ppt_min_eigenvalue": self.ppt_min_eigenvalue,
            "iterations": self.iterations,
            "candidate": None if self.candidate is None else {
                "source": self.candidate.source,
                "gammas": self.candidate.gammas.tolist(),
            },
            "witness": w,
            "trace_log": self.trace_log,
        }


def _complex_rows(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def ppt_test(pi):
    """Smallest eigenvalue of the partial transpose on B.

    Negative proves entanglement; for 2x2 and 2x3 systems a non-negative
    value also proves separability.
    """
    return eig_hermitian(partial_transpose(pi.mat, "B", pi.dims)).min


def mirrored_spectrum(pi):
    """Reflect the spectrum of ``pi`` about the midpoint of its range and renormalize.

    ``gamma_i ~ lambda_max + lambda_min - lambda_i``. For the Werner state with
    weight p this gives the family member with q = -p/(1+2p).
    """
    lam = pi.eigenvalues
    g = lam[-1] + lam[0] - lam
    g = np.maximum(g, 0.0)
    if g.sum() <= 0:
        g = np.ones_like(lam)
    return SpectrumCandidate(g / g.sum(), "mirrored")


def _completed_eigenbasis(pi, seed):
    """Eigenbasis of ``pi`` (ascending) with each degenerate block re-drawn from ``seed``."""
    lam = pi.eigenvalues
    vecs = pi.spectral.eigenvectors.copy()
    rng = np.random.default_rng(seed)
    n = lam.size
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and lam[stop] - lam[start] <= DEGENERACY_TOL:
            stop += 1
        k = stop - start
        if k > 1:
            block = vecs[:, start:stop]
            raw = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
            q, r = np.linalg.qr(block @ raw)
            q = q * (np.sign(np.diag(r).real) + (np.diag(r).real == 0))
            vecs[:, start:stop] = q
        start = stop
    return lam, vecs


def _user_eigenbasis(pi, basis):
    basis = np.asarray(basis, dtype=np.complex128)
    n = pi.dim
    if basis.shape != (n, n):
        raise BadBasis(f"basis must be {n}x{n} with vectors in columns, got {basis.shape}")
    if np.max(np.abs(basis.conj().T @ basis - np.eye(n))) > 1e-9:
        raise BadBasis("basis vectors are not orthonormal")
    image = pi.mat @ basis
    ray = np.real(np.einsum("ir,ir->r", basis.conj(), image))
    resid = np.linalg.norm(image - basis * ray, axis=0)
    if np.max(resid) > EIGENVECTOR_TOL:
        bad = int(np.argmax(resid))
        raise BadBasis(f"basis vector {bad} is not an eigenvector of the target state")
    order = np.argsort(ray, kind="stable")
    return ray[order], basis[:, order]


def build_commuting_candidate(pi, gammas, basis_completion_seed=0, basis=None):
    """State sharing the eigenbasis of ``pi`` with the candidate spectrum reversed onto it."""
    if not isinstance(gammas, SpectrumCandidate):
        gammas = SpectrumCandidate(gammas, "user")
    g = gammas.gammas
    if g.size != pi.dim:
        raise CountMismatch(f"{g.size} gammas for a {pi.dim}-dimensional state")
    total = g.sum()
    if total <= 0:
        raise ValueError("candidate spectrum sums to zero")
    g = g / total
    if basis is None:
        _, vecs = _completed_eigenbasis(pi, basis_completion_seed)
    else:
        _, vecs = _user_eigenbasis(pi, basis)
    weights = g[::-1]
    return DensityMatrix((vecs * weights) @ vecs.conj().T, pi.dims)


def _schedule(pi, config):
    out = []
    if config.gammas is not None:
        if len(config.gammas) != pi.dim:
            raise CountMismatch(f"{len(config.gammas)} gammas for a {pi.dim}-dimensional state")
        out.append(SpectrumCandidate(config.gammas, "user"))
    out.append(mirrored_spectrum(pi))
    n_random = config.random_candidates
    if n_random is None:
        n_random = max(config.max_candidates - len(out), 0)
    rng = np.random.default_rng(config.seed)
    for _ in range(n_random):
        if len(out) >= config.max_candidates:
            break
        out.append(SpectrumCandidate(rng.dirichlet(np.ones(pi.dim)), "random_simplex"))
    return out[:config.max_candidates]


def _choose_c(rho, cert, config):
    if config.forced_c is not None:
        return config.forced_c
    if config.c_fraction is not None:
        lam = rho.lambda_min
        return lam + config.c_fraction * (cert.value - lam)
    return None


def detect(pi, config=None):
    """Run candidates until one witnesses ``pi`` or the budget runs out."""
    config = config or DetectConfig()
    ppt_min = ppt_test(pi)
    if config.basis is not None:
        _, vecs = _user_eigenbasis(pi, config.basis)
    else:
        _, vecs = _completed_eigenbasis(pi, config.seed)
    method = "see_saw" if config.c_method == "exact" else "closed_form"
    log = []
    for it, cand in enumerate(_schedule(pi, config), start=1):
        g = cand.gammas / cand.gammas.sum()
        rho = DensityMatrix((vecs * g[::-1]) @ vecs.conj().T, pi.dims)
        entry = {"iteration": it, "source": cand.source, "gammas": cand.gammas.tolist(),
                 "c": None, "c_max": None, "trace": None, "status": "ok"}
        cert = certify(rho, method, config.seesaw, part="modulus")
        entry["c_max"] = cert.value
        try:
            w = make_witness(rho, _choose_c(rho, cert, config), certificate=cert)
        except (NoWitnessExists, InvalidC) as exc:
            entry["status"] = type(exc).__name__
            log.append(entry)
            continue
        tr = evaluate(w, pi)
        entry["c"] = w.c
        entry["trace"] = tr
        log.append(entry)
        if tr < -TRACE_TOL:
            return DetectionReport(ENTANGLED_WITNESSED, w, tr, ppt_min, it, log, cand)
    verdict = PPT_ENTANGLED_UNWITNESSED if ppt_min < -PPT_TOL else PPT_SEPARABLE_LIKELY
    return DetectionReport(verdict, None, None, ppt_min, len(log), log)


FAMILIES = {"werner": werner_family}


@dataclass(frozen=True, eq=False)
class SweepResult:
    family: str
    points: list
    threshold: Optional[float]
    refinements: list


def sweep_family(family, param_grid, config=None, resolution=1e-3):
    """Detect along a one-parameter family and bisect the first verdict flip.

    The flip is taken between the last unwitnessed grid point and the first
    witnessed one after it; bisection stops once the bracket is narrower than
    ``resolution`` and the threshold is its midpoint.
    """
    if family not in FAMILIES:
        raise OutOfRange(f"unknown family {family!r}")
    make = FAMILIES[family]
    grid = [float(p) for p in param_grid]
    if not grid:
        raise ValueError("empty parameter grid")
    config = config or DetectConfig()
    points = [(p, detect(make(p), config)) for p in grid]
    threshold = None
    refinements = []
    for (p0, r0), (p1, r1) in zip(points, points[1:]):
        if not r0.witnessed and r1.witnessed:
            lo, hi = p0, p1
            while hi - lo > resolution:
                mid = 0.5 * (lo + hi)
                rep = detect(make(mid), config)
                refinements.append((mid, rep))
                if rep.witnessed:
                    hi = mid
                else:
                    lo = mid
            threshold = 0.5 * (lo + hi)
            break
    return SweepResult(family, points, threshold, refinements)
