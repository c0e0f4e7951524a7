"""Compiled loop kernels.

Every function here has a twin of the same name and signature in
``numpy_impl``; results agree to rounding.
"""
import math

import numpy as np
from numba import njit


@njit(cache=True)
def jacobi_eigh(a, tol, max_sweeps):
    """Cyclic Jacobi diagonalization of one complex Hermitian matrix.

    Returns ``(w, v, sweeps)`` with unsorted real eigenvalues ``w`` and
    eigenvectors in the columns of ``v``.
    """
    n = a.shape[0]
    A = a.astype(np.complex128).copy()
    V = np.eye(n, dtype=np.complex128)
    fro = 0.0
    for i in range(n):
        for j in range(n):
            fro += A[i, j].real ** 2 + A[i, j].imag ** 2
    thresh = tol * math.sqrt(fro)
    sweeps = 0
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += A[p, q].real ** 2 + A[p, q].imag ** 2
        if math.sqrt(2.0 * off) <= thresh:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                ph = apq / mag
                phc = ph.conjugate()
                theta = (A[q, q].real - A[p, p].real) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * phc * akq
                    A[k, q] = s * akp + c * phc * akq
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * ph * aqk
                    A[q, k] = s * apk + c * ph * aqk
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                for k in range(n):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - s * phc * vkq
                    V[k, q] = s * vkp + c * phc * vkq
    w = np.empty(n)
    for i in range(n):
        w[i] = A[i, i].real
    return w, V, sweeps


@njit(cache=True)
def _min_eigvec(a, tol, max_sweeps):
    w, v, _ = jacobi_eigh(a, tol, max_sweeps)
    k = 0
    for i in range(1, w.shape[0]):
        if w[i] < w[k]:
            k = i
    return w[k], v[:, k].copy()


@njit(cache=True)
def _expect(rho4, mu, nu):
    dA, dB = mu.shape[0], nu.shape[0]
    acc = 0.0 + 0.0j
    for i in range(dA):
        for j in range(dB):
            bra = (mu[i] * nu[j]).conjugate()
            for k in range(dA):
                for l in range(dB):
                    acc += bra * rho4[i, j, k, l] * mu[k] * nu[l]
    return acc.real


@njit(cache=True)
def seesaw_restarts(rho4, mus, nus, tol, max_iters, eig_tol, max_sweeps):
    """Alternating minimum-eigenvector descent from each row of ``mus``/``nus``.

    ``rho4`` is the state reshaped to ``(dA, dB, dA, dB)``. Returns the final
    factors, objective values, iteration counts, convergence flags and the
    largest increase seen between consecutive half-steps.
    """
    R = mus.shape[0]
    dA = mus.shape[1]
    dB = nus.shape[1]
    out_mu = np.empty((R, dA), dtype=np.complex128)
    out_nu = np.empty((R, dB), dtype=np.complex128)
    values = np.empty(R)
    iters = np.zeros(R, dtype=np.int64)
    converged = np.zeros(R, dtype=np.bool_)
    rise = np.zeros(R)
    A = np.empty((dA, dA), dtype=np.complex128)
    B = np.empty((dB, dB), dtype=np.complex128)
    for r in range(R):
        mu = mus[r].copy()
        nu = nus[r].copy()
        val = _expect(rho4, mu, nu)
        worst = 0.0
        it = 0
        conv = False
        while it < max_iters:
            for i in range(dA):
                for k in range(dA):
                    acc = 0.0 + 0.0j
                    for j in range(dB):
                        for l in range(dB):
                            acc += nu[j].conjugate() * rho4[i, j, k, l] * nu[l]
                    A[i, k] = acc
            half, mu = _min_eigvec(A, eig_tol, max_sweeps)
            if half - val > worst:
                worst = half - val
            for j in range(dB):
                for l in range(dB):
                    acc = 0.0 + 0.0j
                    for i in range(dA):
                        for k in range(dA):
                            acc += mu[i].conjugate() * rho4[i, j, k, l] * mu[k]
                    B[j, l] = acc
            new, nu = _min_eigvec(B, eig_tol, max_sweeps)
            if new - half > worst:
                worst = new - half
            it += 1
            drop = val - new
            val = new
            if drop < tol:
                conv = True
                break
        out_mu[r] = mu
        out_nu[r] = nu
        values[r] = _expect(rho4, mu, nu)
        iters[r] = it
        converged[r] = conv
        rise[r] = worst
    return out_mu, out_nu, values, iters, converged, rise


@njit(cache=True)
def _project_into(v, out):
    n = v.shape[0]
    u = np.sort(v)[::-1]
    css = 0.0
    lam = 0.0
    for j in range(n):
        css += u[j]
        cand = (1.0 - css) / (j + 1)
        if u[j] + cand > 0.0:
            lam = cand
    for i in range(n):
        out[i] = max(v[i] + lam, 0.0)


@njit(cache=True)
def project_simplex(v):
    out = np.empty(v.shape[0])
    _project_into(v, out)
    return out


@njit(cache=True)
def _bilinear_objective(x, y, D, P, Q):
    f = 0.0
    for i in range(x.shape[0]):
        for j in range(y.shape[0]):
            f += x[i] * D[i, j] * y[j]
        for k in range(x.shape[0]):
            f -= x[i] * P[i, k] * x[k]
    for j in range(y.shape[0]):
        for l in range(y.shape[0]):
            f -= y[j] * Q[j, l] * y[l]
    return f


@njit(cache=True)
def simplex_pgd(D, P, Q, xs, ys, step, iters):
    """Projected gradient descent of ``x.D.y - x.P.x - y.Q.y`` over two simplices.

    ``P`` and ``Q`` must be symmetric. Each row of ``xs``/``ys`` is one
    start; returns the best objective value seen along each trajectory and
    the point where it was seen.
    """
    R, dA = xs.shape
    dB = ys.shape[1]
    best = np.empty(R)
    bx = np.empty_like(xs)
    by = np.empty_like(ys)
    x = np.empty(dA)
    y = np.empty(dB)
    tx = np.empty(dA)
    ty = np.empty(dB)
    for r in range(R):
        x[:] = xs[r]
        y[:] = ys[r]
        f = _bilinear_objective(x, y, D, P, Q)
        best[r] = f
        bx[r] = x
        by[r] = y
        for _ in range(iters):
            for i in range(dA):
                g = 0.0
                for j in range(dB):
                    g += D[i, j] * y[j]
                for k in range(dA):
                    g -= 2.0 * P[i, k] * x[k]
                tx[i] = x[i] - step * g
            for j in range(dB):
                g = 0.0
                for i in range(dA):
                    g += D[i, j] * x[i]
                for l in range(dB):
                    g -= 2.0 * Q[j, l] * y[l]
                ty[j] = y[j] - step * g
            _project_into(tx, x)
            _project_into(ty, y)
            f = _bilinear_objective(x, y, D, P, Q)
            if f < best[r]:
                best[r] = f
                bx[r] = x
                by[r] = y
    return best, bx, by
