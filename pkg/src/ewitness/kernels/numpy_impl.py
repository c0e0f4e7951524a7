"""Vectorized NumPy kernels, batched over the leading axis where it pays off.

Same algorithms and signatures as ``numba_impl``.
"""
import numpy as np


def jacobi_eigh_batch(a, tol, max_sweeps):
    """Cyclic Jacobi on a stack ``(R, n, n)`` of Hermitian matrices.

    All members share the rotation schedule; a member stops being counted
    once its off-diagonal mass drops below ``tol * ||a||_F``.
    """
    A = np.array(a, dtype=np.complex128, copy=True)
    R, n, _ = A.shape
    V = np.broadcast_to(np.eye(n, dtype=np.complex128), A.shape).copy()
    thresh = tol * np.sqrt(np.sum(np.abs(A) ** 2, axis=(1, 2)))
    iu = np.triu_indices(n, 1)
    sweeps = np.zeros(R, dtype=np.int64)
    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(np.abs(A[:, iu[0], iu[1]]) ** 2, axis=1))
        active = off > thresh
        if not active.any():
            break
        sweeps += active
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[:, p, q]
                mag = np.abs(apq)
                live = mag > 0.0
                if not live.any():
                    continue
                safe = np.where(live, mag, 1.0)
                ph = np.where(live, apq / safe, 1.0)
                theta = (A[:, q, q].real - A[:, p, p].real) / (2.0 * safe)
                with np.errstate(over="ignore"):
                    t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                t = np.where(theta == 0.0, 1.0, t)
                t = np.where(live, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                phc = ph.conj()
                cc = c[:, None]
                sc = (s * phc)[:, None]
                cq = (c * phc)[:, None]
                colp, colq = A[:, :, p].copy(), A[:, :, q].copy()
                A[:, :, p] = cc * colp - sc * colq
                A[:, :, q] = s[:, None] * colp + cq * colq
                rowp, rowq = A[:, p, :].copy(), A[:, q, :].copy()
                A[:, p, :] = cc * rowp - (s * ph)[:, None] * rowq
                A[:, q, :] = s[:, None] * rowp + (c * ph)[:, None] * rowq
                A[live, p, q] = 0.0
                A[live, q, p] = 0.0
                A[:, p, p] = A[:, p, p].real
                A[:, q, q] = A[:, q, q].real
                vp, vq = V[:, :, p].copy(), V[:, :, q].copy()
                V[:, :, p] = cc * vp - sc * vq
                V[:, :, q] = s[:, None] * vp + cq * vq
    w = np.real(np.diagonal(A, axis1=1, axis2=2)).copy()
    return w, V, sweeps


def jacobi_eigh(a, tol, max_sweeps):
    w, v, sweeps = jacobi_eigh_batch(np.asarray(a)[None], tol, max_sweeps)
    return w[0], v[0], int(sweeps[0])


def _min_eigvecs(mats, tol, max_sweeps):
    w, v, _ = jacobi_eigh_batch(mats, tol, max_sweeps)
    k = np.argmin(w, axis=1)
    idx = np.arange(w.shape[0])
    return w[idx, k], v[idx, :, k]


def _expect(rho4, mu, nu):
    return np.einsum("ri,rj,ijkl,rk,rl->r", mu.conj(), nu.conj(), rho4, mu, nu,
                     optimize=True).real


def seesaw_restarts(rho4, mus, nus, tol, max_iters, eig_tol, max_sweeps):
    mu = np.array(mus, dtype=np.complex128, copy=True)
    nu = np.array(nus, dtype=np.complex128, copy=True)
    R = mu.shape[0]
    val = _expect(rho4, mu, nu)
    rise = np.zeros(R)
    iters = np.zeros(R, dtype=np.int64)
    converged = np.zeros(R, dtype=bool)
    running = np.ones(R, dtype=bool)
    for _ in range(max_iters):
        idx = np.flatnonzero(running)
        if idx.size == 0:
            break
        A = np.einsum("rj,ijkl,rl->rik", nu[idx].conj(), rho4, nu[idx], optimize=True)
        half, mu_new = _min_eigvecs(A, eig_tol, max_sweeps)
        B = np.einsum("ri,ijkl,rk->rjl", mu_new.conj(), rho4, mu_new, optimize=True)
        new, nu_new = _min_eigvecs(B, eig_tol, max_sweeps)
        rise[idx] = np.maximum(rise[idx], np.maximum(half - val[idx], new - half))
        mu[idx] = mu_new
        nu[idx] = nu_new
        iters[idx] += 1
        drop = val[idx] - new
        val[idx] = new
        done = drop < tol
        converged[idx[done]] = True
        running[idx[done]] = False
    return mu, nu, _expect(rho4, mu, nu), iters, converged, rise


def project_simplex_rows(v):
    """Euclidean projection of each row of ``v`` onto the probability simplex."""
    v = np.atleast_2d(v)
    n = v.shape[1]
    u = -np.sort(-v, axis=1)
    css = np.cumsum(u, axis=1)
    k = np.arange(1, n + 1)
    cand = (1.0 - css) / k
    ok = u + cand > 0.0
    last = n - 1 - np.argmax(ok[:, ::-1], axis=1)
    lam = cand[np.arange(v.shape[0]), last]
    return np.maximum(v + lam[:, None], 0.0)


def project_simplex(v):
    return project_simplex_rows(np.asarray(v, dtype=float)[None])[0]


def _objective_rows(x, y, D, P, Q):
    return (np.einsum("ri,ij,rj->r", x, D, y)
            - np.einsum("ri,ij,rj->r", x, P, x)
            - np.einsum("ri,ij,rj->r", y, Q, y))


def simplex_pgd(D, P, Q, xs, ys, step, iters):
    x = np.array(xs, dtype=float, copy=True)
    y = np.array(ys, dtype=float, copy=True)
    best = _objective_rows(x, y, D, P, Q)
    bx, by = x.copy(), y.copy()
    for _ in range(iters):
        gx = y @ D.T - 2.0 * x @ P
        gy = x @ D - 2.0 * y @ Q
        x = project_simplex_rows(x - step * gx)
        y = project_simplex_rows(y - step * gy)
        f = _objective_rows(x, y, D, P, Q)
        better = f < best
        best = np.where(better, f, best)
        bx[better] = x[better]
        by[better] = y[better]
    return best, bx, by
