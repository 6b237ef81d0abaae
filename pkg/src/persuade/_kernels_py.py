"""Pure-numpy implementation of the hot kernels.

Semantics reference for the compiled extension: `persuade._kernels` must
produce the same results (up to float roundoff) for every function here.
Selected automatically when the extension is not built, or when
PERSUADE_BACKEND=python is set.
"""

from __future__ import annotations

import numpy as np

IMPL = "python"

_SINGULAR_F = 1e7
_COLLAPSED_F = 1e8


def sender_values(recv, slin, sconst, beliefs, tol=1e-9):
    """Sender-preferred-envelope sender value for a batch of beliefs (B, n)."""
    beliefs = np.atleast_2d(beliefs)
    rv = beliefs @ recv.T  # (B, m)
    sv = beliefs @ slin.T + sconst  # (B, m)
    optimal = rv >= rv.max(axis=1, keepdims=True) - tol
    masked = np.where(optimal, sv, -np.inf)
    return masked.max(axis=1)


def receiver_values(recv, slin, sconst, beliefs, tol=1e-9):
    """Receiver value under the same tie-broken action (equals the max)."""
    beliefs = np.atleast_2d(beliefs)
    return (beliefs @ recv.T).max(axis=1)


def eval_supports(recv, slin, sconst, prior, supports, tol=1e-9,
                  res_tol=1e-9, neg_tol=1e-10):
    """Choquet weights and expected sender value for a batch of supports.

    supports: (B, k, n).  Returns (values, feasible, weights); infeasible
    entries get value -inf.
    """
    supports = np.asarray(supports, dtype=float)
    b, k, n = supports.shape
    y = np.append(prior, 1.0)
    t = np.concatenate([supports.transpose(0, 2, 1), np.ones((b, 1, k))], axis=1)  # (B, n+1, k)
    g = t.transpose(0, 2, 1) @ t  # (B, k, k)
    c = t.transpose(0, 2, 1) @ y  # (B, k)
    weights = np.full((b, k), np.nan)
    feasible = np.zeros(b, dtype=bool)
    values = np.full(b, -np.inf)
    det_ok = np.abs(np.linalg.det(g)) > 1e-13
    if np.any(det_ok):
        w_ok = np.linalg.solve(g[det_ok], c[det_ok][..., None])[..., 0]
        weights[det_ok] = w_ok
        res = np.linalg.norm(t[det_ok] @ w_ok[..., None] - y[None, :, None], axis=(1, 2))
        good = (res < res_tol) & (w_ok.min(axis=1) >= -neg_tol)
        idx = np.flatnonzero(det_ok)[good]
        feasible[idx] = True
        if len(idx):
            sv = sender_values(recv, slin, sconst, supports[idx].reshape(-1, n), tol)
            sv = sv.reshape(len(idx), k)
            values[idx] = np.einsum("ij,ij->i", np.clip(weights[idx], 0.0, None), sv)
    return values, feasible, weights


def _objective(z, verts, offsets, recv, slin, sconst, y, pen_coef, tol):
    k = len(offsets) - 1
    n = verts.shape[1]
    mus = np.empty((k, n))
    for i in range(k):
        b = np.abs(z[offsets[i]:offsets[i + 1]])
        s = b.sum()
        if s < 1e-12:
            return _COLLAPSED_F
        mus[i] = (b / s) @ verts[offsets[i]:offsets[i + 1]]
    t = np.vstack([mus.T, np.ones(k)])
    g = t.T @ t
    if abs(np.linalg.det(g)) <= 1e-13:
        return _SINGULAR_F
    w = np.linalg.solve(g, t.T @ y)
    res = np.linalg.norm(t @ w - y)
    value = float(np.clip(w, 0.0, None) @ sender_values(recv, slin, sconst, mus, tol))
    pen = res + np.clip(-w, 0.0, None).sum()
    return -value + pen_coef * pen


def _nelder_mead(f, x0, max_iter, ftol=1e-12, step=0.15):
    d = len(x0)
    simplex = np.tile(x0, (d + 1, 1))
    for i in range(d):
        simplex[i + 1, i] += step
    fvals = np.array([f(x) for x in simplex])
    evals = d + 1
    for _ in range(max_iter):
        order = np.argsort(fvals, kind="stable")
        simplex, fvals = simplex[order], fvals[order]
        if fvals[-1] - fvals[0] < ftol:
            break
        centroid = simplex[:-1].mean(axis=0)
        xr = centroid + (centroid - simplex[-1])
        fr = f(xr)
        evals += 1
        if fr < fvals[0]:
            xe = centroid + 2.0 * (centroid - simplex[-1])
            fe = f(xe)
            evals += 1
            if fe < fr:
                simplex[-1], fvals[-1] = xe, fe
            else:
                simplex[-1], fvals[-1] = xr, fr
        elif fr < fvals[-2]:
            simplex[-1], fvals[-1] = xr, fr
        else:
            xc = centroid + 0.5 * (simplex[-1] - centroid)
            fc = f(xc)
            evals += 1
            if fc < fvals[-1]:
                simplex[-1], fvals[-1] = xc, fc
            else:
                simplex[1:] = simplex[0] + 0.5 * (simplex[1:] - simplex[0])
                fvals[1:] = [f(x) for x in simplex[1:]]
                evals += d
    best = int(np.argmin(fvals))
    return fvals[best], simplex[best], evals


def multistart_nm(verts, offsets, recv, slin, sconst, prior, starts,
                  max_iter=400, pen_coef=1e4, tol=1e-9):
    """Minimize the penalized negative expected value from several starts.

    Returns (best_f, best_z, total_evals).  z holds unnormalized barycentric
    coordinates per belief, sliced by `offsets` into `verts` rows.
    """
    y = np.append(prior, 1.0)
    offsets = np.asarray(offsets, dtype=np.int64)

    def f(z):
        return _objective(z, verts, offsets, recv, slin, sconst, y, pen_coef, tol)

    best_f, best_z, total = np.inf, None, 0
    for x0 in np.atleast_2d(starts):
        fv, zv, ev = _nelder_mead(f, np.asarray(x0, dtype=float), max_iter)
        total += ev
        if fv < best_f:
            best_f, best_z = fv, zv
    return best_f, best_z, total


def barycentric_to_beliefs(z, verts, offsets):
    """Decode an optimizer parameter vector into its k beliefs."""
    k = len(offsets) - 1
    n = verts.shape[1]
    mus = np.empty((k, n))
    for i in range(k):
        b = np.abs(np.asarray(z[offsets[i]:offsets[i + 1]], dtype=float))
        s = b.sum()
        mus[i] = (b / s) @ verts[offsets[i]:offsets[i + 1]] if s > 0 else verts[offsets[i]]
    return mus
