# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: batch sender values, Choquet weight solves and the
multi-start Nelder-Mead inner loop.  Mirrors `persuade._kernels_py`."""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, fabs, sqrt

cnp.import_array()

IMPL = "cython"

DEF MAXK = 9       # supports per structure (k <= 5 in scope, slack for tests)
DEF MAXN = 10      # states + 1
DEF MAXD = 96      # optimizer dimension

cdef double _SINGULAR_F = 1e7
cdef double _COLLAPSED_F = 1e8


cdef double _sender_value_one(double[:, ::1] recv, double[:, ::1] slin,
                              double[::1] sconst, double* mu,
                              int n, int m, double tol) noexcept nogil:
    cdef double rmax = -INFINITY, best = -INFINITY, rv, sv
    cdef int a, j
    for a in range(m):
        rv = 0.0
        for j in range(n):
            rv += recv[a, j] * mu[j]
        if rv > rmax:
            rmax = rv
    for a in range(m):
        rv = 0.0
        for j in range(n):
            rv += recv[a, j] * mu[j]
        if rv >= rmax - tol:
            sv = sconst[a]
            for j in range(n):
                sv += slin[a, j] * mu[j]
            if sv > best:
                best = sv
    return best


cdef int _solve_weights(double* mus, int k, int n, double* y,
                        double* w, double* res_out) noexcept nogil:
    """Least-squares weights via normal equations on the augmented system.

    mus is row-major (k, n); y has length n+1 with trailing 1.  Returns 0 on
    success, -1 when the Gram matrix is numerically singular.
    """
    cdef double g[MAXK * MAXK]
    cdef double c[MAXK]
    cdef int i, i2, j, p, piv, row
    cdef double acc, pmax, tmp, factor, res, rj
    for i in range(k):
        for i2 in range(k):
            acc = 1.0  # augmented row of ones
            for j in range(n):
                acc += mus[i * n + j] * mus[i2 * n + j]
            g[i * k + i2] = acc
        acc = y[n]
        for j in range(n):
            acc += mus[i * n + j] * y[j]
        c[i] = acc
    # gaussian elimination with partial pivoting
    for p in range(k):
        piv = p
        pmax = fabs(g[p * k + p])
        for row in range(p + 1, k):
            if fabs(g[row * k + p]) > pmax:
                pmax = fabs(g[row * k + p])
                piv = row
        if pmax <= 1e-13:
            return -1
        if piv != p:
            for j in range(k):
                tmp = g[p * k + j]
                g[p * k + j] = g[piv * k + j]
                g[piv * k + j] = tmp
            tmp = c[p]
            c[p] = c[piv]
            c[piv] = tmp
        for row in range(p + 1, k):
            factor = g[row * k + p] / g[p * k + p]
            for j in range(p, k):
                g[row * k + j] -= factor * g[p * k + j]
            c[row] -= factor * c[p]
    for p in range(k - 1, -1, -1):
        acc = c[p]
        for j in range(p + 1, k):
            acc -= g[p * k + j] * w[j]
        w[p] = acc / g[p * k + p]
    res = 0.0
    for j in range(n + 1):
        rj = -y[j]
        for i in range(k):
            if j < n:
                rj += mus[i * n + j] * w[i]
            else:
                rj += w[i]
        res += rj * rj
    res_out[0] = sqrt(res)
    return 0


def sender_values(double[:, ::1] recv, double[:, ::1] slin, double[::1] sconst,
                  beliefs, double tol=1e-9):
    cdef cnp.ndarray[double, ndim=2] b = np.ascontiguousarray(np.atleast_2d(beliefs), dtype=np.float64)
    cdef int nb = b.shape[0], n = b.shape[1], m = recv.shape[0], i
    cdef cnp.ndarray[double, ndim=1] out = np.empty(nb)
    cdef double[:, ::1] bv = b
    for i in range(nb):
        out[i] = _sender_value_one(recv, slin, sconst, &bv[i, 0], n, m, tol)
    return out


def receiver_values(double[:, ::1] recv, double[:, ::1] slin, double[::1] sconst,
                    beliefs, double tol=1e-9):
    b = np.atleast_2d(np.asarray(beliefs, dtype=np.float64))
    return (b @ np.asarray(recv).T).max(axis=1)


def eval_supports(double[:, ::1] recv, double[:, ::1] slin, double[::1] sconst,
                  prior, supports, double tol=1e-9,
                  double res_tol=1e-9, double neg_tol=1e-10):
    cdef cnp.ndarray[double, ndim=3] sup = np.ascontiguousarray(supports, dtype=np.float64)
    cdef int nb = sup.shape[0], k = sup.shape[1], n = sup.shape[2]
    cdef int m = recv.shape[0], i, t, j, ok
    cdef cnp.ndarray[double, ndim=1] yarr = np.append(np.asarray(prior, dtype=np.float64), 1.0)
    cdef cnp.ndarray[double, ndim=1] values = np.full(nb, -np.inf)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] feasible = np.zeros(nb, dtype=np.uint8)
    cdef cnp.ndarray[double, ndim=2] weights = np.full((nb, k), np.nan)
    cdef double[:, :, ::1] sv = sup
    cdef double[::1] y = yarr
    if k > MAXK or n + 1 > MAXN:
        raise ValueError("support size exceeds compiled kernel limits")
    cdef double w[MAXK]
    cdef double res, val, wmin
    for i in range(nb):
        ok = _solve_weights(&sv[i, 0, 0], k, n, &y[0], w, &res)
        if ok != 0:
            continue
        wmin = w[0]
        for t in range(k):
            weights[i, t] = w[t]
            if w[t] < wmin:
                wmin = w[t]
        if res < res_tol and wmin >= -neg_tol:
            feasible[i] = 1
            val = 0.0
            for t in range(k):
                if w[t] > 0.0:
                    val += w[t] * _sender_value_one(recv, slin, sconst,
                                                   &sv[i, t, 0], n, m, tol)
            values[i] = val
    return values, feasible.astype(bool), weights


cdef double _objective_c(double* z, double[:, ::1] verts, long* offsets, int k,
                         double[:, ::1] recv, double[:, ::1] slin,
                         double[::1] sconst, double* y, double pen_coef,
                         double tol) noexcept nogil:
    cdef double mus[MAXK * MAXN]
    cdef double w[MAXK]
    cdef int n = verts.shape[1], m = recv.shape[0]
    cdef int i, j, t, lo, hi
    cdef double s, bb, res, value, pen
    for i in range(k):
        lo = offsets[i]
        hi = offsets[i + 1]
        s = 0.0
        for t in range(lo, hi):
            s += fabs(z[t])
        if s < 1e-12:
            return _COLLAPSED_F
        for j in range(n):
            mus[i * n + j] = 0.0
        for t in range(lo, hi):
            bb = fabs(z[t]) / s
            for j in range(n):
                mus[i * n + j] += bb * verts[t, j]
    if _solve_weights(mus, k, n, y, w, &res) != 0:
        return _SINGULAR_F
    value = 0.0
    pen = res
    for i in range(k):
        if w[i] > 0.0:
            value += w[i] * _sender_value_one(recv, slin, sconst,
                                              &mus[i * n], n, m, tol)
        else:
            pen -= w[i]
    return -value + pen_coef * pen


def multistart_nm(double[:, ::1] verts, offsets_in,
                  double[:, ::1] recv, double[:, ::1] slin, double[::1] sconst,
                  prior, starts, int max_iter=400,
                  double pen_coef=1e4, double tol=1e-9):
    cdef cnp.ndarray[long, ndim=1] offsets = np.ascontiguousarray(offsets_in, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] yarr = np.append(np.asarray(prior, dtype=np.float64), 1.0)
    cdef cnp.ndarray[double, ndim=2] st = np.ascontiguousarray(np.atleast_2d(starts), dtype=np.float64)
    cdef int k = offsets.shape[0] - 1, d = st.shape[1], ns = st.shape[0]
    cdef double[::1] y = yarr
    cdef long* offp = <long*> offsets.data
    cdef double ftol = 1e-12, step = 0.15
    cdef double simplex[(MAXD + 1) * MAXD]
    cdef double fvals[MAXD + 1]
    cdef double centroid[MAXD]
    cdef double xr[MAXD]
    cdef double xtmp[MAXD]
    cdef double best_f = INFINITY
    cdef cnp.ndarray[double, ndim=1] best_z = np.empty(d)
    cdef int total = 0, si, it, i, j, v, order_changed
    cdef double fr, fe, fc, tmp
    cdef int idx[MAXD + 1]

    if d > MAXD or k > MAXK or verts.shape[1] + 1 > MAXN:
        raise ValueError("problem dimension exceeds compiled kernel limits")

    for si in range(ns):
        # init simplex around the start point
        for v in range(d + 1):
            for j in range(d):
                simplex[v * d + j] = st[si, j]
            if v > 0:
                simplex[v * d + (v - 1)] += step
            fvals[v] = _objective_c(&simplex[v * d], verts, offp, k, recv, slin,
                                    sconst, &y[0], pen_coef, tol)
        total += d + 1
        for it in range(max_iter):
            # stable insertion sort of simplex rows by fvals
            for i in range(1, d + 1):
                j = i
                while j > 0 and fvals[j - 1] > fvals[j]:
                    tmp = fvals[j - 1]; fvals[j - 1] = fvals[j]; fvals[j] = tmp
                    for v in range(d):
                        tmp = simplex[(j - 1) * d + v]
                        simplex[(j - 1) * d + v] = simplex[j * d + v]
                        simplex[j * d + v] = tmp
                    j -= 1
            if fvals[d] - fvals[0] < ftol:
                break
            for j in range(d):
                centroid[j] = 0.0
                for v in range(d):
                    centroid[j] += simplex[v * d + j]
                centroid[j] /= d
            for j in range(d):
                xr[j] = centroid[j] + (centroid[j] - simplex[d * d + j])
            fr = _objective_c(xr, verts, offp, k, recv, slin, sconst, &y[0],
                              pen_coef, tol)
            total += 1
            if fr < fvals[0]:
                for j in range(d):
                    xtmp[j] = centroid[j] + 2.0 * (centroid[j] - simplex[d * d + j])
                fe = _objective_c(xtmp, verts, offp, k, recv, slin, sconst,
                                  &y[0], pen_coef, tol)
                total += 1
                if fe < fr:
                    for j in range(d):
                        simplex[d * d + j] = xtmp[j]
                    fvals[d] = fe
                else:
                    for j in range(d):
                        simplex[d * d + j] = xr[j]
                    fvals[d] = fr
            elif fr < fvals[d - 1]:
                for j in range(d):
                    simplex[d * d + j] = xr[j]
                fvals[d] = fr
            else:
                for j in range(d):
                    xtmp[j] = centroid[j] + 0.5 * (simplex[d * d + j] - centroid[j])
                fc = _objective_c(xtmp, verts, offp, k, recv, slin, sconst,
                                  &y[0], pen_coef, tol)
                total += 1
                if fc < fvals[d]:
                    for j in range(d):
                        simplex[d * d + j] = xtmp[j]
                    fvals[d] = fc
                else:
                    for v in range(1, d + 1):
                        for j in range(d):
                            simplex[v * d + j] = simplex[j] + 0.5 * (simplex[v * d + j] - simplex[j])
                        fvals[v] = _objective_c(&simplex[v * d], verts, offp, k,
                                                recv, slin, sconst, &y[0],
                                                pen_coef, tol)
                    total += d
        # best vertex of this start
        for v in range(d + 1):
            if fvals[v] < best_f:
                best_f = fvals[v]
                for j in range(d):
                    best_z[j] = simplex[v * d + j]
    return best_f, best_z, total
