# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
# cython: language_level=3
"""Compiled core of the projected subgradient loop.

Same iteration as `_solver_py.run_minimize` (that file is the reference);
only the arithmetic accumulation order differs, so the two backends agree
to floating-point tolerance, not bit-for-bit. The hot loop runs without
the GIL so the image engine can overlap patch solves across threads.
"""

import numpy as np

from libc.math cimport fabs, sqrt

# Early-stop window, shared constant with the Python twin.
TOL_WINDOW = 50
cdef int _TOL_WINDOW = 50


cdef double _evaluate(const double[:, ::1] design, const double[:, ::1] gram,
                      const double[::1] y, const double[::1] c,
                      double[::1] r, double[::1] ga,
                      Py_ssize_t m, Py_ssize_t ncoef, Py_ssize_t n2, Py_ssize_t kk,
                      double half_lam, double half_mu, double half_mu1) noexcept nogil:
    """Fill r = design @ c - y and ga = gram @ c[:n2]; return the objective."""
    cdef Py_ssize_t i, j
    cdef double acc, obj = 0.0
    for i in range(m):
        acc = -y[i]
        for j in range(ncoef):
            acc += design[i, j] * c[j]
        r[i] = acc
        obj += fabs(acc)
    for i in range(n2):
        acc = 0.0
        for j in range(n2):
            acc += gram[i, j] * c[j]
        ga[i] = acc
        obj += half_lam * c[i] * acc
    for j in range(n2, n2 + kk):
        obj += half_mu * c[j] * c[j]
    for j in range(n2 + kk + 1, ncoef):
        obj += half_mu1 * c[j] * c[j]
    return obj


def run_minimize(design_o, gram_o, y_o, double lam, double mu, double mu1,
                 int max_iters, double step_c, double radius, double tol,
                 c0_o, bint collect_history=False):
    """Drop-in twin of `_solver_py.run_minimize`; see that docstring."""
    cdef const double[:, ::1] design = np.ascontiguousarray(design_o, dtype=np.float64)
    cdef const double[:, ::1] gram = np.ascontiguousarray(gram_o, dtype=np.float64)
    cdef const double[::1] y = np.ascontiguousarray(y_o, dtype=np.float64)

    cdef Py_ssize_t m = design.shape[0]
    cdef Py_ssize_t ncoef = design.shape[1]
    cdef Py_ssize_t n2 = gram.shape[0]
    cdef Py_ssize_t kk = ncoef - n2 - 4
    if gram.shape[1] != n2 or n2 > ncoef or kk < 0 or y.shape[0] != m:
        raise ValueError("inconsistent design/gram/y dimensions")

    c_arr = np.array(c0_o, dtype=np.float64, copy=True).ravel()
    if c_arr.shape[0] != ncoef:
        raise ValueError(f"init has {c_arr.shape[0]} coefficients, design wants {ncoef}")
    best_arr = c_arr.copy()
    r_arr = np.empty(m)
    ga_arr = np.empty(n2)
    g_arr = np.empty(ncoef)
    hist_len = max_iters + 1 if collect_history else 1
    obj_hist_arr = np.empty(hist_len)
    norm_hist_arr = np.empty(hist_len)

    cdef double[::1] c = c_arr
    cdef double[::1] best_c = best_arr
    cdef double[::1] r = r_arr
    cdef double[::1] ga = ga_arr
    cdef double[::1] g = g_arr
    cdef double[::1] obj_hist = obj_hist_arr
    cdef double[::1] norm_hist = norm_hist_arr

    cdef double half_lam = 0.5 * lam
    cdef double half_mu = 0.5 * mu
    cdef double half_mu1 = 0.5 * mu1

    cdef double obj, best_obj, prev_best, gnorm, cnorm, s, scale
    cdef Py_ssize_t i, j
    cdef int t, iterations = 0

    with nogil:
        obj = _evaluate(design, gram, y, c, r, ga, m, ncoef, n2, kk,
                        half_lam, half_mu, half_mu1)
        best_obj = obj
        prev_best = obj
        if collect_history:
            obj_hist[0] = obj
            cnorm = 0.0
            for j in range(ncoef):
                cnorm += c[j] * c[j]
            norm_hist[0] = sqrt(cnorm)

        for t in range(max_iters):
            for j in range(ncoef):
                g[j] = 0.0
            for i in range(m):
                s = 0.0
                if r[i] > 0.0:
                    s = 1.0
                elif r[i] < 0.0:
                    s = -1.0
                if s != 0.0:
                    for j in range(ncoef):
                        g[j] += design[i, j] * s
            for j in range(n2):
                g[j] += lam * ga[j]
            for j in range(n2, n2 + kk):
                g[j] += mu * c[j]
            for j in range(n2 + kk + 1, ncoef):
                g[j] += mu1 * c[j]

            gnorm = 0.0
            for j in range(ncoef):
                gnorm += g[j] * g[j]
            gnorm = sqrt(gnorm)
            if gnorm == 0.0:
                break

            scale = step_c / sqrt(t + 1.0) / gnorm
            cnorm = 0.0
            for j in range(ncoef):
                c[j] -= scale * g[j]
                cnorm += c[j] * c[j]
            cnorm = sqrt(cnorm)
            if cnorm > radius:
                scale = radius / cnorm
                for j in range(ncoef):
                    c[j] *= scale
                cnorm = radius

            obj = _evaluate(design, gram, y, c, r, ga, m, ncoef, n2, kk,
                            half_lam, half_mu, half_mu1)
            iterations = t + 1
            if collect_history:
                obj_hist[iterations] = obj
                norm_hist[iterations] = cnorm
            if obj < best_obj:
                best_obj = obj
                for j in range(ncoef):
                    best_c[j] = c[j]
            if iterations % _TOL_WINDOW == 0:
                if best_obj == 0.0 or prev_best - best_obj <= tol * prev_best:
                    break
                prev_best = best_obj

    if collect_history:
        return (best_arr, best_obj, iterations,
                obj_hist_arr[: iterations + 1].copy(),
                norm_hist_arr[: iterations + 1].copy())
    return best_arr, best_obj, iterations, None, None
