"""Pure-NumPy twin of the compiled subgradient loop.

Used as the fallback backend when the Cython extension is not built, and as
the reference the extension is tested against. Both backends implement the
same iteration; floating-point accumulation order differs, so results agree
to tolerance rather than bit-for-bit.
"""

from __future__ import annotations

import math

import numpy as np

# Early-stop window: best-objective improvement is re-checked every this
# many iterations against the relative tolerance.
TOL_WINDOW = 50


def run_minimize(
    design: np.ndarray,
    gram: np.ndarray,
    y: np.ndarray,
    lam: float,
    mu: float,
    mu1: float,
    max_iters: int,
    step_c: float,
    radius: float,
    tol: float,
    c0: np.ndarray,
    collect_history: bool = False,
):
    """Polyak projected subgradient descent on the L1-regularized patch risk.

    Iterates c_{t+1} = proj_B(c_t - eta_t g_t / ||g_t||) with eta_t =
    step_c / sqrt(t+1) and B the L2 ball of the given radius. Returns
    (best_c, best_obj, iterations, obj_history, norm_history); histories are
    None unless requested. The best iterate seen is returned, not the last;
    a zero subgradient stops early (the point is optimal).
    """
    n2 = gram.shape[0]
    kk = design.shape[1] - n2 - 4
    dt = design.T.copy()  # contiguous for the transposed product

    c = np.array(c0, dtype=float, copy=True)
    half_lam, half_mu, half_mu1 = 0.5 * lam, 0.5 * mu, 0.5 * mu1

    def evaluate(cv):
        r = design @ cv - y
        ga = gram @ cv[:n2]
        obj = float(np.abs(r).sum())
        obj += half_lam * float(cv[:n2] @ ga)
        obj += half_mu * float(cv[n2 : n2 + kk] @ cv[n2 : n2 + kk])
        obj += half_mu1 * float(cv[n2 + kk + 1 :] @ cv[n2 + kk + 1 :])
        return r, ga, obj

    r, ga, obj = evaluate(c)
    best_c = c.copy()
    best_obj = obj
    obj_hist = [obj] if collect_history else None
    norm_hist = [float(np.linalg.norm(c))] if collect_history else None

    prev_best = best_obj
    iterations = 0
    for t in range(max_iters):
        g = dt @ np.sign(r)
        g[:n2] += lam * ga
        g[n2 : n2 + kk] += mu * c[n2 : n2 + kk]
        g[n2 + kk + 1 :] += mu1 * c[n2 + kk + 1 :]
        gnorm = float(np.linalg.norm(g))
        if gnorm == 0.0:
            break
        c -= (step_c / math.sqrt(t + 1.0) / gnorm) * g
        cnorm = float(np.linalg.norm(c))
        if cnorm > radius:
            c *= radius / cnorm
            cnorm = radius
        r, ga, obj = evaluate(c)
        iterations = t + 1
        if collect_history:
            obj_hist.append(obj)
            norm_hist.append(cnorm)
        if obj < best_obj:
            best_obj = obj
            best_c = c.copy()
        if iterations % TOL_WINDOW == 0:
            if best_obj == 0.0 or prev_best - best_obj <= tol * prev_best:
                break
            prev_best = best_obj

    if collect_history:
        return best_c, best_obj, iterations, np.array(obj_hist), np.array(norm_hist)
    return best_c, best_obj, iterations, None, None
