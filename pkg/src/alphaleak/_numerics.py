import numpy as np


def log0(x):
    """Elementwise natural log with log(0) = -inf and no warning."""
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(x, dtype=float))


def lse(a):
    """log(sum(exp(a))) tolerant of -inf and +inf entries.

    An empty input or all -inf returns -inf; any +inf returns +inf.
    """
    a = np.asarray(a, dtype=float).ravel()
    if a.size == 0:
        return -np.inf
    m = a.max()
    if m == np.inf:
        return np.inf
    if m == -np.inf:
        return -np.inf
    return float(m + np.log(np.sum(np.exp(a - m))))


def project_simplex(v):
    """Euclidean projection of ``v`` onto the probability simplex."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    ind = np.arange(1, v.size + 1)
    rho = np.count_nonzero(u - css / ind > 0)
    theta = css[rho - 1] / rho
    return np.maximum(v - theta, 0.0)


def close(a, b, tol):
    """Agreement test used by the dual-route checks.

    Both infinite with the same sign counts as agreement; otherwise the
    absolute gap is compared against ``tol * max(1, |a|)``.
    """
    if np.isinf(a) or np.isinf(b):
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(a))


_TINY = 1e-250


def log_sum_powers(*factors, weight=None):
    """log(sum_i w_i * prod_k b_k[i] ** c_k) for ``factors = ((b_1, c_1), ...)``.

    Evaluated directly when the linear-domain sum is comfortably inside the
    float range (it keeps the last ulp), else in the log domain.  Bases may
    be zero: ``0 ** c`` is 0 for ``c > 0`` and ``+inf`` for ``c < 0``.
    """
    with np.errstate(divide="ignore", over="ignore", under="ignore", invalid="ignore"):
        t = np.ones_like(np.asarray(factors[0][0], dtype=float))
        if weight is not None:
            t = t * weight
        lossy = False
        for b, c in factors:
            r = np.power(b, c)
            # A factor that underflowed can hide a finite product.
            lossy = lossy or bool(np.any((r < 1e-290) & (np.asarray(b) > 0)))
            t = t * r
        s = t.sum()
    if not lossy and np.all(np.isfinite(t)) and _TINY < s < 1.0 / _TINY:
        return float(np.log(s))
    with np.errstate(invalid="ignore"):
        z = np.zeros_like(t) if weight is None else log0(weight)
        for b, c in factors:
            z = z + c * log0(b)
    return lse(z)


def normalized_power(m, c):
    """``m ** c / sum(m ** c)`` for positive ``m``, overflow-safe."""
    with np.errstate(over="ignore", under="ignore"):
        t = np.power(m, c)
        s = t.sum()
    if np.all(np.isfinite(t)) and _TINY < s < 1.0 / _TINY:
        return t / s
    z = c * np.log(m)
    return np.exp(z - lse(z))


def projected_ascent(fun_grad, x0, tol, max_iter, residual="change"):
    """Maximize a smooth function over the probability simplex.

    Projected gradient steps with a backtracked step size ``t``: a step is
    accepted when the secant Lipschitz estimate along it is at most ``1/t``
    and the objective did not drop.  The gradient test resolves steps far
    below the ``sqrt(eps)`` floor of a pure function-value test.

    ``residual`` is ``"change"`` (sup-norm of the accepted step) or
    ``"mapping"`` (sup-norm of ``x - P(x + grad)``).  Returns
    ``(x, f, iterations, residual_value, converged)``.
    """
    x = project_simplex(x0)
    f, g = fun_grad(x)
    t = 1.0
    res = np.inf
    for it in range(1, max_iter + 1):
        for _ in range(200):
            x_new = project_simplex(x + t * g)
            d = x_new - x
            dn = float(np.linalg.norm(d))
            if dn == 0.0:
                return x, f, it, 0.0, True
            f_new, g_new = fun_grad(x_new)
            if (
                np.isfinite(f_new)
                and np.all(np.isfinite(g_new))
                and f_new >= f - 1e-12 * max(1.0, abs(f))
                and t * float(np.linalg.norm(g_new - g)) <= dn
            ):
                break
            t *= 0.5
        else:
            return x, f, it, res, False
        x, f, g = x_new, f_new, g_new
        if residual == "change":
            res = float(np.max(np.abs(d)))
        else:
            res = float(np.max(np.abs(x - project_simplex(x + g))))
        if res < tol:
            return x, f, it, res, True
        t *= 2.0
    return x, f, max_iter, res, False
