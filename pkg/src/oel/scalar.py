"""Scalar kernel: deformed logarithm/exponential, weighted means, and the
named helper functionals used by the inequality chains.

Everything here is a pure function of its arguments, computed in binary64.
The deformed-logarithm family accepts numpy arrays as well as floats so the
matrix layer can apply it to eigenvalue vectors directly.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

# Below this the quotient form of the deformed log/exp loses ~|t|^-1 digits
# to cancellation, so a third-order series in t takes over.
T_SWITCH = 1e-8


def _as_positive(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError(f"{name} must be positive and finite, got {x!r}")
    return arr


def deformed_log(t: float, x):
    """Deformed logarithm: (x**t - 1)/t for t != 0, with log(x) as the
    continuous extension at t = 0.

    Monotone increasing in t for fixed x > 0, which is what makes the
    entropy-ordering chains work.
    """
    xa = _as_positive(x)
    L = np.log(xa)
    if abs(t) <= T_SWITCH:
        out = L + (t / 2.0) * L**2 + (t * t / 6.0) * L**3
    else:
        out = np.expm1(t * L) / t
    return float(out) if np.isscalar(x) or np.ndim(x) == 0 else out


def deformed_log_gap(t: float, x):
    """deformed_log(t, x) - log(x), computed without cancellation.

    The gap is O(t) near t = 0; forming it as a difference of the two
    logarithms would lose it in rounding noise, so the series branch
    returns the tail terms directly.
    """
    xa = _as_positive(x)
    L = np.log(xa)
    if abs(t) <= T_SWITCH:
        out = (t / 2.0) * L**2 + (t * t / 6.0) * L**3
    else:
        out = np.expm1(t * L) / t - L
    return float(out) if np.isscalar(x) or np.ndim(x) == 0 else out


def deformed_exp(t: float, x):
    """Deformed exponential: (1 + t*x)**(1/t), inverse of deformed_log.

    Requires 1 + t*x > 0.
    """
    xa = np.asarray(x, dtype=float)
    if abs(t) <= T_SWITCH:
        if np.any(1.0 + t * xa <= 0.0):
            raise DomainError("deformed_exp requires 1 + t*x > 0")
        out = np.exp(xa - (t / 2.0) * xa**2 + (t * t / 3.0) * xa**3)
    else:
        base = 1.0 + t * xa
        if np.any(base <= 0.0):
            raise DomainError("deformed_exp requires 1 + t*x > 0")
        out = np.exp(np.log1p(t * xa) / t)
    return float(out) if np.isscalar(x) or np.ndim(x) == 0 else out


def weighted_means(a: float, b: float, v: float) -> tuple[float, float]:
    """Weighted arithmetic and geometric means (1-v)a + vb and a**(1-v) b**v."""
    _as_positive(a, "a")
    _as_positive(b, "b")
    if not 0.0 <= v <= 1.0:
        raise DomainError(f"weight v must lie in [0, 1], got {v!r}")
    arith = (1.0 - v) * a + v * b
    geom = a ** (1.0 - v) * b**v
    return float(arith), float(geom)


def young_ratio_bounds(a: float, b: float, v: float, n: int) -> tuple[float, float, float]:
    """Two-sided exponential bounds on the arithmetic-to-geometric mean ratio.

    Returns (lower, ratio, upper) with
        lower = exp(n (1 - ratio**(-1/n))),  upper = exp(n (ratio**(1/n) - 1)).
    Both bounds tighten to the ratio itself as n grows. For extreme ratios
    at small n the upper bound exceeds float range and rounds to inf.
    """
    if n < 1 or int(n) != n:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    arith, geom = weighted_means(a, b, v)
    ratio = arith / geom
    L = np.log(ratio)
    # expm1 keeps n*(ratio**(1/n) - 1) accurate for large n
    with np.errstate(over="ignore"):
        upper = float(np.exp(n * np.expm1(L / n)))
    lower = float(np.exp(-n * np.expm1(-L / n)))
    return lower, float(ratio), upper


def ratio_sequences(x: float, n: int) -> tuple[float, float]:
    """Root-based sequences a_n = n(x**(1/n) - 1) and b_n = n(1 - x**(-1/n)).

    Both converge to log(x); for x >= 1, a_n decreases and b_n increases
    in n, squeezing the logarithm from both sides.
    """
    _as_positive(x, "x")
    if n < 1 or int(n) != n:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    L = np.log(x)
    a_n = float(n * np.expm1(L / n))
    b_n = float(-n * np.expm1(-L / n))
    return a_n, b_n


def theta(t: float, x: float) -> float:
    """Additive refinement term min{(deformed_log(t,x) - log x)**2, t**2}.

    Defined as 0 at t = 0 by the limit; theta(t, 1) = 0 for every t.
    """
    _as_positive(x, "x")
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t must lie in [0, 1], got {t!r}")
    if t == 0.0:
        return 0.0
    gap = deformed_log_gap(t, x)
    return float(min(gap * gap, t * t))


_ETA_D_SWITCH = 1e-4


def eta(x: float, a: float) -> float:
    """Logarithmic growth rate of the deformed log in its deformation index.

    eta(x, a) = (x**a log x - deformed_log(a, x)) / (a * deformed_log(a, x)),
    extended continuously to a = 0 (value log(x)/2) and x = 1 (value 0).
    Monotone increasing in x, negative for x < 1 and positive for x > 1.
    """
    _as_positive(x, "x")
    if a < 0.0:
        raise DomainError(f"a must be nonnegative, got {a!r}")
    L = np.log(x)
    if a == 0.0:
        return float(L / 2.0)
    # With d = x**a - 1 the definition collapses to ((1+d)log(1+d) - d)/(a d),
    # whose small-d series avoids the 0/0 at x -> 1.
    d = float(np.expm1(a * L))
    if abs(d) <= _ETA_D_SWITCH:
        return float((d / 2.0 - d * d / 6.0 + d**3 / 12.0 - d**4 / 20.0) / a)
    return float(((1.0 + d) * np.log1p(d) - d) / (a * d))


def phi(t: float, x: float) -> float:
    """Young-gap functional (x - 1)/((1-t) + t x) - log x.

    Monotone decreasing in t; nonnegative on 0 <= t <= 1/2, 0 < x <= 1,
    where it certifies a genuine refinement of the mean inequality.
    """
    _as_positive(x, "x")
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t must lie in [0, 1], got {t!r}")
    return float((x - 1.0) / ((1.0 - t) + t * x) - np.log(x))


def geom_log_derivative(g, a: float, b: float, t: float) -> float:
    """Logarithmic derivative of the interpolation ratio
    g(a**(1-t) b**t) / (g(a)**(1-t) g(b)**t) at t.

    `g` is any function spec exposing ``eval`` and ``deriv``; it must be
    positive at a, b, and the geometric interpolant.
    """
    _as_positive(a, "a")
    _as_positive(b, "b")
    mid = a ** (1.0 - t) * b**t
    ga, gb, gm = g.eval(a), g.eval(b), g.eval(mid)
    if ga <= 0.0 or gb <= 0.0 or gm <= 0.0:
        raise DomainError(f"{getattr(g, 'id', 'g')} must be positive on its domain")
    return float(np.log(ga / gb) - mid * np.log(a / b) * g.deriv(mid) / gm)


def deformed_log_t_derivative(t: float, x: float) -> float:
    """d/dt of deformed_log(t, x); nonnegative for every x > 0."""
    _as_positive(x, "x")
    L = float(np.log(x))
    u = t * L
    # (e^u (u-1) + 1)/u^2 = 1/2 + u/3 + u^2/8 + u^3/30 + ...
    if abs(u) <= 1e-3:
        gu = 0.5 + u / 3.0 + u * u / 8.0 + u**3 / 30.0
    else:
        gu = (np.exp(u) * (u - 1.0) + 1.0) / (u * u)
    return float(L * L * gu)
