"""Scalar inequality chains.

Each checker evaluates one chain a_1 <= a_2 <= ... <= a_k at concrete
parameters and returns a ChainVerdict holding the ordered values, per-link
slacks, and a tolerance-based pass flag. Checkers raise on precondition
violations; a returned verdict always means the chain was evaluable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import scalar
from .errors import DomainError, NumericError
from .funcs import FunctionSpec

DEFAULT_TOL = 1e-9


@dataclass
class ChainVerdict:
    chain_id: str
    values: list[float]
    slacks: list[float]
    ok: bool
    tol: float
    scale: float
    witness: dict = field(default_factory=dict)

    @property
    def min_rel_slack(self) -> float:
        if not self.slacks:
            return 0.0
        return min(self.slacks) / self.scale

    def to_dict(self) -> dict:
        return {
            "chain_id": self.chain_id,
            "values": list(self.values),
            "slacks": list(self.slacks),
            "pass": self.ok,
            "tol": self.tol,
            "witness": dict(self.witness),
        }


def verdict_from_values(chain_id, values, tol, witness=None) -> ChainVerdict:
    """Build a verdict for an ordered chain of floats.

    Passing means every adjacent slack stays above -tol*scale where
    scale = max(1, max |value|); the relative form keeps chains that mix
    magnitudes across many orders comparable.
    """
    values = [float(v) for v in values]
    if any(not math.isfinite(v) for v in values):
        raise NumericError(f"{chain_id}: chain produced non-finite values {values!r}")
    slacks = [values[i + 1] - values[i] for i in range(len(values) - 1)]
    scale = max(1.0, max(abs(v) for v in values)) if values else 1.0
    ok = all(s >= -tol * scale for s in slacks)
    return ChainVerdict(chain_id, values, slacks, ok, tol, scale, witness or {})


def young_ratio_chain(a, b, v, n, tol=DEFAULT_TOL) -> ChainVerdict:
    """Exponential bounds squeezing the arithmetic-to-geometric mean ratio.

    Verified in log space, b_n(r) <= log r <= a_n(r), which is the same
    assertion under the monotone exp but stays inside float range; the
    direct bound values (which can round to inf for extreme ratios at
    small n) ride along in the witness.
    """
    lower, ratio, upper = scalar.young_ratio_bounds(a, b, v, n)
    a_n, b_n = scalar.ratio_sequences(ratio, n)
    return verdict_from_values(
        "prop-2.1",
        [b_n, math.log(ratio), a_n],
        tol,
        {"a": a, "b": b, "v": v, "n": n, "lower": lower, "ratio": ratio, "upper": upper},
    )


def check_minmax_square(f: FunctionSpec, s, t, tol=DEFAULT_TOL) -> ChainVerdict:
    """min/max squeeze of |f(t)-f(s)| between the squared increment quotient
    and the plain increment."""
    if not t > s:
        raise ValueError(f"need t > s, got s={s!r}, t={t!r}")
    f.require(s, "s")
    f.require(t, "t")
    diff = f.eval(t) - f.eval(s)
    quad = diff * diff / (t - s)
    mid = diff if f.has("monotone_increasing") else abs(diff)
    return verdict_from_values(
        "thm-2.2",
        [min(quad, t - s), mid, max(quad, t - s)],
        tol,
        {"fn": f.id, "s": s, "t": t, "monotone_form": f.has("monotone_increasing")},
    )


def check_minmax_power(f: FunctionSpec, s, t, p, q, tol=DEFAULT_TOL) -> ChainVerdict:
    """Power-exponent generalization of the min/max squeeze for an
    increasing function; needs p >= 1 >= q and a positive increment
    except in the (p, q) = (2, 0) case."""
    if not t > s:
        raise ValueError(f"need t > s, got s={s!r}, t={t!r}")
    if p < 1.0 or q > 1.0:
        raise ValueError(f"need p >= 1 and q <= 1, got p={p!r}, q={q!r}")
    if not f.has("monotone_increasing"):
        raise ValueError(f"{f.id!r} is not flagged monotone_increasing")
    f.require(s, "s")
    f.require(t, "t")
    diff = f.eval(t) - f.eval(s)
    if diff <= 0.0 and (p, q) != (2.0, 0.0):
        raise ValueError("increment must be positive unless (p, q) == (2, 0)")
    lo_term = diff**p / (t - s) ** (p - 1.0)
    hi_term = diff**q / (t - s) ** (q - 1.0)
    return verdict_from_values(
        "rem-2.3",
        [min(lo_term, hi_term), diff, max(lo_term, hi_term)],
        tol,
        {"fn": f.id, "s": s, "t": t, "p": p, "q": q},
    )


def _validate_weights(w):
    w = [float(x) for x in w]
    if any(x <= 0.0 for x in w):
        raise ValueError("weights must be positive")
    if abs(sum(w) - 1.0) > 1e-12:
        raise ValueError(f"weights must sum to 1 within 1e-12, got {sum(w)!r}")
    return w


def jensen_refinement(f: FunctionSpec, w, x, t, tol=DEFAULT_TOL) -> ChainVerdict:
    """Jensen bound sharpened by a min-of-squares correction term built from
    values along the segment from the weighted mean to the sample points."""
    if not f.has("convex"):
        raise ValueError(f"{f.id!r} is not flagged convex")
    if not 0.0 < t <= 1.0:
        raise ValueError(f"need 0 < t <= 1, got {t!r}")
    w = _validate_weights(w)
    x = [float(v) for v in x]
    if len(w) != len(x):
        raise ValueError("weights and points must have equal length")
    mean = sum(wi * xi for wi, xi in zip(w, x))
    for xi in x:
        f.require(xi, "sample point")
        f.require(t * xi + (1.0 - t) * mean, "mixed point")
    f.require(mean, "mean")
    g_t = sum(wi * f.eval(t * xi + (1.0 - t) * mean) for wi, xi in zip(w, x))
    f_mean = f.eval(mean)
    psi = min((g_t - f_mean) ** 2, t * t)
    rhs = sum(wi * f.eval(xi) for wi, xi in zip(w, x))
    return verdict_from_values(
        "cor-2.4",
        [f_mean + psi / t, rhs],
        tol,
        {"fn": f.id, "w": w, "x": x, "t": t, "psi": psi, "mean": mean},
    )


def am_gm_refinement(w, x, t, tol=DEFAULT_TOL) -> ChainVerdict:
    """Arithmetic-geometric mean gap bounded below by the Jensen correction.

    The chain is 0 <= psi/t <= log(A/G); when every sample point is >= 1 the
    final link extends to the raw gap A - G.
    """
    if not 0.0 < t <= 1.0:
        raise ValueError(f"need 0 < t <= 1, got {t!r}")
    w = _validate_weights(w)
    x = [float(v) for v in x]
    if any(v <= 0.0 for v in x):
        raise DomainError("sample points must be positive")
    arith = sum(wi * xi for wi, xi in zip(w, x))
    geom = float(np.prod([xi**wi for wi, xi in zip(w, x)]))
    gmix = float(np.prod([(t * xi + (1.0 - t) * arith) ** wi for wi, xi in zip(w, x)]))
    psi = min(np.log(arith / gmix) ** 2, t * t)
    values = [0.0, psi / t, float(np.log(arith / geom))]
    # the raw-gap link needs the geometric mean above 1
    if min(x) >= 1.0:
        values.append(arith - geom)
    return verdict_from_values(
        "cor-2.4-am-gm",
        values,
        tol,
        {"w": w, "x": x, "t": t, "arith": arith, "geom": geom},
    )


def logconvex_chain(f: FunctionSpec, s, t, mode, tol=DEFAULT_TOL) -> ChainVerdict:
    """Tangent-line bounds on f(t)/f(s) through the logarithmic derivative.

    For a log-convex f the ratio is squeezed between the exponentials of
    f'/f evaluated at s (below) and t (above); a log-concave f swaps the
    evaluation points.
    """
    if mode not in ("convex", "concave"):
        raise ValueError(f"mode must be 'convex' or 'concave', got {mode!r}")
    flag = "log_convex" if mode == "convex" else "log_concave"
    if not f.has(flag):
        raise ValueError(f"{f.id!r} is not flagged {flag}")
    f.require(s, "s")
    f.require(t, "t")
    fs, ft = f.eval(s), f.eval(t)
    if fs <= 0.0 or ft <= 0.0:
        raise DomainError(f"{f.id!r} must be positive for ratio bounds")
    rs = f.deriv(s) / fs
    rt = f.deriv(t) / ft
    d = t - s
    if mode == "convex":
        values = [math.exp(rs * d), ft / fs, math.exp(rt * d)]
    else:
        values = [math.exp(rt * d), ft / fs, math.exp(rs * d)]
    return verdict_from_values(
        f"thm-2.6-{mode}",
        values,
        tol,
        {"fn": f.id, "s": s, "t": t, "mode": mode},
    )


def geomconvex_chain(f: FunctionSpec, s, t, tol=DEFAULT_TOL) -> ChainVerdict:
    """Power-law bounds on f(t)/f(s) for a geometrically convex f."""
    if not f.has("geometrically_convex"):
        raise ValueError(f"{f.id!r} is not flagged geometrically_convex")
    if s <= 0.0 or t <= 0.0:
        raise ValueError("geometric convexity bounds need positive s, t")
    f.require(s, "s")
    f.require(t, "t")
    fs, ft = f.eval(s), f.eval(t)
    if fs <= 0.0 or ft <= 0.0:
        raise DomainError(f"{f.id!r} must be positive for ratio bounds")
    es = s * f.deriv(s) / fs
    et = t * f.deriv(t) / ft
    return verdict_from_values(
        "thm-2.7",
        [(t / s) ** es, ft / fs, (t / s) ** et],
        tol,
        {"fn": f.id, "s": s, "t": t},
    )


def geom_interpolation_chain(g: FunctionSpec, a, b, t, tol=DEFAULT_TOL) -> ChainVerdict:
    """Bounds on the ratio g(a**(1-t) b**t) / (g(a)**(1-t) g(b)**t).

    Admissible for geometrically convex g, or log-convex increasing g.
    """
    if not (g.has("geometrically_convex") or (g.has("log_convex") and g.has("monotone_increasing"))):
        raise ValueError(
            f"{g.id!r} needs geometrically_convex, or log_convex + monotone_increasing"
        )
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"need 0 <= t <= 1, got {t!r}")
    g.require(a, "a")
    g.require(b, "b")
    mid = a ** (1.0 - t) * b**t
    g.require(mid, "interpolant")
    ga, gb, gm = g.eval(a), g.eval(b), g.eval(mid)
    if min(ga, gb, gm) <= 0.0:
        raise DomainError(f"{g.id!r} must be positive for ratio bounds")
    ratio = gm / (ga ** (1.0 - t) * gb**t)
    g0 = scalar.geom_log_derivative(g, a, b, 0.0)
    gt = scalar.geom_log_derivative(g, a, b, t)
    return verdict_from_values(
        "cor-2.8",
        [math.exp(g0 * t), ratio, math.exp(gt * t)],
        tol,
        {"fn": g.id, "a": a, "b": b, "t": t, "G0": g0, "Gt": gt},
    )


def jensen_exponential_bounds(f: FunctionSpec, weights, points, kind, tol=DEFAULT_TOL) -> ChainVerdict:
    """Multiplicative Jensen bounds: correction factors applied to f at the
    weighted mean squeeze the weighted sum of f values from both sides."""
    if kind not in ("log_convex", "geometrically_convex"):
        raise ValueError(f"kind must be 'log_convex' or 'geometrically_convex', got {kind!r}")
    if not f.has(kind):
        raise ValueError(f"{f.id!r} is not flagged {kind}")
    w = _validate_weights(weights)
    a = [float(v) for v in points]
    if len(w) != len(a):
        raise ValueError("weights and points must have equal length")
    mean = sum(wi * ai for wi, ai in zip(w, a))
    for ai in a:
        f.require(ai, "sample point")
    f.require(mean, "mean")
    if kind == "geometrically_convex" and (min(a) <= 0.0 or mean <= 0.0):
        raise DomainError("geometrically convex bounds need positive points")
    fm = f.eval(mean)
    if fm <= 0.0:
        raise DomainError(f"{f.id!r} must be positive")
    rm = f.deriv(mean) / fm
    if kind == "log_convex":
        lo = sum(wi * math.exp(rm * (ai - mean)) for wi, ai in zip(w, a))
        hi = sum(
            wi * math.exp(f.deriv(ai) / f.eval(ai) * (ai - mean)) for wi, ai in zip(w, a)
        )
    else:
        lo = sum(wi * (ai / mean) ** (mean * rm) for wi, ai in zip(w, a))
        hi = sum(
            wi * (ai / mean) ** (ai * f.deriv(ai) / f.eval(ai)) for wi, ai in zip(w, a)
        )
    middle = sum(wi * f.eval(ai) for wi, ai in zip(w, a))
    chain_id = "cor-2.9-logconvex" if kind == "log_convex" else "cor-2.9-geomconvex"
    return verdict_from_values(
        chain_id,
        [lo * fm, middle, hi * fm],
        tol,
        {"fn": f.id, "w": w, "a": a, "kind": kind, "L": lo, "R": hi},
    )


def derived_logconvexity_check(f: FunctionSpec, u, w, tol=DEFAULT_TOL) -> ChainVerdict:
    """Midpoint log-convexity of f normalized by its endpoint interpolants.

    g(t) = f(t) / ((1-t) f(0) + t f(1)) and h(t) = f(t) / (f(0)**(1-t) f(1)**t)
    inherit log-convexity from f; the verdict encodes the worst midpoint
    excess of either as a two-value chain [excess, 0].
    """
    if not f.has("log_convex"):
        raise ValueError(f"{f.id!r} is not flagged log_convex")
    lo, hi = f.domain
    if not (lo < 0.0 and hi > 1.0):
        raise ValueError(f"domain of {f.id!r} must contain [0, 1]")
    if not (0.0 <= u <= 1.0 and 0.0 <= w <= 1.0):
        raise ValueError("u, w must lie in [0, 1]")
    f0, f1 = f.eval(0.0), f.eval(1.0)
    if f0 <= 0.0 or f1 <= 0.0:
        raise DomainError(f"{f.id!r} must be positive")

    def g(s):
        return f.eval(s) / ((1.0 - s) * f0 + s * f1)

    def h(s):
        return f.eval(s) / (f0 ** (1.0 - s) * f1**s)

    mid = (u + w) / 2.0
    g_gap = g(mid) - math.sqrt(g(u) * g(w))
    h_gap = h(mid) - math.sqrt(h(u) * h(w))
    return verdict_from_values(
        "lem-3.7",
        [max(g_gap, h_gap), 0.0],
        tol,
        {"fn": f.id, "u": u, "w": w, "g_gap": g_gap, "h_gap": h_gap},
    )


def young_refinement_chain(a, b, t, tol=DEFAULT_TOL) -> ChainVerdict:
    """Exponential-factor squeeze of the geometric-to-arithmetic mean ratio.

    Verified in log space (the upper factor exceeds float range for extreme
    mean ratios); the multiplicative endpoints ride along in the witness,
    rounding to 0 or inf where out of range. The witness also records the
    Young-gap functional at (t, b/a) and whether the parameters fall in the
    regime (a >= b, t <= 1/2) where the reversed form genuinely refines the
    mean inequality.
    """
    scalar._as_positive(a, "a")
    scalar._as_positive(b, "b")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"need 0 <= t <= 1, got {t!r}")
    arith = (1.0 - t) * a + t * b
    log_geom = (1.0 - t) * math.log(a) + t * math.log(b)
    lb_exp = (math.log(b / a) + 1.0 - b / a) * t
    ub_exp = (math.log(b / a) - (b - a) / arith) * t
    phi_val = scalar.phi(t, b / a)
    refinement = a >= b and t <= 0.5
    with np.errstate(over="ignore"):
        endpoints = (float(np.exp(lb_exp)), float(np.exp(ub_exp)))
    return verdict_from_values(
        "cor-3.8",
        [lb_exp, log_geom - math.log(arith), ub_exp],
        tol,
        {
            "a": a,
            "b": b,
            "t": t,
            "phi": phi_val,
            "refinement_regime": refinement,
            "lower": endpoints[0],
            "ratio": math.exp(log_geom - math.log(arith)),
            "upper": endpoints[1],
            "reversed_lower": math.exp(phi_val * t),
        },
    )


def tsallis_scalar_chain(x, s, t, tol=DEFAULT_TOL) -> ChainVerdict:
    """Relates two deformed logarithms of the same x >= 1 through
    exponential factors built from the growth-rate functional."""
    if x < 1.0:
        raise DomainError(f"need x >= 1, got {x!r}")
    if s <= 0.0 or t <= 0.0:
        raise ValueError(f"need s, t > 0, got s={s!r}, t={t!r}")
    ls = scalar.deformed_log(s, x)
    lt = scalar.deformed_log(t, x)
    lo = math.exp(scalar.eta(x, s) * (t - s)) * ls
    hi = math.exp(scalar.eta(x, t) * (t - s)) * ls
    return verdict_from_values(
        "lem-3.4",
        [lo, lt, hi],
        tol,
        {"x": x, "s": s, "t": t},
    )


@dataclass
class GateRecord:
    """Outcome of the two-function admissibility gate.

    ``conditions_hold`` certifies, on a grid, that f is nonnegative
    increasing concave, g nonnegative convex, f >= g, and the increment of f
    dominates m_ratio times the increment of g. When it holds, the bilinear
    form F(t) = (f(b)-f(a)) g(t) - (g(b)-g(a)) f(t) is nonnegative, which is
    what ``f_min`` reports.
    """

    conditions_hold: bool
    m_ratio: float
    f_min: float
    checks: dict = field(default_factory=dict)


def two_function_gate(f: FunctionSpec, g: FunctionSpec, a, b, grid=257, tol=DEFAULT_TOL) -> GateRecord:
    if not b > a:
        raise ValueError(f"need b > a, got a={a!r}, b={b!r}")
    if grid < 3:
        raise ValueError("grid must have at least 3 points")
    for spec in (f, g):
        flo, fhi = spec.domain
        if not (flo < a and b < fhi):
            raise DomainError(f"[{a}, {b}] escapes domain {spec.domain!r} of {spec.id!r}")
    xs = np.linspace(a, b, grid)
    fs = np.array([f.eval(x) for x in xs])
    gs = np.array([g.eval(x) for x in xs])
    scale = max(1.0, float(np.abs(fs).max()), float(np.abs(gs).max()))
    slack = tol * scale
    d2f = fs[2:] - 2.0 * fs[1:-1] + fs[:-2]
    d2g = gs[2:] - 2.0 * gs[1:-1] + gs[:-2]
    df, dg = float(fs[-1] - fs[0]), float(gs[-1] - gs[0])
    min_g = float(gs.min())
    m_ratio = float(fs.max() / min_g) if min_g > 0.0 else math.inf
    if math.isfinite(m_ratio):
        cond_iv = dg >= -slack and df >= m_ratio * dg - slack
    else:
        # unbounded ratio: only a flat g keeps the product meaningful
        cond_iv = abs(dg) <= slack and df >= -slack
    checks = {
        "f_nonnegative": bool(fs.min() >= -slack),
        "g_nonnegative": bool(gs.min() >= -slack),
        "f_increasing": bool(np.diff(fs).min() >= -slack),
        "f_concave": bool(d2f.max() <= slack),
        "g_convex": bool(d2g.min() >= -slack),
        "f_dominates_g": bool((fs - gs).min() >= -slack),
        "increment_condition": bool(cond_iv),
    }
    F = df * gs - dg * fs
    return GateRecord(all(checks.values()), m_ratio, float(F.min()), checks)
