"""Registered scalar test functions with derivatives, domains, and
convexity-class flags.

A FunctionSpec is the unit the chain checkers consume: the flags declare
which chains a function is admissible for, and the validation helpers let
the test suite confirm the declarations empirically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import scalar
from .errors import DomainError

FLAG_NAMES = frozenset(
    {
        "convex",
        "concave",
        "log_convex",
        "log_concave",
        "geometrically_convex",
        "monotone_increasing",
        "monotone_decreasing",
    }
)


@dataclass(frozen=True)
class FunctionSpec:
    """A scalar function with evaluator, derivative, and declared shape flags.

    ``domain`` is an open interval (lo, hi) on which both callables are safe
    to evaluate and the flags are claimed to hold.
    """

    id: str
    domain: tuple[float, float]
    eval: Callable[[float], float]
    deriv: Callable[[float], float]
    flags: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        lo, hi = self.domain
        if not lo < hi:
            raise ValueError(f"empty domain for {self.id!r}: {self.domain!r}")
        unknown = set(self.flags) - FLAG_NAMES
        if unknown:
            raise ValueError(f"unknown flags for {self.id!r}: {sorted(unknown)}")

    def __call__(self, x):
        return self.eval(x)

    def has(self, flag: str) -> bool:
        return flag in self.flags

    def contains(self, x: float, margin: float = 0.0) -> bool:
        lo, hi = self.domain
        return lo + margin < x < hi - margin

    def require(self, x: float, what: str = "point"):
        if not self.contains(x):
            raise DomainError(f"{what} {x!r} outside domain {self.domain!r} of {self.id!r}")


def check_derivative(f: FunctionSpec, rng, points: int = 100) -> float:
    """Compare f.deriv against central differences at random interior points.

    Returns the worst absolute excess over the allowance
    max(1e-6, 1e-6 * |f'|); nonpositive means the declared derivative is consistent.
    """
    lo, hi = f.domain
    worst = -np.inf
    for _ in range(points):
        x = lo + (hi - lo) * rng.uniform(0.05, 0.95)
        h = max(1e-6, 1e-7 * abs(x)) * (hi - lo) / max(hi - lo, 1.0)
        h = min(h, (hi - lo) * 0.02)
        fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h)
        d = f.deriv(x)
        worst = max(worst, abs(fd - d) - max(1e-6, 1e-6 * abs(d)))
    return worst


def check_flags(f: FunctionSpec, rng, trials: int = 200, tol: float = 1e-9) -> dict:
    """Empirical midpoint tests for every declared flag.

    Returns {flag: worst_violation}; values <= tol*scale mean the flag held
    on all sampled pairs. This is a falsification gate, not a proof.
    """
    lo, hi = f.domain
    results = {flag: 0.0 for flag in f.flags}
    for _ in range(trials):
        u, w = lo + (hi - lo) * rng.uniform(0.02, 0.98, size=2)
        lam = rng.uniform()
        mix = lam * u + (1.0 - lam) * w
        fu, fw, fm = f.eval(u), f.eval(w), f.eval(mix)
        scale = max(1.0, abs(fu), abs(fw))
        if "convex" in f.flags:
            results["convex"] = max(results["convex"], (fm - (lam * fu + (1.0 - lam) * fw)) / scale)
        if "concave" in f.flags:
            results["concave"] = max(results["concave"], ((lam * fu + (1.0 - lam) * fw) - fm) / scale)
        if "log_convex" in f.flags:
            gap = np.log(fm) - (lam * np.log(fu) + (1.0 - lam) * np.log(fw))
            results["log_convex"] = max(results["log_convex"], gap)
        if "log_concave" in f.flags:
            gap = (lam * np.log(fu) + (1.0 - lam) * np.log(fw)) - np.log(fm)
            results["log_concave"] = max(results["log_concave"], gap)
        if "geometrically_convex" in f.flags:
            gmix = u**lam * w ** (1.0 - lam)
            gap = np.log(f.eval(gmix)) - (lam * np.log(fu) + (1.0 - lam) * np.log(fw))
            results["geometrically_convex"] = max(results["geometrically_convex"], gap)
        if "monotone_increasing" in f.flags and u != w:
            s, t = min(u, w), max(u, w)
            results["monotone_increasing"] = max(
                results["monotone_increasing"], (f.eval(s) - f.eval(t)) / scale
            )
        if "monotone_decreasing" in f.flags and u != w:
            s, t = min(u, w), max(u, w)
            results["monotone_decreasing"] = max(
                results["monotone_decreasing"], (f.eval(t) - f.eval(s)) / scale
            )
    return results


# --- factories -----------------------------------------------------------

def exp_power(p: float, domain=(0.05, 2.0)) -> FunctionSpec:
    """exp(x**p) for p >= 1: log-convex, increasing, geometrically convex."""
    if p < 1.0:
        raise ValueError("exp_power requires p >= 1")
    return FunctionSpec(
        id=f"exp-pow-{p:g}",
        domain=domain,
        eval=lambda x: float(np.exp(x**p)),
        deriv=lambda x: float(p * x ** (p - 1.0) * np.exp(x**p)),
        flags=frozenset({"log_convex", "convex", "monotone_increasing", "geometrically_convex"}),
    )


def inv_power(p: float, domain=(0.2, 5.0)) -> FunctionSpec:
    """x**(-p) for p > 0: log-convex and decreasing. Domain kept away from 0
    so the exponential bounds in the chains stay inside float range."""
    if p <= 0.0:
        raise ValueError("inv_power requires p > 0")
    return FunctionSpec(
        id=f"inv-pow-{p:g}",
        domain=domain,
        eval=lambda x: float(x ** (-p)),
        deriv=lambda x: float(-p * x ** (-p - 1.0)),
        flags=frozenset({"log_convex", "convex", "monotone_decreasing", "geometrically_convex"}),
    )


def power(p: float, domain=(0.05, 5.0)) -> FunctionSpec:
    """x**p for p >= 1; the equality case of the geometric interpolation chain."""
    if p < 1.0:
        raise ValueError("power requires p >= 1")
    return FunctionSpec(
        id=f"pow-{p:g}",
        domain=domain,
        eval=lambda x: float(x**p),
        deriv=lambda x: float(p * x ** (p - 1.0)),
        flags=frozenset({"convex", "monotone_increasing", "geometrically_convex", "log_concave"}),
    )


def deformed_log_in_t(x: float, domain=(-4.0, 4.0)) -> FunctionSpec:
    """t -> deformed_log(t, x) for fixed x > 1: increasing, convex, and
    log-convex in the deformation index."""
    if x <= 1.0:
        raise ValueError("deformed_log_in_t requires x > 1 so the values stay positive")
    return FunctionSpec(
        id=f"lnt-x-{x:g}",
        domain=domain,
        eval=lambda t: scalar.deformed_log(t, x),
        deriv=lambda t: scalar.deformed_log_t_derivative(t, x),
        flags=frozenset({"log_convex", "convex", "monotone_increasing"}),
    )


def quad_exponential(c: float, d: float, domain=(-0.5, 1.5)) -> FunctionSpec:
    """exp(c t**2 + d t) with c >= 0: the workhorse log-convex family."""
    if c < 0.0:
        raise ValueError("quad_exponential requires c >= 0")
    flags = {"log_convex", "convex"}
    return FunctionSpec(
        id=f"quad-exp-{c:g}-{d:g}",
        domain=domain,
        eval=lambda t: float(np.exp(c * t * t + d * t)),
        deriv=lambda t: float((2.0 * c * t + d) * np.exp(c * t * t + d * t)),
        flags=frozenset(flags),
    )


def geometric_interpolant(a: float, b: float, domain=(-0.5, 1.5)) -> FunctionSpec:
    """t -> a**(1-t) b**t; log-linear in t, hence both log-convex and log-concave."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError("geometric_interpolant requires a, b > 0")
    r = np.log(b / a)
    return FunctionSpec(
        id=f"geo-interp-{a:g}-{b:g}",
        domain=domain,
        eval=lambda t: float(a * np.exp(r * t)),
        deriv=lambda t: float(a * r * np.exp(r * t)),
        flags=frozenset({"log_convex", "log_concave", "convex"} | ({"monotone_increasing"} if b > a else {"monotone_decreasing"} if b < a else set())),
    )


def linear(slope: float, intercept: float, domain=(0.0, 50.0)) -> FunctionSpec:
    """slope*x + intercept; convex and concave, monotone per the slope sign."""
    mono = (
        {"monotone_increasing"}
        if slope > 0
        else {"monotone_decreasing"}
        if slope < 0
        else set()
    )
    return FunctionSpec(
        id=f"lin-{slope:g}-{intercept:g}",
        domain=domain,
        eval=lambda x: float(slope * x + intercept),
        deriv=lambda x: float(slope),
        flags=frozenset({"convex", "concave"} | mono),
    )


def log_wide(domain=(1.0 + 1e-9, 50.0)) -> FunctionSpec:
    """log x on a window above 1, where it is nonnegative increasing concave."""
    return FunctionSpec(
        id="log-wide",
        domain=domain,
        eval=lambda x: float(np.log(x)),
        deriv=lambda x: float(1.0 / x),
        flags=frozenset({"concave", "monotone_increasing", "log_concave"}),
    )


def _neg_log() -> FunctionSpec:
    # log-convex only while log x <= -1, hence the 1/e right endpoint
    return FunctionSpec(
        id="neg-log",
        domain=(0.02, float(np.exp(-1.0))),
        eval=lambda x: float(-np.log(x)),
        deriv=lambda x: float(-1.0 / x),
        flags=frozenset({"log_convex", "convex", "monotone_decreasing"}),
    )


def _neg_log_wide() -> FunctionSpec:
    # plain convexity holds on the whole half line, unlike log-convexity
    return FunctionSpec(
        id="neg-log-wide",
        domain=(1e-6, 1e3),
        eval=lambda x: float(-np.log(x)),
        deriv=lambda x: float(-1.0 / x),
        flags=frozenset({"convex", "monotone_decreasing"}),
    )


def _log_unit_to_e() -> FunctionSpec:
    # log-concave only while log x >= ... the left endpoint stays above 1 so
    # the ratio chains can divide by f
    return FunctionSpec(
        id="log",
        domain=(1.0 + 1e-9, float(np.e)),
        eval=lambda x: float(np.log(x)),
        deriv=lambda x: float(1.0 / x),
        flags=frozenset({"log_concave", "concave", "monotone_increasing"}),
    )


def _inv_sin() -> FunctionSpec:
    # shrunk away from the endpoints to avoid the blowup at 0 and pi/2
    return FunctionSpec(
        id="inv-sin",
        domain=(0.05, float(np.pi / 2 - 0.05)),
        eval=lambda x: float(1.0 / np.sin(x)),
        deriv=lambda x: float(-np.cos(x) / np.sin(x) ** 2),
        flags=frozenset(
            {"log_convex", "convex", "monotone_decreasing", "geometrically_convex"}
        ),
    )


def _sin_spec() -> FunctionSpec:
    return FunctionSpec(
        id="sin",
        domain=(0.05, float(np.pi - 0.05)),
        eval=lambda x: float(np.sin(x)),
        deriv=lambda x: float(np.cos(x)),
        flags=frozenset({"log_concave", "concave"}),
    )


def _gauss() -> FunctionSpec:
    return FunctionSpec(
        id="gauss",
        domain=(-2.0, 2.0),
        eval=lambda x: float(np.exp(-x * x)),
        deriv=lambda x: float(-2.0 * x * np.exp(-x * x)),
        flags=frozenset({"log_concave"}),
    )


def _exp_spec() -> FunctionSpec:
    return FunctionSpec(
        id="exp",
        domain=(0.01, 5.0),
        eval=lambda x: float(np.exp(x)),
        deriv=lambda x: float(np.exp(x)),
        flags=frozenset({"log_convex", "log_concave", "convex", "monotone_increasing", "geometrically_convex"}),
    )


def default_registry() -> dict[str, FunctionSpec]:
    """Immutable-by-convention map of the named test functions."""
    specs = [
        _exp_spec(),
        exp_power(1.0),
        exp_power(2.0),
        inv_power(1.0),
        inv_power(2.0),
        power(2.0),
        power(3.0),
        _inv_sin(),
        _sin_spec(),
        _gauss(),
        _neg_log(),
        _neg_log_wide(),
        _log_unit_to_e(),
        deformed_log_in_t(2.0),
        quad_exponential(1.0, 0.0),
        geometric_interpolant(1.0, 4.0),
        log_wide(),
        # shallow affine partner passing the two-function gate with log-wide
        # on [1.5, 4]
        linear(0.04, 0.12, domain=(0.0, 50.0)),
    ]
    return {s.id: s for s in specs}


REGISTRY = default_registry()
