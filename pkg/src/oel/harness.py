"""Randomized instance generation, chain fuzzing, counterexample shrinking,
and report emission.

Reproducibility model: every trial gets its own counter-based random stream
keyed by (seed, trial index), so reports are bit-identical for a fixed seed
regardless of execution order, and a failing trial can be regenerated in
isolation.
"""

from __future__ import annotations

import csv
import os
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import chains, entropy, funcs
from .chains import DEFAULT_TOL, ChainVerdict
from .entropy import OperatorChainVerdict
from .errors import NumericError
from .funcs import REGISTRY, FunctionSpec
from .linalg import jacobi_eigendecomposition, matrix_to_obj, symmetrize

_U64 = (1 << 64) - 1


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent substream for one trial of one run."""
    key = np.array([seed & _U64, trial & _U64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


class TrialStreams:
    """Reusable counter-based substreams, bit-identical to trial_rng.

    Rebuilding a Philox generator per trial costs more than many trials do;
    resetting the key and counter of one instance is an order of magnitude
    cheaper and produces the same stream.
    """

    def __init__(self, seed: int):
        self._bit_gen = np.random.Philox(key=np.array([seed & _U64, 0], dtype=np.uint64))
        self._gen = np.random.Generator(self._bit_gen)
        self._template = self._bit_gen.state

    def rng(self, trial: int) -> np.random.Generator:
        state = self._template
        state["state"]["key"][1] = trial & _U64
        state["state"]["counter"][:] = 0
        state["buffer_pos"] = 4  # mark the output buffer empty
        self._bit_gen.state = state
        return self._gen


@dataclass
class GeneratorConfig:
    seed: int = 0
    trials: int = 1000
    dim_range: tuple = (2, 8)
    scalar_range: tuple = (1e-3, 1e3)
    tol: float = DEFAULT_TOL
    regime: dict | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        lo, hi = self.dim_range
        if not (1 <= lo <= hi):
            raise ValueError(f"bad dim_range {self.dim_range!r}")
        slo, shi = self.scalar_range
        if not (0.0 < slo <= shi):
            raise ValueError(f"bad scalar_range {self.scalar_range!r}")

    def regime_get(self, key, default):
        if self.regime and key in self.regime:
            return self.regime[key]
        return default


# --- low-level draws ---------------------------------------------------------

def log_uniform(rng, lo, hi, size=None):
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size))


def random_orthogonal(rng, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))


def _pd_from_spectrum(rng, lam) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    Q = random_orthogonal(rng, lam.shape[0])
    return symmetrize((Q * lam) @ Q.T)


def _draw_dim(rng, cfg) -> int:
    lo, hi = cfg.dim_range
    return int(rng.integers(lo, hi + 1))


def _pd(rng, n, lo, hi) -> np.ndarray:
    return _pd_from_spectrum(rng, log_uniform(rng, lo, hi, n))


def _weights(rng, n) -> list:
    w = rng.exponential(size=n)
    w = w / w.sum()
    return [float(v) for v in w]


def gen_pd_matrix(cfg: GeneratorConfig, trial: int = 0) -> np.ndarray:
    """Positive-definite matrix with log-uniform spectrum from the config
    ranges; deterministic in (seed, trial)."""
    rng = trial_rng(cfg.seed, trial)
    lo, hi = cfg.scalar_range
    return _pd(rng, _draw_dim(rng, cfg), lo, hi)


def _constrained(rng, n, m_target, M_target, lo, hi):
    """Pair (A, B) whose relative spectrum is [m_target, M_target], endpoints
    attained by pinning the extreme eigenvalues of the normalized middle
    factor."""
    A = _pd(rng, n, max(lo, 1e-2), min(hi, 1e2))
    if n == 1:
        spec = np.array([m_target])
    elif n == 2:
        spec = np.array([m_target, M_target])
    else:
        spec = np.concatenate([[m_target, M_target], rng.uniform(m_target, M_target, n - 2)])
    C = _pd_from_spectrum(rng, spec)
    eig = jacobi_eigendecomposition(A)
    root = symmetrize((eig.vectors * np.sqrt(eig.values)) @ eig.vectors.T)
    return A, symmetrize(root @ C @ root)


def gen_constrained_pair(cfg: GeneratorConfig, m_target: float, M_target: float, trial: int = 0):
    """Pair with prescribed tight relative spectral bounds."""
    if not 0.0 < m_target <= M_target:
        raise ValueError(f"need 0 < m <= M, got {m_target!r}, {M_target!r}")
    rng = trial_rng(cfg.seed, trial)
    lo, hi = cfg.scalar_range
    return _constrained(rng, _draw_dim(rng, cfg), m_target, M_target, lo, hi)


def _domain_points(rng, f: FunctionSpec, k: int, margin=0.02):
    lo, hi = f.domain
    return lo + (hi - lo) * rng.uniform(margin, 1.0 - margin, k)


def _ordered_pair(rng, f: FunctionSpec):
    lo, hi = f.domain
    s, t = np.sort(_domain_points(rng, f, 2))
    if t - s < 1e-6 * (hi - lo):
        t = min(t + 0.05 * (hi - lo), hi - 0.01 * (hi - lo))
    return float(s), float(t)


def _pool(*ids) -> list:
    return [REGISTRY[i] for i in ids]


_LOGCONVEX_POOL = ("exp", "exp-pow-1", "exp-pow-2", "inv-pow-1", "inv-pow-2", "inv-sin", "neg-log", "lnt-x-2", "quad-exp-1-0", "geo-interp-1-4")
_LOGCONCAVE_POOL = ("log", "sin", "gauss", "pow-2", "geo-interp-1-4", "exp")
_GEOMCONVEX_POOL = ("exp", "exp-pow-1", "exp-pow-2", "inv-pow-1", "inv-pow-2", "inv-sin", "pow-2", "pow-3")
_INCREASING_POOL = ("exp", "exp-pow-1", "exp-pow-2", "log", "lnt-x-2")
_CONVEX_POOL = ("neg-log", "neg-log-wide", "exp", "exp-pow-2", "inv-pow-1", "pow-2", "quad-exp-1-0")
_ANY_POOL = tuple(REGISTRY)


def _pick(rng, ids) -> FunctionSpec:
    return REGISTRY[ids[int(rng.integers(len(ids)))]]


# --- two-function family -----------------------------------------------------

def gen_two_function_family(rng):
    """(f, g, a, b) satisfying the admissibility gate by construction:
    f = log and g a shallow affine function dominated by min f, with the
    increment condition enforced through the intercept."""
    a = float(rng.uniform(1.2, 3.0))
    b = a * float(rng.uniform(1.2, 2.5))
    fa, fb = np.log(a), np.log(b)
    c_min = fb * (b - a) / (fb - fa) - a
    c = c_min + float(rng.uniform(0.05, 2.0)) * max(1.0, abs(c_min))
    eps = float(rng.uniform(0.1, 1.0)) * fa / (b + c)
    f = funcs.log_wide()
    g = funcs.linear(eps, eps * c, domain=(0.0, max(50.0, b + 1.0)))
    return f, g, a, b


# --- chain registry -----------------------------------------------------------

@dataclass(frozen=True)
class ChainEntry:
    id: str
    kind: str  # 'scalar' or 'operator'
    description: str
    generate: Callable
    run: Callable


def _gen_prop21(rng, cfg):
    lo, hi = cfg.scalar_range
    a, b = log_uniform(rng, lo, hi, 2)
    return {"a": float(a), "b": float(b), "v": float(rng.uniform()), "n": int(rng.integers(1, 65))}


def _gen_minmax_square(rng, cfg):
    f = _pick(rng, _ANY_POOL)
    s, t = _ordered_pair(rng, f)
    return {"fn": f, "s": s, "t": t}


def _gen_minmax_power(rng, cfg):
    f = _pick(rng, _INCREASING_POOL)
    s, t = _ordered_pair(rng, f)
    if rng.uniform() < 0.15:
        p, q = 2.0, 0.0
    else:
        p, q = float(rng.uniform(1.0, 3.0)), float(rng.uniform(-1.5, 1.0))
    return {"fn": f, "s": s, "t": t, "p": p, "q": q}


def _gen_jensen(rng, cfg):
    f = _pick(rng, _CONVEX_POOL)
    k = int(rng.integers(2, 6))
    x = [float(v) for v in _domain_points(rng, f, k)]
    return {"fn": f, "w": _weights(rng, k), "x": x, "t": float(rng.uniform(1e-3, 1.0))}


def _gen_am_gm(rng, cfg):
    k = int(rng.integers(2, 6))
    x = [float(v) for v in log_uniform(rng, 1.0, 50.0, k)]
    return {"w": _weights(rng, k), "x": x, "t": float(rng.uniform(1e-3, 1.0))}


def _gen_logconvex(rng, cfg):
    f = _pick(rng, _LOGCONVEX_POOL)
    pts = _domain_points(rng, f, 2)
    return {"fn": f, "s": float(pts[0]), "t": float(pts[1]), "mode": "convex"}


def _gen_logconcave(rng, cfg):
    f = _pick(rng, _LOGCONCAVE_POOL)
    pts = _domain_points(rng, f, 2)
    return {"fn": f, "s": float(pts[0]), "t": float(pts[1]), "mode": "concave"}


def _gen_geomconvex(rng, cfg):
    f = _pick(rng, _GEOMCONVEX_POOL)
    pts = _domain_points(rng, f, 2)
    return {"fn": f, "s": float(pts[0]), "t": float(pts[1])}


def _gen_geom_interp(rng, cfg):
    g = _pick(rng, _GEOMCONVEX_POOL)
    pts = _domain_points(rng, g, 2)
    return {"fn": g, "a": float(pts[0]), "b": float(pts[1]), "t": float(rng.uniform())}


def _gen_jensen_exp(kind):
    pool = _LOGCONVEX_POOL if kind == "log_convex" else _GEOMCONVEX_POOL

    def gen(rng, cfg):
        f = _pick(rng, pool)
        k = int(rng.integers(1, 5))
        pts = [float(v) for v in _domain_points(rng, f, k)]
        return {"fn": f, "w": _weights(rng, k), "a": pts, "kind": kind}

    return gen


def _gen_derived_logconvexity(rng, cfg):
    if rng.uniform() < 0.5:
        f = funcs.quad_exponential(float(rng.uniform(0.0, 2.0)), float(rng.uniform(-1.0, 1.0)))
    else:
        pa, pb = log_uniform(rng, 0.1, 10.0, 2)
        f = funcs.geometric_interpolant(float(pa), float(pb))
    return {"fn": f, "u": float(rng.uniform()), "w": float(rng.uniform())}


def _gen_young_refinement(rng, cfg):
    lo, hi = cfg.scalar_range
    a, b = log_uniform(rng, lo, hi, 2)
    return {"a": float(a), "b": float(b), "t": float(rng.uniform())}


def _gen_tsallis_scalar(rng, cfg):
    hi = min(cfg.scalar_range[1], 1e3)
    s, t = log_uniform(rng, 0.05, 3.0, 2)
    return {"x": float(log_uniform(rng, 1.0, hi)), "s": float(s), "t": float(t)}


def _gen_zou(rng, cfg):
    n = _draw_dim(rng, cfg)
    lo, hi = cfg.scalar_range
    return {"A": _pd(rng, n, lo, hi), "B": _pd(rng, n, lo, hi), "t": float(rng.uniform(1e-3, 1.0))}


def _gen_refined_st(rng, cfg):
    n = _draw_dim(rng, cfg)
    lo, hi = cfg.scalar_range
    case = cfg.regime_get("case", None) or ("below", "straddle", "above")[int(rng.integers(3))]
    if case == "below":
        m, M = np.sort(log_uniform(rng, max(lo, 1e-3), 0.95, 2))
    elif case == "above":
        m, M = np.sort(log_uniform(rng, 1.02, min(hi, 50.0), 2))
    else:
        m, M = float(rng.uniform(0.1, 1.0)), float(rng.uniform(1.0, 10.0))
    A, B = _constrained(rng, n, float(m), float(M), lo, hi)
    return {"A": A, "B": B, "t": float(rng.uniform(1e-3, 1.0))}


def _gen_tsallis_relation(rng, cfg):
    n = _draw_dim(rng, cfg)
    lo, hi = cfg.scalar_range
    m_lo = cfg.regime_get("m_min", 1.0)
    m, M = np.sort(log_uniform(rng, m_lo, min(hi, 100.0), 2))
    A, B = _constrained(rng, n, float(m), float(M), lo, hi)
    s, t = log_uniform(rng, 0.05, 3.0, 2)
    return {"A": A, "B": B, "s": float(s), "t": float(t)}


def _gen_roe(rng, cfg):
    n = _draw_dim(rng, cfg)
    lo, hi = cfg.scalar_range
    case = cfg.regime_get("case", None) or ("low", "high")[int(rng.integers(2))]
    if case == "low":
        m, M = np.sort(log_uniform(rng, max(lo, 1e-3), 1.0 / np.e, 2))
    else:
        m, M = np.sort(rng.uniform(1.0, np.e, 2))
    A, B = _constrained(rng, n, float(m), float(M), lo, hi)
    return {"A": A, "B": B}


def _gen_troe(rng, cfg):
    n = _draw_dim(rng, cfg)
    lo, hi = cfg.scalar_range
    m = 1.0 if rng.uniform() < 0.3 else float(rng.uniform(1.0, 5.0))
    M = m + float(rng.uniform(0.1, 5.0))
    A, B = _constrained(rng, n, m, M, lo, hi)
    bucket = int(rng.integers(3))
    if bucket == 0:
        t = float(rng.uniform(0.05, 1.0))
    elif bucket == 1:
        t = float(rng.uniform(1.0, 3.0))
    else:
        t = float(rng.uniform(-1.0, -0.05))
    return {"A": A, "B": B, "t": t}


def _gen_ordering(rng, cfg):
    n = _draw_dim(rng, cfg)
    lo, hi = cfg.scalar_range
    p = float(log_uniform(rng, 0.05, 2.0)) * (1.0 if rng.uniform() < 0.5 else -1.0)
    return {"A": _pd(rng, n, lo, hi), "B": _pd(rng, n, lo, hi), "p": p}


def _gen_two_function(rng, cfg):
    n = _draw_dim(rng, cfg)
    f, g, a, b = gen_two_function_family(rng)
    mode = cfg.regime_get("mode", None) or ("expectation", "congruence", "majorize")[int(rng.integers(3))]
    params = {"fn_f": f, "fn_g": g, "a": a, "b": b, "mode": mode}
    if mode == "expectation":
        params["A"] = _pd_from_spectrum(rng, rng.uniform(a, b, n))
        params["vector_seed"] = int(rng.integers(0, 2**32))
    elif mode == "congruence":
        A, B = _constrained(rng, n, a, b, 0.5, 2.0)
        params.update({"A": A, "B": B})
    else:
        lam = np.sort(rng.uniform(a, b, n))
        A = _pd_from_spectrum(rng, lam)
        v = rng.normal(size=n)
        v /= np.linalg.norm(v)
        shift = float(rng.uniform(0.0, max(lam[0] - a, 0.0)))
        B = symmetrize(A - shift * np.outer(v, v))
        params.update({"A": A, "B": B})
    return params


def _run_two_function(p, tol):
    return entropy.check_two_function_operator(
        p["fn_f"],
        p["fn_g"],
        p["A"],
        p.get("B"),
        mode=p["mode"],
        interval=(p["a"], p["b"]),
        tol=tol,
        vector_seed=p.get("vector_seed", 0),
    )


CHAINS: dict[str, ChainEntry] = {}


def _register(entry: ChainEntry):
    CHAINS[entry.id] = entry


_register(ChainEntry(
    "prop-2.1", "scalar",
    "root-sequence bounds squeezing the arithmetic-to-geometric mean ratio",
    _gen_prop21,
    lambda p, tol: chains.young_ratio_chain(p["a"], p["b"], p["v"], p["n"], tol),
))
_register(ChainEntry(
    "thm-2.2", "scalar",
    "min/max squeeze of a function increment by its squared difference quotient",
    _gen_minmax_square,
    lambda p, tol: chains.check_minmax_square(p["fn"], p["s"], p["t"], tol),
))
_register(ChainEntry(
    "rem-2.3", "scalar",
    "power-exponent min/max squeeze for increasing functions",
    _gen_minmax_power,
    lambda p, tol: chains.check_minmax_power(p["fn"], p["s"], p["t"], p["p"], p["q"], tol),
))
_register(ChainEntry(
    "cor-2.4", "scalar",
    "Jensen bound sharpened by a min-of-squares correction",
    _gen_jensen,
    lambda p, tol: chains.jensen_refinement(p["fn"], p["w"], p["x"], p["t"], tol),
))
_register(ChainEntry(
    "cor-2.4-am-gm", "scalar",
    "arithmetic-geometric mean gap bounded below by the Jensen correction",
    _gen_am_gm,
    lambda p, tol: chains.am_gm_refinement(p["w"], p["x"], p["t"], tol),
))
_register(ChainEntry(
    "thm-2.6-convex", "scalar",
    "tangent-line ratio bounds for log-convex functions",
    _gen_logconvex,
    lambda p, tol: chains.logconvex_chain(p["fn"], p["s"], p["t"], "convex", tol),
))
_register(ChainEntry(
    "thm-2.6-concave", "scalar",
    "tangent-line ratio bounds for log-concave functions",
    _gen_logconcave,
    lambda p, tol: chains.logconvex_chain(p["fn"], p["s"], p["t"], "concave", tol),
))
_register(ChainEntry(
    "thm-2.7", "scalar",
    "power-law ratio bounds for geometrically convex functions",
    _gen_geomconvex,
    lambda p, tol: chains.geomconvex_chain(p["fn"], p["s"], p["t"], tol),
))
_register(ChainEntry(
    "cor-2.8", "scalar",
    "bounds on the geometric-interpolation ratio of a geometrically convex function",
    _gen_geom_interp,
    lambda p, tol: chains.geom_interpolation_chain(p["fn"], p["a"], p["b"], p["t"], tol),
))
_register(ChainEntry(
    "cor-2.9-logconvex", "scalar",
    "multiplicative Jensen bounds with log-derivative correction factors",
    _gen_jensen_exp("log_convex"),
    lambda p, tol: chains.jensen_exponential_bounds(p["fn"], p["w"], p["a"], p["kind"], tol),
))
_register(ChainEntry(
    "cor-2.9-geomconvex", "scalar",
    "multiplicative Jensen bounds with power correction factors",
    _gen_jensen_exp("geometrically_convex"),
    lambda p, tol: chains.jensen_exponential_bounds(p["fn"], p["w"], p["a"], p["kind"], tol),
))
_register(ChainEntry(
    "lem-3.4", "scalar",
    "exponential-factor relation between two deformed logarithms",
    _gen_tsallis_scalar,
    lambda p, tol: chains.tsallis_scalar_chain(p["x"], p["s"], p["t"], tol),
))
_register(ChainEntry(
    "lem-3.7", "scalar",
    "log-convexity of endpoint-normalized quotients",
    _gen_derived_logconvexity,
    lambda p, tol: chains.derived_logconvexity_check(p["fn"], p["u"], p["w"], tol),
))
_register(ChainEntry(
    "cor-3.8", "scalar",
    "exponential-factor refinement and reverse of the two-mean inequality",
    _gen_young_refinement,
    lambda p, tol: chains.young_refinement_chain(p["a"], p["b"], p["t"], tol),
))
_register(ChainEntry(
    "zou", "operator",
    "five-link entropy ordering between A - A B^-1 A and B - A",
    _gen_zou,
    lambda p, tol: entropy.check_zou_chain(p["A"], p["B"], p["t"], tol),
))
_register(ChainEntry(
    "thm-3.3", "operator",
    "entropy ordering sharpened by a spectral-endpoint additive term",
    _gen_refined_st,
    lambda p, tol: entropy.check_refined_ST(p["A"], p["B"], p["t"], tol),
))
_register(ChainEntry(
    "thm-3.5", "operator",
    "exponential-factor relation between two deformed entropies",
    _gen_tsallis_relation,
    lambda p, tol: entropy.check_tsallis_relation(p["A"], p["B"], p["s"], p["t"], tol),
))
_register(ChainEntry(
    "thm-3.6", "operator",
    "two-sided exponential estimates of the relative entropy in multiples of A",
    _gen_roe,
    lambda p, tol: entropy.check_roe_bounds(p["A"], p["B"], tol),
))
_register(ChainEntry(
    "thm-3.11", "operator",
    "secant-line bound on the deformed entropy over the relative spectrum",
    _gen_troe,
    lambda p, tol: entropy.check_troe_linear_bound(p["A"], p["B"], p["t"], tol),
))
_register(ChainEntry(
    "prop-3.10", "operator",
    "sign-dependent ordering of plain, deformed, and generalized entropies",
    _gen_ordering,
    lambda p, tol: entropy.check_ordering_S_Tp_Sp(p["A"], p["B"], p["p"], tol),
))
_register(ChainEntry(
    "thm-2.12", "operator",
    "operator comparison of a gated concave/convex function pair",
    _gen_two_function,
    _run_two_function,
))


# --- fuzzing ------------------------------------------------------------------

@dataclass
class FuzzReport:
    chain_id: str
    trials_run: int
    not_applicable: int
    failures: list
    min_slack: float | None
    seed: int
    elapsed_s: float
    slack_rows: list = field(default_factory=list)

    def to_obj(self, include_timing: bool = False) -> dict:
        return {
            "id": self.chain_id,
            "trials": self.trials_run,
            "failures": self.failures,
            "not_applicable": self.not_applicable,
            "min_slack": self.min_slack,
            "elapsed_s": self.elapsed_s if include_timing else 0.0,
        }


def serialize_params(params: dict) -> dict:
    out = {}
    for key, val in params.items():
        if isinstance(val, np.ndarray):
            out[key] = matrix_to_obj(val) if val.ndim == 2 else [float(v) for v in val]
        elif isinstance(val, FunctionSpec):
            out[key] = val.id
        elif isinstance(val, (bool, str)) or val is None:
            out[key] = val
        elif isinstance(val, (int, np.integer)):
            out[key] = int(val)
        elif isinstance(val, (float, np.floating)):
            out[key] = float(val)
        elif isinstance(val, (list, tuple)):
            out[key] = [float(v) for v in val]
        else:
            out[key] = repr(val)
    return out


def _classify(verdict):
    """Returns (outcome, rel_slack) with outcome in {'pass','fail','na'}."""
    if isinstance(verdict, OperatorChainVerdict):
        if not verdict.applicable:
            return "na", None
        return ("pass" if verdict.ok else "fail"), verdict.min_rel_slack
    if isinstance(verdict, ChainVerdict):
        return ("pass" if verdict.ok else "fail"), verdict.min_rel_slack
    raise TypeError(f"unexpected verdict {verdict!r}")


def fuzz_chain(chain_id: str, cfg: GeneratorConfig) -> FuzzReport:
    """Run cfg.trials seeded trials of one chain and aggregate the outcome.

    A non-finite chain evaluation counts as a failure: the generators are
    expected to keep instances inside float range, so an overflow is a bug
    worth surfacing, not an out-of-regime draw.
    """
    if chain_id not in CHAINS:
        raise KeyError(f"unknown chain {chain_id!r}")
    entry = CHAINS[chain_id]
    start = time.perf_counter()
    failures = []
    slack_rows = []
    min_slack = None
    n_na = 0
    streams = TrialStreams(cfg.seed)
    for trial in range(cfg.trials):
        rng = streams.rng(trial)
        params = entry.generate(rng, cfg)
        try:
            verdict = entry.run(params, cfg.tol)
            outcome, rel_slack = _classify(verdict)
        except (NumericError, OverflowError) as exc:
            outcome, rel_slack = "fail", None
            failures.append({"trial": trial, "error": str(exc), "params": serialize_params(params)})
        if outcome == "na":
            n_na += 1
            continue
        if rel_slack is not None:
            slack_rows.append((trial, rel_slack))
            if min_slack is None or rel_slack < min_slack:
                min_slack = rel_slack
        if outcome == "fail" and (not failures or failures[-1].get("trial") != trial):
            failures.append({
                "trial": trial,
                "min_rel_slack": rel_slack,
                "params": serialize_params(params),
            })
    return FuzzReport(
        chain_id=chain_id,
        trials_run=cfg.trials,
        not_applicable=n_na,
        failures=failures,
        min_slack=min_slack,
        seed=cfg.seed,
        elapsed_s=time.perf_counter() - start,
        slack_rows=slack_rows,
    )


def fuzz_all(cfg: GeneratorConfig, ids=None) -> list:
    return [fuzz_chain(cid, cfg) for cid in (ids or list(CHAINS))]


# --- shrinking ------------------------------------------------------------------

_CANONICAL = {
    "t": 0.5, "s": 0.5, "v": 0.5, "u": 0.5, "w": 0.5,
    "x": 1.0, "a": 1.0, "b": 1.0, "p": 1.0, "q": 0.0, "n": 1,
}


def _project_matrices(params: dict, k: int) -> dict:
    A = params["A"]
    eig = jacobi_eigendecomposition(A)
    V = eig.vectors[:, -k:]  # leading eigenvectors
    out = dict(params)
    for key in ("A", "B"):
        if key in params and isinstance(params[key], np.ndarray):
            out[key] = symmetrize(V.T @ params[key] @ V)
    return out


def shrink_witness(chain_id: str, witness: dict, tol: float = DEFAULT_TOL, max_steps: int = 200) -> dict:
    """Greedily reduce a failing parameter set while the failure persists.

    Matrix pairs shrink by congruence projection onto leading eigenvectors;
    scalars bisect toward canonical values. The returned witness fails the
    same chain at the same tolerance.
    """
    entry = CHAINS[chain_id]

    def fails(p) -> bool:
        try:
            outcome, _ = _classify(entry.run(p, tol))
        except (ValueError, NumericError, OverflowError):
            return False
        return outcome == "fail"

    if not fails(witness):
        raise ValueError("witness does not fail the chain at this tolerance")
    params = dict(witness)
    steps = 0
    improved = True
    while improved and steps < max_steps:
        improved = False
        if isinstance(params.get("A"), np.ndarray) and params["A"].shape[0] > 1:
            steps += 1
            candidate = _project_matrices(params, params["A"].shape[0] - 1)
            if fails(candidate):
                params = candidate
                improved = True
                continue
        for key, canon in _CANONICAL.items():
            if steps >= max_steps:
                break
            val = params.get(key)
            if isinstance(val, bool) or not isinstance(val, (int, float, np.integer, np.floating)):
                continue
            if isinstance(val, (int, np.integer)):
                cand = int(canon + (int(val) - canon) // 2)
                if cand == val:
                    continue
            else:
                cand = 0.5 * (float(val) + float(canon))
                if abs(cand - val) <= 1e-12 * max(1.0, abs(float(val))):
                    continue
            steps += 1
            trial_params = dict(params)
            trial_params[key] = cand
            if fails(trial_params):
                params = trial_params
                improved = True
    return params


# --- report emission --------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        return "null"
    return format(float(x), ".17g")


def _emit_json(obj) -> str:
    """Minimal JSON writer: floats carry 17 significant digits so every
    value round-trips exactly, and byte output is deterministic."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        import json

        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_emit_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        import json

        return "{" + ", ".join(f"{json.dumps(str(k))}: {_emit_json(v)}" for k, v in obj.items()) + "}"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def report_document(reports: list, include_timing: bool = False) -> dict:
    return {
        "version": 1,
        "seed": reports[0].seed if reports else 0,
        "chains": [r.to_obj(include_timing) for r in reports],
    }


def dumps_report(reports: list, include_timing: bool = False) -> str:
    return _emit_json(report_document(reports, include_timing)) + "\n"


def write_report(reports: list, path, include_timing: bool = False) -> None:
    """Write the aggregate JSON report plus a CSV of per-trial slacks
    (columns chain_id, trial, min_link_slack) next to it."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_report(reports, include_timing))
    csv_path = os.path.splitext(str(path))[0] + ".csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["chain_id", "trial", "min_link_slack"])
        for rep in reports:
            for trial, slack in rep.slack_rows:
                writer.writerow([rep.chain_id, trial, _fmt_float(slack)])
