"""L^q spectrum, local dimension range, and Legendre multifractal spectrum.

tau(q) is the unique root of sum_i p_i^q r_i^tau = 1. The associated tilted
weight vector w_i = p_i^q r_i^tau(q) drives alpha(q) (cross-entropy over
Lyapunov exponent) and the spectrum f(alpha), computed both as the Legendre
value alpha*q + tau(q) and via the explicit entropy quotient; the two routes
must agree. The upper envelope f_bar flattens f at the value tau(0) to the
right of alpha(0).

Degenerate systems (constant log p_i / log r_i) collapse to a single-point
spectrum; operations return that point instead of erroring.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import xlogy

from .errors import BracketError, ConsistencyError, DomainError
from .system import WeightedSystem, alpha_bounds

Q_CAP = 200.0
DEFAULT_TOL = 1e-12
_MAX_DOUBLINGS = 1000
# interior agreement between the two f(alpha) routes; spec-pinned
F_CONSISTENCY_TOL = 1e-8
F_ENDPOINT_TOL = 1e-3


@lru_cache(maxsize=1024)
def _log_pairs(sys_: WeightedSystem) -> tuple[tuple[float, float], ...]:
    return tuple(zip(sys_.log_probs.tolist(), sys_.log_ratios.tolist()))


def _cap_residual(sys_: WeightedSystem, q: float, t: float) -> float:
    """log of sum_i p_i^q r_i^t; strictly decreasing in t."""
    # plain math: this sits inside nested bisections, array overhead dominates
    terms = [q * lp + t * lr for lp, lr in _log_pairs(sys_)]
    mx = max(terms)
    return mx + math.log(sum(math.exp(v - mx) for v in terms))


def solve_tau(sys_: WeightedSystem, q: float, tol: float = DEFAULT_TOL) -> float:
    """Root tau(q) of sum p_i^q r_i^tau = 1, by bracket doubling + bisection.

    The residual |sum p_i^q r_i^tau - 1| at the returned point is at most tol.
    """
    lo, hi = -1.0, 1.0
    g_lo, g_hi = _cap_residual(sys_, q, lo), _cap_residual(sys_, q, hi)
    n = 0
    while g_lo < 0.0:
        hi, g_hi = lo, g_lo
        lo *= 2.0
        g_lo = _cap_residual(sys_, q, lo)
        n += 1
        if n > _MAX_DOUBLINGS:
            raise BracketError(f"no sign change after {n} doublings (q={q})")
    while g_hi > 0.0:
        lo, g_lo = hi, g_hi
        hi *= 2.0
        g_hi = _cap_residual(sys_, q, hi)
        n += 1
        if n > _MAX_DOUBLINGS:
            raise BracketError(f"no sign change after {n} doublings (q={q})")
    while True:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            return mid  # interval exhausted at float resolution
        g = _cap_residual(sys_, q, mid)
        if abs(math.expm1(g)) <= tol:
            return mid
        if g > 0.0:
            lo = mid
        else:
            hi = mid


def tilted_vector(sys_: WeightedSystem, q: float) -> np.ndarray:
    """Normalized weights w_i proportional to p_i^q r_i^tau(q)."""
    tau = solve_tau(sys_, q)
    xs = [q * lp + tau * lr for lp, lr in _log_pairs(sys_)]
    mx = max(xs)
    w = np.array([math.exp(v - mx) for v in xs])
    return w / w.sum()


def _alpha_from_weights(sys_: WeightedSystem, w: np.ndarray) -> float:
    return float((w @ sys_.log_probs) / (w @ sys_.log_ratios))


def alpha_of_q(sys_: WeightedSystem, q: float) -> float:
    """Local dimension alpha(q) carried by the tilted vector at q."""
    return _alpha_from_weights(sys_, tilted_vector(sys_, q))


def q_of_alpha(sys_: WeightedSystem, alpha: float, tol: float = 1e-10) -> float:
    """Inverse of alpha_of_q on the open interval (alpha_min, alpha_max).

    For degenerate systems the interval is empty; the single attainable
    value maps to the canonical parameter q = 0.
    """
    amin, amax = alpha_bounds(sys_)
    if sys_.degenerate:
        if abs(alpha - amin) <= 1e-9:
            return 0.0
        raise DomainError(f"alpha={alpha} not attainable by a degenerate system")
    if not (amin < alpha < amax):
        raise DomainError(
            f"alpha={alpha} outside the open interval ({amin}, {amax})")
    lo, hi = -1.0, 1.0  # alpha is decreasing in q
    n = 0
    while alpha_of_q(sys_, lo) < alpha:
        lo *= 2.0
        n += 1
        if n > _MAX_DOUBLINGS:
            raise BracketError("bracket expansion failed approaching alpha_max")
    while alpha_of_q(sys_, hi) > alpha:
        hi *= 2.0
        n += 1
        if n > _MAX_DOUBLINGS:
            raise BracketError("bracket expansion failed approaching alpha_min")
    while True:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            return mid  # interval exhausted at float resolution
        val = alpha_of_q(sys_, mid)
        if abs(val - alpha) <= tol:
            return mid
        if val > alpha:
            lo = mid
        else:
            hi = mid


def _entropy_quotient(sys_: WeightedSystem, q: float) -> float:
    """Explicit spectrum value sum w log w / sum w log r at parameter q."""
    w = tilted_vector(sys_, q)
    return float(xlogy(w, w).sum() / (w @ sys_.log_ratios))


def _f_both(sys_: WeightedSystem, alpha: float) -> tuple[float, float, float, bool]:
    """(Legendre value, entropy-quotient value, q, capped?) for one alpha."""
    amin, amax = alpha_bounds(sys_)
    edge = 1e-9 * max(1.0, abs(amax))
    if sys_.degenerate:
        if abs(alpha - amin) <= 1e-9:
            tau0 = solve_tau(sys_, 0.0)
            return tau0, tau0, 0.0, False
        raise DomainError(f"alpha={alpha} not attainable by a degenerate system")
    if alpha < amin - edge or alpha > amax + edge:
        raise DomainError(f"alpha={alpha} outside [{amin}, {amax}]")
    if alpha <= amin + edge:
        q, capped = Q_CAP, True  # endpoint value taken as the q -> +inf limit
    elif alpha >= amax - edge:
        q, capped = -Q_CAP, True
    else:
        # route agreement needs |q| * |alpha(q) - alpha| well under 1e-8
        q, capped = q_of_alpha(sys_, alpha, tol=1e-12), False
    legendre = alpha * q + solve_tau(sys_, q)
    quotient = _entropy_quotient(sys_, q)
    return legendre, quotient, q, capped


def f_of_alpha(sys_: WeightedSystem, alpha: float) -> float:
    """Multifractal spectrum f(alpha) on [alpha_min, alpha_max].

    Evaluated both as alpha*q + tau(q) at q = q(alpha) and via the explicit
    entropy quotient of the tilted vector; raises ConsistencyError if the two
    disagree (1e-8 in the interior, 1e-3 in the +-Q_CAP endpoint regime).
    """
    legendre, quotient, _, capped = _f_both(sys_, alpha)
    limit = F_ENDPOINT_TOL if capped else F_CONSISTENCY_TOL
    if abs(legendre - quotient) > limit:
        raise ConsistencyError(
            f"spectrum routes disagree at alpha={alpha}: "
            f"{legendre} vs {quotient}")
    return quotient


def f_bar(sys_: WeightedSystem, alpha: float) -> float:
    """Upper envelope: f(alpha) up to alpha(0), then the constant tau(0)."""
    amin, amax = alpha_bounds(sys_)
    if sys_.degenerate:
        return f_of_alpha(sys_, alpha)
    edge = 1e-9 * max(1.0, abs(amax))
    if alpha < amin - edge or alpha > amax + edge:
        raise DomainError(f"alpha={alpha} outside [{amin}, {amax}]")
    if alpha > alpha_of_q(sys_, 0.0):
        return solve_tau(sys_, 0.0)
    return f_of_alpha(sys_, alpha)


def default_q_grid() -> np.ndarray:
    """Dense core plus geometric tails covering [-Q_CAP, Q_CAP]."""
    core = np.linspace(-25.0, 25.0, 8001)
    tail = np.geomspace(25.0, Q_CAP, 513)[1:]
    return np.unique(np.concatenate([-tail, core, tail]))


def legendre_numeric(sys_: WeightedSystem, alpha, q_grid=None):
    """Grid minimum of alpha*q + tau(q); independent check of f_of_alpha.

    alpha may be a scalar or an array; the tau grid is evaluated once.
    """
    qs = default_q_grid() if q_grid is None else np.asarray(q_grid, dtype=float)
    taus = np.array([solve_tau(sys_, q) for q in qs])
    a = np.asarray(alpha, dtype=float)
    values = a[..., None] * qs + taus
    out = values.min(axis=-1)
    return float(out) if np.isscalar(alpha) or a.ndim == 0 else out


@dataclass(frozen=True)
class SpectrumRow:
    q: float
    tau: float
    alpha: float
    f: float
    f_bar: float


@dataclass(frozen=True)
class SpectrumTable:
    rows: tuple[SpectrumRow, ...]
    meta: dict

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    def as_records(self) -> list[dict]:
        return [{"q": r.q, "tau": r.tau, "alpha": r.alpha, "f": r.f,
                 "f_bar": r.f_bar} for r in self.rows]


def _max_workers() -> int:
    raw = os.environ.get("MFA_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def spectrum_table(sys_: WeightedSystem, q_values,
                   tol: float = DEFAULT_TOL) -> SpectrumTable:
    """Rows (q, tau, alpha, f, f_bar) for each requested q, in order.

    Row evaluation may fan out over MFA_THREADS workers; output order and
    content do not depend on the worker count.
    """
    qs = [float(q) for q in q_values]
    tau0 = solve_tau(sys_, 0.0, tol) if qs else 0.0
    alpha0 = alpha_of_q(sys_, 0.0) if qs else 0.0

    def build(q: float) -> SpectrumRow:
        tau = solve_tau(sys_, q, tol)
        alpha = alpha_of_q(sys_, q)
        f = alpha * q + tau
        fb = tau0 if alpha > alpha0 else f
        return SpectrumRow(q, tau, alpha, f, fb)

    workers = _max_workers()
    if workers > 1 and len(qs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = tuple(pool.map(build, qs))
    else:
        rows = tuple(build(q) for q in qs)
    meta = {"system": sys_.digest(), "points": len(rows), "tol": tol}
    return SpectrumTable(rows, meta)
