"""Gamma and two-parameter Mittag-Leffler evaluation on the negative real axis.

These two functions realize every solution kernel used by the spectral
solvers: E_{a,a} and E_{a,1} build the Duhamel weights, E_{a,2} the
first-moment weights.  Evaluation is route-adaptive:

* truncated power series in float arithmetic while the predicted
  cancellation stays harmless;
* algebraic asymptotic expansion for large negative arguments -- used only
  beyond a per-(alpha, beta) bound that has been validated against the
  integral representation, because the smallest-term heuristic badly
  underestimates the true remainder for small alpha;
* extended-precision series (mpmath) when its cost is sane;
* a branch-cut integral representation otherwise, which also serves as the
  independent cross-check route for the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .errors import ConvergenceError

__all__ = [
    "MlParams",
    "gamma_fn",
    "mittag_leffler",
    "mittag_leffler_integral",
    "ml_array",
]

# Lanczos approximation, g = 7, 9 terms (Godfrey's coefficients).
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


@dataclass(frozen=True)
class MlParams:
    """Order pair (alpha, beta) of the Mittag-Leffler function."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not self.beta > 0.0:
            raise ValueError(f"beta must be positive, got {self.beta}")


def _lanczos_gamma(x: float) -> float:
    # valid for x >= 0.5
    xr = x - 1.0
    acc = _LANCZOS_C[0]
    for i, c in enumerate(_LANCZOS_C[1:], start=1):
        acc += c / (xr + i)
    t = xr + _LANCZOS_G + 0.5
    if (xr + 0.5) * math.log(t) > 690.0:  # t**(xr+0.5) would overflow
        ln = (xr + 0.5) * math.log(t) - t
        return math.exp(ln + 0.5 * math.log(2.0 * math.pi) + math.log(acc))
    return math.sqrt(2.0 * math.pi) * t ** (xr + 0.5) * math.exp(-t) * acc


def gamma_fn(x: float) -> float:
    """Gamma function for positive real arguments (~1e-13 relative)."""
    if not x > 0.0:
        raise ValueError(f"gamma_fn requires x > 0, got {x}")
    if x >= 0.5:
        if x > 171.6:
            return math.inf
        return _lanczos_gamma(x)
    # reflection keeps the Lanczos argument away from the poles
    return math.pi / (math.sin(math.pi * x) * _lanczos_gamma(1.0 - x))


def _sinpi(x: float) -> float:
    r = math.fmod(x, 2.0)
    return math.sin(math.pi * r)


def _rgamma(x: float) -> float:
    """1/Gamma(x) for any real x; zero at the poles."""
    if x > 0.5:
        if x > 171.6:
            return math.exp(-math.lgamma(x))
        return 1.0 / _lanczos_gamma(x)
    s = _sinpi(x)
    if s == 0.0:
        return 0.0
    # 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
    ln = math.lgamma(1.0 - x)
    if ln > 700.0:  # only reached far beyond any useful truncation point
        return math.copysign(math.inf, s)
    return s * math.exp(ln) / math.pi


def _series_peak(alpha: float, beta: float, absz: float):
    """(log10 of the largest series term, its index) for cost forecasts."""
    if absz <= 0.0:
        return 0.0, 0
    ln_z = math.log(absz)
    best = -math.lgamma(beta)
    best_n = 0
    n, step = 1, 1
    while n < 20_000_000:
        v = n * ln_z - math.lgamma(alpha * n + beta)
        if v > best:
            best, best_n = v, n
            n += step
            step = max(step + 1, int(step * 1.5))
        else:
            break
    return best / math.log(10.0), best_n


_SERIES_MAX_TERMS = 2000


def _ml_series_float(alpha: float, beta: float, z: float):
    """Kahan-summed power series; returns (value, relative error estimate).

    Each term comes from exp(n log|z| - lgamma(..)), so its own error grows
    with the magnitude of that argument; the estimate accounts for it.
    """
    total = _rgamma(beta)
    comp = 0.0
    term_max = abs(total)
    abs_sum = abs(total)
    ln_az = math.log(abs(z)) if z != 0.0 else -math.inf
    sign = -1.0
    converged = False
    for n in range(1, _SERIES_MAX_TERMS):
        ln_t = n * ln_az - math.lgamma(alpha * n + beta)
        if ln_t > 700.0:
            return math.nan, math.inf
        t = sign * math.exp(ln_t)
        y = t - comp
        s = total + y
        comp = (s - total) - y
        total = s
        at = abs(t)
        term_max = max(term_max, at)
        abs_sum += at
        if at < 1e-18 * max(abs(total), 1e-300):
            converged = True
            break
        sign = -sign
    if not converged or total == 0.0:
        return math.nan, math.inf
    amplification = 4.0 * (3.0 + max(0.0, math.log(term_max)))
    est = 2.2e-16 * abs_sum * amplification / abs(total)
    return total, est


def _ml_asymptotic(alpha: float, beta: float, z: float, kmax: int = 400):
    """-sum_k z^{-k}/Gamma(beta - alpha k); returns (value, smallest-term est).

    The estimate only reflects truncation of the algebraic series; the true
    remainder can be far larger, so callers must gate on a validated bound.
    """
    if alpha >= 1.0 or abs(z) <= 1.0:
        return math.nan, math.inf  # expansion degenerates at alpha = 1
    inv = 1.0 / z
    p = 1.0
    total = 0.0
    last = math.inf
    smallest = math.inf
    for k in range(1, kmax + 1):
        p *= inv
        t = -p * _rgamma(beta - alpha * k)
        at = abs(t)
        if at != 0.0 and at >= last:
            break  # divergent tail reached
        total += t
        if at != 0.0:
            last = at
            smallest = at
        if at != 0.0 and at < 1e-18 * abs(total):
            break
    if total == 0.0:
        return math.nan, math.inf
    return total, smallest / abs(total)


_MP_MAX_DPS = 600
_MP_MAX_WORK = 60_000.0  # ~ terms * digits budget (tens of ms at most)


def _ml_mp_feasible(alpha: float, beta: float, z: float) -> bool:
    peak, n_peak = _series_peak(alpha, beta, abs(z))
    dps = max(30.0, peak + 25.0)
    budget = 35.0 * _MP_MAX_WORK if alpha == 1.0 else _MP_MAX_WORK
    return dps <= _MP_MAX_DPS and (3 * n_peak + 200) * dps <= budget


def _ml_mp(alpha: float, beta: float, z: float) -> float:
    """Power series with extended-precision accumulation (mpmath).

    Gamma arguments are assembled in working precision: rounding alpha*n in
    float64 would perturb huge terms by far more than the final answer.
    """
    import mpmath as mp

    peak, n_peak = _series_peak(alpha, beta, abs(z))
    dps = int(max(30, peak + 25))
    if not _ml_mp_feasible(alpha, beta, z):
        raise ConvergenceError(
            f"E_({alpha},{beta})({z}): extended-precision series too costly"
        )
    with mp.workdps(dps):
        mz = mp.mpf(z)
        total = mp.mpf(0)
        eps = mp.mpf(10) ** (-dps + 5)
        cap = 3 * n_peak + 200
        if alpha == 1.0:
            t = 1.0 / mp.gamma(beta)
            for n in range(cap):
                total += t
                if n > n_peak and abs(t) < eps:
                    break
                t *= mz / (n + beta)
        else:
            ma, mb = mp.mpf(alpha), mp.mpf(beta)
            p = mp.mpf(1)
            for n in range(cap):
                t = p / mp.gamma(ma * n + mb)
                total += t
                if n > n_peak and abs(t) < eps:
                    break
                p *= mz
        return float(total)


def mittag_leffler_integral(alpha: float, beta: float, z: float) -> float:
    """Branch-cut integral representation of E_{alpha,beta}(z), z <= 0.

    Independent of the series/asymptotic routes; valid for 0 < alpha < 1 and
    beta < 1 + alpha (the integrand stays integrable at the origin).
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("integral route requires 0 < alpha < 1")
    if not 0.0 < beta < 1.0 + alpha:
        raise ValueError("integral route requires 0 < beta < 1 + alpha")
    if z > 0.0:
        raise ValueError(f"argument must satisfy z <= 0, got {z}")
    if z == 0.0:
        return _rgamma(beta)
    x = -z
    s1 = _sinpi(1.0 - beta)
    s2 = _sinpi(1.0 - beta + alpha)
    c = math.cos(math.pi * alpha)

    def smooth(r: float) -> float:
        # integrand without the r**(alpha-beta) endpoint factor
        ra = r**alpha
        num = ra * s1 + x * s2
        den = ra * ra + 2.0 * ra * x * c + x * x
        return math.exp(-r) * num / den / math.pi

    def integrand(r: float) -> float:
        return r ** (alpha - beta) * smooth(r)

    r_max = 220.0
    cuts = [1.0]
    if c < 0.0:
        # near-resonant denominator for alpha > 1/2; isolate the bump
        r_star = (x * (-c)) ** (1.0 / alpha)
        if r_star < r_max:
            cuts += [max(0.5, 0.5 * r_star), r_star, min(2.0 * r_star, r_max)]
    cuts = sorted({c_ for c_ in cuts if 0.0 < c_ < r_max})
    opts = dict(epsabs=0.0, epsrel=1e-12, limit=400)
    # algebraic weight handles the r**(alpha-beta) singularity on [0, first cut]
    val = quad(smooth, 0.0, cuts[0], weight="alg", wvar=(alpha - beta, 0.0),
               **opts)[0]
    for a_, b_ in zip(cuts, cuts[1:] + [r_max]):
        if b_ > a_:
            val += quad(integrand, a_, b_, **opts)[0]
    return val


def _ml_integral_reduced(alpha: float, beta: float, z: float) -> float:
    """Integral route extended to beta >= 1 + alpha via the index recurrence

    E_{a,b+a}(z) = (E_{a,b}(z) - 1/Gamma(b)) / z.
    """
    steps = 0
    b = beta
    while b >= 1.0 + alpha - 1e-12:
        b -= alpha
        steps += 1
    val = mittag_leffler_integral(alpha, b, z)
    for _ in range(steps):
        val = (val - _rgamma(b)) / z
        b += alpha
    return val


@lru_cache(maxsize=128)
def _asym_validated_bound(alpha: float, beta: float, tol: float) -> float:
    """Smallest |z| from which the asymptotic expansion is trusted at tol.

    Calibrated against the branch-cut integral, which is accurate to ~1e-10
    across the band (the smallest-term estimate alone is not reliable).
    """
    if alpha >= 1.0:
        return math.inf

    def good(x: float) -> bool:
        av, est = _ml_asymptotic(alpha, beta, -x)
        if not est < tol / 3.0:
            return False
        rv = _ml_integral_reduced(alpha, beta, -x)
        return abs(av - rv) <= 0.5 * tol * abs(rv) + 1e-300

    x = 4.0
    while x < 2.0e9:
        if good(x) and good(1.5 * x) and good(4.0 * x):
            return x
        x *= 2.0
    return math.inf


def mittag_leffler(alpha: float, beta: float, z: float, tol: float = 1e-9) -> float:
    """E_{alpha,beta}(z) on the closed negative axis.

    Picks the cheapest route whose validated accuracy beats ``tol``.  Raises
    ConvergenceError if no route reaches the tolerance.

    Accepts alpha up to 2 (E_{2,1}(-x^2) = cos x serves the test suite);
    solver kernels themselves stay within MlParams' (0, 1].
    """
    if not 0.0 < alpha <= 2.0:
        raise ValueError(f"alpha must lie in (0, 2], got {alpha}")
    if not beta > 0.0:
        raise ValueError(f"beta must be positive, got {beta}")
    if z > 0.0:
        raise ValueError(f"argument must satisfy z <= 0, got {z}")
    if z == 0.0:
        return _rgamma(beta)
    val, est = _ml_series_float(alpha, beta, z)
    if est < tol:
        return val
    if alpha < 1.0 and abs(z) >= _asym_validated_bound(alpha, beta, tol):
        return _ml_asymptotic(alpha, beta, z)[0]
    if _ml_mp_feasible(alpha, beta, z):
        return _ml_mp(alpha, beta, z)
    if alpha < 1.0:
        return _ml_integral_reduced(alpha, beta, z)
    raise ConvergenceError(f"no route converged for E_({alpha},{beta})({z})")


# ---------------------------------------------------------------------------
# vectorized evaluation for solver kernels

_FLOAT_DIGITS = 15.6


def _series_safe_bound(alpha: float, beta: float, tol: float) -> float:
    """Largest |z| whose float series keeps its own error estimate below tol.

    Uses the summation's error estimator directly (it accounts for result
    smallness, which a max-term model misses for alpha near 1).
    """

    def ok(x: float) -> bool:
        return _ml_series_float(alpha, beta, -x)[1] < 0.5 * tol

    lo, hi = 0.5, 60.0
    if ok(hi):
        return hi
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


@lru_cache(maxsize=128)
def _route_bounds(alpha: float, beta: float, tol: float):
    ser_hi = _series_safe_bound(alpha, beta, tol)
    asy_lo = _asym_validated_bound(alpha, beta, tol) if alpha < 1.0 else math.inf
    return ser_hi, asy_lo


def _ml_midband(alpha: float, beta: float, x: float, tol: float) -> float:
    """Full-accuracy value at -x preferring the cheap routes (table builds)."""
    val, est = _ml_series_float(alpha, beta, -x)
    if est < tol:
        return val
    peak, n_peak = _series_peak(alpha, beta, x)
    if (3 * n_peak + 200) * max(30.0, peak + 25.0) <= 30_000.0:
        return _ml_mp(alpha, beta, -x)
    if alpha < 1.0:
        return _ml_integral_reduced(alpha, beta, -x)
    return _ml_mp(alpha, beta, -x)


@lru_cache(maxsize=128)
def _gap_spline(alpha: float, beta: float, tol: float):
    """Cubic spline of E over the band neither float route covers."""
    from scipy.interpolate import CubicSpline

    ser_hi, asy_lo = _route_bounds(alpha, beta, tol)
    lo = max(0.3, 0.8 * ser_hi)
    hi = 1.25 * asy_lo if math.isfinite(asy_lo) else 420.0
    # alpha near 1 has a sharp knee where the exponential regime hands over
    # to the algebraic tail; sample it more densely
    n = 1200 if alpha > 0.95 else 800
    xs = np.exp(np.linspace(math.log(lo), math.log(hi), n))
    vals = np.array([_ml_midband(alpha, beta, x, tol) for x in xs])
    if np.all(vals > 0.0):
        return CubicSpline(np.log(xs), np.log(vals)), True, hi
    return CubicSpline(np.log(xs), vals), False, hi


def _series_vec(alpha: float, beta: float, z: np.ndarray) -> np.ndarray:
    """Vectorized float series on arguments already known to be safe."""
    out = np.full(z.shape, _rgamma(beta))
    az = np.abs(z)
    ln_az = np.where(az > 0.0, np.log(np.maximum(az, 1e-300)), -np.inf)
    sign = -1.0
    top = float(np.max(az)) if z.size else 0.0
    for n in range(1, _SERIES_MAX_TERMS):
        lg = math.lgamma(alpha * n + beta)
        out = out + sign * np.exp(n * ln_az - lg)
        if n * math.log(max(top, 1e-300)) - lg < -46.0:  # all terms < ~1e-20
            break
        sign = -sign
    return out


def ml_array(alpha: float, beta: float, z, tol: float = 1e-9) -> np.ndarray:
    """E_{alpha,beta} elementwise on an array of non-positive arguments.

    Equivalent to mapping :func:`mittag_leffler`, but the series and the
    asymptotic expansion run vectorized, and the band in between is served
    by a cached spline of full-accuracy values (interpolation error well
    below ``tol``).
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if z.size and float(np.max(z)) > 0.0:
        raise ValueError("ml_array requires z <= 0")
    out = np.empty(z.shape)
    az = np.abs(z)
    ser_hi, asy_lo = _route_bounds(alpha, beta, tol)
    ser = az <= ser_hi
    if np.any(ser):
        out[ser] = _series_vec(alpha, beta, z[ser])
    if math.isfinite(asy_lo):
        asy = (~ser) & (az >= asy_lo)
    else:
        asy = np.zeros_like(ser)
    if np.any(asy):
        out[asy] = [_ml_asymptotic(alpha, beta, v)[0] for v in z[asy]]
    gap = ~(ser | asy)
    if np.any(gap):
        spline, logged, hi = _gap_spline(alpha, beta, tol)
        inside = gap & (az <= hi)
        if np.any(inside):
            vals = spline(np.log(az[inside]))
            out[inside] = np.exp(vals) if logged else vals
        beyond = gap & (az > hi)
        if np.any(beyond):  # only at alpha = 1 with huge arguments
            out[beyond] = [mittag_leffler(alpha, beta, v, tol) for v in z[beyond]]
    return out
