"""Fitting the path-loss model to drive-test measurements.

Two layers: an ordinary least-squares regression of measured path loss
against 10 * log10(d / d0), which yields the single-slope summary
(gamma, intercept, residual spread), and the statistical layer that
turns each measurement into an effective exponent, splits the series at
the breakpoint distance and fits a GEV below it and a rescaled Beta
above it by maximum likelihood.  A one-sample Kolmogorov-Smirnov test
scores each candidate.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from .distributions import GevDistribution, ScaledBetaDistribution
from .pathloss import extract_ple

__all__ = [
    "FitError",
    "PathLossSample",
    "RegressionFit",
    "FitReport",
    "fit_log_distance",
    "extract_ple_series",
    "split_by_breakpoint",
    "fit_gev",
    "fit_scaled_beta",
    "ks_test",
]

DEFAULT_BREAKPOINT_M = 60.0
DEFAULT_MIN_POINTS = 50


class FitError(RuntimeError):
    """Raised when an estimator cannot produce a usable fit."""


@dataclass(frozen=True)
class PathLossSample:
    """One measurement: path loss at a known 2D distance from the cell."""

    distance_m: float
    path_loss_db: float
    band: object = None        # FrequencyBand of the carrier
    source_tool: str = ""
    timestamp_s: float = 0.0


@dataclass(frozen=True)
class RegressionFit:
    gamma_hat: float
    intercept_db: float
    mean_residual_db: float
    residual_std_db: float
    n_points: int


@dataclass(frozen=True)
class FitReport:
    """Distribution candidate with its goodness-of-fit score."""

    candidate: object
    ks_statistic: float
    ks_p_value: float
    n_points: int


def _sample_arrays(samples):
    if hasattr(samples, "distance_m"):  # a single sample
        samples = [samples]
    d = np.array([s.distance_m for s in samples], float)
    pl = np.array([s.path_loss_db for s in samples], float)
    return d, pl


def fit_log_distance(samples, fixed_intercept_db=None):
    """OLS fit of path loss against 10 * log10(d / d0).

    With ``fixed_intercept_db`` given, only the slope is estimated and
    the residual statistics are reported against that intercept.
    """
    d, pl = _sample_arrays(samples)
    if d.size < 2:
        raise FitError("regression needs at least two samples")
    if np.any(d <= 0):
        raise ValueError("distances must be positive")
    x = 10.0 * np.log10(d)
    if np.ptp(x) == 0.0:
        raise FitError("regression is rank deficient: "
                       "all samples at one distance")
    if fixed_intercept_db is None:
        xm, ym = x.mean(), pl.mean()
        slope = np.sum((x - xm) * (pl - ym)) / np.sum((x - xm) ** 2)
        intercept = ym - slope * xm
    else:
        intercept = float(fixed_intercept_db)
        slope = np.sum((pl - intercept) * x) / np.sum(x * x)
    resid = pl - (intercept + slope * x)
    return RegressionFit(
        gamma_hat=float(slope),
        intercept_db=float(intercept),
        mean_residual_db=float(resid.mean()),
        residual_std_db=float(resid.std(ddof=1)) if d.size > 1 else 0.0,
        n_points=int(d.size),
    )


def extract_ple_series(samples, intercept_db):
    """Per-measurement effective exponents, keeping distance order.

    Samples at or inside the 1 m reference distance carry no exponent
    information and are dropped; the count of dropped points is
    returned alongside.
    """
    d, pl = _sample_arrays(samples)
    keep = d > 1.0
    n_rejected = int(d.size - keep.sum())
    d, pl = d[keep], pl[keep]
    gammas = extract_ple(pl, intercept_db, d) if d.size else np.empty(0)
    return d, np.asarray(gammas, float), n_rejected


def split_by_breakpoint(distances, gammas, breakpoint_m=DEFAULT_BREAKPOINT_M):
    """Split an exponent series into near and far bands.

    The near band holds strictly shorter distances; the breakpoint
    itself belongs to the far band.
    """
    d = np.asarray(distances, float)
    g = np.asarray(gammas, float)
    if d.shape != g.shape:
        raise ValueError("distances and gammas must align")
    near = d < breakpoint_m
    return (d[near], g[near]), (d[~near], g[~near])


# --- GEV maximum likelihood ------------------------------------------------

def _gev_pwm_start(x):
    """Probability-weighted-moment starting point (k, s, m).

    Standard L-moment estimator; the shape sign is flipped into the
    bounded-above convention used by :class:`GevDistribution`.
    """
    xs = np.sort(x)
    n = xs.size
    i = np.arange(1, n + 1)
    b0 = xs.mean()
    b1 = np.sum((i - 1) / (n - 1) * xs) / n
    b2 = np.sum((i - 1) * (i - 2) / ((n - 1) * (n - 2)) * xs) / n
    l1 = b0
    l2 = 2.0 * b1 - b0
    l3 = 6.0 * b2 - 6.0 * b1 + b0
    if l2 <= 0:
        raise FitError("degenerate sample in GEV initialization")
    t3 = l3 / l2
    c = 2.0 / (3.0 + t3) - math.log(2.0) / math.log(3.0)
    kappa = 7.8590 * c + 2.9554 * c * c
    if abs(kappa) < 1e-9:
        s0 = l2 / math.log(2.0)
        m0 = l1 - s0 * 0.5772156649015329
        return 0.0, s0, m0
    gk = math.gamma(1.0 + kappa)
    s0 = l2 * kappa / (gk * (1.0 - 2.0 ** (-kappa)))
    m0 = l1 + s0 * (gk - 1.0) / kappa
    return -kappa, s0, m0


def fit_gev(gammas, min_points=DEFAULT_MIN_POINTS):
    """Maximum-likelihood GEV fit of an exponent sample."""
    x = np.asarray(gammas, float)
    if x.size < min_points:
        raise ValueError(
            f"GEV fit needs at least {min_points} points, got {x.size}"
        )
    if np.ptp(x) == 0.0:
        raise FitError("degenerate sample: all exponents identical")

    k0, s0, m0 = _gev_pwm_start(x)

    def nll(theta):
        k, log_s, m = theta
        cand = GevDistribution(k, math.exp(log_s), m)
        lp = cand.logpdf(x)
        if not np.all(np.isfinite(lp)):
            return np.inf
        return -float(np.sum(lp))

    res = optimize.minimize(
        nll, x0=[k0, math.log(s0), m0], method="Nelder-Mead",
        options={"maxiter": 4000, "xatol": 1e-8, "fatol": 1e-8},
    )
    if not res.success or not np.isfinite(res.fun):
        raise FitError(
            f"GEV likelihood optimization failed after {res.nit} "
            f"iterations: {res.message}"
        )
    k, log_s, m = res.x
    return GevDistribution(float(k), float(math.exp(log_s)), float(m))


# --- scaled Beta maximum likelihood ---------------------------------------

def fit_scaled_beta(gammas, support=None, min_points=DEFAULT_MIN_POINTS):
    """Maximum-likelihood rescaled-Beta fit of an exponent sample.

    When ``support`` is omitted, the interval is estimated by expanding
    the sample minimum and maximum outward by 0.5% of the sample range.
    That works when the density carries real mass near its endpoints;
    for sharply peaked shapes the endpoints are not identifiable from
    data, so pass the known interval instead.
    """
    x = np.asarray(gammas, float)
    if x.size < min_points:
        raise ValueError(
            f"Beta fit needs at least {min_points} points, got {x.size}"
        )
    if np.ptp(x) == 0.0:
        raise FitError("degenerate sample: all exponents identical")

    if support is None:
        margin = 0.005 * np.ptp(x)
        a, b = float(x.min() - margin), float(x.max() + margin)
    else:
        a, b = float(support[0]), float(support[1])
        if not (a < x.min() and b > x.max()):
            raise ValueError("given support must enclose the sample")

    z = (x - a) / (b - a)
    log_z = np.log(z)
    log_1mz = np.log1p(-z)

    zm, zv = z.mean(), z.var()
    common = zm * (1.0 - zm) / max(zv, 1e-12) - 1.0
    a1_0 = max(zm * common, 1e-3)
    a2_0 = max((1.0 - zm) * common, 1e-3)

    n = z.size
    sum_log_z = float(log_z.sum())
    sum_log_1mz = float(log_1mz.sum())

    def nll(theta):
        a1, a2 = np.exp(theta)
        return -((a1 - 1.0) * sum_log_z + (a2 - 1.0) * sum_log_1mz
                 - n * special.betaln(a1, a2))

    res = optimize.minimize(
        nll, x0=[math.log(a1_0), math.log(a2_0)], method="Nelder-Mead",
        options={"maxiter": 2000, "xatol": 1e-9, "fatol": 1e-9},
    )
    if not res.success or not np.isfinite(res.fun):
        raise FitError(
            f"Beta likelihood optimization failed after {res.nit} "
            f"iterations: {res.message}"
        )
    a1, a2 = np.exp(res.x)
    return ScaledBetaDistribution(float(a1), float(a2), a, b)


def ks_test(gammas, candidate):
    """One-sample Kolmogorov-Smirnov test against a fitted candidate.

    Returns the supremum distance between the empirical CDF and the
    candidate CDF with the asymptotic Kolmogorov p-value; treat the
    p-value as indicative below a few tens of samples.
    """
    x = np.sort(np.asarray(gammas, float))
    n = x.size
    if n < 1:
        raise ValueError("KS test needs at least one sample")
    f = np.atleast_1d(candidate.cdf(x))
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1) / n)
    stat = float(max(d_plus, d_minus))
    p = float(special.kolmogorov(math.sqrt(n) * stat))
    return FitReport(candidate=candidate, ks_statistic=stat,
                     ks_p_value=p, n_points=n)
