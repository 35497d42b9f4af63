"""Sampling distributions for the street-level path-loss exponent.

Close to a low-mounted small-cell antenna the effective path-loss
exponent fluctuates strongly from one position to the next; further out
it settles into a narrower band.  The propagation model therefore
carries one distribution per distance band instead of a single slope: a
generalized extreme value (GEV) law below a breakpoint distance and a
Beta law rescaled to a finite interval beyond it.

Parameter convention for the GEV is (shape_k, scale_s, location_m) with

    cdf(x) = exp(-t),    t = (1 + k (x - m) / s) ** (-1 / k)

so a negative shape bounds the upper tail at m - s / k, which keeps
sampled exponents finite.  Sampling everywhere is inverse-CDF on a
single uniform draw per variate, through an explicitly passed numpy
Generator, so simulations stay reproducible draw for draw.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

__all__ = [
    "GevDistribution",
    "ScaledBetaDistribution",
    "UniformDistribution",
    "FixedValue",
    "BandedPleDistribution",
    "sample_ple",
    "dist_to_dict",
    "dist_from_dict",
]

_EULER_GAMMA = 0.5772156649015329
# below this magnitude the shape is treated as zero (Gumbel limit)
_K_THRESHOLD = 1e-10


def _restore(out, x_in):
    if np.ndim(x_in) == 0:
        return float(out[0])
    return out


@dataclass(frozen=True)
class GevDistribution:
    """Generalized extreme value law with shape k, scale s, location m."""

    shape_k: float
    scale_s: float
    location_m: float

    kind = "gev"

    def __post_init__(self):
        if not self.scale_s > 0:
            raise ValueError(f"GEV scale must be positive, got {self.scale_s}")

    @property
    def support(self):
        k, s, m = self.shape_k, self.scale_s, self.location_m
        if abs(k) < _K_THRESHOLD:
            return (-math.inf, math.inf)
        if k < 0:
            return (-math.inf, m - s / k)
        return (m - s / k, math.inf)

    def pdf(self, x):
        return _restore(np.exp(self._logpdf_array(x)), x)

    def logpdf(self, x):
        return _restore(self._logpdf_array(x), x)

    def _logpdf_array(self, x):
        k, s, m = self.shape_k, self.scale_s, self.location_m
        z = (np.atleast_1d(np.asarray(x, float)) - m) / s
        if abs(k) < _K_THRESHOLD:
            t = np.exp(-z)
            return -math.log(s) - z - t
        arg = 1.0 + k * z
        out = np.full(z.shape, -np.inf)
        ok = arg > 0
        logt = -np.log(arg[ok]) / k
        out[ok] = -math.log(s) + (k + 1.0) * logt - np.exp(logt)
        return out

    def cdf(self, x):
        k, s, m = self.shape_k, self.scale_s, self.location_m
        z = (np.atleast_1d(np.asarray(x, float)) - m) / s
        if abs(k) < _K_THRESHOLD:
            t = np.exp(-z)
        else:
            arg = 1.0 + k * z
            ok = arg > 0
            t = np.empty(z.shape)
            # beyond the bounded tail the cdf saturates: 1 above an upper
            # endpoint (k < 0), 0 below a lower endpoint (k > 0)
            t[~ok] = 0.0 if k < 0 else np.inf
            t[ok] = arg[ok] ** (-1.0 / k)
        return _restore(np.exp(-t), x)

    def ppf(self, p):
        k, s, m = self.shape_k, self.scale_s, self.location_m
        q = np.atleast_1d(np.asarray(p, float))
        if np.any((q < 0) | (q > 1)):
            raise ValueError("probabilities must lie in [0, 1]")
        with np.errstate(divide="ignore"):
            loglog = -np.log(q)
            if abs(k) < _K_THRESHOLD:
                out = m - s * np.log(loglog)
            else:
                out = m + s * (loglog ** (-k) - 1.0) / k
        return _restore(out, p)

    def sample(self, rng, size=None):
        return self.ppf(rng.random(size))

    def mean(self):
        k, s, m = self.shape_k, self.scale_s, self.location_m
        if abs(k) < _K_THRESHOLD:
            return m + s * _EULER_GAMMA
        if k >= 1:
            raise ValueError("GEV mean undefined for shape >= 1")
        return m + s * (math.gamma(1.0 - k) - 1.0) / k

    def var(self):
        k, s = self.shape_k, self.scale_s
        if abs(k) < _K_THRESHOLD:
            return (math.pi ** 2 / 6.0) * s * s
        if k >= 0.5:
            raise ValueError("GEV variance undefined for shape >= 1/2")
        g1 = math.gamma(1.0 - k)
        g2 = math.gamma(1.0 - 2.0 * k)
        return s * s * (g2 - g1 * g1) / (k * k)


@dataclass(frozen=True)
class ScaledBetaDistribution:
    """Beta(alpha1, alpha2) rescaled to the interval [lower_a, upper_b]."""

    alpha1: float
    alpha2: float
    lower_a: float = 0.0
    upper_b: float = 1.0

    kind = "scaled_beta"

    def __post_init__(self):
        if not (self.alpha1 > 0 and self.alpha2 > 0):
            raise ValueError("Beta shape parameters must be positive")
        if not self.lower_a < self.upper_b:
            raise ValueError(
                f"Beta support must satisfy lower < upper, got "
                f"[{self.lower_a}, {self.upper_b}]"
            )

    @property
    def support(self):
        return (self.lower_a, self.upper_b)

    @property
    def _width(self):
        return self.upper_b - self.lower_a

    def pdf(self, x):
        return _restore(np.exp(self._logpdf_array(x)), x)

    def logpdf(self, x):
        return _restore(self._logpdf_array(x), x)

    def _logpdf_array(self, x):
        a1, a2 = self.alpha1, self.alpha2
        z = (np.atleast_1d(np.asarray(x, float)) - self.lower_a) / self._width
        out = np.full(z.shape, -np.inf)
        ok = (z > 0) & (z < 1)
        zk = z[ok]
        out[ok] = (
            (a1 - 1.0) * np.log(zk)
            + (a2 - 1.0) * np.log1p(-zk)
            - special.betaln(a1, a2)
            - math.log(self._width)
        )
        return out

    def cdf(self, x):
        z = (np.atleast_1d(np.asarray(x, float)) - self.lower_a) / self._width
        out = special.betainc(self.alpha1, self.alpha2, np.clip(z, 0.0, 1.0))
        return _restore(out, x)

    def ppf(self, p):
        q = np.atleast_1d(np.asarray(p, float))
        if np.any((q < 0) | (q > 1)):
            raise ValueError("probabilities must lie in [0, 1]")
        out = self.lower_a + self._width * special.betaincinv(
            self.alpha1, self.alpha2, q
        )
        return _restore(out, p)

    def sample(self, rng, size=None):
        return self.ppf(rng.random(size))

    def mean(self):
        return self.lower_a + self._width * self.alpha1 / (self.alpha1 + self.alpha2)

    def var(self):
        a1, a2 = self.alpha1, self.alpha2
        total = a1 + a2
        return self._width ** 2 * a1 * a2 / (total ** 2 * (total + 1.0))


@dataclass(frozen=True)
class UniformDistribution:
    """Uniform law on [lo, hi], mostly a baseline for comparisons."""

    lo: float
    hi: float

    kind = "uniform"

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"uniform bounds must satisfy lo < hi, got "
                             f"[{self.lo}, {self.hi}]")

    @property
    def support(self):
        return (self.lo, self.hi)

    def pdf(self, x):
        z = np.atleast_1d(np.asarray(x, float))
        inside = (z >= self.lo) & (z <= self.hi)
        return _restore(np.where(inside, 1.0 / (self.hi - self.lo), 0.0), x)

    def cdf(self, x):
        z = np.atleast_1d(np.asarray(x, float))
        out = np.clip((z - self.lo) / (self.hi - self.lo), 0.0, 1.0)
        return _restore(out, x)

    def ppf(self, p):
        q = np.atleast_1d(np.asarray(p, float))
        if np.any((q < 0) | (q > 1)):
            raise ValueError("probabilities must lie in [0, 1]")
        return _restore(self.lo + (self.hi - self.lo) * q, p)

    def sample(self, rng, size=None):
        return self.ppf(rng.random(size))

    def mean(self):
        return 0.5 * (self.lo + self.hi)

    def var(self):
        return (self.hi - self.lo) ** 2 / 12.0


@dataclass(frozen=True)
class FixedValue:
    """Degenerate distribution; a deterministic exponent in banded form."""

    value: float

    kind = "fixed"

    @property
    def support(self):
        return (self.value, self.value)

    def cdf(self, x):
        z = np.atleast_1d(np.asarray(x, float))
        return _restore(np.where(z >= self.value, 1.0, 0.0), x)

    def ppf(self, p):
        q = np.atleast_1d(np.asarray(p, float))
        if np.any((q < 0) | (q > 1)):
            raise ValueError("probabilities must lie in [0, 1]")
        return _restore(np.full(q.shape, self.value), p)

    def sample(self, rng, size=None):
        return self.ppf(rng.random(size))

    def mean(self):
        return self.value

    def var(self):
        return 0.0


@dataclass(frozen=True)
class BandedPleDistribution:
    """Distance-banded path-loss-exponent model.

    Draws come from ``near_model`` for 3D link distances below
    ``breakpoint_m`` and from ``far_model`` at the breakpoint and beyond.
    """

    near_model: object
    far_model: object
    breakpoint_m: float = 60.0

    def __post_init__(self):
        # the log-distance reference is pinned at 1 m, the breakpoint
        # has to sit beyond it
        if not self.breakpoint_m > 1.0:
            raise ValueError(
                f"breakpoint must exceed the 1 m reference distance, got "
                f"{self.breakpoint_m}"
            )

    def distribution_at(self, distance_m):
        if distance_m < self.breakpoint_m:
            return self.near_model
        return self.far_model

    def ppf_at(self, distance_m, u):
        """Inverse CDF of the band selected by distance, elementwise."""
        d = np.atleast_1d(np.asarray(distance_m, float))
        q = np.atleast_1d(np.asarray(u, float))
        d, q = np.broadcast_arrays(d, q)
        near = d < self.breakpoint_m
        out = np.empty(d.shape)
        if near.any():
            out[near] = self.near_model.ppf(q[near])
        if (~near).any():
            out[~near] = self.far_model.ppf(q[~near])
        return _restore(out, distance_m if np.ndim(distance_m) else u)

    def sample_at(self, distance_m, rng):
        u = rng.random(np.shape(distance_m) or None)
        return self.ppf_at(distance_m, u)


def sample_ple(banded, distance_m, rng):
    """Draw path-loss exponents for the given link distances."""
    return banded.sample_at(distance_m, rng)


def dist_to_dict(dist):
    """Serialize a distribution to a plain dict (for model files)."""
    if isinstance(dist, GevDistribution):
        return {"kind": "gev", "shape_k": dist.shape_k,
                "scale_s": dist.scale_s, "location_m": dist.location_m}
    if isinstance(dist, ScaledBetaDistribution):
        return {"kind": "scaled_beta", "alpha1": dist.alpha1,
                "alpha2": dist.alpha2, "lower_a": dist.lower_a,
                "upper_b": dist.upper_b}
    if isinstance(dist, UniformDistribution):
        return {"kind": "uniform", "lo": dist.lo, "hi": dist.hi}
    if isinstance(dist, FixedValue):
        return {"kind": "fixed", "value": dist.value}
    raise TypeError(f"unknown distribution type {type(dist).__name__}")


def dist_from_dict(payload):
    """Inverse of :func:`dist_to_dict`."""
    kind = payload.get("kind")
    if kind == "gev":
        return GevDistribution(payload["shape_k"], payload["scale_s"],
                               payload["location_m"])
    if kind == "scaled_beta":
        return ScaledBetaDistribution(payload["alpha1"], payload["alpha2"],
                                      payload["lower_a"], payload["upper_b"])
    if kind == "uniform":
        return UniformDistribution(payload["lo"], payload["hi"])
    if kind == "fixed":
        return FixedValue(payload["value"])
    raise ValueError(f"unknown distribution kind {kind!r}")
