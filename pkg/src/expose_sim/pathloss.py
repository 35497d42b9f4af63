"""Log-distance path-loss model anchored at the free-space intercept.

The deterministic part of the link model is

    PL(d) = A + 10 * gamma * log10(d / d0),    d0 = 1 m

with the intercept A taken from free-space loss at the reference
distance, A = 20 * log10(4 * pi / lambda).  The exponent gamma is not a
single constant here; it is drawn per position from the banded
distributions in :mod:`expose_sim.distributions`.  The same relation run
backwards turns a measured path loss at a known distance into an
effective exponent, which is what the fitting pipeline consumes.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SPEED_OF_LIGHT_M_S",
    "FrequencyBand",
    "LTE_1800",
    "LTE_2600",
    "free_space_intercept",
    "PathLossModel",
    "path_loss",
    "extract_ple",
]

SPEED_OF_LIGHT_M_S = 299792458.0


@dataclass(frozen=True)
class FrequencyBand:
    """Carrier frequency and system bandwidth of one LTE band."""

    carrier_frequency_hz: float
    bandwidth_hz: float

    def __post_init__(self):
        if not self.carrier_frequency_hz > 0:
            raise ValueError("carrier frequency must be positive")
        if not self.bandwidth_hz > 0:
            raise ValueError("bandwidth must be positive")

    @property
    def wavelength_m(self):
        return SPEED_OF_LIGHT_M_S / self.carrier_frequency_hz


# the two measured deployments: 20 MHz at 1800 MHz, 15 MHz at 2600 MHz
LTE_1800 = FrequencyBand(1.8e9, 20e6)
LTE_2600 = FrequencyBand(2.6e9, 15e6)


def free_space_intercept(band):
    """Free-space path loss in dB at the 1 m reference distance.

    Evaluates 20 * log10(4 * pi / lambda); about 37.55 dB at 1800 MHz
    and 40.75 dB at 2600 MHz.
    """
    return 20.0 * math.log10(4.0 * math.pi / band.wavelength_m)


@dataclass(frozen=True)
class PathLossModel:
    """Intercept plus exponent model for one band.

    ``exponent_model`` is normally a
    :class:`~expose_sim.distributions.BandedPleDistribution`; a bare
    float is accepted for deterministic single-slope use.
    """

    intercept_db: float
    exponent_model: object = None
    reference_distance_m: float = 1.0

    def __post_init__(self):
        if not self.intercept_db > 0:
            raise ValueError("intercept must be positive")
        if self.reference_distance_m != 1.0:
            raise ValueError("reference distance is fixed at 1 m")


def path_loss(model, gamma, distance_m):
    """Path loss in dB at the given distance for a known exponent."""
    d = np.asarray(distance_m, float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    out = model.intercept_db + 10.0 * np.asarray(gamma, float) * np.log10(
        d / model.reference_distance_m
    )
    if np.ndim(distance_m) == 0 and np.ndim(gamma) == 0:
        return float(out)
    return out


def extract_ple(path_loss_db, intercept_db, distance_m,
                reference_distance_m=1.0):
    """Effective path-loss exponent implied by one measurement.

    Inverts the log-distance relation; singular at the reference
    distance where the log term vanishes.
    """
    d = np.asarray(distance_m, float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    denom = 10.0 * np.log10(d / reference_distance_m)
    if np.any(denom == 0.0):
        raise ValueError("exponent is singular at the reference distance")
    out = (np.asarray(path_loss_db, float) - intercept_db) / denom
    if np.ndim(distance_m) == 0 and np.ndim(path_loss_db) == 0:
        return float(out)
    return out
