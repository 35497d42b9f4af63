"""Model files: fitted propagation models as portable JSON.

A model file carries the band, the log-distance intercept and the two
banded exponent distributions, plus free-form provenance (sample counts,
goodness-of-fit scores, tool tags).  Builtin models ship the
coefficients fitted from the 1800 and 2600 MHz street measurement
campaigns so a simulation can run without refitting anything.
"""

import json

from .distributions import (BandedPleDistribution, GevDistribution,
                            ScaledBetaDistribution, dist_from_dict,
                            dist_to_dict)
from .pathloss import (LTE_1800, LTE_2600, FrequencyBand, PathLossModel,
                       free_space_intercept)

__all__ = ["save_model", "load_model", "builtin_model", "BUILTIN_BANDS_MHZ"]

_FORMAT = "ple-model/1"

BUILTIN_BANDS_MHZ = (1800.0, 2600.0)

# street-campaign exponent models per band: GEV below 60 m, rescaled
# Beta beyond
_BUILTIN = {
    1800.0: (LTE_1800, BandedPleDistribution(
        near_model=GevDistribution(-0.31, 0.42, 2.7),
        far_model=ScaledBetaDistribution(3.0, 3.4, 2.2, 3.2),
        breakpoint_m=60.0,
    )),
    2600.0: (LTE_2600, BandedPleDistribution(
        near_model=GevDistribution(-0.23, 0.93, 2.6),
        far_model=ScaledBetaDistribution(21.0, 18.0, 0.0, 5.0),
        breakpoint_m=60.0,
    )),
}


def builtin_model(band_mhz):
    """Bundled measurement-campaign model for 1800 or 2600 MHz."""
    try:
        band, exponents = _BUILTIN[float(band_mhz)]
    except KeyError:
        raise ValueError(
            f"no builtin model at {band_mhz} MHz; available: "
            f"{BUILTIN_BANDS_MHZ}"
        ) from None
    model = PathLossModel(intercept_db=free_space_intercept(band),
                          exponent_model=exponents)
    return model, band


def save_model(path, model, band, provenance=None):
    """Write a fitted model to a JSON model file."""
    banded = model.exponent_model
    payload = {
        "format": _FORMAT,
        "band_mhz": band.carrier_frequency_hz / 1e6,
        "bandwidth_mhz": band.bandwidth_hz / 1e6,
        "intercept_db": model.intercept_db,
        "reference_distance_m": model.reference_distance_m,
        "breakpoint_m": banded.breakpoint_m,
        "near": dist_to_dict(banded.near_model),
        "far": dist_to_dict(banded.far_model),
        "provenance": provenance or {},
    }
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def load_model(path):
    """Read a model file back into (model, band, provenance)."""
    with open(path) as handle:
        payload = json.load(handle)
    if payload.get("format") != _FORMAT:
        raise ValueError(f"not a model file: {path}")
    band = FrequencyBand(payload["band_mhz"] * 1e6,
                         payload["bandwidth_mhz"] * 1e6)
    banded = BandedPleDistribution(
        near_model=dist_from_dict(payload["near"]),
        far_model=dist_from_dict(payload["far"]),
        breakpoint_m=payload["breakpoint_m"],
    )
    model = PathLossModel(
        intercept_db=payload["intercept_db"],
        exponent_model=banded,
        reference_distance_m=payload.get("reference_distance_m", 1.0),
    )
    return model, band, payload.get("provenance", {})
