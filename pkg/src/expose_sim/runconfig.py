"""Run configuration for the simulate command.

A run config is a JSON object in which every scenario and radio
parameter has a named key and a default matching the measured street
deployment, so a minimal config is just a band and a seed:

    {"band_mhz": 2600, "seed": 7}

Sections "geometry", "radio" and "occupancy" override individual fields
of the corresponding dataclasses; "model_file" selects a fitted model
file or the builtin campaign coefficients.
"""

import dataclasses
import json

from .linkbudget import RadioConfig
from .modelio import builtin_model, load_model
from .pathloss import FrequencyBand
from .scenario import OccupancyProfile, ScenarioGeometry

__all__ = ["RunConfig", "load_run_config", "default_run_config"]

_DEFAULT_BANDWIDTH_MHZ = {1800.0: 20.0, 2600.0: 15.0}

_TOP_KEYS = {
    "seed", "n_observations", "worker_count", "band_mhz", "bandwidth_mhz",
    "model_file", "geometry", "radio", "occupancy",
}


@dataclasses.dataclass
class RunConfig:
    """Everything a simulation run needs, ready to execute."""

    seed: int
    n_observations: int
    worker_count: int
    band: FrequencyBand
    model: object            # PathLossModel with banded exponents
    radio: RadioConfig
    geometry: ScenarioGeometry
    occupancy: OccupancyProfile
    model_file: str = "builtin"

    def meta_dict(self):
        """Config echo for report headers.

        Execution details that cannot change the numbers (worker count,
        output paths) stay out so reruns compare byte for byte.
        """
        radio = dataclasses.asdict(self.radio)
        radio.pop("band", None)
        radio["resource_blocks_m"] = self.radio.m_grant
        radio["resource_blocks_total"] = self.radio.m_total
        return {
            "seed": self.seed,
            "n_observations": self.n_observations,
            "band_mhz": self.band.carrier_frequency_hz / 1e6,
            "bandwidth_mhz": self.band.bandwidth_hz / 1e6,
            "model_file": self.model_file,
            "geometry": dataclasses.asdict(self.geometry),
            "radio": radio,
            "occupancy": dataclasses.asdict(self.occupancy),
        }


def _build(cls, overrides, **fixed):
    overrides = dict(overrides or {})
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(overrides) - known
    if unknown:
        raise ValueError(
            f"unknown {cls.__name__} keys: {', '.join(sorted(unknown))}"
        )
    for key in ("sc_position_m", "penetration_loss_db"):
        if key in overrides:
            overrides[key] = tuple(overrides[key])
    return cls(**overrides, **fixed)


def default_run_config(band_mhz=2600.0, seed=1, n_observations=100_000):
    """The measured street deployment with builtin model coefficients."""
    return _from_dict({"band_mhz": band_mhz, "seed": seed,
                       "n_observations": n_observations})


def load_run_config(path):
    """Read and validate a JSON run config."""
    with open(path) as handle:
        raw = json.load(handle)
    if not isinstance(raw, dict):
        raise ValueError("run config must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ValueError(
            f"unknown run config keys: {', '.join(sorted(unknown))}"
        )
    return _from_dict(raw)


def _from_dict(raw):
    band_mhz = float(raw.get("band_mhz", 2600.0))
    model_file = raw.get("model_file", "builtin")
    if model_file == "builtin":
        model, band = builtin_model(band_mhz)
    else:
        model, band, _ = load_model(model_file)
        if abs(band.carrier_frequency_hz / 1e6 - band_mhz) > 1e-6:
            raise ValueError(
                f"model file is for {band.carrier_frequency_hz / 1e6:g} "
                f"MHz but the config asks for {band_mhz:g} MHz"
            )
    bandwidth_mhz = raw.get("bandwidth_mhz")
    if bandwidth_mhz is not None:
        band = FrequencyBand(band_mhz * 1e6, float(bandwidth_mhz) * 1e6)
    elif model_file == "builtin":
        band = FrequencyBand(
            band_mhz * 1e6,
            _DEFAULT_BANDWIDTH_MHZ.get(band_mhz, 20.0) * 1e6,
        )

    radio = _build(RadioConfig, raw.get("radio"), band=band)
    geometry = _build(ScenarioGeometry, raw.get("geometry"))
    occupancy = _build(OccupancyProfile, raw.get("occupancy"))

    n_obs = int(raw.get("n_observations", 100_000))
    if n_obs < 1:
        raise ValueError("n_observations must be at least 1")
    worker_count = int(raw.get("worker_count", 1))
    if worker_count < 1:
        raise ValueError("worker_count must be at least 1")

    return RunConfig(
        seed=int(raw.get("seed", 1)),
        n_observations=n_obs,
        worker_count=worker_count,
        band=band,
        model=model,
        radio=radio,
        geometry=geometry,
        occupancy=occupancy,
        model_file=model_file,
    )
