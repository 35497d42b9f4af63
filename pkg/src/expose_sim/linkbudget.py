"""LTE downlink and uplink link budget around one small cell.

Downlink: received reference-signal power is transmit RS power plus
antenna gain minus path loss.  Uplink: the UE sets its transmit power by
open-loop power control,

    P_tx = min(P_max, 10 * log10(M) + P0 + alpha * PL)

clamped below at the minimum output power, with M the number of granted
resource blocks.  Rate follows an attenuated Shannon map on the
allocated bandwidth, capped at the scheduler's maximum.  All operations
accept scalars or numpy arrays.
"""

import math
from dataclasses import dataclass

import numpy as np

from .pathloss import FrequencyBand, LTE_2600

__all__ = [
    "RadioConfig",
    "LinkResult",
    "dbm_to_watts",
    "watts_to_dbm",
    "downlink_rsrp",
    "uplink_tx_power",
    "uplink_snr",
    "downlink_snr",
    "rsrp_to_total_power",
    "shannon_throughput",
    "throughput",
    "aperture_factor",
    "incident_power_density",
    "compute_link",
]

# 3GPP resource grid: one resource block spans 180 kHz plus guard share,
# which lands at 100 RB in 20 MHz and 75 RB in 15 MHz
_RB_GRID_HZ = 200e3


@dataclass(frozen=True)
class RadioConfig:
    """Radio parameters of the deployment under study.

    Defaults mirror the measured street deployment: 10 dBm reference
    signal into an omni antenna, -101 dBm thermal noise floor, UE power
    window [-40, 23] dBm, open-loop target P0 = -96 dBm with full
    path-loss compensation, and the full resource-block grant during an
    upload burst.
    """

    band: FrequencyBand = LTE_2600
    reference_signal_dbm: float = 10.0   # RS transmit power per antenna port
    sc_gain_db: float = 0.0              # small-cell antenna gain
    ue_gain_db: float = 0.0              # handset antenna gain
    thermal_noise_dbm: float = -101.0    # receiver noise floor, full band
    p_max_dbm: float = 23.0              # UE power class upper limit
    p_min_dbm: float = -40.0             # UE minimum output power
    p0_dbm: float = -96.0                # open-loop power control target
    alpha: float = 1.0                   # path-loss compensation factor
    resource_blocks_m: int | None = None      # granted RBs; None = full grant
    resource_blocks_total: int | None = None  # grid size; None = from bandwidth
    throughput_efficiency: float = 0.6        # attenuation on Shannon capacity
    throughput_cap_bps: float = 75e6          # scheduler rate ceiling
    rsrp_total_offset_db: float | None = None # RSRP -> wideband power offset

    def __post_init__(self):
        if not self.p_min_dbm < self.p_max_dbm:
            raise ValueError("power window requires p_min < p_max")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if not 0.0 < self.throughput_efficiency <= 1.0:
            raise ValueError("throughput efficiency must lie in (0, 1]")
        if not self.throughput_cap_bps > 0:
            raise ValueError("throughput cap must be positive")

    @property
    def m_total(self) -> int:
        if self.resource_blocks_total is not None:
            return self.resource_blocks_total
        return max(1, round(self.band.bandwidth_hz / _RB_GRID_HZ))

    @property
    def m_grant(self) -> int:
        if self.resource_blocks_m is not None:
            return self.resource_blocks_m
        return self.m_total


@dataclass
class LinkResult:
    """Per-position link budget outcome (scalar or arrays)."""

    path_loss_db: object
    rsrp_dbm: object
    uplink_tx_power_dbm: object
    snr_db: object
    throughput_bps: object
    incident_power_w: object  # downlink received power feeding exposure


def dbm_to_watts(value_dbm):
    return 10.0 ** ((np.asarray(value_dbm, float) - 30.0) / 10.0)


def watts_to_dbm(value_w):
    return 10.0 * np.log10(np.asarray(value_w, float)) + 30.0


def downlink_rsrp(cfg, path_loss_db):
    """Received reference-signal power at the UE."""
    return cfg.reference_signal_dbm + cfg.sc_gain_db - np.asarray(
        path_loss_db, float
    )


def uplink_tx_power(cfg, path_loss_db, resource_blocks=None):
    """Open-loop UE transmit power, clamped to the UE power window."""
    m = cfg.m_grant if resource_blocks is None else resource_blocks
    if np.any(np.asarray(m) < 1):
        raise ValueError("resource-block grant must be at least 1")
    wanted = 10.0 * np.log10(m) + cfg.p0_dbm + cfg.alpha * np.asarray(
        path_loss_db, float
    )
    return np.maximum(np.minimum(wanted, cfg.p_max_dbm), cfg.p_min_dbm)


def uplink_snr(cfg, tx_power_dbm, path_loss_db):
    """SNR of the uplink as received at the small cell."""
    received = (np.asarray(tx_power_dbm, float) + cfg.ue_gain_db
                + cfg.sc_gain_db - np.asarray(path_loss_db, float))
    return received - cfg.thermal_noise_dbm


def downlink_snr(cfg, rsrp_total_dbm):
    """SNR of the downlink given total wideband received power."""
    return np.asarray(rsrp_total_dbm, float) - cfg.thermal_noise_dbm


def rsrp_to_total_power(cfg, rsrp_dbm):
    """Total wideband downlink power from per-resource-element RSRP.

    The default offset assumes equal power over 12 subcarriers in each
    of the grid's resource blocks.
    """
    offset = cfg.rsrp_total_offset_db
    if offset is None:
        offset = 10.0 * math.log10(12.0 * cfg.m_total)
    return np.asarray(rsrp_dbm, float) + offset


def shannon_throughput(snr_db, bandwidth_hz, efficiency=0.6, cap_bps=75e6):
    """Attenuated Shannon rate on the given bandwidth, in bit/s."""
    snr_lin = 10.0 ** (np.asarray(snr_db, float) / 10.0)
    rate = efficiency * bandwidth_hz * np.log2(1.0 + snr_lin)
    out = np.minimum(rate, cap_bps)
    if np.ndim(snr_db) == 0:
        return float(out)
    return out


def throughput(cfg, snr_db, resource_blocks=None):
    """Rate on the allocated share of the band for the given SNR."""
    m = cfg.m_grant if resource_blocks is None else resource_blocks
    allocated = cfg.band.bandwidth_hz * m / cfg.m_total
    return shannon_throughput(snr_db, allocated,
                              cfg.throughput_efficiency,
                              cfg.throughput_cap_bps)


def aperture_factor(band):
    """Plane-wave factor 4 * pi / lambda**2 in 1/m^2.

    Converts received power in watts into an incident power density;
    about 453 m^-2 at 1800 MHz and 945 m^-2 at 2600 MHz.
    """
    return 4.0 * math.pi / band.wavelength_m ** 2


def incident_power_density(received_power_w, band):
    """Incident power density in W/m^2 seen by an isotropic receiver."""
    return np.asarray(received_power_w, float) * aperture_factor(band)


def compute_link(cfg, path_loss_db, resource_blocks=None):
    """Full link budget for one path loss (or an array of them)."""
    rsrp = downlink_rsrp(cfg, path_loss_db)
    tx = uplink_tx_power(cfg, path_loss_db, resource_blocks)
    snr = uplink_snr(cfg, tx, path_loss_db)
    rate = throughput(cfg, snr, resource_blocks)
    return LinkResult(
        path_loss_db=path_loss_db,
        rsrp_dbm=rsrp,
        uplink_tx_power_dbm=tx,
        snr_db=snr,
        throughput_bps=rate,
        incident_power_w=dbm_to_watts(rsrp),
    )
