"""Population Exposure Index from simulated observations.

The index combines the active uplink (the user's own handset) and the
always-on downlink (the cell's signal incident on the body):

    EI = sum over strata of  f * (d_UL * P_tx_mean + d_DL * S_inc_mean)

with the normalized doses

    d_UL = (T_UL / T) * SAR_UL / P_ref
    d_DL = (T_DL / T) * SAR_DL / S_ref

Mean transmit power is averaged over the active upload burst; the burst
duration over the period, T_UL / T, carries the duty cycle separately.
Received power is stored in watts and converted to an incident power
density through the plane-wave aperture factor 4 * pi / lambda**2 at
dose time.
"""

import json
import logging
from dataclasses import asdict, dataclass

import numpy as np

from .linkbudget import aperture_factor, dbm_to_watts

__all__ = [
    "SarEntry",
    "SarTable",
    "EiBreakdown",
    "uplink_dose",
    "downlink_dose",
    "aggregate_ei",
    "write_ei_report_json",
    "write_ei_report_csv",
    "EI_REPORT_ROWS",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SarEntry:
    """Whole-body absorption coefficients for one exposure situation.

    ``sar_ul_w_per_kg`` is absorbed watts per kilogram per watt
    transmitted by the user's own device; ``sar_dl_w_per_kg`` per unit
    incident power density from the cell.
    """

    sar_ul_w_per_kg: float
    sar_dl_w_per_kg: float
    reference_tx_power_w: float = 1.0
    reference_incident_w_m2: float = 1.0

    def __post_init__(self):
        if self.sar_ul_w_per_kg < 0 or self.sar_dl_w_per_kg < 0:
            raise ValueError("SAR coefficients cannot be negative")
        if self.reference_tx_power_w <= 0 or self.reference_incident_w_m2 <= 0:
            raise ValueError("reference levels must be positive")


class SarTable:
    """Lookup of SAR entries by band and exposure situation."""

    def __init__(self, entries):
        self._entries = dict(entries)

    @classmethod
    def default(cls):
        """Adult standing with a data device, the two measured bands."""
        return cls({
            (1800.0, "Adult", "Data", "Standing"): SarEntry(0.0039, 0.0047),
            (2600.0, "Adult", "Data", "Standing"): SarEntry(0.0029, 0.0042),
        })

    def lookup(self, band_mhz, population="Adult", usage="Data",
               posture="Standing"):
        key = (float(band_mhz), population, usage, posture)
        try:
            return self._entries[key]
        except KeyError:
            known = ", ".join(str(k) for k in sorted(self._entries))
            raise ValueError(
                f"no SAR entry for {key}; known entries: {known}"
            ) from None


@dataclass
class EiBreakdown:
    """Exposure Index of one population stratum (or the whole)."""

    stratum: str
    fraction: float
    band_mhz: float
    mean_tx_power_w: float
    mean_received_power_w: float
    mean_ul_time_s: float
    dl_time_s: float
    ul_exposure_w_per_kg: float
    dl_exposure_w_per_kg: float
    ei_w_per_kg: float


def uplink_dose(entry, mean_ul_time_s, period_s, mean_tx_power_w):
    """Absorbed dose from the user's own uplink over one period."""
    if not 0.0 <= mean_ul_time_s <= period_s:
        raise ValueError("uplink time must lie within the period")
    if mean_tx_power_w < 0:
        raise ValueError("transmit power cannot be negative")
    return (mean_ul_time_s / period_s) * entry.sar_ul_w_per_kg * (
        mean_tx_power_w / entry.reference_tx_power_w
    )


def downlink_dose(entry, mean_received_power_w, band, period_fraction=1.0):
    """Absorbed dose from the cell's downlink over one period.

    ``period_fraction`` scales exposure time within the period; the
    default 1 models a signal that is always on.
    """
    if mean_received_power_w < 0:
        raise ValueError("received power cannot be negative")
    if not 0.0 <= period_fraction <= 1.0:
        raise ValueError("period fraction must lie in [0, 1]")
    incident = mean_received_power_w * aperture_factor(band)
    return period_fraction * entry.sar_dl_w_per_kg * (
        incident / entry.reference_incident_w_m2
    )


def _stratum_breakdown(name, fraction, obs_mask, obs, entry, occ, band):
    tx_w = float(np.mean(dbm_to_watts(obs.tx_power_dbm[obs_mask])))
    rx_w = float(np.mean(dbm_to_watts(obs.rsrp_dbm[obs_mask])))
    t_ul = float(np.mean(obs.upload_time_s[obs_mask]))
    ul = uplink_dose(entry, t_ul, occ.period_s, tx_w)
    dl = downlink_dose(entry, rx_w, band)
    return EiBreakdown(
        stratum=name, fraction=fraction, band_mhz=obs.band_mhz,
        mean_tx_power_w=tx_w, mean_received_power_w=rx_w,
        mean_ul_time_s=t_ul, dl_time_s=occ.period_s,
        ul_exposure_w_per_kg=ul, dl_exposure_w_per_kg=dl,
        ei_w_per_kg=ul + dl,
    )


def aggregate_ei(obs, sar_table, occ, band, strata="environment"):
    """Exposure Index per stratum plus the population total.

    ``strata`` may be "environment" (indoor/outdoor split), "all", or a
    callable mapping the observation set to an array of labels.  The
    total row carries pooled means for reference; its dose fields are
    the fraction-weighted sums over strata, so EI stays additive.
    """
    from .scenario import INDOOR, OUTDOOR  # avoid a module cycle

    if callable(strata):
        labels = np.asarray(strata(obs))
    elif strata == "environment":
        labels = np.where(obs.indoor, INDOOR, OUTDOOR)
    elif strata == "all":
        labels = np.full(obs.n, "all")
    else:
        raise ValueError(f"unknown strata selector {strata!r}")

    entry = sar_table.lookup(obs.band_mhz, occ.population, occ.usage,
                             occ.posture)
    n = obs.n
    breakdowns = []
    for name in sorted(set(labels.tolist())):
        mask = labels == name
        count = int(mask.sum())
        if count == 0:
            log.warning("stratum %s is empty; skipped", name)
            continue
        breakdowns.append(
            _stratum_breakdown(name, count / n, mask, obs, entry, occ, band)
        )

    ul_total = sum(b.fraction * b.ul_exposure_w_per_kg for b in breakdowns)
    dl_total = sum(b.fraction * b.dl_exposure_w_per_kg for b in breakdowns)
    everyone = np.ones(n, bool)
    pooled = _stratum_breakdown("total", 1.0, everyone, obs, entry, occ, band)
    total = EiBreakdown(
        stratum="total", fraction=1.0, band_mhz=obs.band_mhz,
        mean_tx_power_w=pooled.mean_tx_power_w,
        mean_received_power_w=pooled.mean_received_power_w,
        mean_ul_time_s=pooled.mean_ul_time_s, dl_time_s=occ.period_s,
        ul_exposure_w_per_kg=ul_total, dl_exposure_w_per_kg=dl_total,
        ei_w_per_kg=ul_total + dl_total,
    )
    return breakdowns, total


EI_REPORT_ROWS = (
    ("fraction", "fraction"),
    ("mean_tx_power_w", "mean_tx_power_w"),
    ("sar_ul_w_per_kg", None),
    ("mean_incident_power_w", "mean_received_power_w"),
    ("sar_dl_w_per_kg", None),
    ("mean_ul_time_s", "mean_ul_time_s"),
    ("dl_exposure_w_per_kg", "dl_exposure_w_per_kg"),
    ("ul_exposure_w_per_kg", "ul_exposure_w_per_kg"),
    ("ei_w_per_kg", "ei_w_per_kg"),
)


def write_ei_report_json(path, breakdowns, total, meta):
    """Structured report: header metadata plus all breakdown rows."""
    payload = dict(meta)
    payload["format"] = "ei-report/1"
    payload["strata"] = [asdict(b) for b in breakdowns]
    payload["total"] = asdict(total)
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def write_ei_report_csv(path, breakdowns, total, sar_entry):
    """Flat table: one quantity per row, one column per stratum."""
    import csv

    columns = [total] + list(breakdowns)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["quantity"] + [b.stratum for b in columns])
        for row_name, attr in EI_REPORT_ROWS:
            if attr is None:
                value = getattr(sar_entry, row_name)
                writer.writerow([row_name] + ["%.10g" % value] * len(columns))
            else:
                writer.writerow(
                    [row_name]
                    + ["%.10g" % getattr(b, attr) for b in columns]
                )
