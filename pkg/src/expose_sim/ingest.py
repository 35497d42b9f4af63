"""Normalizing drive-test exports into path-loss samples.

Different capture tools export different column layouts, so parsing
goes through a per-tool column map onto one canonical schema:

    t, lat, lon, rsrp_dbm, rs_dbm, ptx_dbm, m_rb, alpha, p0_dbm,
    band_mhz, tool

Rows that cannot be used are dropped and counted per reason, never
silently.  Distances to the small cell come from a spherical-earth
great-circle formula, which is comfortably accurate at street scale.
"""

import csv
import io
import logging
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .fitting import PathLossSample
from .pathloss import FrequencyBand

__all__ = [
    "FormatError",
    "EmptyInputError",
    "DriveTestRecord",
    "CANONICAL_COLUMNS",
    "ALLOWED_ALPHA",
    "EARTH_RADIUS_M",
    "parse_drive_test",
    "write_normalized",
    "merge_records",
    "gps_distance",
    "to_pathloss_samples",
]

log = logging.getLogger(__name__)

EARTH_RADIUS_M = 6371008.8

# the 3GPP open-loop compensation factor can only take these values
ALLOWED_ALPHA = (0.0, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)

CANONICAL_COLUMNS = (
    "t", "lat", "lon", "rsrp_dbm", "rs_dbm", "ptx_dbm", "m_rb",
    "alpha", "p0_dbm", "band_mhz", "tool",
)

# bandwidth actually deployed per carrier, used when building bands
# from a drive-test export that only carries the carrier frequency
_DEFAULT_BANDWIDTH_HZ = {1800.0: 20e6, 2600.0: 15e6}


class FormatError(ValueError):
    """Input file does not match the expected layout."""


class EmptyInputError(ValueError):
    """No usable rows survived parsing."""


@dataclass(frozen=True)
class DriveTestRecord:
    """One normalized drive-test row."""

    timestamp_s: float
    latitude_deg: float
    longitude_deg: float
    band_mhz: float
    tool: str
    rsrp_dbm: float | None = None
    reference_signal_dbm: float | None = None
    uplink_tx_power_dbm: float | None = None
    resource_blocks_m: int | None = None
    alpha: float | None = None
    p0_dbm: float | None = None


def _opt_float(text):
    if text is None or text.strip() == "":
        return None
    return float(text)


def _opt_int(text):
    if text is None or text.strip() == "":
        return None
    return int(float(text))


def parse_drive_test(source, tool, column_map=None, band_mhz=None):
    """Parse one export into records plus a rejection tally.

    ``column_map`` maps canonical names to the file's header names;
    canonical headers are assumed where it is omitted.  ``band_mhz``
    overrides a missing band column.  Raises :class:`FormatError` when
    a required mapped column is absent from the header and
    :class:`EmptyInputError` when nothing usable remains.
    """
    close_after = False
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        handle = open(source, "r", newline="")
        close_after = True
    elif isinstance(source, io.TextIOBase):
        handle = source
    else:  # byte stream
        handle = io.TextIOWrapper(source, encoding="utf-8", newline="")

    column_map = dict(column_map or {})
    colname = {c: column_map.get(c, c) for c in CANONICAL_COLUMNS}

    records = []
    rejections = Counter()
    try:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise FormatError("input has no header row")
        header = set(reader.fieldnames)
        required = ["t", "lat", "lon"]
        missing = [colname[c] for c in required if colname[c] not in header]
        if missing:
            raise FormatError(
                f"header is missing required columns: {', '.join(missing)}"
            )

        def get(row, canonical):
            return row.get(colname[canonical])

        for row in reader:
            try:
                t = float(get(row, "t"))
                lat = float(get(row, "lat"))
                lon = float(get(row, "lon"))
            except (TypeError, ValueError):
                rejections["bad_position"] += 1
                continue
            if not (-90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0):
                rejections["bad_position"] += 1
                continue
            try:
                rsrp = _opt_float(get(row, "rsrp_dbm"))
                rs = _opt_float(get(row, "rs_dbm"))
                ptx = _opt_float(get(row, "ptx_dbm"))
                m_rb = _opt_int(get(row, "m_rb"))
                alpha = _opt_float(get(row, "alpha"))
                p0 = _opt_float(get(row, "p0_dbm"))
                band = _opt_float(get(row, "band_mhz"))
            except ValueError:
                rejections["bad_number"] += 1
                continue
            if band is None:
                band = band_mhz
            if band is None:
                rejections["missing_band"] += 1
                continue
            if rsrp is None and ptx is None:
                rejections["missing_power"] += 1
                continue
            if alpha is not None and not any(
                abs(alpha - allowed) < 1e-9 for allowed in ALLOWED_ALPHA
            ):
                rejections["bad_alpha"] += 1
                continue
            if m_rb is not None and m_rb < 1:
                rejections["bad_resource_blocks"] += 1
                continue
            records.append(DriveTestRecord(
                timestamp_s=t, latitude_deg=lat, longitude_deg=lon,
                band_mhz=float(band), tool=str(tool),
                rsrp_dbm=rsrp, reference_signal_dbm=rs,
                uplink_tx_power_dbm=ptx, resource_blocks_m=m_rb,
                alpha=alpha, p0_dbm=p0,
            ))
    finally:
        if close_after:
            handle.close()

    if not records:
        raise EmptyInputError("no usable rows in drive-test input")
    return records, rejections


def write_normalized(records, path):
    """Write records back out in the canonical column layout."""
    def fmt(value):
        return "" if value is None else repr(float(value))

    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CANONICAL_COLUMNS)
        for r in records:
            writer.writerow([
                fmt(r.timestamp_s), fmt(r.latitude_deg),
                fmt(r.longitude_deg), fmt(r.rsrp_dbm),
                fmt(r.reference_signal_dbm), fmt(r.uplink_tx_power_dbm),
                "" if r.resource_blocks_m is None else int(r.resource_blocks_m),
                fmt(r.alpha), fmt(r.p0_dbm), fmt(r.band_mhz), r.tool,
            ])


def merge_records(*record_lists):
    """Merge per-file record lists into one timestamp-ordered list."""
    merged = [r for records in record_lists for r in records]
    merged.sort(key=lambda r: r.timestamp_s)
    return merged


def gps_distance(lat1_deg, lon1_deg, lat2_deg, lon2_deg):
    """Great-circle distance in meters on a spherical earth."""
    lat1 = np.asarray(lat1_deg, float)
    lon1 = np.asarray(lon1_deg, float)
    lat2 = np.asarray(lat2_deg, float)
    lon2 = np.asarray(lon2_deg, float)
    for lat in (lat1, lat2):
        if np.any(np.abs(lat) > 90.0):
            raise ValueError("latitude out of range")
    for lon in (lon1, lon2):
        if np.any(np.abs(lon) > 180.0):
            raise ValueError("longitude out of range")
    p1, p2 = np.radians(lat1), np.radians(lat2)
    dp = p2 - p1
    dl = np.radians(lon2) - np.radians(lon1)
    h = np.sin(dp / 2.0) ** 2 + np.cos(p1) * np.cos(p2) * np.sin(dl / 2.0) ** 2
    out = 2.0 * EARTH_RADIUS_M * np.arcsin(np.sqrt(h))
    if np.ndim(lat1_deg) == 0 and np.ndim(lat2_deg) == 0:
        return float(out)
    return out


def to_pathloss_samples(records, sc_latitude_deg, sc_longitude_deg,
                        sc_gain_db=0.0, default_rs_dbm=None):
    """Convert records into path-loss samples against one small cell.

    Path loss is RS transmit power plus antenna gain minus measured
    RSRP.  Records without both an RS level (or ``default_rs_dbm``) and
    an RSRP are dropped and tallied, as are positions at or inside the
    1 m reference distance.  Non-positive path losses are implausible
    but kept, with a warning, so that the caller can inspect them.
    """
    samples = []
    rejections = Counter()
    n_implausible = 0
    for r in records:
        rs = r.reference_signal_dbm
        if rs is None:
            rs = default_rs_dbm
        if rs is None:
            rejections["missing_rs"] += 1
            continue
        if r.rsrp_dbm is None:
            rejections["missing_rsrp"] += 1
            continue
        d = gps_distance(r.latitude_deg, r.longitude_deg,
                         sc_latitude_deg, sc_longitude_deg)
        if d <= 1.0:
            rejections["too_close"] += 1
            continue
        pl = rs + sc_gain_db - r.rsrp_dbm
        if pl <= 0.0:
            n_implausible += 1
        band = FrequencyBand(
            r.band_mhz * 1e6,
            _DEFAULT_BANDWIDTH_HZ.get(r.band_mhz, 20e6),
        )
        samples.append(PathLossSample(
            distance_m=float(d), path_loss_db=float(pl), band=band,
            source_tool=r.tool, timestamp_s=r.timestamp_s,
        ))
    if n_implausible:
        log.warning("%d samples have non-positive path loss; kept, but "
                    "check RS power and antenna gain settings",
                    n_implausible)
    return samples, rejections
