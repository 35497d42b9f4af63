"""Plot-ready tables derived from an observation dump.

The report command turns a simulation's observation dump into small
CSV files that plot directly: empirical CDFs of RSRP and uplink power,
the exponent-versus-distance scatter, and histogram bins.  Keeping the
output as plain tables leaves the figure styling to whatever plotting
stack sits on top.
"""

import csv
import logging

import numpy as np

__all__ = ["cdf_table", "histogram_table", "emit_report_tables",
           "REPORT_FILES"]

log = logging.getLogger(__name__)

REPORT_FILES = (
    "rsrp_cdf.csv",
    "ptx_cdf.csv",
    "gamma_vs_distance.csv",
    "gamma_hist.csv",
    "rsrp_hist.csv",
)


def cdf_table(values):
    """Sorted values with their empirical CDF levels i/n."""
    v = np.sort(np.asarray(values, float))
    n = v.size
    if n == 0:
        return v, v
    return v, np.arange(1, n + 1) / n


def histogram_table(values, bins=50):
    """Bin edges and counts, plus the density normalization."""
    v = np.asarray(values, float)
    if v.size == 0:
        edges = np.linspace(0.0, 1.0, bins + 1)
        return edges, np.zeros(bins), np.zeros(bins)
    counts, edges = np.histogram(v, bins=bins)
    widths = np.diff(edges)
    density = counts / max(v.size, 1) / widths
    return edges, counts, density


def _write_rows(path, header, rows):
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def _write_cdf(path, name, values):
    v, f = cdf_table(values)
    _write_rows(path, [name, "cdf"],
                (("%.10g" % a, "%.10g" % b) for a, b in zip(v, f)))


def _write_hist(path, name, values):
    edges, counts, density = histogram_table(values)
    _write_rows(
        path, [f"{name}_lo", f"{name}_hi", "count", "density"],
        (("%.10g" % lo, "%.10g" % hi, "%d" % c, "%.10g" % d)
         for lo, hi, c, d in zip(edges[:-1], edges[1:], counts, density)),
    )


def emit_report_tables(obs, out_dir):
    """Write all report tables for one observation set."""
    out_dir.mkdir(parents=True, exist_ok=True)
    if obs.n == 0:
        log.warning("observation dump is empty; report tables will only "
                    "carry headers")
    _write_cdf(out_dir / "rsrp_cdf.csv", "rsrp_dbm", obs.rsrp_dbm)
    _write_cdf(out_dir / "ptx_cdf.csv", "ptx_dbm", obs.tx_power_dbm)
    _write_rows(
        out_dir / "gamma_vs_distance.csv", ["d_m", "gamma"],
        (("%.10g" % d, "%.10g" % g)
         for d, g in zip(obs.distance_m, obs.gamma)),
    )
    _write_hist(out_dir / "gamma_hist.csv", "gamma", obs.gamma)
    _write_hist(out_dir / "rsrp_hist.csv", "rsrp_dbm", obs.rsrp_dbm)
    return [out_dir / name for name in REPORT_FILES]
