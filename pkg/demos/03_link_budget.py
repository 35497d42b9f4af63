"""
Downlink and uplink budgets along a street
==========================================

Walks a user away from the small cell and evaluates the radio chain at
each distance: received RSRP, open-loop uplink power with its clamps,
SNR on both directions, the Shannon-style rate, and the time needed to
push the hourly upload volume.  Exponents are held at the mean of the
banded model so the curves are smooth; the scenario engine adds the
randomness back in.
"""

import os

import numpy as np

from expose_sim import (LTE_1800, LTE_2600, OccupancyProfile, RadioConfig,
                        builtin_model, compute_link, path_loss, upload_time,
                        uplink_tx_power)

OUT_DIR = os.path.join(os.path.dirname(__file__), "output")


def mean_exponent(model, d):
    banded = model.exponent_model
    return np.where(d < banded.breakpoint_m,
                    banded.near_model.mean(), banded.far_model.mean())


def sweep_band(band, band_mhz):
    model, _ = builtin_model(band_mhz)
    cfg = RadioConfig(band=band)
    occ = OccupancyProfile()
    d = np.logspace(np.log10(1.5), np.log10(400.0), 200)
    gamma = mean_exponent(model, d)
    pl = path_loss(model, gamma, d)
    link = compute_link(cfg, pl)
    t_up = upload_time(occ, link.throughput_bps)

    print(f"--- {band_mhz:.0f} MHz over {cfg.m_total} resource blocks")
    print("     d      PL    RSRP    Ptx  SNR_dl   rate   t_ul")
    print("   [m]    [dB]  [dBm]  [dBm]    [dB] [Mb/s]    [s]")
    for target in (2.0, 10.0, 30.0, 60.0, 120.0, 250.0, 400.0):
        i = int(np.argmin(np.abs(d - target)))
        print(f"{d[i]:6.0f} {pl[i]:7.1f} {link.rsrp_dbm[i]:6.1f} "
              f"{link.uplink_tx_power_dbm[i]:6.1f} {link.snr_db[i]:7.1f} "
              f"{link.throughput_bps[i] / 1e6:6.1f} {t_up[i]:6.2f}")

    # clamp regions: where the open-loop rule saturates at either rail
    unclamped = cfg.p0_dbm + 10.0 * np.log10(cfg.m_grant) + cfg.alpha * pl
    at_max = d[np.isclose(link.uplink_tx_power_dbm, cfg.p_max_dbm)]
    if at_max.size:
        print(f"uplink pinned at {cfg.p_max_dbm:.0f} dBm beyond "
              f"{at_max.min():.0f} m "
              f"(open loop would ask up to {unclamped.max():.1f} dBm)")
    return d, link, t_up


def plot(curves):
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not available, skipping plots")
        return
    os.makedirs(OUT_DIR, exist_ok=True)
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.6))
    for band_mhz, (d, link, t_up) in curves.items():
        label = f"{band_mhz:.0f} MHz"
        axes[0].semilogx(d, link.rsrp_dbm, label=label)
        axes[1].semilogx(d, link.uplink_tx_power_dbm, label=label)
        axes[2].semilogx(d, t_up, label=label)
    axes[0].set_ylabel("RSRP [dBm]")
    axes[1].set_ylabel("uplink Ptx [dBm]")
    axes[2].set_ylabel("upload time [s]")
    for ax in axes:
        ax.set_xlabel("distance [m]")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend()
    fig.tight_layout()
    target = os.path.join(OUT_DIR, "link_budget_curves.png")
    fig.savefig(target, dpi=120)
    print(f"wrote {target}")


def main():
    curves = {}
    for band, band_mhz in ((LTE_1800, 1800.0), (LTE_2600, 2600.0)):
        curves[band_mhz] = sweep_band(band, band_mhz)
        print()

    # a narrow grant changes both rails: less power headroom needed,
    # less spectrum to spend it on
    cfg = RadioConfig(band=LTE_2600)
    pl = 105.0
    for m in (1, 10, cfg.m_total):
        ptx = uplink_tx_power(cfg, pl, resource_blocks=m)
        print(f"PL={pl:.0f} dB with M={m:3d} blocks -> Ptx={ptx:6.1f} dBm")

    plot(curves)


if __name__ == "__main__":
    main()
