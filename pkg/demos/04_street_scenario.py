"""
Street-canyon population run and the exposure index
===================================================

Runs the full Monte Carlo chain for both deployments: users placed
along a 400 m street (70 % of them indoors across four floors), each
with their own exponent draw, wall loss, and link budget, then the
per-band dose rollup.  Ends with the numbers the campaign reported so
the two columns can be eyeballed side by side.
"""

import os
import time

import numpy as np

from expose_sim import (OccupancyProfile, RadioConfig, SarTable,
                        ScenarioGeometry, aggregate_ei, builtin_model,
                        run_simulation)

N_OBSERVATIONS = 100_000
SEED = 1

# campaign-reported per-band totals [W/kg] for the same street layout
REPORTED_EI = {1800.0: 3.62e-8, 2600.0: 3.03e-8}

OUT_DIR = os.path.join(os.path.dirname(__file__), "output")


def run_band(band_mhz):
    model, band = builtin_model(band_mhz)
    cfg = RadioConfig(band=band)
    geom = ScenarioGeometry()
    occ = OccupancyProfile()
    t0 = time.perf_counter()
    obs = run_simulation(model, cfg, geom, occ, N_OBSERVATIONS, SEED,
                         worker_count=2)
    dt = time.perf_counter() - t0
    print(f"--- {band_mhz:.0f} MHz: {obs.n} users in {dt:.1f} s")

    indoor = obs.indoor.astype(bool)
    print(f"indoor fraction {indoor.mean():.3f}, "
          f"mean wall loss {obs.penetration_db[indoor].mean():.2f} dB")
    print(f"median RSRP {np.median(obs.rsrp_dbm):.1f} dBm, "
          f"median uplink Ptx {np.median(obs.tx_power_dbm):.1f} dBm, "
          f"uplink at the 23 dBm rail for "
          f"{np.mean(np.isclose(obs.tx_power_dbm, 23.0)):.0%} of users")

    table = SarTable.default()
    breakdowns, total = aggregate_ei(obs, table, occ, band)
    print(f"{'stratum':>8} {'frac':>5} {'mean Ptx [W]':>12} "
          f"{'UL [W/kg]':>10} {'DL [W/kg]':>10} {'EI [W/kg]':>10}")
    for row in breakdowns:
        print(f"{row.stratum:>8} {row.fraction:5.2f} "
              f"{row.mean_tx_power_w:12.3e} "
              f"{row.ul_exposure_w_per_kg:10.3e} "
              f"{row.dl_exposure_w_per_kg:10.3e} "
              f"{row.ei_w_per_kg:10.3e}")
    ei = total.ei_w_per_kg
    print(f"total EI {ei:.3e} W/kg "
          f"(uplink share {total.ul_exposure_w_per_kg / ei:.1%}), "
          f"campaign reported {REPORTED_EI[band_mhz]:.2e}")
    return obs, breakdowns, total


def plot(results):
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not available, skipping plots")
        return
    os.makedirs(OUT_DIR, exist_ok=True)
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.6))
    for band_mhz, (obs, _, _) in results.items():
        label = f"{band_mhz:.0f} MHz"
        for ax, values in ((axes[0], obs.rsrp_dbm),
                           (axes[1], obs.tx_power_dbm)):
            xs = np.sort(values)
            ax.plot(xs, np.arange(1, xs.size + 1) / xs.size, label=label)
    axes[0].set_xlabel("RSRP [dBm]")
    axes[1].set_xlabel("uplink Ptx [dBm]")
    axes[0].set_ylabel("CDF")
    for ax in axes:
        ax.grid(True, alpha=0.3)
        ax.legend()
    fig.tight_layout()
    target = os.path.join(OUT_DIR, "street_scenario_cdfs.png")
    fig.savefig(target, dpi=120)
    print(f"wrote {target}")


def main():
    results = {}
    for band_mhz in (1800.0, 2600.0):
        results[band_mhz] = run_band(band_mhz)
        print()

    # indoor dominates the total through the uplink: wall loss drags the
    # open-loop power up while the downlink contribution shrinks
    _, breakdowns, _ = results[2600.0]
    by_name = {r.stratum: r for r in breakdowns}
    ratio = by_name["indoor"].ei_w_per_kg / by_name["outdoor"].ei_w_per_kg
    print(f"2600 MHz indoor vs outdoor per-user EI ratio: {ratio:.2f}")
    plot(results)


if __name__ == "__main__":
    main()
