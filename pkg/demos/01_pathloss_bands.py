"""
Deterministic path loss and the banded exponent models
======================================================

Walks through the core propagation pieces: the log-distance relation
anchored at the free-space intercept, and the two per-band exponent
distributions (GEV below 60 m, rescaled Beta beyond).  Writes pdf and
sample plots next to this script when matplotlib is available.
"""

import os

import numpy as np

from expose_sim import (LTE_1800, LTE_2600, builtin_model,
                        free_space_intercept, path_loss)

OUT_DIR = os.path.join(os.path.dirname(__file__), "output")


def describe_band(band_mhz):
    model, band = builtin_model(band_mhz)
    print(f"--- {band_mhz:.0f} MHz ({band.bandwidth_hz / 1e6:.0f} MHz wide)")
    print(f"free-space intercept A = {model.intercept_db:.4f} dB at 1 m")

    banded = model.exponent_model
    near, far = banded.near_model, banded.far_model
    print(f"near band (d < {banded.breakpoint_m:.0f} m): GEV k={near.shape_k}"
          f" s={near.scale_s} m={near.location_m}"
          f"  mean={near.mean():.3f}  upper end={near.support[1]:.3f}")
    print(f"far band  (d >= {banded.breakpoint_m:.0f} m): "
          f"Beta({far.alpha1}, {far.alpha2}) on [{far.lower_a}, {far.upper_b}]"
          f"  mean={far.mean():.3f}")

    # a quick feel for the spread: path loss at 30 m across exponent draws
    rng = np.random.default_rng(0)
    g = near.sample(rng, 5)
    pl = path_loss(model, g, 30.0)
    for gi, pi in zip(g, pl):
        print(f"  gamma={gi:5.2f} -> PL(30 m) = {pi:6.1f} dB")
    print()
    return model


def plot_models(models):
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping plots")
        return

    os.makedirs(OUT_DIR, exist_ok=True)
    x = np.linspace(0.0, 7.0, 600)
    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for ax, which in zip(axes, ("near_model", "far_model")):
        for band_mhz, model in models.items():
            dist = getattr(model.exponent_model, which)
            ax.plot(x, dist.pdf(x), label=f"{band_mhz:.0f} MHz")
        ax.set_xlabel("path-loss exponent")
        ax.set_title(which.replace("_model", " band"))
        ax.legend()
    axes[0].set_ylabel("density")
    fig.tight_layout()
    out = os.path.join(OUT_DIR, "exponent_models.png")
    fig.savefig(out, dpi=120)
    print(f"wrote {out}")

    # distance profile: median and 5-95% spread of PL(d) per band
    d = np.logspace(0.1, np.log10(250.0), 300)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for band_mhz, model in models.items():
        banded = model.exponent_model
        qs = np.array([
            [path_loss(model, banded.distribution_at(di).ppf(p), di)
             for di in d] for p in (0.05, 0.5, 0.95)
        ])
        ax.plot(d, qs[1], label=f"{band_mhz:.0f} MHz median")
        ax.fill_between(d, qs[0], qs[2], alpha=0.25)
    ax.set_xscale("log")
    ax.set_xlabel("distance (m)")
    ax.set_ylabel("path loss (dB)")
    ax.axvline(60.0, color="k", lw=0.8, ls=":")
    ax.legend()
    fig.tight_layout()
    out = os.path.join(OUT_DIR, "pathloss_profile.png")
    fig.savefig(out, dpi=120)
    print(f"wrote {out}")


def main():
    print("intercept check: 20*log10(4*pi*f/c)")
    for band in (LTE_1800, LTE_2600):
        print(f"  {band.carrier_frequency_hz / 1e6:6.0f} MHz -> "
              f"{free_space_intercept(band):.2f} dB")
    print()
    models = {mhz: describe_band(mhz) for mhz in (1800.0, 2600.0)}
    plot_models(models)


if __name__ == "__main__":
    main()
