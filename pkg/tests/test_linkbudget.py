"""Downlink/uplink link budget: hand-worked examples and invariants."""

import math

import numpy as np
import pytest

from expose_sim import (LTE_1800, LTE_2600, RadioConfig, aperture_factor,
                        compute_link, dbm_to_watts, downlink_rsrp,
                        downlink_snr, incident_power_density,
                        rsrp_to_total_power, shannon_throughput, throughput,
                        uplink_snr, uplink_tx_power, watts_to_dbm)


def test_config_defaults_and_grid():
    cfg = RadioConfig()
    assert cfg.m_total == 75           # 15 MHz grid
    assert cfg.m_grant == 75           # full grant unless restricted
    assert RadioConfig(band=LTE_1800).m_total == 100
    cfg = RadioConfig(resource_blocks_m=6, resource_blocks_total=50)
    assert cfg.m_grant == 6 and cfg.m_total == 50


def test_config_validation():
    with pytest.raises(ValueError):
        RadioConfig(p_min_dbm=25.0)
    with pytest.raises(ValueError):
        RadioConfig(alpha=1.2)
    with pytest.raises(ValueError):
        RadioConfig(throughput_efficiency=0.0)


def test_dbm_watts_round_trip():
    assert dbm_to_watts(30.0) == pytest.approx(1.0, abs=1e-15)
    assert dbm_to_watts(0.0) == pytest.approx(1e-3, rel=1e-12)
    vals = np.linspace(-120.0, 40.0, 33)
    assert np.max(np.abs(watts_to_dbm(dbm_to_watts(vals)) - vals)) < 1e-10


def test_downlink_rsrp_example():
    cfg = RadioConfig()
    # 10 dBm RS, 0 dB gain, 90 dB loss -> -80 dBm at the handset
    assert downlink_rsrp(cfg, 90.0) == pytest.approx(-80.0, abs=1e-12)
    pl = np.random.default_rng(1).uniform(50.0, 130.0, 1000)
    assert np.max(np.abs(downlink_rsrp(cfg, pl) + pl
                         - cfg.reference_signal_dbm)) < 1e-12


def test_uplink_power_examples():
    cfg = RadioConfig()
    # single block, alpha = 1: P = -96 + PL
    assert uplink_tx_power(cfg, 100.0, 1) == pytest.approx(4.0, abs=1e-12)
    # clamps at the 23 dBm power class
    assert uplink_tx_power(cfg, 130.0, 1) == pytest.approx(23.0)
    # clamps at the -40 dBm floor for very short links
    assert uplink_tx_power(cfg, 40.0, 1) == pytest.approx(-40.0)
    # 50 blocks at 90 dB: 10*log10(50) - 96 + 90
    want = 10.0 * math.log10(50.0) - 6.0
    assert uplink_tx_power(cfg, 90.0, 50) == pytest.approx(want, abs=1e-12)


def test_uplink_power_window_and_alpha_identity():
    cfg = RadioConfig()
    rng = np.random.default_rng(8)
    pl = rng.uniform(20.0, 160.0, 100_000)
    m = rng.integers(1, 76, 100_000)
    tx = uplink_tx_power(cfg, pl, m)
    assert np.all(tx >= cfg.p_min_dbm) and np.all(tx <= cfg.p_max_dbm)
    # with full compensation the unclamped received level is exactly P0
    open_loop = ~((tx == cfg.p_max_dbm) | (tx == cfg.p_min_dbm))
    resid = (tx - pl - 10.0 * np.log10(m) - cfg.p0_dbm)[open_loop]
    assert np.max(np.abs(resid)) < 1e-12


def test_uplink_power_monotonic_in_loss():
    cfg = RadioConfig(alpha=0.8)
    pl = np.linspace(20.0, 160.0, 500)
    tx = uplink_tx_power(cfg, pl, 10)
    assert np.all(np.diff(tx) >= 0)


def test_uplink_power_rejects_empty_grant():
    with pytest.raises(ValueError):
        uplink_tx_power(RadioConfig(), 90.0, 0)


def test_snr_examples():
    cfg = RadioConfig()
    # -71 dBm received over a -101 dBm floor is 30 dB
    assert uplink_snr(cfg, 23.0, 94.0) == pytest.approx(30.0, abs=1e-12)
    assert downlink_snr(cfg, -71.0) == pytest.approx(30.0, abs=1e-12)


def test_rsrp_total_offset():
    cfg = RadioConfig()
    want = 10.0 * math.log10(12.0 * 75.0)
    assert rsrp_to_total_power(cfg, -80.0) == pytest.approx(-80.0 + want)
    cfg = RadioConfig(rsrp_total_offset_db=0.0)
    assert rsrp_to_total_power(cfg, -80.0) == -80.0


def test_shannon_throughput_value():
    # 20 dB SNR on 9 MHz at 0.6 efficiency
    want = 0.6 * 9e6 * math.log2(101.0)
    assert shannon_throughput(20.0, 9e6) == pytest.approx(want, rel=1e-12)


def test_shannon_throughput_limits():
    assert shannon_throughput(80.0, 15e6) == 75e6          # hits the cap
    assert shannon_throughput(-200.0, 15e6) < 1e-10        # noise-limited
    snr = np.linspace(-30.0, 60.0, 400)
    rate = shannon_throughput(snr, 15e6)
    assert np.all(np.diff(rate) >= 0)
    assert shannon_throughput(30.0, 15e6, cap_bps=1e6) == 1e6


def test_throughput_scales_with_allocation():
    cfg = RadioConfig(throughput_cap_bps=1e12)
    full = throughput(cfg, 10.0, 75)
    half = throughput(cfg, 10.0, 37.5)
    assert half == pytest.approx(0.5 * full, rel=1e-12)
    # zero granted blocks carry no data
    assert throughput(cfg, 10.0, 0) == 0.0


def test_aperture_factors():
    assert aperture_factor(LTE_1800) == pytest.approx(453.0159241780158,
                                                      abs=1e-9)
    assert aperture_factor(LTE_2600) == pytest.approx(945.1813726677118,
                                                      abs=1e-9)
    # spot value: 1 pW received at 2600 MHz
    assert incident_power_density(1e-12, LTE_2600) == pytest.approx(
        9.451813726677118e-10, rel=1e-12)


def test_compute_link_consistency():
    cfg = RadioConfig(band=LTE_1800)
    pl = np.array([60.0, 90.0, 120.0, 150.0])
    link = compute_link(cfg, pl)
    assert np.array_equal(link.rsrp_dbm, downlink_rsrp(cfg, pl))
    assert np.array_equal(link.uplink_tx_power_dbm, uplink_tx_power(cfg, pl))
    assert np.array_equal(
        link.snr_db, uplink_snr(cfg, link.uplink_tx_power_dbm, pl))
    assert np.array_equal(link.throughput_bps, throughput(cfg, link.snr_db))
    assert np.array_equal(link.incident_power_w,
                          dbm_to_watts(link.rsrp_dbm))
    # scalar input stays scalar-shaped
    single = compute_link(cfg, 90.0)
    assert np.ndim(single.rsrp_dbm) == 0
