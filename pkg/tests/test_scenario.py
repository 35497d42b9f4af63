"""Street-canyon population sampling and the Monte Carlo driver."""

import numpy as np
import pytest

from expose_sim import (INDOOR, LTE_2600, ObservationSet, OccupancyProfile,
                        PathLossModel, RadioConfig, ScenarioGeometry,
                        UserObservation, BandedPleDistribution, FixedValue,
                        builtin_model, evaluate_observation,
                        free_space_intercept, run_simulation, sample_user,
                        upload_time, uplink_tx_power, OBSERVATION_COLUMNS)

GEOM = ScenarioGeometry()
OCC = OccupancyProfile()


@pytest.fixture(scope="module")
def default_run():
    model, band = builtin_model(2600.0)
    cfg = RadioConfig(band=band)
    return run_simulation(model, cfg, GEOM, OCC, 100_000, seed=1)


# ----------------------------------------------------------- validation

def test_geometry_validation():
    with pytest.raises(ValueError):
        ScenarioGeometry(street_width_m=0.0)
    with pytest.raises(ValueError):
        ScenarioGeometry(floors=0)
    with pytest.raises(ValueError):
        ScenarioGeometry(penetration_loss_db=(13.0, 7.0))
    with pytest.raises(ValueError):
        ScenarioGeometry(sc_position_m=(300.0, 0.0, 3.0))


def test_occupancy_validation():
    with pytest.raises(ValueError):
        OccupancyProfile(indoor_fraction=1.5)
    with pytest.raises(ValueError):
        OccupancyProfile(upload_volume_bytes=-1.0)
    with pytest.raises(ValueError):
        OccupancyProfile(period_s=0.0)


# -------------------------------------------------------- single draws

def test_sample_user_invariants():
    rng = np.random.default_rng(2)
    floor_heights = {1.5, 4.5, 7.5, 10.5}
    seen_envs = set()
    for _ in range(300):
        obs = sample_user(GEOM, OCC, rng)
        x, y, z = obs.position_m
        seen_envs.add(obs.environment)
        assert -200.0 <= x <= 200.0
        if obs.environment == INDOOR:
            assert 4.0 <= abs(y) <= 10.0
            assert z in floor_heights
            assert 7.0 <= obs.penetration_loss_db <= 13.0
        else:
            assert abs(y) <= 4.0
            assert z == 1.5
            assert obs.penetration_loss_db == 0.0
        want = np.sqrt(x * x + y * y + (z - 3.0) ** 2)
        assert obs.distance_3d_m == pytest.approx(want, rel=1e-12)
    assert seen_envs == {"indoor", "outdoor"}


def test_evaluate_observation_banding():
    model = PathLossModel(
        intercept_db=40.0,
        exponent_model=BandedPleDistribution(FixedValue(1.0), FixedValue(2.0)),
    )
    cfg = RadioConfig()
    rng = np.random.default_rng(0)

    def at_distance(d):
        return UserObservation(position_m=(d, 0.0, 1.5), environment="outdoor",
                               distance_3d_m=d, penetration_loss_db=0.0)

    near = evaluate_observation(at_distance(59.0), model, cfg, OCC, rng)
    far = evaluate_observation(at_distance(61.0), model, cfg, OCC, rng)
    edge = evaluate_observation(at_distance(60.0), model, cfg, OCC, rng)
    assert near.gamma == 1.0
    assert far.gamma == 2.0
    assert edge.gamma == 2.0
    assert near.path_loss_db == pytest.approx(
        40.0 + 10.0 * np.log10(59.0), abs=1e-12)
    assert near.upload_time_s == pytest.approx(
        upload_time(OCC, near.link.throughput_bps))


def test_evaluate_observation_needs_banded_model():
    flat = PathLossModel(intercept_db=40.0, exponent_model=2.5)
    obs = UserObservation(position_m=(50.0, 0.0, 1.5), environment="outdoor",
                          distance_3d_m=50.0, penetration_loss_db=0.0)
    with pytest.raises(TypeError):
        evaluate_observation(obs, flat, RadioConfig(), OCC,
                             np.random.default_rng(0))


def test_upload_time_cases():
    occ = OccupancyProfile()
    bits = occ.upload_volume_bytes * 8.0
    assert upload_time(occ, 75e6) == pytest.approx(bits / 75e6, rel=1e-12)
    # a starved link uploads for the whole period
    assert upload_time(occ, 0.0) == occ.period_s
    assert upload_time(occ, 1.0) == occ.period_s
    assert upload_time(OccupancyProfile(upload_volume_bytes=0.0), 1e6) == 0.0
    out = upload_time(occ, np.array([0.0, 75e6]))
    assert out[0] == occ.period_s


# ------------------------------------------------------ vectorized run

def test_run_population_statistics(default_run):
    obs = default_run
    assert obs.n == 100_000
    indoor_fraction = obs.indoor.mean()
    assert abs(indoor_fraction - 0.7) < 0.005
    pen = obs.penetration_db[obs.indoor]
    assert abs(pen.mean() - 10.0) < 0.02
    assert np.all(pen >= 7.0) and np.all(pen <= 13.0)
    assert np.all(obs.penetration_db[~obs.indoor] == 0.0)


def test_run_geometry_bounds(default_run):
    obs = default_run
    assert np.all(np.abs(obs.x_m) <= 200.0)
    assert np.all(np.abs(obs.y_m[obs.indoor]) >= 4.0)
    assert np.all(np.abs(obs.y_m[obs.indoor]) <= 10.0)
    assert np.all(np.abs(obs.y_m[~obs.indoor]) <= 4.0)
    assert set(np.unique(obs.z_m)) == {1.5, 4.5, 7.5, 10.5}
    assert np.all(obs.z_m[~obs.indoor] == 1.5)
    # 3D distance to the cell at (0, 0, 3), always past the 1 m reference
    want = np.sqrt(obs.x_m ** 2 + obs.y_m ** 2 + (obs.z_m - 3.0) ** 2)
    assert np.max(np.abs(obs.distance_m - want)) < 1e-9
    assert np.all(obs.distance_m > 1.0)


def test_run_exponents_respect_bands(default_run):
    obs = default_run
    near = obs.distance_m < 60.0
    # near band: GEV bounded above at m - s/k
    assert np.all(obs.gamma[near] < 2.6 + 0.93 / 0.23)
    # far band: Beta support [0, 5]
    assert np.all(obs.gamma[~near] > 0.0)
    assert np.all(obs.gamma[~near] < 5.0)


def test_run_link_columns_consistent(default_run):
    obs = default_run
    intercept = free_space_intercept(LTE_2600)
    want_pl = (intercept + 10.0 * obs.gamma * np.log10(obs.distance_m)
               + obs.penetration_db)
    assert np.max(np.abs(obs.path_loss_db - want_pl)) < 1e-9
    assert np.max(np.abs(obs.rsrp_dbm - (10.0 - obs.path_loss_db))) < 1e-12
    cfg = RadioConfig()
    want_tx = uplink_tx_power(cfg, obs.path_loss_db)
    assert np.max(np.abs(obs.tx_power_dbm - want_tx)) < 1e-12
    assert np.all(obs.tx_power_dbm >= -40.0)
    assert np.all(obs.tx_power_dbm <= 23.0)
    assert np.all(obs.throughput_bps <= 75e6)
    assert np.all(obs.upload_time_s <= 3600.0)
    # indoor users push harder against the extra wall loss
    assert (obs.tx_power_dbm[obs.indoor].mean()
            > obs.tx_power_dbm[~obs.indoor].mean())


def test_run_determinism_same_seed():
    model, band = builtin_model(1800.0)
    cfg = RadioConfig(band=band)
    a = run_simulation(model, cfg, GEOM, OCC, 12_000, seed=7)
    b = run_simulation(model, cfg, GEOM, OCC, 12_000, seed=7)
    c = run_simulation(model, cfg, GEOM, OCC, 12_000, seed=8)
    assert np.array_equal(a.gamma, b.gamma)
    assert np.array_equal(a.upload_time_s, b.upload_time_s)
    assert not np.array_equal(a.gamma, c.gamma)


def test_run_worker_count_invariance():
    model, band = builtin_model(2600.0)
    cfg = RadioConfig(band=band)
    serial = run_simulation(model, cfg, GEOM, OCC, 25_000, seed=3,
                            worker_count=1)
    parallel = run_simulation(model, cfg, GEOM, OCC, 25_000, seed=3,
                              worker_count=3)
    for name in ("x_m", "y_m", "z_m", "indoor", "distance_m", "gamma",
                 "penetration_db", "path_loss_db", "rsrp_dbm",
                 "tx_power_dbm", "snr_db", "throughput_bps",
                 "upload_time_s"):
        assert np.array_equal(getattr(serial, name), getattr(parallel, name))


def test_run_rejects_empty_population():
    model, band = builtin_model(2600.0)
    with pytest.raises(ValueError):
        run_simulation(model, RadioConfig(band=band), GEOM, OCC, 0, seed=1)


# ------------------------------------------------------- CSV round trip

def test_observation_csv_round_trip(tmp_path, default_run):
    obs = default_run
    path = tmp_path / "observations.csv"
    obs.to_csv(path)
    with open(path) as handle:
        header = handle.readline().strip()
    assert header == ",".join(OBSERVATION_COLUMNS)
    back = ObservationSet.from_csv(path, band_mhz=obs.band_mhz)
    assert back.n == obs.n
    assert np.array_equal(back.indoor, obs.indoor)
    for name in ("x_m", "distance_m", "gamma", "path_loss_db",
                 "tx_power_dbm", "upload_time_s"):
        a, b = getattr(obs, name), getattr(back, name)
        # %.10g formatting keeps ten significant digits
        assert np.allclose(a, b, rtol=1e-9, atol=1e-12)


def test_observation_csv_missing_column(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,y,z\n1,2,3\n")
    with pytest.raises(ValueError):
        ObservationSet.from_csv(path)
