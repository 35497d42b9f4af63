"""Street-canyon population scenario around one small cell.

The scene is a straight street with buildings lining both sides.  Users
are dropped either outdoors on the street at handset height or indoors
inside the near-facade depth of a building, on a uniformly chosen floor.
Indoor positions pay a uniform building-penetration loss on top of the
street path loss.  Each observation draws its own path-loss exponent
from the banded model at its 3D distance to the cell.

Determinism: the population is generated in fixed-size chunks, each
chunk seeded from a spawned child of the run seed, and every observation
consumes a fixed row of uniforms regardless of which branches it takes.
The result is bit-identical for a given (config, seed) no matter how
many workers evaluate the chunks.
"""

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .linkbudget import compute_link
from .pathloss import path_loss

__all__ = [
    "INDOOR",
    "OUTDOOR",
    "ScenarioGeometry",
    "OccupancyProfile",
    "UserObservation",
    "ObservationSet",
    "sample_user",
    "evaluate_observation",
    "upload_time",
    "run_simulation",
    "OBSERVATION_COLUMNS",
]

INDOOR = "indoor"
OUTDOOR = "outdoor"

CHUNK_SIZE = 10_000

OBSERVATION_COLUMNS = (
    "x", "y", "z", "env", "d", "gamma", "penetration_db", "pl_db",
    "rsrp_dbm", "ptx_dbm", "snr_db", "thr_bps", "t_ul_s",
)


@dataclass(frozen=True)
class ScenarioGeometry:
    """Street-canyon geometry, all lengths in meters."""

    street_length_m: float = 400.0
    street_width_m: float = 8.0
    penetration_depth_m: float = 6.0   # occupied depth behind each facade
    floors: int = 4
    floor_height_m: float = 3.0
    ue_height_m: float = 1.5
    sc_position_m: tuple = (0.0, 0.0, 3.0)  # street center, above ground
    penetration_loss_db: tuple = (7.0, 13.0)  # uniform indoor loss window

    def __post_init__(self):
        for name in ("street_length_m", "street_width_m",
                     "penetration_depth_m", "floor_height_m",
                     "ue_height_m"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.floors < 1:
            raise ValueError("need at least one floor")
        lo, hi = self.penetration_loss_db
        if not 0 <= lo <= hi:
            raise ValueError("penetration loss window must be ordered and "
                             "non-negative")
        x, y, _ = self.sc_position_m
        if abs(x) > self.street_length_m / 2 or abs(y) > self.street_width_m / 2:
            raise ValueError("small cell must stand inside the street")


@dataclass(frozen=True)
class OccupancyProfile:
    """Who the population is and how it loads the uplink."""

    indoor_fraction: float = 0.7
    population: str = "Adult"
    posture: str = "Standing"
    usage: str = "Data"
    upload_volume_bytes: float = 4.16e6   # data uploaded once per period
    period_s: float = 3600.0

    def __post_init__(self):
        if not 0.0 <= self.indoor_fraction <= 1.0:
            raise ValueError("indoor fraction must lie in [0, 1]")
        if not self.upload_volume_bytes >= 0:
            raise ValueError("upload volume cannot be negative")
        if not self.period_s > 0:
            raise ValueError("period must be positive")


@dataclass(frozen=True)
class UserObservation:
    """One sampled user, before or after link evaluation."""

    position_m: tuple
    environment: str
    distance_3d_m: float
    penetration_loss_db: float
    gamma: float | None = None
    path_loss_db: float | None = None
    link: object = None
    upload_time_s: float | None = None


# Column layout of the per-observation uniform draws.  Every observation
# consumes one full row whether or not a column applies to its branch,
# so masked selections never shift another observation's stream.
_COL_ENV, _COL_X, _COL_Y, _COL_SIDE, _COL_FLOOR, _COL_PEN, _COL_GAMMA = range(7)
_N_COLS = 7


def _positions_from_uniforms(geom, occ, u):
    indoor = u[:, _COL_ENV] < occ.indoor_fraction
    x = (u[:, _COL_X] - 0.5) * geom.street_length_m
    half_w = geom.street_width_m / 2.0
    y_outdoor = (u[:, _COL_Y] - 0.5) * geom.street_width_m
    side = np.where(u[:, _COL_SIDE] < 0.5, -1.0, 1.0)
    y_indoor = side * (half_w + u[:, _COL_Y] * geom.penetration_depth_m)
    floor = np.minimum((u[:, _COL_FLOOR] * geom.floors).astype(int),
                       geom.floors - 1)
    y = np.where(indoor, y_indoor, y_outdoor)
    z = np.where(indoor, floor * geom.floor_height_m + geom.ue_height_m,
                 geom.ue_height_m)
    lo, hi = geom.penetration_loss_db
    pen = np.where(indoor, lo + (hi - lo) * u[:, _COL_PEN], 0.0)
    return indoor, x, y, z, pen


def _distance_3d(geom, x, y, z):
    sx, sy, sz = geom.sc_position_m
    return np.sqrt((x - sx) ** 2 + (y - sy) ** 2 + (z - sz) ** 2)


def sample_user(geom, occ, rng):
    """Draw one user position with environment and penetration loss."""
    u = rng.random((1, _N_COLS))
    indoor, x, y, z, pen = _positions_from_uniforms(geom, occ, u)
    d = _distance_3d(geom, x, y, z)
    return UserObservation(
        position_m=(float(x[0]), float(y[0]), float(z[0])),
        environment=INDOOR if indoor[0] else OUTDOOR,
        distance_3d_m=float(d[0]),
        penetration_loss_db=float(pen[0]),
    )


def upload_time(occ, throughput_bps):
    """Seconds needed to push the period's upload volume, capped at the
    period itself for starved links."""
    bits = occ.upload_volume_bytes * 8.0
    thr = np.asarray(throughput_bps, float)
    with np.errstate(divide="ignore"):
        t = np.where(thr > 0.0, bits / np.maximum(thr, 1e-300), np.inf)
    out = np.minimum(t, occ.period_s)
    if np.ndim(throughput_bps) == 0:
        return float(out)
    return out


def evaluate_observation(obs, model, cfg, occ, rng):
    """Fill in exponent, path loss, link budget and upload time."""
    banded = model.exponent_model
    if not hasattr(banded, "sample_at"):
        raise TypeError("model.exponent_model must be a banded "
                        "distribution with sample_at()")
    gamma = float(banded.sample_at(obs.distance_3d_m, rng))
    pl = path_loss(model, gamma, obs.distance_3d_m) + obs.penetration_loss_db
    link = compute_link(cfg, pl)
    return replace(
        obs, gamma=gamma, path_loss_db=float(pl), link=link,
        upload_time_s=upload_time(occ, link.throughput_bps),
    )


@dataclass
class ObservationSet:
    """Column-wise result of a simulation run."""

    x_m: np.ndarray
    y_m: np.ndarray
    z_m: np.ndarray
    indoor: np.ndarray
    distance_m: np.ndarray
    gamma: np.ndarray
    penetration_db: np.ndarray
    path_loss_db: np.ndarray
    rsrp_dbm: np.ndarray
    tx_power_dbm: np.ndarray
    snr_db: np.ndarray
    throughput_bps: np.ndarray
    upload_time_s: np.ndarray
    band_mhz: float = 0.0

    @property
    def n(self):
        return int(self.x_m.size)

    def to_csv(self, path):
        cols = [
            self.x_m, self.y_m, self.z_m, None, self.distance_m,
            self.gamma, self.penetration_db, self.path_loss_db,
            self.rsrp_dbm, self.tx_power_dbm, self.snr_db,
            self.throughput_bps, self.upload_time_s,
        ]
        env = np.where(self.indoor, INDOOR, OUTDOOR)
        text = [np.char.mod("%.10g", c) if c is not None else env
                for c in cols]
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(OBSERVATION_COLUMNS)
            writer.writerows(zip(*text))

    @classmethod
    def from_csv(cls, path, band_mhz=0.0):
        data = {c: [] for c in OBSERVATION_COLUMNS}
        with open(path, "r", newline="") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None or set(OBSERVATION_COLUMNS) - set(
                reader.fieldnames
            ):
                raise ValueError("observation dump is missing columns")
            for row in reader:
                for c in OBSERVATION_COLUMNS:
                    data[c].append(row[c])
        def arr(name):
            return np.array([float(v) for v in data[name]])
        return cls(
            x_m=arr("x"), y_m=arr("y"), z_m=arr("z"),
            indoor=np.array([v == INDOOR for v in data["env"]]),
            distance_m=arr("d"), gamma=arr("gamma"),
            penetration_db=arr("penetration_db"),
            path_loss_db=arr("pl_db"), rsrp_dbm=arr("rsrp_dbm"),
            tx_power_dbm=arr("ptx_dbm"), snr_db=arr("snr_db"),
            throughput_bps=arr("thr_bps"), upload_time_s=arr("t_ul_s"),
            band_mhz=band_mhz,
        )


def _run_chunk(args):
    seed_seq, count, model, cfg, geom, occ = args
    rng = np.random.default_rng(seed_seq)
    u = rng.random((count, _N_COLS))
    indoor, x, y, z, pen = _positions_from_uniforms(geom, occ, u)
    d = _distance_3d(geom, x, y, z)
    gamma = model.exponent_model.ppf_at(d, u[:, _COL_GAMMA])
    pl = path_loss(model, gamma, d) + pen
    link = compute_link(cfg, pl)
    return {
        "x_m": x, "y_m": y, "z_m": z, "indoor": indoor,
        "distance_m": d, "gamma": np.asarray(gamma, float),
        "penetration_db": pen, "path_loss_db": pl,
        "rsrp_dbm": np.asarray(link.rsrp_dbm, float),
        "tx_power_dbm": np.asarray(link.uplink_tx_power_dbm, float),
        "snr_db": np.asarray(link.snr_db, float),
        "throughput_bps": np.asarray(link.throughput_bps, float),
        "upload_time_s": np.asarray(upload_time(occ, link.throughput_bps),
                                    float),
    }


def run_simulation(model, cfg, geom, occ, n_observations, seed,
                   worker_count=1, chunk_size=CHUNK_SIZE):
    """Monte Carlo over the scenario population.

    Chunk seeds are spawned from ``seed`` by chunk index, so the output
    is identical for any ``worker_count``.
    """
    n = int(n_observations)
    if n < 1:
        raise ValueError("need at least one observation")
    n_chunks = math.ceil(n / chunk_size)
    counts = [min(chunk_size, n - i * chunk_size) for i in range(n_chunks)]
    seqs = np.random.SeedSequence(seed).spawn(n_chunks)
    jobs = [(seqs[i], counts[i], model, cfg, geom, occ)
            for i in range(n_chunks)]
    if worker_count <= 1 or n_chunks == 1:
        parts = [_run_chunk(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=worker_count) as pool:
            parts = list(pool.map(_run_chunk, jobs))
    merged = {key: np.concatenate([p[key] for p in parts])
              for key in parts[0]}
    return ObservationSet(band_mhz=cfg.band.carrier_frequency_hz / 1e6,
                          **merged)
