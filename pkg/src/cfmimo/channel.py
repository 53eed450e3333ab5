"""Network geometry and large/small-scale channel generation.

Gains follow ``g_ml = sqrt(PL_ml * S_ml) * h_ml`` with a three-slope
pathloss anchored on the COST-231 Hata constant, log-normal shadowing and
Rayleigh fading. All randomness comes from per-realization substreams so a
realization depends only on ``(master_seed, realization_index)``.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

MIN_DISTANCE_M = 1.0


class ConfigError(ValueError):
    """Raised when a configuration field is out of its valid range."""


@dataclass(frozen=True)
class SimConfig:
    num_aps: int
    num_users: int
    area_side_m: float = 1000.0
    carrier_freq_hz: float = 1.9e9
    ap_height_m: float = 15.0
    user_height_m: float = 1.65
    bandwidth_hz: float = 20e6
    tx_power_w: float = 0.2
    noise_density_dbm_hz: float = -174.0
    noise_figure_db: float = 9.0
    shadow_sigma_db: float = 8.0
    d0_m: float = 10.0
    d1_m: float = 50.0
    master_seed: int = 0
    num_realizations: int = 200
    wrap_around: bool = False

    def __post_init__(self):
        def need(ok, name, bound):
            if not ok:
                raise ConfigError(f"{name}={getattr(self, name)!r} violates {bound}")

        for name in ("num_aps", "num_users", "master_seed", "num_realizations"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ConfigError(f"{name}={value!r} must be an integer")
        need(self.num_aps >= 1, "num_aps", ">= 1")
        need(self.num_users >= 1, "num_users", ">= 1")
        need(self.num_realizations >= 1, "num_realizations", ">= 1")
        need(self.master_seed >= 0, "master_seed", ">= 0")
        # a zero-sized square is a legal degenerate layout
        need(self.area_side_m >= 0, "area_side_m", ">= 0")
        for name in ("carrier_freq_hz", "ap_height_m", "user_height_m",
                     "bandwidth_hz", "tx_power_w", "d0_m", "d1_m"):
            need(getattr(self, name) > 0, name, "> 0")
        need(self.shadow_sigma_db >= 0, "shadow_sigma_db", ">= 0")
        need(self.d0_m < self.d1_m, "d0_m", "< d1_m")
        if not isinstance(self.wrap_around, bool):
            raise ConfigError(f"wrap_around={self.wrap_around!r} must be a boolean")
        for name in dataclasses.fields(self):
            value = getattr(self, name.name)
            if name.name != "wrap_around" and not np.isfinite(value):
                raise ConfigError(f"{name.name}={value!r} must be finite")


@dataclass(frozen=True)
class NetworkLayout:
    ap_positions: np.ndarray  # (M, 2) metres
    user_positions: np.ndarray  # (L, 2) metres
    side: float | None = None  # set for a wrapped (torus) square

    def distances(self) -> np.ndarray:
        """Planar AP-user distances, shape (M, L)."""
        diff = np.abs(self.ap_positions[:, None, :] - self.user_positions[None, :, :])
        if self.side is not None:
            diff = np.minimum(diff, self.side - diff)
        return np.hypot(diff[..., 0], diff[..., 1])


@dataclass(frozen=True)
class ChannelRealization:
    gains: np.ndarray  # (M, L) complex amplitudes
    snr: float  # P / sigma^2
    layout: NetworkLayout | None = None
    realization_index: int = 0
    tx_power_w: float = 1.0
    noise_w: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        gains = np.asarray(self.gains, dtype=complex)
        if gains.ndim != 2:
            raise ValueError("gains must be an M x L matrix")
        if not np.all(np.isfinite(gains)):
            raise ValueError("gains must be finite")
        if not self.snr > 0:
            raise ValueError("snr must be positive")
        gains.setflags(write=False)
        object.__setattr__(self, "gains", gains)
        if self.noise_w is None:
            object.__setattr__(self, "noise_w", self.tx_power_w / self.snr)

    @property
    def num_aps(self) -> int:
        return self.gains.shape[0]

    @property
    def num_users(self) -> int:
        return self.gains.shape[1]


def substream(master_seed: int, realization_index: int) -> np.random.SeedSequence:
    """Seed sequence for one realization, independent of evaluation order."""
    return np.random.SeedSequence(master_seed, spawn_key=(realization_index,))


def realization_streams(master_seed: int, realization_index: int):
    """Generators for (layout, channel, scheduling) of one realization."""
    children = substream(master_seed, realization_index).spawn(3)
    return tuple(np.random.default_rng(s) for s in children)


def sample_layout(config: SimConfig, rng: np.random.Generator) -> NetworkLayout:
    side = config.area_side_m
    aps = rng.uniform(0.0, side, size=(config.num_aps, 2))
    users = rng.uniform(0.0, side, size=(config.num_users, 2))
    return NetworkLayout(aps, users, side if config.wrap_around else None)


def hata_offset_db(carrier_freq_hz: float, ap_height_m: float, user_height_m: float) -> float:
    """COST-231 Hata constant term (medium city) at 1 km, in dB."""
    lf = np.log10(carrier_freq_hz / 1e6)
    return float(46.3 + 33.9 * lf - 13.82 * np.log10(ap_height_m)
                 - (1.1 * lf - 0.7) * user_height_m + (1.56 * lf - 0.8))


def pathloss_db(d_m, config: SimConfig):
    """Three-slope pathloss in dB (exponents 0, 2, 3.5), continuous at d0 and d1.

    Accepts a scalar or an array of distances in metres.
    """
    d = np.asarray(d_m, dtype=float)
    if np.any(d < 0) or np.any(np.isnan(d)):
        raise ValueError("distance must be non-negative")
    offset = hata_offset_db(config.carrier_freq_hz, config.ap_height_m, config.user_height_m)
    d_km = np.maximum(d, MIN_DISTANCE_M) / 1000.0
    d0_km = config.d0_m / 1000.0
    d1_km = config.d1_m / 1000.0
    far = offset + 35.0 * np.log10(d_km)
    mid = offset + 15.0 * np.log10(d1_km) + 20.0 * np.log10(d_km)
    near = offset + 15.0 * np.log10(d1_km) + 20.0 * np.log10(d0_km)
    out = np.where(d_km > d1_km, far, np.where(d_km > d0_km, mid, near))
    return float(out) if out.ndim == 0 else out


def noise_power_w(config: SimConfig) -> float:
    dbm = config.noise_density_dbm_hz + 10.0 * np.log10(config.bandwidth_hz) + config.noise_figure_db
    return float(10.0 ** ((dbm - 30.0) / 10.0))


def sample_channel(layout: NetworkLayout, config: SimConfig, rng: np.random.Generator,
                   realization_index: int = 0, *, fading: bool = True) -> ChannelRealization:
    """Draw the M x L gain matrix for a fixed layout.

    ``fading=False`` replaces the Rayleigh term by 1 (used by tests to isolate
    the large-scale part).
    """
    m, l = config.num_aps, config.num_users
    if layout.ap_positions.shape != (m, 2) or layout.user_positions.shape != (l, 2):
        raise ValueError("layout does not match config dimensions")
    pl_lin = 10.0 ** (-pathloss_db(layout.distances(), config) / 10.0)
    z = rng.standard_normal((m, l))
    shadow = 10.0 ** (config.shadow_sigma_db * z / 10.0)
    if fading:
        h = (rng.standard_normal((m, l)) + 1j * rng.standard_normal((m, l))) / np.sqrt(2.0)
    else:
        h = np.ones((m, l), dtype=complex)
    gains = np.sqrt(pl_lin * shadow) * h
    sigma2 = noise_power_w(config)
    return ChannelRealization(gains, config.tx_power_w / sigma2, layout, realization_index,
                              tx_power_w=config.tx_power_w, noise_w=sigma2)


def draw_realization(config: SimConfig, realization_index: int):
    """Layout, channel and scheduling generator for one realization index."""
    layout_rng, channel_rng, sched_rng = realization_streams(config.master_seed, realization_index)
    layout = sample_layout(config, layout_rng)
    return sample_channel(layout, config, channel_rng, realization_index), sched_rng
