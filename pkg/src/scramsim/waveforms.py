"""Discrete-time voltage waveforms: sensor stimuli, line noise, grid bookkeeping.

A waveform is an immutable pair of a uniform time grid and a float64 sample
vector. All signal blocks in the simulator consume and produce waveforms;
transformations always return new values, so a scenario run is a pure
function of (config, seed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NOISE_KINDS = ("none", "uniform", "gaussian")


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling grid: sample k sits at exactly k / sample_rate seconds."""

    sample_rate: float  # Hz
    duration: float     # s

    def __post_init__(self):
        if not (self.sample_rate > 0):
            raise ValueError(f"sample_rate must be > 0, got {self.sample_rate}")
        if not (self.duration > 0):
            raise ValueError(f"duration must be > 0, got {self.duration}")
        if self.n_samples < 1:
            raise ValueError("grid resolves to zero samples")

    @property
    def n_samples(self) -> int:
        return int(round(self.duration * self.sample_rate))

    def times(self) -> np.ndarray:
        """Sample instants in seconds, length n_samples."""
        return np.arange(self.n_samples) / self.sample_rate


@dataclass(frozen=True, eq=False)
class Waveform:
    """Sampled voltage signal on a grid. Samples are read-only float64."""

    grid: TimeGrid
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.shape != (self.grid.n_samples,):
            raise ValueError(
                f"expected {self.grid.n_samples} samples, got shape {samples.shape}"
            )
        if not np.all(np.isfinite(samples)):
            raise ValueError("waveform samples must be finite")
        samples = samples.copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def times(self) -> np.ndarray:
        return self.grid.times()


@dataclass(frozen=True)
class NoiseSpec:
    """Line-noise description.

    kind "uniform" draws zero-mean samples bounded by +/-peak_or_sigma;
    "gaussian" draws zero-mean samples with standard deviation peak_or_sigma;
    "none" generates an all-zero waveform. ``stream`` names the RNG substream
    role the noise draws from (see scramsim.seeds).
    """

    kind: str = "uniform"
    peak_or_sigma: float = 0.0675  # V; half of the 135 mV sensor error span
    stream: str = "noise"

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"noise kind must be one of {NOISE_KINDS}, got {self.kind!r}")
        if not (self.peak_or_sigma >= 0):
            raise ValueError(f"peak_or_sigma must be >= 0, got {self.peak_or_sigma}")


def sine_sensor(grid: TimeGrid, freq: float, v_min: float, v_max: float) -> Waveform:
    """Sinusoidal sensor stimulus swinging between v_min and v_max.

    Args:
        grid: sampling grid; its rate must be at least 10x freq.
        freq: stimulus frequency in Hz.
        v_min: lowest voltage of the swing.
        v_max: highest voltage of the swing.

    Returns:
        Waveform with sample k = midpoint + amplitude * sin(2*pi*freq*t_k).
    """
    if not (freq > 0):
        raise ValueError(f"freq must be > 0, got {freq}")
    if not (v_min < v_max):
        raise ValueError(f"require v_min < v_max, got [{v_min}, {v_max}]")
    if grid.sample_rate < 10 * freq:
        raise ValueError(
            f"sample_rate {grid.sample_rate} Hz undersamples a {freq} Hz stimulus "
            "(need >= 10 samples per period)"
        )
    mid = (v_min + v_max) / 2.0
    amp = (v_max - v_min) / 2.0
    return Waveform(grid, mid + amp * np.sin(2.0 * np.pi * freq * grid.times()))


def dc_sensor(grid: TimeGrid, level: float) -> Waveform:
    """Constant stimulus, e.g. a DC operating point."""
    if not np.isfinite(level):
        raise ValueError("level must be finite")
    return Waveform(grid, np.full(grid.n_samples, float(level)))


def gen_noise(grid: TimeGrid, spec: NoiseSpec, rng: np.random.Generator) -> Waveform:
    """Zero-mean noise waveform drawn from the given generator.

    Unit-amplitude variates are drawn first and then scaled by
    spec.peak_or_sigma, so for a fixed seed the noise grows proportionally
    with the configured amplitude.
    """
    n = grid.n_samples
    if spec.kind == "none":
        return Waveform(grid, np.zeros(n))
    if spec.kind == "uniform":
        return Waveform(grid, spec.peak_or_sigma * rng.uniform(-1.0, 1.0, n))
    return Waveform(grid, spec.peak_or_sigma * rng.standard_normal(n))


def add(w1: Waveform, w2: Waveform) -> Waveform:
    """Element-wise sum of two waveforms on the same grid."""
    if w1.grid != w2.grid:
        raise ValueError(f"grid mismatch: {w1.grid} vs {w2.grid}")
    return Waveform(w1.grid, w1.samples + w2.samples)


def truncate(w: Waveform, duration: float) -> Waveform:
    """Restrict a waveform to its first `duration` seconds."""
    if not (0 < duration <= w.grid.duration):
        raise ValueError(f"duration must be in (0, {w.grid.duration}], got {duration}")
    grid = TimeGrid(w.grid.sample_rate, duration)
    return Waveform(grid, w.samples[: grid.n_samples])


def to_csv(w: Waveform, path) -> None:
    """Write `time_s,volts` rows; time carries at least 9 significant digits."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("time_s,volts\n")
        for t, v in zip(w.times(), w.samples):
            f.write(f"{t:.9e},{float(v)!r}\n")
