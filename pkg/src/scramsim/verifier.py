"""ECU-side verification: quantize both signature lines, compare, flag tampering.

The receiving controller digitizes the transmitted signature and a locally
recomputed one (it shares the device secret), takes the per-sample absolute
difference, and flags a sample as tampered once the difference strictly
exceeds the detection threshold for `debounce` consecutive samples. The
threshold itself comes from a characterization loop: replay the stimulus with
line noise on the scrambler input only, record the worst quantized
difference per candidate secret, and scale the overall maximum by a safety
factor.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .scrambler import ScramblerParams, scramble
from .seeds import ROLE_TRIAL, substream_rng
from .waveforms import NoiseSpec, Waveform, add, gen_noise


@dataclass(frozen=True)
class AdcConfig:
    """Ideal mid-tread converter: codes are multiples of v_ref / 2**bits."""

    bits: int = 12
    v_ref: float = 5.0

    def __post_init__(self):
        if not (8 <= self.bits <= 16):
            raise ValueError(f"bits must be in [8, 16], got {self.bits}")
        if not (self.v_ref > 0):
            raise ValueError(f"v_ref must be > 0, got {self.v_ref}")

    @property
    def lsb(self) -> float:
        return self.v_ref / (1 << self.bits)


@dataclass(frozen=True)
class VerifierConfig:
    """Comparison settings: ADC, detection threshold, debounce count.

    v_th_detect may be left None in a scenario config, in which case the
    harness calibrates it before running.
    """

    adc: AdcConfig = AdcConfig()
    v_th_detect: float | None = None
    debounce: int = 1

    def __post_init__(self):
        if self.v_th_detect is not None and not (self.v_th_detect >= 0):
            raise ValueError(f"v_th_detect must be >= 0, got {self.v_th_detect}")
        if self.debounce < 1:
            raise ValueError(f"debounce must be >= 1, got {self.debounce}")


def quantize(adc: AdcConfig, v):
    """Mid-tread quantization with rail clamping, ties rounding away from zero.

    Out-of-range inputs clamp to the rails rather than erroring. Accepts
    scalars or arrays; quantized values are exact code multiples, so
    re-quantizing is the identity.
    """
    v = np.asarray(v, dtype=float)
    # clamped value is nonnegative, so away-from-zero ties are floor(x + 0.5)
    codes = np.floor(np.clip(v, 0.0, adc.v_ref) / adc.lsb + 0.5)
    out = codes * adc.lsb
    return out if out.ndim else float(out)


@dataclass(frozen=True, eq=False)
class Verdict:
    """Per-sample authenticity flags plus the first detection event, if any."""

    tampered: np.ndarray                      # bool per sample
    first_detection: tuple[int, float] | None  # (sample index, time in s)

    @property
    def any_tampered(self) -> bool:
        return bool(self.tampered.any())


def _apply_debounce(exceed: np.ndarray, debounce: int) -> np.ndarray:
    """True where `exceed` has held for `debounce` consecutive samples."""
    if debounce == 1:
        return exceed
    idx = np.arange(exceed.size)
    last_calm = np.maximum.accumulate(np.where(~exceed, idx, -1))
    return exceed & ((idx - last_calm) >= debounce)


def verify_stream(
    cfg: VerifierConfig,
    p: ScramblerParams,
    sec: float,
    sens_line: Waveform,
    scram_line: Waveform,
) -> tuple[Verdict, np.ndarray]:
    """Check a received signature stream against the locally recomputed one.

    Args:
        cfg: ADC, threshold and debounce settings (threshold must be set).
        p: scrambler parameters shared with the sensor package.
        sec: the shared device secret in volts.
        sens_line: sensor line as seen at the ECU.
        scram_line: transmitted signature line.

    Returns:
        (verdict, diff) where diff is the per-sample absolute difference of
        the two quantized signatures, in volts.
    """
    if sens_line.grid != scram_line.grid:
        raise ValueError(f"grid mismatch: {sens_line.grid} vs {scram_line.grid}")
    if cfg.v_th_detect is None:
        raise ValueError("v_th_detect is not set; calibrate first")
    local = scramble(p, sec, sens_line.samples)
    diff = np.abs(quantize(cfg.adc, scram_line.samples) - quantize(cfg.adc, local))
    # strict inequality: a diff exactly at the threshold stays authentic,
    # since the calibrated threshold is itself an observed maximum
    tampered = _apply_debounce(diff > cfg.v_th_detect, cfg.debounce)
    hits = np.flatnonzero(tampered)
    first = None
    if hits.size:
        k = int(hits[0])
        first = (k, k / sens_line.grid.sample_rate)
    return Verdict(tampered=tampered, first_detection=first), diff


@dataclass(frozen=True)
class CalibrationReport:
    """Outcome of a threshold characterization run."""

    noise_kind: str
    noise_peak: float
    secrets: tuple[float, ...]
    per_secret_max_diff: tuple[float, ...]
    v_th_detect: float
    argmax_secret: float
    seed: int

    def to_dict(self) -> dict:
        return {
            "noise_kind": self.noise_kind,
            "noise_peak": self.noise_peak,
            "per_secret_max_diff": [
                {"sec_volts": s, "max_diff_volts": d}
                for s, d in zip(self.secrets, self.per_secret_max_diff)
            ],
            "v_th_detect": self.v_th_detect,
            "argmax_secret": self.argmax_secret,
            "seed": self.seed,
        }

    def to_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2)
            f.write("\n")


def calibrate_threshold(
    p: ScramblerParams,
    adc: AdcConfig,
    secrets,
    stimulus: Waveform,
    noise: NoiseSpec,
    n_trials: int,
    safety_factor: float,
    master_seed: int,
) -> CalibrationReport:
    """Characterize the detection threshold for a set of candidate secrets.

    For each secret, the no-attack loop is replayed n_trials times with fresh
    noise on the scrambler's sensor input only, and the worst per-sample
    quantized difference is recorded. The returned threshold is
    safety_factor times the maximum over all secrets and trials.

    Trial t draws its noise from substream (master_seed, "trial", t); every
    secret sees the same noise realizations, so the comparison across secrets
    isolates the operating-point effect.
    """
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials}")
    if not (safety_factor >= 1):
        raise ValueError(f"safety_factor must be >= 1, got {safety_factor}")
    secrets = tuple(float(s) for s in secrets)
    if not secrets:
        raise ValueError("need at least one candidate secret")

    noise_waves = [
        gen_noise(stimulus.grid, noise, substream_rng(master_seed, ROLE_TRIAL, t))
        for t in range(n_trials)
    ]
    max_diffs = []
    for sec in secrets:
        local_q = quantize(adc, scramble(p, sec, stimulus.samples))
        worst = 0.0
        for nw in noise_waves:
            tx_q = quantize(adc, scramble(p, sec, add(stimulus, nw).samples))
            worst = max(worst, float(np.max(np.abs(tx_q - local_q))))
        max_diffs.append(worst)

    argmax = int(np.argmax(max_diffs))
    return CalibrationReport(
        noise_kind=noise.kind,
        noise_peak=noise.peak_or_sigma,
        secrets=secrets,
        per_secret_max_diff=tuple(max_diffs),
        v_th_detect=safety_factor * max_diffs[argmax],
        argmax_secret=secrets[argmax],
        seed=master_seed,
    )


def diff_trace_to_csv(grid, diff: np.ndarray, verdict: Verdict, path) -> None:
    """Write `time_s,diff_volts,detected` rows for a verification run."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("time_s,diff_volts,detected\n")
        for t, d, flag in zip(grid.times(), diff, verdict.tampered):
            f.write(f"{t:.9e},{float(d)!r},{int(flag)}\n")
