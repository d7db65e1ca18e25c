"""Hardware-secret model: op-amp input offset as a weak PUF, amplified to a secret voltage.

The per-device randomness source is the input offset voltage of the secret
generator's op-amp, bounded by +/-v_os_max (7 mV for the modeled part). A
fixed-gain amplifier stage turns the offset into the secret voltage, with
output saturation so the secret always stays inside its nominal +/-1 V range.
The secret is a pure function of the stored offset: re-deriving it from the
same offset always yields the same value, which is the reliability property
the architecture leans on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OFFSET_KINDS = ("uniform", "gaussian_truncated")

DEFAULT_V_OS_MAX = 7e-3  # V, offset bound of the modeled op-amp


@dataclass(frozen=True)
class OffsetDistribution:
    """Population distribution of the per-device input offset voltage.

    "uniform" covers [-v_os_max, +v_os_max] evenly (maximizes coverage of
    extreme secrets during testing); "gaussian_truncated" is the physically
    likelier bell shape with sigma = v_os_max / 3, resampled until inside the
    bound. v_os_max = 0 is accepted as the degenerate no-mismatch case.
    """

    kind: str = "uniform"
    v_os_max: float = DEFAULT_V_OS_MAX

    def __post_init__(self):
        if self.kind not in OFFSET_KINDS:
            raise ValueError(f"offset kind must be one of {OFFSET_KINDS}, got {self.kind!r}")
        if not (self.v_os_max >= 0):
            raise ValueError(f"v_os_max must be >= 0, got {self.v_os_max}")


@dataclass(frozen=True)
class SecretAmplifier:
    """Fixed-gain stage with output saturation at +/-clamp volts."""

    gain: float = 143.0
    clamp: float = 1.0

    def __post_init__(self):
        if not (self.gain > 0):
            raise ValueError(f"gain must be > 0, got {self.gain}")
        if not (self.clamp > 0):
            raise ValueError(f"clamp must be > 0, got {self.clamp}")


@dataclass(frozen=True)
class DriftSpec:
    """Linear offset drift: temp_coeff volts per kelvin over a delta_temp excursion.

    Disabled by default; no published drift figures exist for the modeled
    part, so the coefficient is a configuration knob, not a claim.
    """

    temp_coeff: float = 0.0  # V/K
    delta_temp: float = 0.0  # K


@dataclass(frozen=True)
class DeviceModel:
    """One physical sensor instance: its sampled offset and derived secret."""

    v_os: float
    sec: float


def sample_offset(dist: OffsetDistribution, rng: np.random.Generator, size=None):
    """Draw offset voltage(s) from the device population.

    Returns a float for size=None, else an ndarray of that size. Results are
    always inside [-v_os_max, +v_os_max] and deterministic under a fixed
    generator state.
    """
    n = 1 if size is None else int(size)
    if dist.v_os_max == 0.0:
        out = np.zeros(n)
    elif dist.kind == "uniform":
        out = rng.uniform(-dist.v_os_max, dist.v_os_max, n)
    else:
        sigma = dist.v_os_max / 3.0
        out = sigma * rng.standard_normal(n)
        bad = np.abs(out) > dist.v_os_max
        while np.any(bad):
            out[bad] = sigma * rng.standard_normal(int(bad.sum()))
            bad = np.abs(out) > dist.v_os_max
    return float(out[0]) if size is None else out


def secret_from_offset(v_os: float, amp: SecretAmplifier = SecretAmplifier()) -> float:
    """Secret voltage produced from an offset: gain * v_os, saturated at +/-clamp."""
    if not np.isfinite(v_os):
        raise ValueError("v_os must be finite")
    return float(min(max(amp.gain * v_os, -amp.clamp), amp.clamp))


def apply_drift(v_os: float, drift: DriftSpec, v_os_max: float = DEFAULT_V_OS_MAX) -> float:
    """Offset after a temperature excursion, kept within 2x the sampling bound.

    The plausibility clamp at +/-2*v_os_max stops a misconfigured coefficient
    from producing a physically absurd offset; v_os_max should be the bound
    of the distribution the offset was sampled from.
    """
    drifted = v_os + drift.temp_coeff * drift.delta_temp
    bound = 2.0 * v_os_max
    return float(min(max(drifted, -bound), bound))


def make_device(
    dist: OffsetDistribution,
    amp: SecretAmplifier,
    rng: np.random.Generator,
    drift: DriftSpec | None = None,
    v_os_override: float | None = None,
) -> DeviceModel:
    """Sample (or force) an offset and derive the device secret."""
    v_os = sample_offset(dist, rng) if v_os_override is None else float(v_os_override)
    if drift is not None:
        v_os = apply_drift(v_os, drift, dist.v_os_max if dist.v_os_max > 0 else DEFAULT_V_OS_MAX)
    return DeviceModel(v_os=v_os, sec=secret_from_offset(v_os, amp))


def population_to_csv(devices, path) -> None:
    """Write `device_id,v_os_volts,sec_volts` rows for a device population."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("device_id,v_os_volts,sec_volts\n")
        for i, d in enumerate(devices):
            f.write(f"{i},{d.v_os!r},{d.sec!r}\n")
