"""Man-in-the-middle injectors on the sensor line between package and ECU.

An interposed attacker can only reach the sensor line leaving the package;
the scrambler inside the package keeps seeing the true signal, so the
transmitted signature stays honest while the ECU's local recomputation runs
on the tampered line. Three injector shapes are provided: a linear ramp
(slowly creeping offset), a step, and a multiplicative scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .waveforms import Waveform

ATTACK_KINDS = ("none", "ramp", "step", "scale")


@dataclass(frozen=True)
class AttackSpec:
    """Injected-signal description.

    param means volts/second for a ramp, an offset in volts for a step, and a
    dimensionless factor for a scale. Samples before start_time pass through
    unchanged. A ramp may optionally advance in whole-period stairs instead
    of continuously (staircase=True), stepping every staircase_period
    seconds.
    """

    kind: str = "none"
    start_time: float = 0.0
    param: float = 0.0
    staircase: bool = False
    staircase_period: float = 1e-3

    def __post_init__(self):
        if self.kind not in ATTACK_KINDS:
            raise ValueError(f"attack kind must be one of {ATTACK_KINDS}, got {self.kind!r}")
        if not (self.start_time >= 0):
            raise ValueError(f"start_time must be >= 0, got {self.start_time}")
        if self.kind == "ramp" and not (self.param >= 0):
            raise ValueError(f"ramp slope must be >= 0, got {self.param}")
        if self.staircase and not (self.staircase_period > 0):
            raise ValueError(f"staircase_period must be > 0, got {self.staircase_period}")


def injected_amplitude(spec: AttackSpec, t):
    """Additive magnitude the attacker contributes at time t (scalar or array).

    Undefined for the multiplicative scale attack, which has no single
    additive amplitude.
    """
    if spec.kind == "scale":
        raise ValueError("injected amplitude is not applicable to a scale attack")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be >= 0")
    if spec.kind == "none":
        out = np.zeros_like(t)
    elif spec.kind == "ramp":
        elapsed = np.maximum(0.0, t - spec.start_time)
        if spec.staircase:
            elapsed = spec.staircase_period * np.floor(elapsed / spec.staircase_period)
        out = spec.param * elapsed
    else:  # step
        out = np.where(t >= spec.start_time, spec.param, 0.0)
    return out if out.ndim else float(out)


def inject(spec: AttackSpec, sens: Waveform) -> Waveform:
    """Sensor line as the ECU sees it after the attacker's modification."""
    if spec.kind == "none":
        return sens
    t = sens.times()
    if spec.kind == "scale":
        tampered = np.where(t >= spec.start_time, sens.samples * spec.param, sens.samples)
    else:
        tampered = sens.samples + injected_amplitude(spec, t)
    return Waveform(sens.grid, tampered)
