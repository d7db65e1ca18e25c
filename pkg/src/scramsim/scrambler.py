"""Hard-to-invert exponential signature stage.

Closed-form behavioral model of the analog scrambler: two level translators
map the secret and sensor voltages into base-emitter increments of up to
45 mV each, a matched transistor pair exponentiates the accumulated
increment (the pair ratio cancels the saturation-current prefactor and its
temperature shift), and an affine output stage maps the response onto the
sensor voltage window.

With the translator increments t_sec(sec) and t_sens(sens), the signature is

    out = a_scale * exp((t_sec + t_sens) / v_therm) + b_offset

where a_scale and b_offset are derived so the zero-increment point lands
exactly on out_min and the full 90 mV excursion lands exactly on out_max.
Inverting the stage without knowing the secret requires an analog logarithm
matched to this circuit, which is the hardness assumption of the scheme.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

BOLTZMANN = 1.380649e-23        # J/K
ELEMENTARY_CHARGE = 1.602176634e-19  # C

# Exponential window of the BJT core: the accumulated base-emitter voltage
# must stay inside this band for the exp model to hold.
VBE_WINDOW = (0.5, 0.7)


def thermal_voltage(temp_k: float = 300.0) -> float:
    """kT/q in volts (about 25.852 mV at 300 K)."""
    if not (temp_k > 0):
        raise ValueError(f"temperature must be > 0 K, got {temp_k}")
    return BOLTZMANN * temp_k / ELEMENTARY_CHARGE


@dataclass(frozen=True)
class LevelTranslator:
    """Affine map from an input voltage range onto [0, dvbe_max] with saturation."""

    in_min: float
    in_max: float
    dvbe_max: float

    def __post_init__(self):
        if not (self.in_min < self.in_max):
            raise ValueError(f"require in_min < in_max, got [{self.in_min}, {self.in_max}]")
        if not (self.dvbe_max > 0):
            raise ValueError(f"dvbe_max must be > 0, got {self.dvbe_max}")

    @property
    def gain(self) -> float:
        """Small-signal slope dvbe per input volt."""
        return self.dvbe_max / (self.in_max - self.in_min)


def translate(t: LevelTranslator, x):
    """Base-emitter increment for input x; inputs outside the range saturate.

    Clamping is the defined behavior, not an error: line noise legitimately
    pushes the sensor input outside its physical range and a real translator
    rails. Accepts scalars or arrays.
    """
    x = np.asarray(x, dtype=float)
    out = t.dvbe_max * ((np.clip(x, t.in_min, t.in_max) - t.in_min) / (t.in_max - t.in_min))
    return out if out.ndim else float(out)


def saturation_count(t: LevelTranslator, x) -> int:
    """How many of the given inputs fell outside the translator's linear range."""
    x = np.asarray(x, dtype=float)
    return int(np.count_nonzero((x < t.in_min) | (x > t.in_max)))


@dataclass
class SaturationCounter:
    """Accumulates translator saturation events over a run (never decreases)."""

    count: int = 0

    def add(self, t: LevelTranslator, x) -> int:
        hit = saturation_count(t, x)
        self.count += hit
        return hit


@dataclass(frozen=True)
class ScramblerParams:
    """Full parameter set of the exponential signature stage.

    Defaults: secret window -1..+1 V and sensor window 0.5..4.5 V each
    translate to 0..45 mV; the base bias of 0.55 V keeps the whole 90 mV
    excursion inside the 0.5-0.7 V exponential window; thermal voltage is
    25.852 mV (300 K); the output spans the 0.5-4.5 V sensor window.
    """

    trans_sec: LevelTranslator = field(
        default_factory=lambda: LevelTranslator(-1.0, 1.0, 0.045)
    )
    trans_sens: LevelTranslator = field(
        default_factory=lambda: LevelTranslator(0.5, 4.5, 0.045)
    )
    v_be0: float = 0.55
    v_therm: float = 0.025852
    out_min: float = 0.5
    out_max: float = 4.5

    def __post_init__(self):
        if not (self.v_therm > 0):
            raise ValueError(f"v_therm must be > 0, got {self.v_therm}")
        if not (self.out_min < self.out_max):
            raise ValueError(f"require out_min < out_max, got [{self.out_min}, {self.out_max}]")
        lo, hi = VBE_WINDOW
        top = self.v_be0 + self.trans_sec.dvbe_max + self.trans_sens.dvbe_max
        if self.v_be0 < lo or top > hi:
            raise ValueError(
                f"base bias {self.v_be0} V plus {self.dvbe_span} V excursion leaves the "
                f"{lo}-{hi} V exponential window"
            )

    @property
    def dvbe_span(self) -> float:
        """Maximum accumulated base-emitter increment (both translators railed high)."""
        return self.trans_sec.dvbe_max + self.trans_sens.dvbe_max

    @property
    def a_scale(self) -> float:
        """Output scale forcing the full excursion onto exactly out_max.

        Depends only on (out_min, out_max, dvbe_span, v_therm): the matched
        pair cancels any saturation-current-like prefactor, so neither the
        base bias nor device constants appear here.
        """
        return (self.out_max - self.out_min) / (np.exp(self.dvbe_span / self.v_therm) - 1.0)

    @property
    def b_offset(self) -> float:
        """Output offset forcing the zero-increment point onto exactly out_min."""
        return self.out_min - self.a_scale


def scramble(p: ScramblerParams, sec, sens):
    """Signature voltage for a secret and a sensor voltage (scalars or arrays).

    Strictly increasing in each input inside the translator ranges; constant
    once an input rails. The result is confined to [out_min, out_max].
    """
    dvbe = np.asarray(translate(p.trans_sec, sec)) + np.asarray(translate(p.trans_sens, sens))
    out = p.a_scale * np.exp(dvbe / p.v_therm) + p.b_offset
    # floating-point roundoff can overshoot the endpoints by an ulp
    out = np.clip(out, p.out_min, p.out_max)
    return out if out.ndim else float(out)


@dataclass(frozen=True, eq=False)
class DcSweep:
    """Grid evaluation of the signature, rows ordered by (sec, sens)."""

    sec: np.ndarray
    sens: np.ndarray
    scram: np.ndarray

    def rows(self):
        return zip(self.sec, self.sens, self.scram)

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write("sec_volts,sens_volts,scram_volts\n")
            for a, b, c in self.rows():
                f.write(f"{float(a)!r},{float(b)!r},{float(c)!r}\n")


def dc_sweep(
    p: ScramblerParams,
    sec_values,
    sens_range: tuple[float, float],
    n_points: int,
) -> DcSweep:
    """Evaluate the signature over a sensor sweep for each secret value.

    Args:
        p: scrambler parameters.
        sec_values: secret voltages, one curve each.
        sens_range: (low, high) sensor sweep bounds.
        n_points: points per curve, at least 2 (endpoints included).
    """
    if n_points < 2:
        raise ValueError(f"n_points must be >= 2, got {n_points}")
    lo, hi = sens_range
    if not (lo < hi):
        raise ValueError(f"require sens_range low < high, got [{lo}, {hi}]")
    sens = np.linspace(lo, hi, n_points)
    secs = np.sort(np.asarray(list(sec_values), dtype=float))
    sec_col = np.repeat(secs, n_points)
    sens_col = np.tile(sens, secs.size)
    return DcSweep(sec=sec_col, sens=sens_col, scram=np.asarray(scramble(p, sec_col, sens_col)))
