"""Scenario orchestration: wire stimulus -> scrambler -> lines -> verifier.

A scenario config fully determines a run; equal configs with equal master
seeds produce byte-identical reports. The signal topology is the closed
loop of the secure link:

    stimulus -+-> (+ line noise) -> scrambler -> scram line ----------+
              |                                                       v
              +-> (attack injector) -> sens line at ECU -> local scrambler -> compare

Noise touches only the signal reaching the in-package scrambler; an attacker
touches only the sensor line between package and ECU. The harness also runs
threshold calibration, Monte Carlo device populations, and DC sweeps, and
persists traces as CSV plus summaries as JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .attacks import AttackSpec, inject, injected_amplitude
from .scrambler import LevelTranslator, ScramblerParams, SaturationCounter, scramble
from .secretgen import (
    DeviceModel,
    DriftSpec,
    OffsetDistribution,
    SecretAmplifier,
    make_device,
    secret_from_offset,
)
from .seeds import PRNG_ALGORITHM, ROLE_CHECK, ROLE_OFFSET, substream_rng
from .verifier import (
    AdcConfig,
    CalibrationReport,
    VerifierConfig,
    calibrate_threshold,
    verify_stream,
)
from .waveforms import NoiseSpec, TimeGrid, Waveform, add, dc_sensor, gen_noise, sine_sensor

# Calibration defaults: ten short trials resolve the worst-case noise draw
# without dominating runtime.
CAL_TRIALS = 10
CAL_TRIAL_DURATION = 0.010  # s
CAL_SAFETY_FACTOR = 1.0     # 1.2 recommended for field margin

REFERENCE_RAMP = AttackSpec(kind="ramp", start_time=0.0, param=1.0)


class ConfigError(ValueError):
    """Scenario config rejected; the message names the offending field path."""


@dataclass(frozen=True)
class StimulusSpec:
    """Sensor stimulus: a sinusoid between v_min and v_max, or a DC level."""

    kind: str = "sine"
    freq: float = 1000.0
    v_min: float = 0.5
    v_max: float = 4.5
    level: float = 2.5

    def __post_init__(self):
        if self.kind not in ("sine", "dc"):
            raise ValueError(f"stimulus kind must be 'sine' or 'dc', got {self.kind!r}")
        if self.kind == "sine":
            if not (self.freq > 0):
                raise ValueError(f"freq must be > 0, got {self.freq}")
            if not (self.v_min < self.v_max):
                raise ValueError(f"require v_min < v_max, got [{self.v_min}, {self.v_max}]")
        elif not np.isfinite(self.level):
            raise ValueError("level must be finite")


@dataclass(frozen=True)
class DeviceSpec:
    """Device population settings plus an optional forced offset."""

    offset: OffsetDistribution = field(default_factory=OffsetDistribution)
    amplifier: SecretAmplifier = field(default_factory=SecretAmplifier)
    drift: DriftSpec = field(default_factory=DriftSpec)
    v_os_override: float | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything a run needs; master_seed is the only mandatory field."""

    master_seed: int
    grid: TimeGrid = field(default_factory=lambda: TimeGrid(100e3, 0.1))
    stimulus: StimulusSpec = field(default_factory=StimulusSpec)
    device: DeviceSpec = field(default_factory=DeviceSpec)
    scrambler: ScramblerParams = field(default_factory=ScramblerParams)
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    verifier: VerifierConfig = field(default_factory=VerifierConfig)
    attack: AttackSpec = field(default_factory=AttackSpec)
    rng: str = PRNG_ALGORITHM

    def __post_init__(self):
        if not isinstance(self.master_seed, int) or self.master_seed < 0:
            raise ValueError(f"master_seed must be a nonnegative integer, got {self.master_seed!r}")
        if self.rng != PRNG_ALGORITHM:
            raise ValueError(f"rng must be {PRNG_ALGORITHM!r}, got {self.rng!r}")


def default_config(master_seed: int = 0) -> ScenarioConfig:
    """Reference experiment defaults: 1 kHz sinusoid 0.5-4.5 V, 100 ms at 100 kHz."""
    return ScenarioConfig(master_seed=master_seed)


def make_stimulus(spec: StimulusSpec, grid: TimeGrid) -> Waveform:
    if spec.kind == "sine":
        return sine_sensor(grid, spec.freq, spec.v_min, spec.v_max)
    return dc_sensor(grid, spec.level)


# --------------------------------------------------------------------------
# Config (de)serialization: strict JSON schema, unknown keys rejected, all
# voltages in volts and times in seconds.
# --------------------------------------------------------------------------

def _check_keys(d, path: str, allowed) -> None:
    if not isinstance(d, dict):
        raise ConfigError(f"{path}: expected an object, got {type(d).__name__}")
    unknown = set(d) - set(allowed)
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) {sorted(unknown)}")


def _build(path: str, ctor, kwargs: dict):
    try:
        return ctor(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _section(d: dict, key: str) -> dict:
    sub = d.get(key, {})
    if not isinstance(sub, dict):
        raise ConfigError(f"{key}: expected an object, got {type(sub).__name__}")
    return sub


def config_from_dict(d: dict) -> ScenarioConfig:
    """Build and validate a ScenarioConfig from plain dict data."""
    if not isinstance(d, dict):
        raise ConfigError(f"config: expected an object, got {type(d).__name__}")
    _check_keys(d, "config", (
        "master_seed", "rng", "grid", "stimulus", "device",
        "scrambler", "noise", "verifier", "attack",
    ))
    if "master_seed" not in d:
        raise ConfigError("config: missing required key 'master_seed'")

    kwargs = {"master_seed": d["master_seed"]}
    if "rng" in d:
        kwargs["rng"] = d["rng"]

    sub = _section(d, "grid")
    if sub:
        _check_keys(sub, "grid", ("sample_rate", "duration"))
        kwargs["grid"] = _build("grid", TimeGrid, sub)

    sub = _section(d, "stimulus")
    if sub:
        _check_keys(sub, "stimulus", ("kind", "freq", "v_min", "v_max", "level"))
        kwargs["stimulus"] = _build("stimulus", StimulusSpec, sub)

    sub = _section(d, "device")
    if sub:
        _check_keys(sub, "device", ("offset", "amplifier", "drift", "v_os_override"))
        dev_kwargs = {}
        if "offset" in sub:
            _check_keys(sub["offset"], "device.offset", ("kind", "v_os_max"))
            dev_kwargs["offset"] = _build("device.offset", OffsetDistribution, sub["offset"])
        if "amplifier" in sub:
            _check_keys(sub["amplifier"], "device.amplifier", ("gain", "clamp"))
            dev_kwargs["amplifier"] = _build("device.amplifier", SecretAmplifier, sub["amplifier"])
        if "drift" in sub:
            _check_keys(sub["drift"], "device.drift", ("temp_coeff", "delta_temp"))
            dev_kwargs["drift"] = _build("device.drift", DriftSpec, sub["drift"])
        if "v_os_override" in sub:
            dev_kwargs["v_os_override"] = sub["v_os_override"]
        kwargs["device"] = _build("device", DeviceSpec, dev_kwargs)

    sub = _section(d, "scrambler")
    if sub:
        _check_keys(sub, "scrambler", (
            "trans_sec", "trans_sens", "v_be0", "v_therm", "out_min", "out_max",
        ))
        scr_kwargs = {}
        for name in ("trans_sec", "trans_sens"):
            if name in sub:
                _check_keys(sub[name], f"scrambler.{name}", ("in_min", "in_max", "dvbe_max"))
                scr_kwargs[name] = _build(f"scrambler.{name}", LevelTranslator, sub[name])
        for name in ("v_be0", "v_therm", "out_min", "out_max"):
            if name in sub:
                scr_kwargs[name] = sub[name]
        kwargs["scrambler"] = _build("scrambler", ScramblerParams, scr_kwargs)

    sub = _section(d, "noise")
    if sub:
        _check_keys(sub, "noise", ("kind", "peak_or_sigma", "stream"))
        kwargs["noise"] = _build("noise", NoiseSpec, sub)

    sub = _section(d, "verifier")
    if sub:
        _check_keys(sub, "verifier", ("adc", "v_th_detect", "debounce"))
        ver_kwargs = {}
        if "adc" in sub:
            _check_keys(sub["adc"], "verifier.adc", ("bits", "v_ref"))
            ver_kwargs["adc"] = _build("verifier.adc", AdcConfig, sub["adc"])
        for name in ("v_th_detect", "debounce"):
            if name in sub:
                ver_kwargs[name] = sub[name]
        kwargs["verifier"] = _build("verifier", VerifierConfig, ver_kwargs)

    sub = _section(d, "attack")
    if sub:
        _check_keys(sub, "attack", (
            "kind", "start_time", "param", "staircase", "staircase_period",
        ))
        kwargs["attack"] = _build("attack", AttackSpec, sub)

    return _build("config", ScenarioConfig, kwargs)


def config_to_dict(cfg: ScenarioConfig) -> dict:
    return {
        "master_seed": cfg.master_seed,
        "rng": cfg.rng,
        "grid": {"sample_rate": cfg.grid.sample_rate, "duration": cfg.grid.duration},
        "stimulus": {
            "kind": cfg.stimulus.kind,
            "freq": cfg.stimulus.freq,
            "v_min": cfg.stimulus.v_min,
            "v_max": cfg.stimulus.v_max,
            "level": cfg.stimulus.level,
        },
        "device": {
            "offset": {"kind": cfg.device.offset.kind, "v_os_max": cfg.device.offset.v_os_max},
            "amplifier": {"gain": cfg.device.amplifier.gain, "clamp": cfg.device.amplifier.clamp},
            "drift": {
                "temp_coeff": cfg.device.drift.temp_coeff,
                "delta_temp": cfg.device.drift.delta_temp,
            },
            "v_os_override": cfg.device.v_os_override,
        },
        "scrambler": {
            "trans_sec": {
                "in_min": cfg.scrambler.trans_sec.in_min,
                "in_max": cfg.scrambler.trans_sec.in_max,
                "dvbe_max": cfg.scrambler.trans_sec.dvbe_max,
            },
            "trans_sens": {
                "in_min": cfg.scrambler.trans_sens.in_min,
                "in_max": cfg.scrambler.trans_sens.in_max,
                "dvbe_max": cfg.scrambler.trans_sens.dvbe_max,
            },
            "v_be0": cfg.scrambler.v_be0,
            "v_therm": cfg.scrambler.v_therm,
            "out_min": cfg.scrambler.out_min,
            "out_max": cfg.scrambler.out_max,
        },
        "noise": {
            "kind": cfg.noise.kind,
            "peak_or_sigma": cfg.noise.peak_or_sigma,
            "stream": cfg.noise.stream,
        },
        "verifier": {
            "adc": {"bits": cfg.verifier.adc.bits, "v_ref": cfg.verifier.adc.v_ref},
            "v_th_detect": cfg.verifier.v_th_detect,
            "debounce": cfg.verifier.debounce,
        },
        "attack": {
            "kind": cfg.attack.kind,
            "start_time": cfg.attack.start_time,
            "param": cfg.attack.param,
            "staircase": cfg.attack.staircase,
            "staircase_period": cfg.attack.staircase_period,
        },
    }


def load_config(path) -> ScenarioConfig:
    """Load and validate a scenario config from a JSON file."""
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return config_from_dict(data)


def export_config(cfg: ScenarioConfig, path) -> None:
    """Write a config as JSON; load_config(export_config(cfg)) == cfg."""
    with open(path, "w", encoding="utf-8") as f:
        json.dump(config_to_dict(cfg), f, indent=2)
        f.write("\n")


def with_threshold(cfg: ScenarioConfig, v_th_detect: float) -> ScenarioConfig:
    """Copy of the config with the detection threshold filled in."""
    return replace(cfg, verifier=replace(cfg.verifier, v_th_detect=v_th_detect))


# --------------------------------------------------------------------------
# Scenario run
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RunReport:
    """Per-sample trace plus summary of one scenario run.

    The summary carries every derived constant (a_scale, b_offset, threshold,
    sampled offset and secret, saturation tallies), so a report alone is
    enough to audit the run.
    """

    config: ScenarioConfig
    time: np.ndarray
    sens_true: np.ndarray
    sens_line: np.ndarray
    scram_tx: np.ndarray
    scram_local: np.ndarray
    diff: np.ndarray
    detected: np.ndarray
    v_th_detect: float
    first_detection_index: int | None
    first_detection_time: float | None
    injected_amplitude_at_detection: float | None
    saturation_counts: dict
    device: DeviceModel
    calibration: CalibrationReport | None

    @property
    def any_detection(self) -> bool:
        return self.first_detection_index is not None

    def trace_to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write("time_s,sens_true,sens_line,scram_tx,scram_local,diff,detected\n")
            for k in range(self.time.size):
                f.write(
                    f"{self.time[k]:.9e},{float(self.sens_true[k])!r},"
                    f"{float(self.sens_line[k])!r},{float(self.scram_tx[k])!r},"
                    f"{float(self.scram_local[k])!r},{float(self.diff[k])!r},"
                    f"{int(self.detected[k])}\n"
                )

    def summary_dict(self) -> dict:
        return {
            "seed": self.config.master_seed,
            "attack_kind": self.config.attack.kind,
            "noise_kind": self.config.noise.kind,
            "noise_peak_or_sigma": self.config.noise.peak_or_sigma,
            "v_os_volts": self.device.v_os,
            "sec_volts": self.device.sec,
            "a_scale_volts": self.config.scrambler.a_scale,
            "b_offset_volts": self.config.scrambler.b_offset,
            "v_th_detect_volts": self.v_th_detect,
            "debounce": self.config.verifier.debounce,
            "n_samples": int(self.time.size),
            "n_detected_samples": int(self.detected.sum()),
            "first_detection_index": self.first_detection_index,
            "first_detection_time_s": self.first_detection_time,
            "injected_amplitude_at_detection_volts": self.injected_amplitude_at_detection,
            "saturation_counts": self.saturation_counts,
        }

    def summary_to_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.summary_dict(), f, indent=2, sort_keys=True)
            f.write("\n")


def _audit_tx_pipeline(cfg: ScenarioConfig, sec: float, scrambler_in: np.ndarray,
                       scram_tx: np.ndarray) -> None:
    """Recompute 1% of transmitted-signature samples; exact match required."""
    n = scram_tx.size
    m = max(1, n // 100)
    idx = substream_rng(cfg.master_seed, ROLE_CHECK, 0).choice(n, size=m, replace=False)
    recomputed = np.asarray(scramble(cfg.scrambler, sec, scrambler_in[idx]))
    if not np.array_equal(recomputed, scram_tx[idx]):
        raise RuntimeError("pipeline audit failed: trace scram_tx diverges from recomputation")


def run_scenario(cfg: ScenarioConfig) -> RunReport:
    """Run one closed-loop scenario and report the trace and verdict.

    The transmitted signature is scramble(sec, stimulus + noise); the ECU
    sees the attacked sensor line and recomputes scramble(sec, sens_line).
    If the config carries no detection threshold, a calibration pass with
    default settings runs first (on an attack-free copy of the config).
    """
    grid = cfg.grid
    sens_true = make_stimulus(cfg.stimulus, grid)
    device = make_device(
        cfg.device.offset,
        cfg.device.amplifier,
        substream_rng(cfg.master_seed, ROLE_OFFSET, 0),
        drift=cfg.device.drift,
        v_os_override=cfg.device.v_os_override,
    )
    noise = gen_noise(grid, cfg.noise, substream_rng(cfg.master_seed, cfg.noise.stream, 0))
    scrambler_in = add(sens_true, noise)
    scram_tx = np.asarray(scramble(cfg.scrambler, device.sec, scrambler_in.samples))
    _audit_tx_pipeline(cfg, device.sec, scrambler_in.samples, scram_tx)

    sens_line = inject(cfg.attack, sens_true)
    scram_local = np.asarray(scramble(cfg.scrambler, device.sec, sens_line.samples))

    calibration = None
    vcfg = cfg.verifier
    if vcfg.v_th_detect is None:
        # thresholds are per-sensor: characterize this run's device, drawing
        # calibration noise from trial substreams disjoint from the run noise
        calibration, _ = run_calibration(
            replace(cfg, attack=AttackSpec()), offsets=[device.v_os]
        )
        vcfg = replace(vcfg, v_th_detect=calibration.v_th_detect)

    verdict, diff = verify_stream(
        vcfg, cfg.scrambler, device.sec, sens_line, Waveform(grid, scram_tx)
    )

    sat_tx = SaturationCounter()
    sat_tx.add(cfg.scrambler.trans_sens, scrambler_in.samples)
    sat_local = SaturationCounter()
    sat_local.add(cfg.scrambler.trans_sens, sens_line.samples)
    sat_sec = SaturationCounter()
    sat_sec.add(cfg.scrambler.trans_sec, device.sec)

    first_idx = first_time = amp_at_detect = None
    if verdict.first_detection is not None:
        first_idx, first_time = verdict.first_detection
        if cfg.attack.kind != "scale":
            amp_at_detect = float(injected_amplitude(cfg.attack, first_time))

    return RunReport(
        config=with_threshold(cfg, vcfg.v_th_detect),
        time=grid.times(),
        sens_true=sens_true.samples,
        sens_line=sens_line.samples,
        scram_tx=scram_tx,
        scram_local=scram_local,
        diff=diff,
        detected=verdict.tampered,
        v_th_detect=vcfg.v_th_detect,
        first_detection_index=first_idx,
        first_detection_time=first_time,
        injected_amplitude_at_detection=amp_at_detect,
        saturation_counts={
            "tx_sens": sat_tx.count,
            "local_sens": sat_local.count,
            "sec": sat_sec.count,
        },
        device=device,
        calibration=calibration,
    )


# --------------------------------------------------------------------------
# Calibration and Monte Carlo experiments
# --------------------------------------------------------------------------

def calibration_offsets(dist: OffsetDistribution) -> tuple[float, ...]:
    """Characterization sweep over the offset extremes and the midpoint."""
    if dist.v_os_max == 0.0:
        return (0.0,)
    return (-dist.v_os_max, 0.0, dist.v_os_max)


def run_calibration(
    cfg: ScenarioConfig,
    offsets=None,
    n_trials: int = CAL_TRIALS,
    trial_duration: float = CAL_TRIAL_DURATION,
    safety_factor: float = CAL_SAFETY_FACTOR,
) -> tuple[CalibrationReport, ScenarioConfig]:
    """Characterize the detection threshold for the configured scenario.

    Candidate secrets come from the given offsets. The default sweep covers
    the distribution extremes and zero, which is the worst-case study; pass
    a single device offset to characterize one particular sensor, the way
    run_scenario and run_montecarlo do. Returns the report plus a copy of
    the config with v_th_detect filled in. Rejects configs that carry an
    active attack.
    """
    if cfg.attack.kind != "none":
        raise ValueError(f"calibration requires attack 'none', config has {cfg.attack.kind!r}")
    if offsets is None:
        offsets = calibration_offsets(cfg.device.offset)
    secrets = [secret_from_offset(o, cfg.device.amplifier) for o in offsets]
    grid = TimeGrid(cfg.grid.sample_rate, trial_duration)
    stimulus = make_stimulus(cfg.stimulus, grid)
    report = calibrate_threshold(
        cfg.scrambler,
        cfg.verifier.adc,
        secrets,
        stimulus,
        cfg.noise,
        n_trials=n_trials,
        safety_factor=safety_factor,
        master_seed=cfg.master_seed,
    )
    return report, with_threshold(cfg, report.v_th_detect)


@dataclass(frozen=True)
class DeviceResult:
    """One Monte Carlo device: its secret, threshold, and attack outcome."""

    device_id: int
    v_os: float
    sec: float
    v_th_detect: float
    detection_index: int | None
    detection_time: float | None
    detection_amplitude: float | None


@dataclass(frozen=True)
class MonteCarloReport:
    """Per-device rows plus population statistics (recomputable from the rows)."""

    devices: tuple[DeviceResult, ...]
    stats: dict

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(
                "device_id,v_os_volts,sec_volts,v_th_detect_volts,"
                "detection_time_s,detection_amplitude_volts\n"
            )
            for d in self.devices:
                t = "" if d.detection_time is None else repr(d.detection_time)
                a = "" if d.detection_amplitude is None else repr(d.detection_amplitude)
                f.write(f"{d.device_id},{d.v_os!r},{d.sec!r},{d.v_th_detect!r},{t},{a}\n")

    def to_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.stats, f, indent=2, sort_keys=True)
            f.write("\n")


def _population_stats(devices) -> dict:
    def spread(values):
        vals = [v for v in values if v is not None]
        if not vals:
            return {"min": None, "max": None, "mean": None}
        return {"min": min(vals), "max": max(vals), "mean": float(np.mean(vals))}

    secs = np.array([d.sec for d in devices])
    gaps = np.abs(secs[:, None] - secs[None, :])[np.triu_indices(secs.size, k=1)]
    return {
        "n_devices": len(devices),
        "v_os": spread(d.v_os for d in devices),
        "sec": spread(d.sec for d in devices),
        "v_th_detect": spread(d.v_th_detect for d in devices),
        "detection_amplitude": spread(d.detection_amplitude for d in devices),
        "n_detected": sum(d.detection_index is not None for d in devices),
        "min_pairwise_sec_gap": float(gaps.min()),
        "sec_collisions": int(np.count_nonzero(gaps == 0.0)),
    }


def run_montecarlo(
    cfg: ScenarioConfig,
    n_devices: int,
    n_trials: int = CAL_TRIALS,
    trial_duration: float = CAL_TRIAL_DURATION,
    safety_factor: float = CAL_SAFETY_FACTOR,
) -> MonteCarloReport:
    """Population study: per device, sample an offset, calibrate, attack.

    Device i draws its offset from substream (master, "offset", i); the noise
    environment (calibration trials and run noise) is shared by all devices,
    as if the population were characterized on one bench. Each device is
    calibrated on its own secret, then subjected to the reference ramp attack
    (the config's attack if it is a ramp, else 1 V/s from t=0), recording the
    injected amplitude at first detection. Two devices forced to the same
    offset therefore produce identical rows.
    """
    if n_devices < 2:
        raise ValueError(f"n_devices must be >= 2, got {n_devices}")
    ref_attack = cfg.attack if cfg.attack.kind == "ramp" else REFERENCE_RAMP

    devices = []
    for i in range(n_devices):
        device = make_device(
            cfg.device.offset,
            cfg.device.amplifier,
            substream_rng(cfg.master_seed, ROLE_OFFSET, i),
            drift=cfg.device.drift,
            v_os_override=cfg.device.v_os_override,
        )
        dev_cfg = replace(
            cfg,
            attack=AttackSpec(),
            device=replace(cfg.device, v_os_override=device.v_os),
        )
        report, dev_cfg = run_calibration(
            dev_cfg, offsets=[device.v_os], n_trials=n_trials,
            trial_duration=trial_duration, safety_factor=safety_factor,
        )
        run = run_scenario(replace(dev_cfg, attack=ref_attack))
        devices.append(DeviceResult(
            device_id=i,
            v_os=device.v_os,
            sec=device.sec,
            v_th_detect=report.v_th_detect,
            detection_index=run.first_detection_index,
            detection_time=run.first_detection_time,
            detection_amplitude=run.injected_amplitude_at_detection,
        ))

    devices = tuple(devices)
    return MonteCarloReport(devices=devices, stats=_population_stats(devices))
