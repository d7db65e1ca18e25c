"""Command-line front end for the simulator.

Subcommands: sweep-dc, calibrate, run, attack, montecarlo. Exit codes let
shell pipelines branch on the verdict: 0 means completed with no detection,
2 means completed with a detection, 1 means an error (bad config, bad
arguments, I/O failure).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .attacks import AttackSpec
from .harness import (
    CAL_SAFETY_FACTOR,
    ConfigError,
    ScenarioConfig,
    calibration_offsets,
    default_config,
    export_config,
    load_config,
    run_calibration,
    run_montecarlo,
    run_scenario,
)
from .scrambler import dc_sweep
from .secretgen import secret_from_offset
from .verifier import AdcConfig


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="scenario config JSON (defaults used if omitted)")
    p.add_argument("--seed", type=int, help="override the master seed")
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    p.add_argument("--noise-kind", choices=("none", "uniform", "gaussian"))
    p.add_argument("--noise-peak-mv", type=float, help="noise peak (uniform) or sigma (gaussian), in mV")
    p.add_argument("--adc-bits", type=int, help="ADC resolution in bits (8..16)")
    p.add_argument("--threshold-mv", type=float, help="detection threshold in mV (skips calibration)")
    p.add_argument("--safety-factor", type=float, default=CAL_SAFETY_FACTOR,
                   help="calibration safety factor (>= 1)")


def _build_config(args) -> ScenarioConfig:
    if args.config is not None:
        cfg = load_config(args.config)
    else:
        cfg = default_config(args.seed if args.seed is not None else 0)
    if args.seed is not None:
        cfg = replace(cfg, master_seed=args.seed)
    if args.noise_kind is not None:
        cfg = replace(cfg, noise=replace(cfg.noise, kind=args.noise_kind))
    if args.noise_peak_mv is not None:
        cfg = replace(cfg, noise=replace(cfg.noise, peak_or_sigma=args.noise_peak_mv * 1e-3))
    if args.adc_bits is not None:
        adc = AdcConfig(bits=args.adc_bits, v_ref=cfg.verifier.adc.v_ref)
        cfg = replace(cfg, verifier=replace(cfg.verifier, adc=adc))
    if args.threshold_mv is not None:
        cfg = replace(cfg, verifier=replace(cfg.verifier, v_th_detect=args.threshold_mv * 1e-3))
    return cfg


def _outdir(args) -> Path:
    args.out.mkdir(parents=True, exist_ok=True)
    return args.out


def _finish_run(report, out: Path) -> int:
    report.trace_to_csv(out / "trace.csv")
    report.summary_to_json(out / "summary.json")
    if report.calibration is not None:
        report.calibration.to_json(out / "calibration.json")
    if report.any_detection:
        print(
            f"detection at t={report.first_detection_time:.6f} s "
            f"(sample {report.first_detection_index}), "
            f"threshold {report.v_th_detect * 1e3:.3f} mV"
        )
        print(f"wrote {out / 'trace.csv'} and {out / 'summary.json'}")
        return 2
    print(f"no detection; threshold {report.v_th_detect * 1e3:.3f} mV")
    print(f"wrote {out / 'trace.csv'} and {out / 'summary.json'}")
    return 0


def cmd_sweep_dc(args) -> int:
    cfg = _build_config(args)
    out = _outdir(args)
    secrets = [secret_from_offset(o, cfg.device.amplifier)
               for o in calibration_offsets(cfg.device.offset)]
    trans = cfg.scrambler.trans_sens
    table = dc_sweep(cfg.scrambler, secrets, (trans.in_min, trans.in_max), args.points)
    table.to_csv(out / "dc_sweep.csv")
    print(f"wrote {out / 'dc_sweep.csv'} ({len(secrets)} curves x {args.points} points)")
    return 0


def cmd_calibrate(args) -> int:
    cfg = _build_config(args)
    out = _outdir(args)
    report, calibrated_cfg = run_calibration(cfg, safety_factor=args.safety_factor)
    report.to_json(out / "calibration.json")
    export_config(calibrated_cfg, out / "config_calibrated.json")
    print(
        f"v_th_detect = {report.v_th_detect * 1e3:.3f} mV "
        f"(argmax secret {report.argmax_secret:+.4f} V, noise {report.noise_kind})"
    )
    print(f"wrote {out / 'calibration.json'} and {out / 'config_calibrated.json'}")
    return 0


def cmd_run(args) -> int:
    cfg = _build_config(args)
    return _finish_run(run_scenario(cfg), _outdir(args))


def cmd_attack(args) -> int:
    cfg = _build_config(args)
    ramp = AttackSpec(
        kind="ramp",
        start_time=args.start_ms * 1e-3,
        param=args.slope_v_per_s,
        staircase=args.staircase,
    )
    cfg = replace(cfg, attack=ramp)
    return _finish_run(run_scenario(cfg), _outdir(args))


def cmd_montecarlo(args) -> int:
    cfg = _build_config(args)
    out = _outdir(args)
    report = run_montecarlo(cfg, args.devices, safety_factor=args.safety_factor)
    report.to_csv(out / "montecarlo.csv")
    report.to_json(out / "montecarlo_summary.json")
    stats = report.stats
    print(
        f"{stats['n_devices']} devices, {stats['n_detected']} detected; "
        f"min pairwise secret gap {stats['min_pairwise_sec_gap']:.6f} V"
    )
    print(f"wrote {out / 'montecarlo.csv'} and {out / 'montecarlo_summary.json'}")
    return 2 if stats["n_detected"] > 0 else 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scramsim",
        description="Secure analog sensor link simulator: PUF secret, exponential "
                    "signature, ECU verification, MitM attack experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep-dc", help="DC sweep of the signature stage, one curve per secret")
    _add_common_flags(p)
    p.add_argument("--points", type=int, default=401, help="points per curve (>= 2)")
    p.set_defaults(func=cmd_sweep_dc)

    p = sub.add_parser("calibrate", help="characterize the detection threshold")
    _add_common_flags(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("run", help="run the configured scenario")
    _add_common_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("attack", help="run the scenario under a ramp attack")
    _add_common_flags(p)
    p.add_argument("--slope-v-per-s", type=float, default=1.0, help="ramp slope in V/s")
    p.add_argument("--start-ms", type=float, default=0.0, help="attack start time in ms")
    p.add_argument("--staircase", action="store_true",
                   help="advance the ramp in whole-period stairs")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("montecarlo", help="device-population study")
    _add_common_flags(p)
    p.add_argument("--devices", type=int, default=20, help="population size (>= 2)")
    p.set_defaults(func=cmd_montecarlo)

    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
