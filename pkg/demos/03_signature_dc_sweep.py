#!/usr/bin/env python3
"""DC behavior of the exponential signature stage.

Sweeps the sensor input over its full 0.5-4.5 V window for the three
characterization secrets (from offsets -7, 0, +7 mV) and prints the curve
endpoints: the construction pins (sec=-1 V, sens=0.5 V) to exactly 0.5 V
and (sec=+1 V, sens=4.5 V) to exactly 4.5 V, with every curve strictly
increasing in between. Also demonstrates the property that makes the stage
a signature rather than a mixer: equal increments multiply the
offset-stripped output by equal factors (pure exponential behavior), so an
attacker would need a matched analog logarithm to unwind it.

Writes the sweep as sec_volts,sens_volts,scram_volts CSV, ready to plot.
"""

import math
from pathlib import Path

import numpy as np

from scramsim import ScramblerParams, SecretAmplifier, dc_sweep, scramble, secret_from_offset

OUT = Path(__file__).parent / "out"


def main():
    OUT.mkdir(exist_ok=True)
    p = ScramblerParams()
    amp = SecretAmplifier()
    print(f"affine output stage: a_scale = {p.a_scale:.6f} V, b_offset = {p.b_offset:.6f} V")

    secrets = [secret_from_offset(o, amp) for o in (-7e-3, 0.0, 7e-3)]
    table = dc_sweep(p, secrets, (0.5, 4.5), n_points=401)
    for sec in sorted(secrets):
        curve = table.scram[table.sec == sec]
        monotone = bool(np.all(np.diff(curve) > 0))
        print(f"secret {sec:+.1f} V: output spans [{curve[0]:.6f}, {curve[-1]:.6f}] V, "
              f"strictly increasing: {monotone}")

    sec, x, delta = 0.25, 2.0, 0.5
    ratio = (scramble(p, sec, x + delta) - p.b_offset) / (scramble(p, sec, x) - p.b_offset)
    expected = math.exp(p.trans_sens.gain * delta / p.v_therm)
    print(f"exponential ratio law at sens={x} V, step {delta} V: "
          f"ratio {ratio:.12f} vs exp(g*delta/v_therm) {expected:.12f}")

    table.to_csv(OUT / "dc_sweep.csv")
    print(f"wrote {OUT / 'dc_sweep.csv'} (plot scram_volts vs sens_volts, grouped by sec_volts)")


if __name__ == "__main__":
    main()
