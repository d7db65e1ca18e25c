#!/usr/bin/env python3
"""Stimuli and line noise: the raw material of every scenario.

Builds the standard automotive-style sensor stimulus (1 kHz sinusoid
swinging 0.5-4.5 V), a DC operating point, and the default line noise
(uniform, +/-67.5 mV, i.e. half of the 3% error span of a 4.5 V sensor),
then shows the determinism contract: the same seed always reproduces the
same noise, and a doubled amplitude scales the same draw instead of
producing a new one.

Writes the stimulus and a noisy copy as CSV next to this script (out/).
"""

from pathlib import Path

import numpy as np

from scramsim import NoiseSpec, TimeGrid, add, dc_sensor, gen_noise, sine_sensor, to_csv

OUT = Path(__file__).parent / "out"


def main():
    OUT.mkdir(exist_ok=True)
    grid = TimeGrid(sample_rate=100e3, duration=0.005)

    sine = sine_sensor(grid, freq=1000.0, v_min=0.5, v_max=4.5)
    dc = dc_sensor(grid, level=2.5)
    print(f"grid: {grid.n_samples} samples at {grid.sample_rate:.0f} Hz")
    print(f"sine: first sample {sine.samples[0]:.3f} V (midpoint), "
          f"peak {sine.samples.max():.3f} V, trough {sine.samples.min():.3f} V")
    print(f"dc  : constant {dc.samples[0]:.3f} V")

    spec = NoiseSpec(kind="uniform", peak_or_sigma=0.0675)
    n1 = gen_noise(grid, spec, np.random.default_rng(42))
    n2 = gen_noise(grid, spec, np.random.default_rng(42))
    print(f"noise: bounded to +/-{spec.peak_or_sigma * 1e3:.1f} mV, "
          f"observed extremes [{n1.samples.min() * 1e3:+.1f}, {n1.samples.max() * 1e3:+.1f}] mV")
    print(f"noise determinism: same seed reproduces the draw -> "
          f"{np.array_equal(n1.samples, n2.samples)}")

    double = gen_noise(grid, NoiseSpec(kind="uniform", peak_or_sigma=0.135),
                       np.random.default_rng(42))
    print(f"noise scaling: doubling the peak scales the same draw -> "
          f"{np.array_equal(double.samples, 2.0 * n1.samples)}")

    to_csv(sine, OUT / "stimulus.csv")
    to_csv(add(sine, n1), OUT / "stimulus_noisy.csv")
    print(f"wrote {OUT / 'stimulus.csv'} and {OUT / 'stimulus_noisy.csv'}")


if __name__ == "__main__":
    main()
