import numpy as np
import pytest

from scramsim.attacks import AttackSpec, inject, injected_amplitude
from scramsim.waveforms import TimeGrid, sine_sensor, truncate

GRID = TimeGrid(100e3, 0.1)
SENS = sine_sensor(GRID, 1000.0, 0.5, 4.5)


def test_none_is_identity():
    out = inject(AttackSpec(kind="none"), SENS)
    assert np.array_equal(out.samples, SENS.samples)


def test_ramp_amplitude_matches_slope_times_elapsed():
    ramp = AttackSpec(kind="ramp", start_time=0.0, param=1.0)
    assert injected_amplitude(ramp, 0.0) == 0.0
    # 1 V/s reaches 47.23 mV at 47.23 ms
    assert injected_amplitude(ramp, 0.04723) == pytest.approx(0.04723, rel=1e-15)
    out = inject(ramp, SENS)
    k = 4723
    assert out.samples[k] - SENS.samples[k] == pytest.approx(0.04723, rel=1e-12)


def test_ramp_respects_start_time():
    ramp = AttackSpec(kind="ramp", start_time=0.02, param=2.0)
    assert injected_amplitude(ramp, 0.01) == 0.0
    assert injected_amplitude(ramp, 0.05) == pytest.approx(0.06, rel=1e-12)


def test_staircase_ramp_advances_in_whole_periods():
    stair = AttackSpec(kind="ramp", start_time=0.0, param=1.0,
                       staircase=True, staircase_period=1e-3)
    # inside the 48th period the injected level holds at 47 mV
    assert injected_amplitude(stair, 0.04723) == pytest.approx(0.047, rel=1e-12)
    assert injected_amplitude(stair, 0.0009) == 0.0
    assert injected_amplitude(stair, 0.001) == pytest.approx(0.001, rel=1e-12)


def test_step_before_start_is_unchanged():
    step = AttackSpec(kind="step", start_time=5e-3, param=0.1)
    out = inject(step, SENS)
    k_before = 499   # 4.99 ms
    k_after = 500    # 5.00 ms
    assert out.samples[k_before] == SENS.samples[k_before]
    assert out.samples[k_after] == SENS.samples[k_after] + 0.1
    assert injected_amplitude(step, 0.1) == 0.1
    assert injected_amplitude(step, 0.001) == 0.0


def test_scale_multiplies_after_start():
    scale = AttackSpec(kind="scale", start_time=0.01, param=1.05)
    out = inject(scale, SENS)
    assert np.array_equal(out.samples[:1000], SENS.samples[:1000])
    assert np.array_equal(out.samples[1000:], SENS.samples[1000:] * 1.05)
    with pytest.raises(ValueError, match="not applicable"):
        injected_amplitude(scale, 0.02)


def test_ramp_excess_is_nonnegative_nondecreasing_piecewise_linear():
    ramp = AttackSpec(kind="ramp", start_time=0.03, param=0.7)
    excess = inject(ramp, SENS).samples - SENS.samples
    assert np.all(excess >= 0.0)
    assert np.all(np.diff(excess) >= 0.0)
    # linear after the onset: constant slope between consecutive samples
    after = excess[3001:]
    steps = np.diff(after)
    assert np.allclose(steps, 0.7 / 100e3, rtol=1e-9, atol=0)


def test_inject_commutes_with_truncation():
    ramp = AttackSpec(kind="ramp", start_time=0.01, param=1.5)
    a = truncate(inject(ramp, SENS), 0.05)
    b = inject(ramp, truncate(SENS, 0.05))
    assert np.array_equal(a.samples, b.samples)


def test_spec_validation():
    with pytest.raises(ValueError):
        AttackSpec(kind="replay")
    with pytest.raises(ValueError):
        AttackSpec(kind="ramp", start_time=-1.0)
    with pytest.raises(ValueError):
        AttackSpec(kind="ramp", param=-2.0)
    with pytest.raises(ValueError):
        AttackSpec(kind="ramp", staircase=True, staircase_period=0.0)
    with pytest.raises(ValueError):
        injected_amplitude(AttackSpec(kind="ramp", param=1.0), -0.5)
