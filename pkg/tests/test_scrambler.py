import math

import numpy as np
import pytest

from scramsim.scrambler import (
    LevelTranslator,
    SaturationCounter,
    ScramblerParams,
    dc_sweep,
    saturation_count,
    scramble,
    thermal_voltage,
    translate,
)

P = ScramblerParams()

# frozen against an independent 50-digit evaluation of
# (out_max - out_min) / (exp(0.090 / 0.025852) - 1)
A_SCALE_EXPECTED = 0.12696901943176758
B_OFFSET_EXPECTED = 0.37303098056823242
# a_scale * exp(0.045 / 0.025852) + b_offset, same evaluation
SCRAM_AT_45MV = 1.0969074960199598


def test_thermal_voltage_at_300k():
    assert thermal_voltage(300.0) == pytest.approx(25.852e-3, rel=1e-4)
    with pytest.raises(ValueError):
        thermal_voltage(0.0)


def test_translator_endpoints():
    assert translate(P.trans_sec, -1.0) == 0.0
    assert translate(P.trans_sec, +1.0) == pytest.approx(0.045, rel=1e-15)
    assert translate(P.trans_sens, 2.5) == pytest.approx(0.0225, rel=1e-15)


def test_translator_clamps_and_counts_saturation():
    assert translate(P.trans_sens, 9.0) == translate(P.trans_sens, 4.5)
    assert translate(P.trans_sens, -2.0) == 0.0
    x = np.array([0.4, 0.5, 2.0, 4.5, 4.6])
    assert saturation_count(P.trans_sens, x) == 2
    counter = SaturationCounter()
    counter.add(P.trans_sens, x)
    counter.add(P.trans_sens, 5.0)
    assert counter.count == 3


def test_translator_validation():
    with pytest.raises(ValueError):
        LevelTranslator(1.0, -1.0, 0.045)
    with pytest.raises(ValueError):
        LevelTranslator(-1.0, 1.0, 0.0)


def test_params_window_validation():
    # 0.55 + 2 * 60 mV = 0.67 fits; 0.60 + 120 mV leaves the window
    ScramblerParams(
        trans_sec=LevelTranslator(-1.0, 1.0, 0.060),
        trans_sens=LevelTranslator(0.5, 4.5, 0.060),
    )
    with pytest.raises(ValueError, match="window"):
        ScramblerParams(
            v_be0=0.60,
            trans_sec=LevelTranslator(-1.0, 1.0, 0.060),
            trans_sens=LevelTranslator(0.5, 4.5, 0.060),
        )
    with pytest.raises(ValueError, match="window"):
        ScramblerParams(v_be0=0.49)
    with pytest.raises(ValueError):
        ScramblerParams(v_therm=0.0)
    with pytest.raises(ValueError):
        ScramblerParams(out_min=4.5, out_max=0.5)


def test_affine_constants_match_frozen_oracle():
    assert P.a_scale == pytest.approx(A_SCALE_EXPECTED, rel=1e-13)
    assert P.b_offset == pytest.approx(B_OFFSET_EXPECTED, rel=1e-13)


def test_endpoint_outputs_are_exact():
    assert scramble(P, -1.0, 0.5) == pytest.approx(0.5, abs=1e-9)
    assert scramble(P, +1.0, 4.5) == pytest.approx(4.5, abs=1e-9)


def test_midrange_value_matches_frozen_oracle():
    # both splits of a 45 mV total increment give the same signature
    assert scramble(P, +1.0, 0.5) == pytest.approx(SCRAM_AT_45MV, rel=1e-12)
    assert scramble(P, -1.0, 4.5) == pytest.approx(SCRAM_AT_45MV, rel=1e-12)


def test_strictly_monotone_in_each_input():
    sens = np.linspace(0.5, 4.5, 201)
    for sec in (-1.0, -0.3, 0.0, 0.7, 1.0):
        out = scramble(P, sec, sens)
        assert np.all(np.diff(out) > 0)
    secs = np.linspace(-1.0, 1.0, 201)
    for sens_v in (0.5, 2.2, 4.5):
        out = scramble(P, secs, sens_v)
        assert np.all(np.diff(out) > 0)


def test_exponential_ratio_law_spot_checks():
    rng = np.random.default_rng(42)
    g = P.trans_sens.gain
    worst = 0.0
    for _ in range(2000):
        sec = rng.uniform(-0.99, 0.99)
        x = rng.uniform(0.6, 4.0)
        delta = rng.uniform(-0.09, 0.39)
        ratio = (scramble(P, sec, x + delta) - P.b_offset) / (scramble(P, sec, x) - P.b_offset)
        expected = math.exp(g * delta / P.v_therm)
        worst = max(worst, abs(ratio - expected) / np.spacing(expected))
    assert worst <= 10.0


def test_separability_in_total_increment():
    # any (sec, sens) pair with equal accumulated increment scrambles equally
    rng = np.random.default_rng(3)
    for _ in range(200):
        d_sec = rng.uniform(0.0, 0.045)
        d_sens = rng.uniform(0.0, 0.045)
        sec = -1.0 + d_sec / P.trans_sec.gain
        sens = 0.5 + d_sens / P.trans_sens.gain
        # swap the two contributions between the inputs
        sec_swapped = -1.0 + d_sens / P.trans_sec.gain
        sens_swapped = 0.5 + d_sec / P.trans_sens.gain
        a = scramble(P, sec, sens)
        b = scramble(P, sec_swapped, sens_swapped)
        assert a == pytest.approx(b, rel=1e-12)


def test_output_independent_of_base_bias():
    # the matched pair cancels the bias point: outputs are bit-identical
    shifted = ScramblerParams(v_be0=0.58)
    sens = np.linspace(0.5, 4.5, 101)
    assert np.array_equal(scramble(P, 0.4, sens), scramble(shifted, 0.4, sens))
    assert shifted.a_scale == P.a_scale
    assert shifted.b_offset == P.b_offset


def test_output_confined_to_window_for_wild_inputs():
    rng = np.random.default_rng(6)
    sec = rng.uniform(-1e6, 1e6, 1000)
    sens = rng.uniform(-1e6, 1e6, 1000)
    out = scramble(P, sec, sens)
    assert np.all(out >= P.out_min)
    assert np.all(out <= P.out_max)


def test_dc_sweep_shape_ordering_and_monotonicity():
    secs = [0.0, -1.0, 1.0]
    table = dc_sweep(P, secs, (0.5, 4.5), 101)
    assert table.sec.size == 303
    # rows ordered by (sec, sens)
    order = np.lexsort((table.sens, table.sec))
    assert np.array_equal(order, np.arange(303))
    # each curve strictly increasing and confined to the output window
    for sec in (-1.0, 0.0, 1.0):
        curve = table.scram[table.sec == sec]
        assert np.all(np.diff(curve) > 0)
        assert curve.min() >= 0.5 and curve.max() <= 4.5


def test_dc_sweep_two_points_gives_endpoints_only():
    table = dc_sweep(P, [0.0], (0.5, 4.5), 2)
    assert table.sens.tolist() == [0.5, 4.5]
    assert table.scram[0] == scramble(P, 0.0, 0.5)
    assert table.scram[1] == scramble(P, 0.0, 4.5)


def test_dc_sweep_validation():
    with pytest.raises(ValueError):
        dc_sweep(P, [0.0], (0.5, 4.5), 1)
    with pytest.raises(ValueError):
        dc_sweep(P, [0.0], (4.5, 0.5), 10)


def test_dc_sweep_csv(tmp_path):
    table = dc_sweep(P, [-1.0, 1.0], (0.5, 4.5), 3)
    path = tmp_path / "sweep.csv"
    table.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "sec_volts,sens_volts,scram_volts"
    assert len(lines) == 7
    sec, sens, scram = (float(x) for x in lines[1].split(","))
    assert (sec, sens) == (-1.0, 0.5)
    assert scram == table.scram[0]
