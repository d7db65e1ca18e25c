"""scramsim: behavioral simulator of a secure analog sensor link.

The simulated architecture pairs every analog sensor with a per-device
hardware secret (the input offset voltage of a cheap op-amp, a weak PUF) and
an exponential scrambling stage that turns sensor plus secret into an analog
signature confined to the 0.5-4.5 V window. The receiving ECU shares the
secret, recomputes the signature, and compares the two digitized streams; a
difference beyond a calibrated threshold flags a man-in-the-middle
modification of the sensor line.

The package is organized around small immutable value types and pure
functions: waveforms (stimuli, noise), secretgen (offset PUF and secret
amplifier), scrambler (the exponential signature stage), verifier (ADC,
comparison, threshold calibration), attacks (line injectors), and harness
(scenario configs, runs, Monte Carlo populations, CSV/JSON reports).
"""

from .attacks import AttackSpec, inject, injected_amplitude
from .harness import (
    ConfigError,
    DeviceResult,
    DeviceSpec,
    MonteCarloReport,
    RunReport,
    ScenarioConfig,
    StimulusSpec,
    calibration_offsets,
    config_from_dict,
    config_to_dict,
    default_config,
    export_config,
    load_config,
    make_stimulus,
    run_calibration,
    run_montecarlo,
    run_scenario,
    with_threshold,
)
from .scrambler import (
    DcSweep,
    LevelTranslator,
    SaturationCounter,
    ScramblerParams,
    dc_sweep,
    saturation_count,
    scramble,
    thermal_voltage,
    translate,
)
from .secretgen import (
    DeviceModel,
    DriftSpec,
    OffsetDistribution,
    SecretAmplifier,
    apply_drift,
    make_device,
    population_to_csv,
    sample_offset,
    secret_from_offset,
)
from .seeds import PRNG_ALGORITHM, substream_rng, substream_seed
from .verifier import (
    AdcConfig,
    CalibrationReport,
    Verdict,
    VerifierConfig,
    calibrate_threshold,
    diff_trace_to_csv,
    quantize,
    verify_stream,
)
from .waveforms import (
    NoiseSpec,
    TimeGrid,
    Waveform,
    add,
    dc_sensor,
    gen_noise,
    sine_sensor,
    to_csv,
    truncate,
)

__version__ = "0.1.0"
