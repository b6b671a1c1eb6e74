"""Bits versus qubits for measuring the line integral of a classical field."""

__version__ = "0.1.0"

from .rng import RngStream
from .field import FieldSpec, MagnitudeScale, integrate, load_field, parse_field
from .classical import (
    ClassicalConfig,
    CounterConfig,
    counter_baseline,
    estimate_integral,
    flip_probability,
    optimize_lambda,
    simulate_bits,
    uncertainty,
)
from .quantum import (
    DigitReadout,
    PlanarSpin,
    QuantumConfig,
    choose_alpha,
    correction_angle,
    error_probability,
    gh_parity,
    measure_x,
    method_I_estimate,
    precess,
    readout_probability,
    run_combined,
    run_method_II,
    tail_probability,
)
from .analysis import (
    ErrorStats,
    ExperimentSpec,
    TrialRecord,
    enumerate_distribution,
    run_experiment,
    scaling_study,
    table1_experiment,
)

__all__ = [
    "ClassicalConfig",
    "CounterConfig",
    "DigitReadout",
    "ErrorStats",
    "ExperimentSpec",
    "FieldSpec",
    "MagnitudeScale",
    "PlanarSpin",
    "QuantumConfig",
    "RngStream",
    "TrialRecord",
    "choose_alpha",
    "correction_angle",
    "counter_baseline",
    "enumerate_distribution",
    "error_probability",
    "estimate_integral",
    "flip_probability",
    "gh_parity",
    "integrate",
    "load_field",
    "measure_x",
    "method_I_estimate",
    "optimize_lambda",
    "parse_field",
    "precess",
    "readout_probability",
    "run_combined",
    "run_experiment",
    "run_method_II",
    "scaling_study",
    "simulate_bits",
    "table1_experiment",
    "tail_probability",
    "uncertainty",
]
