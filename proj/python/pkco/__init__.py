"""Packet-coupled oscillator clock synchronisation simulator."""

from ._core import (
    ClockParams,
    ClockState,
    ConfigError,
    ControllerConfig,
    ConvergenceReport,
    CycleRecord,
    DelayModel,
    NodeAnalysis,
    Representation,
    RngStream,
    SimulationError,
    TheoryPrediction,
    __version__,
    advance,
    analyze_scenario,
    apply_offset_noise,
    control_input,
    correct,
    delta_metric,
    estimate_offset,
    expected_trajectory,
    feedforward_term,
    make_state,
    predict,
    run_scenario,
    sample,
)

__all__ = [
    "ClockParams",
    "ClockState",
    "ConfigError",
    "ControllerConfig",
    "ConvergenceReport",
    "CycleRecord",
    "DelayModel",
    "NodeAnalysis",
    "Representation",
    "RngStream",
    "SimulationError",
    "TheoryPrediction",
    "advance",
    "analyze_scenario",
    "apply_offset_noise",
    "control_input",
    "correct",
    "delta_metric",
    "estimate_offset",
    "expected_trajectory",
    "feedforward_term",
    "make_state",
    "predict",
    "run_scenario",
    "sample",
]
