"""Simulator and numerical toolkit for a PCB-mounted IR sensor-pixel array.

Thin re-export of the compiled core; see the project README for the file
formats and the command-line interface.
"""

from ._core import (
    ArgmaxResult,
    CalSample,
    CalibrationFile,
    CardSpec,
    CheckResult,
    ChipModel,
    ConfigError,
    HeatSource,
    IrcardError,
    Localizer,
    NoDetectionError,
    Patch,
    PixelFit,
    ReplayReport,
    Response,
    RiseMap,
    RunConfig,
    SeriesTable,
    SimulationOutput,
    SourceEstimate,
    crc8,
    decode_response,
    default_hotspot_config,
    encode_request,
    encode_response,
    exchange_power,
    fit_pixel,
    forward_rise_map,
    frequency_of,
    load_calibration,
    load_run_config,
    locate_argmax,
    locate_refined,
    parse_run_config,
    power_source,
    prescribed_source,
    replay_a,
    replay_b,
    replay_c,
    run_simulation,
    save_calibration,
    view_factor,
    write_simulation_outputs,
)

__all__ = [
    "ArgmaxResult",
    "CalSample",
    "CalibrationFile",
    "CardSpec",
    "CheckResult",
    "ChipModel",
    "ConfigError",
    "HeatSource",
    "IrcardError",
    "Localizer",
    "NoDetectionError",
    "Patch",
    "PixelFit",
    "ReplayReport",
    "Response",
    "RiseMap",
    "RunConfig",
    "SeriesTable",
    "SimulationOutput",
    "SourceEstimate",
    "crc8",
    "decode_response",
    "default_hotspot_config",
    "encode_request",
    "encode_response",
    "exchange_power",
    "fit_pixel",
    "forward_rise_map",
    "frequency_of",
    "load_calibration",
    "load_run_config",
    "locate_argmax",
    "locate_refined",
    "parse_run_config",
    "power_source",
    "prescribed_source",
    "replay_a",
    "replay_b",
    "replay_c",
    "run_simulation",
    "save_calibration",
    "view_factor",
    "write_simulation_outputs",
]
