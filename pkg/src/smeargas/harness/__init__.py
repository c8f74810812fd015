"""Experiment orchestration: configuration, sweeps, ratio runs and CSV I/O."""

from smeargas.harness.config import (
    DEFAULTS,
    ScenarioConfig,
    default_config,
    load_config,
    make_shape,
    parse_config,
)
from smeargas.harness.csvio import emit_csv, load_csv
from smeargas.harness.runs import (
    RatioReport,
    Stats,
    SweepAggregate,
    SweepRow,
    SweepTable,
    run_ratio,
    run_sweep,
    sample_stats,
)

__all__ = [
    "DEFAULTS",
    "ScenarioConfig",
    "default_config",
    "load_config",
    "make_shape",
    "parse_config",
    "emit_csv",
    "load_csv",
    "RatioReport",
    "Stats",
    "SweepAggregate",
    "SweepRow",
    "SweepTable",
    "run_ratio",
    "run_sweep",
    "sample_stats",
]
