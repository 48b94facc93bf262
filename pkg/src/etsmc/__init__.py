"""Event-triggered sliding-mode control laboratory for a series-elastic
two-joint limb.

The top level re-exports the pieces most runs need: parameter sets,
the simulation engine, the trigger rule, and trace serialization.
"""

from .actuator import SeaParams, SeaState
from .config import FullConfig, default_config, dump_config, load_config
from .control import GainSet, lyapunov_values, sliding_surface, smc_law
from .engine import (
    EVENT_TRIGGERED,
    HOLD_FULL,
    HOLD_VX,
    TIME_TRIGGERED,
    ComparisonOutcome,
    DisturbanceSpec,
    PlantState,
    RunResult,
    SimConfig,
    TraceRecord,
    compare,
    run,
)
from .errors import (
    ConfigError,
    DegenerateGeometryError,
    DivergenceError,
    EtsmcError,
    InvalidStateError,
    NearSingularActuationError,
    SingularInertiaError,
    TraceFormatError,
)
from .params import LimbParams, default_limb_params
from .reaching import ReachingResult, ReachingSetup, reaching_run, reaching_sweep
from .report import compare_metrics, render_kv, render_text, summarize
from .trajectory import GaitSpec, TabulatedTrajectory
from .traceio import read_trace, write_trace
from .trigger import TriggerParams, TriggerStats, threshold, zeno_bound

__version__ = "0.1.0"

__all__ = [
    "ComparisonOutcome",
    "ConfigError",
    "DegenerateGeometryError",
    "DisturbanceSpec",
    "DivergenceError",
    "EVENT_TRIGGERED",
    "EtsmcError",
    "FullConfig",
    "GainSet",
    "GaitSpec",
    "HOLD_FULL",
    "HOLD_VX",
    "InvalidStateError",
    "LimbParams",
    "NearSingularActuationError",
    "PlantState",
    "ReachingResult",
    "ReachingSetup",
    "RunResult",
    "SeaParams",
    "SeaState",
    "SimConfig",
    "SingularInertiaError",
    "TIME_TRIGGERED",
    "TabulatedTrajectory",
    "TraceFormatError",
    "TraceRecord",
    "TriggerParams",
    "TriggerStats",
    "compare",
    "compare_metrics",
    "default_config",
    "default_limb_params",
    "dump_config",
    "load_config",
    "lyapunov_values",
    "read_trace",
    "reaching_run",
    "reaching_sweep",
    "render_kv",
    "render_text",
    "run",
    "sliding_surface",
    "smc_law",
    "summarize",
    "threshold",
    "write_trace",
    "zeno_bound",
]
