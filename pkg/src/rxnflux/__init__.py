"""Stochastic simulation of reaction networks with causal flux analysis.

The package simulates mass-action reaction networks exactly (Gillespie
SSA over a CTMC) while tagging every species instance with its creating
event, extracts the causal dependency structure of a run, and condenses
it into weighted reaction-to-reaction flux graphs for pathway analysis.
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .causality import (
    CausalConfiguration,
    Event,
    configuration_to_dot,
    configuration_to_json,
    extract_configuration,
    restrict_interval,
    validate_configuration,
)
from .errors import (
    AmbiguousReactionError,
    CausalityViolationError,
    FluxConsistencyError,
    ParseError,
    RxnFluxError,
    TraceError,
)
from .flux import (
    FluxConfiguration,
    NetFluxGraph,
    flux_configuration,
    flux_from_json,
    flux_to_json,
    mass_balance,
    net_flux,
    reaction_fire_counts,
    threshold_filter,
)
from .model import Model, Reaction, parse_model, serialize_model
from .report import emit_dot, render_report
from .simulate import (
    SimulationState,
    SpeciesInstance,
    SplitMix64,
    Trajectory,
    TransitionInstance,
    counts_csv,
    initial_state,
    propensity,
    simulate,
    species_counts,
    step,
)
from .traceio import parse_trace, serialize_trace

__all__ = [
    "AmbiguousReactionError",
    "BACKEND",
    "CausalConfiguration",
    "CausalityViolationError",
    "Event",
    "FluxConfiguration",
    "FluxConsistencyError",
    "Model",
    "NetFluxGraph",
    "ParseError",
    "Reaction",
    "RxnFluxError",
    "SimulationState",
    "SpeciesInstance",
    "SplitMix64",
    "TraceError",
    "Trajectory",
    "TransitionInstance",
    "configuration_to_dot",
    "configuration_to_json",
    "counts_csv",
    "emit_dot",
    "extract_configuration",
    "flux_configuration",
    "flux_from_json",
    "flux_to_json",
    "initial_state",
    "mass_balance",
    "net_flux",
    "parse_model",
    "parse_trace",
    "propensity",
    "reaction_fire_counts",
    "render_report",
    "restrict_interval",
    "serialize_model",
    "serialize_trace",
    "simulate",
    "species_counts",
    "step",
    "threshold_filter",
    "validate_configuration",
    "__version__",
]
