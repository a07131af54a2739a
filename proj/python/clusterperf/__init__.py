"""Performability engine for head-node / computing-node clusters."""

from ._clusterperf import (
    FailureSemantics,
    Metrics,
    OracleCapExceeded,
    ParameterError,
    SimConfig,
    SolverConfig,
    SolverError,
    SystemParams,
    compare,
    exact,
    initial_field,
    metrics,
    simulate,
    solve,
    transitions,
)

__all__ = [
    "FailureSemantics",
    "Metrics",
    "OracleCapExceeded",
    "ParameterError",
    "SimConfig",
    "SolverConfig",
    "SolverError",
    "SystemParams",
    "compare",
    "exact",
    "initial_field",
    "metrics",
    "simulate",
    "solve",
    "transitions",
]
