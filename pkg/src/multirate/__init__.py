"""Multirate synchronous machine ensembles and their bounded analysis.

Build hierarchical ensembles of typed machines running at different rates,
step them in lockstep under a (possibly nondeterministic) environment, and
analyse the bounded behavior space: simulation, breadth-first reachability
search, and time-bounded LTL model checking.
"""

from .analysis import (
    CheckResult,
    Counterexample,
    PropRegistry,
    ResourceError,
    SearchHit,
    StateGraph,
    Trace,
    check_ltl,
    eval_prop,
    explore,
    replay,
    search,
    simulate,
)
from .formulas import Formula, ParseError, parse_formula
from .model import (
    BOT,
    EMPTY_CHOICE,
    IN,
    OUT,
    Bot,
    Component,
    EnsembleBody,
    EnvChoice,
    EnvIn,
    EnvOut,
    ExecutionError,
    Leaf,
    ModelError,
    Port,
    Status,
    SystemState,
    Value,
    Wire,
    identity,
    pad_with_bots,
    take_last,
)
from .semantics import (
    ValidationIssue,
    apply_adaptors,
    clear_outputs,
    delta,
    env_choices,
    env_output,
    execute,
    initial_state,
    k_delta,
    sync_step,
    transfer_inputs,
    transfer_results,
    validate,
)

__all__ = [
    "BOT",
    "Bot",
    "CheckResult",
    "Component",
    "Counterexample",
    "EMPTY_CHOICE",
    "EnsembleBody",
    "EnvChoice",
    "EnvIn",
    "EnvOut",
    "ExecutionError",
    "Formula",
    "IN",
    "Leaf",
    "ModelError",
    "OUT",
    "ParseError",
    "Port",
    "PropRegistry",
    "ResourceError",
    "SearchHit",
    "StateGraph",
    "Status",
    "SystemState",
    "Trace",
    "ValidationIssue",
    "Value",
    "Wire",
    "apply_adaptors",
    "check_ltl",
    "clear_outputs",
    "delta",
    "env_choices",
    "env_output",
    "eval_prop",
    "execute",
    "explore",
    "identity",
    "initial_state",
    "k_delta",
    "pad_with_bots",
    "parse_formula",
    "replay",
    "search",
    "simulate",
    "sync_step",
    "take_last",
    "transfer_inputs",
    "transfer_results",
    "validate",
]
