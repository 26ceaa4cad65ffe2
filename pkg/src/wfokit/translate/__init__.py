"""Constructions between formulas, two-way automata and sweeping automata."""

from .decomposition import Decomposition, DecompositionError, sweep_decomposition_check, sweep_values
from .fo import Dfa, dfa_to_nwa, fo_to_automaton, fo_to_dfa, minimize
from .sweep import (
    Component,
    ComponentShapeError,
    ComponentVector,
    SweepError,
    SweepResult,
    anchor,
    build_component,
    component_of,
    flatten,
    is_anchored,
    max_depth,
    sw_transform,
    sweepify_component,
)
from .wfo import TranslationError, wfo_to_sweeping

__all__ = [
    "Component",
    "ComponentShapeError",
    "ComponentVector",
    "Decomposition",
    "DecompositionError",
    "Dfa",
    "SweepError",
    "SweepResult",
    "TranslationError",
    "anchor",
    "build_component",
    "component_of",
    "dfa_to_nwa",
    "flatten",
    "fo_to_automaton",
    "fo_to_dfa",
    "is_anchored",
    "max_depth",
    "minimize",
    "sw_transform",
    "sweep_decomposition_check",
    "sweep_values",
    "sweepify_component",
    "wfo_to_sweeping",
]
