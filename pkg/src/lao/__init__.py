"""Model checker and analyzer for agent organizations: CTL temporal
operators plus capability/ability/attempt/stit agency operators over
agent-and-role labeled Kripke models, organization quality grading and
structure classification, and an executable axiomatization suite."""

from .formula import Formula, FormulaError, fprint, parse
from .model import (
    InChargeAtom,
    Model,
    ModelError,
    OrgStructure,
    Transition,
    Violation,
    World,
    close_dependencies,
    load_model,
    load_model_file,
    validate_model,
)
from .semantics import EvalError, Evaluator

__all__ = [
    "Formula",
    "FormulaError",
    "fprint",
    "parse",
    "InChargeAtom",
    "Model",
    "ModelError",
    "OrgStructure",
    "Transition",
    "Violation",
    "World",
    "close_dependencies",
    "load_model",
    "load_model_file",
    "validate_model",
    "EvalError",
    "Evaluator",
]

__version__ = "0.1.0"
