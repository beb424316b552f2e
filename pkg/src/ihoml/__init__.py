"""Bounded model checking for intensional higher-order modal logic."""

from .carriers import Dims, Value, carrier_size, enumerate_carrier
from .evaluator import evaluate, truth_table, valid
from .model import FrameClass, Frame, Model, make_model, model_from_json, model_to_json
from .oracle import oracle_eval
from .search import (Bounds, Verdict, check_entailment, check_goals, check_schema, enumerate_models,
                     find_model)
from .syntax import parse_term, parse_type, print_term, print_type
from .typecheck import typecheck
from .variants import build_variant

__all__ = ["Dims", "Value", "carrier_size", "enumerate_carrier", "evaluate", "truth_table", "valid",
           "FrameClass", "Frame", "Model", "make_model", "model_from_json", "model_to_json", "oracle_eval",
           "Bounds", "Verdict", "check_entailment", "check_goals", "check_schema", "enumerate_models",
           "find_model", "parse_term", "parse_type", "print_term", "print_type", "typecheck", "build_variant"]
