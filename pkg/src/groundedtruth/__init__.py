"""Grounded truth: a least fixed point truth predicate over finite fragments."""

from .engine import (
    ConsistencyViolation, FixpointTrace, InconsistentInput, Saturation, check_consistent, closure_step,
    l0_of, minimality_check, outer_fixpoint, saturate,
)
from .fragment import (
    Fragment, FragmentTooLarge, build_fragment, fragment_from_roots, load_fragment, z1_of, z2_of,
)
from .models import (
    FiniteModel, ModelError, Predicate, build_basic_extension, doubling_model, evaluate, load_model,
    true_sentences,
)
from .recursive import RecursiveEvaluator
from .syntax import ParseError, Store, parse, to_text
from .verify import (
    SentenceOutsideFragment, Valuation, Verdict, equivalence_suite, quantifier_table, rule_suite,
    t_rule_suite, universal_t_schema,
)

__all__ = [
    "ConsistencyViolation", "FixpointTrace", "InconsistentInput", "Saturation", "check_consistent",
    "closure_step", "l0_of", "minimality_check", "outer_fixpoint", "saturate",
    "Fragment", "FragmentTooLarge", "build_fragment", "fragment_from_roots", "load_fragment", "z1_of", "z2_of",
    "FiniteModel", "ModelError", "Predicate", "build_basic_extension", "doubling_model", "evaluate",
    "load_model", "true_sentences", "RecursiveEvaluator", "ParseError", "Store", "parse", "to_text",
    "SentenceOutsideFragment", "Valuation", "Verdict", "equivalence_suite", "quantifier_table", "rule_suite",
    "t_rule_suite", "universal_t_schema",
]
