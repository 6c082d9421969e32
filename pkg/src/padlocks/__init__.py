"""Padlock threshold systems: devices, verifiers, bounds, constructions, knots and secret sharing."""

from .bounds import BoundResult, best_known, johnson_bound, knot_wrapping_count, lower_bound, recursive_padlock_count, sperner_min_t
from .constructions import (
    bose_triples,
    build_2_of_n,
    build_3_of_n,
    build_benaloh,
    build_direct,
    build_double_daisy,
    build_recursive,
    build_single,
    build_weighted,
    fixture_13_participants,
    parse_formula,
)
from .errors import BudgetExceeded, CapacityError, IntegrityError, PadlockError, SchemaError, StructuralError
from .knots import KnotWord, build_knot, is_open, parse_word, reduce, search_minimal, verify_knot_threshold
from .model import (
    AND,
    OR,
    AccessStructure,
    KeyDistribution,
    Leaf,
    Threshold,
    ThresholdSystem,
    WeightedThreshold,
    coalition_open,
    evaluate,
    emit_system,
    parse_system,
)
from .sharing import deal, min_field_size, privacy_check, reconstruct
from .verify import VerificationReport, check_packing, check_sperner, count_six_key_pairs, count_six_key_triples, verify_threshold

__version__ = "0.1.0"
