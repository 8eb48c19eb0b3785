"""Weighted composition operators on truncated rooted trees.

Finite truncations of infinite trees, level-mean weighted norms, closed-form
operator norms with their bounds, compactness tail diagnostics, isometry
checks and an independent brute-force norm oracle.
"""

from .criteria import (NormReport, TailSequence, applicable_reports, isometry_inf_inf_check,
                       isometry_p_inf_refuter, opnorm_composition_pp, opnorm_inf_to_p,
                       opnorm_mult_pp, opnorm_p_to_inf, opnorm_pp_exact, opnorm_pp_lower,
                       opnorm_pp_nmn_bound, opnorm_pp_upper, tail, tail_verdict)
from .errors import (InvariantViolation, LevelOutOfRange, MalformedTree, NoSuitableLevel,
                     NotApplicable, NoWitness, UnknownCriterion, UnknownExample,
                     ValidationError, WrongExponents)
from .examples import ExampleCase, example
from .operators import OperatorInstance, SelfMap, apply
from .oracle import OracleResult, oracle_opnorm
from .spaces import (INF, TreeFunction, Weight, growth_bound, indicator_unit, level_mean,
                     level_means, norm)
from .tree import (BoundedLevelSizesWarning, TruncatedTree, build_explicit,
                   build_from_level_sizes, build_homogeneous, level_sizes)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
