"""Exact constructible functions on Presburger sets with values in Z[L, 1/L, 1/(1-L^i)]."""

from .coeffring import LL, ONE, ZERO, MotConst, from_text, mc_arith, mc_div_unit, mc_eq, mc_eval_q, mc_is_zero, to_text
from .confun import (CanonicalForm, ConFun, Term, cf_arith, cf_canonicalize, cf_diff1, cf_eq, cf_eval, cf_is_null,
                     cf_transport, cf_witness_nonnull)
from .dsl import parse_dsl, parse_function, parse_set, print_ast
from .errors import (CapabilityError, DimensionError, DomainError, DSLError, MotivicError, NotAUnitError,
                     NotIntegrableError, SpecializationError, ValidationError)
from .integrate import Projection, integrate_absolute, integrate_relative, is_integrable_fiberwise, sum_closed_univariate
from .presburger import AffineForm, PresCell, PresSet, ps_bool, ps_contains, ps_decide, ps_eliminate, ps_enumerate
from .rectilinear import RectPiece, rectilinearize
from .serialize import deserialize, serialize
from .specialize import SpecReport, brute_sum, crosscheck, spec_q


def run_command(verb, args):
    from .cli import run_command as _run
    return _run(verb, args)


__version__ = "1.0.0"
