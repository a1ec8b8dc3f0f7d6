"""Rational power series and weighted automata over exact semirings."""
from .automaton import (WeightedAutomaton, behavior, compile_term, push_forward, state_eliminate,
                        support_automaton)
from .conway import NormalForm, decide_equiv, fold_constants, normalize, refine_disjoint
from .equivalence import Verdict, exact_equiv
from .errors import (DimensionMismatch, ImproperStar, IncompatibleSemiring, IncompatibleSeries,
                     LimitExceeded, NotAUnit, NotInvertibleDiagonal, NotPositive, NotProper, NotSquare,
                     ParseError, RatSeriesError, StarUndefined, StateBlowup, UnsupportedSemiring)
from .groups import FiniteGroup, build_identity, check_identity, cyclic, group_matrix, klein_four
from .matrix import Matrix, conjugate_by_diagonal, mat_plus, mat_star, solve_left_linear
from .semiring import INF, Semiring, adjoin_infinity, get_semiring, scalar_inverse, semiring_star
from .series import (SeriesAlgebra, TruncatedSeries, cauchy_product, extend_polynomial_morphism, hadamard,
                     series_action, series_add, star_proper, star_total, support_series)
from .simulation import check_simulation, search_chain, search_simulation
from .terms import eval_series, evaluate, parse_term, to_text

__version__ = "0.1.0"
