"""dirzeta: directional special values of generalized multizeta functions.

Exact rational values and canonical-basis derivative values at nonpositive
integers along a direction, an incomplete-gamma analytic continuation with
residue extraction, weighted lattice (Barnes-type) zeta reductions, the
so(5)/g2 Lie-algebra zeta specials, and the asymptotic count of g2
representations with its exact dynamic-programming counterpart.
"""

from .exact import (Rational, bernoulli_number, bernoulli_poly, binom_shifted,
                    compositions, harmonic, hurwitz_zeta_neg, multinomial,
                    zeta_neg)
from .numeric import (DomainError, Precision, euler_gamma, inc_gamma_lower,
                      inc_gamma_upper, ln_gamma, zeta_em, zeta_em_deriv)
from .quad import quad_cube, quad_cube_full
from .kvalue import (Atom, KValue, kv_add, kv_equals, kv_eval, kv_ln_rational,
                     kv_rational, kv_scale, kv_zph)
from .model import (Direction, HurwitzSpec, SpecError, TargetPoint,
                    WittenPreset, load_spec, parse_problem, preset, save_spec,
                    validate)
from .qengine import PartialFraction, QContext, f_constant, partial_fractions, q0, q1
from .barnes import (BarnesSpec, barnes_derivative, barnes_one_value,
                     barnes_reduce, barnes_value)
from .engine import (ContinuationParams, DirectionalResult, HOracleResult,
                     NearSingularityError, continuation_eval, default_theta,
                     derivative_at, derivative_blocks, h_oracle, h_value,
                     residue_at, singularities, value_at)
from .witten import (MeinardusData, ResiduePair, meinardus_constants,
                     parts_table, residues_g2, rg2_asymptotic, rg2_exact,
                     rg2_exact_series, rg2_log_asymptotic, weyl_dimension,
                     witten_derivative0, witten_value0)

__version__ = "0.1.0"
