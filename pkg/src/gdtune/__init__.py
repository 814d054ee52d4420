"""Exact dual cost functions of gradient descent hyperparameters."""

from .bounds import BoundQuery, BoundResult, bounds_calculator
from .errors import (BudgetExceeded, CapExceeded, DegenerateTrajectory, DimensionError,
                     DomainMismatch, GdtuneError, InvariantViolation, MissingPiece,
                     NonFiniteIterate, ParseError, SymbolicBudgetExceeded, ZeroPolynomial)
from .gdtrace import (DualCostFunction, DualValidationFunction, trace_param, trace_stepsize,
                      trace_validation)
from .instances import (Instance, InstanceDistribution, draw_instance, gen_net_mse,
                        gen_random_poly, gen_random_pwpoly, parse_instance, sample_instances,
                        serialize_instance)
from .numeric import numeric_dual, oracle_compare, run_gd
from .objective import (GDConfig, InitCoord, InitScale, MomentumEta, PwPolyObjective,
                        ScheduleCoord, StepSize)
from .piecewise import (PwConstFn, PwPolyFn, pw_sup_diff, pwconst_argmin, pwconst_mean,
                        pwconst_sum, pwpoly_min)
from .polynomials import Budget, MultiPoly, UniPoly
from .realroots import AlgebraicNumber, isolate_roots
from .tuner import (empirical_pdim_lower_bound, erm_stepsize, momentum_grid_tune,
                    schedule_coordinate_descent, uniform_convergence_experiment)

__version__ = "0.1.0"
