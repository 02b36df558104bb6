"""Entropic uncertainty relations for coarse-grained position and momentum measurements."""

from .binning import (BORDER, EPS_TRUNC, MIDPOINT, BinGrid, DiscreteDistribution, bin_probabilities,
                      tail_mass, tail_second_moment, tail_variance)
from .bounds import (Accuracies, BoundReport, TailData, bound_b, bound_bbm, bound_l, bound_l_case,
                     bound_max_br, bound_r, eta_min, evaluate_bounds, jensen_diagnostic,
                     r_correction, reversed_log_sobolev_check, strengthened_heisenberg_rhs)
from .entropy import (EntropyValue, coarse_entropy, continuous_entropy, discrete_entropy,
                      large_delta_limit_probe, shannon_entropy)
from .errors import (DegenerateTailError, DomainError, EntropicError, NumericError, RangeError,
                     ResolutionError, TruncationError)
from .fourier import momentum_amplitude, plancherel_check, to_momentum
from .harness import CrossoverResult, SweepConfig, emit_fig2_data, find_crossover, run_verify
from .specfun import (SpheroidalSolution, radial_s1_at_one, spherical_bessel_j,
                      spheroidal_eigensystem)
from .states import (GaussianState, GaussianSuperposition, GridState, RestrictedDensity,
                     UniformDensity, bump_state, even_superposition, load_grid_state, make_gaussian,
                     moment, quartic_state, variance)

__version__ = "0.1.0"
