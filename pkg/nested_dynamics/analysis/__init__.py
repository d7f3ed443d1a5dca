from .divergence import DivergenceSpec, kl, nested_kl
from .checks import (check_tangency, check_protocol_consistency,
                     check_class_aggregation, check_dkl_identity,
                     lyapunov_difference, check_paydiff_identity,
                     check_paydiff_integral, potential_rate,
                     check_potential_ascent, PotentialAscentReport,
                     validate_gess, check_gess_attraction, GessReport,
                     terminal_diameter, check_nash_limit,
                     check_class_score_derivative, check_class_probabilities,
                     check_nlc_argmax, compare_nrd_new, random_interior_states)
from .rates import (RateFitReport, fit_extinction_rate, extinction_report,
                    fit_convergence_rate, strict_rate_bound, check_strict_rate,
                    simplex_grid, basin_census)
from .report import CheckResult, Check, CheckSuite, summarize, report_json
