"""Self-validated enclosures for interval parametric linear systems.

The package covers the full chain: interval arithmetic with outward
rounding, affine parametric systems and their optimal rank-one LDR
rewriting, four enclosure solvers returning the uniform parameterized
form x(q) = x_check + U q, sharp bounds for secondary quantities, truss
finite-element front ends, and brute-force oracles for falsification.
"""

from .intervals import (Interval, IntervalMatrix, IntervalVector,
                        affine_image_hull, interval_mat_product, magnitude,
                        mat_interval_product, midpoint, radius)
from .secondary import (EndpointTest, SecondaryResult, SecondarySpec,
                        bilinear_secondary, endpoint_sign_test,
                        linear_secondary, overestimation_percent)
from .solvers import (ColumnLabel, EnclosureReport, MidpointSingular,
                      ParamSolution, RegularityViolation, evaluate_solution,
                      kolev_pl_solution, pg_solution, rank_one_enclosure,
                      rohn_inverse, spectral_radius)
from .systems import (CenteredSystem, LdrSystem, ParamLinearSystem,
                      build_ldr, center, make_system, rank_one_factorize)
from .truss import (Element, ForceRecovery, LoadTerm, TrussModel, assemble,
                    cantilever_truss, equilibrium_residual, force_map,
                    six_bar_reference_force_map, six_bar_truss)

__all__ = [name for name in dir() if not name.startswith("_")]
