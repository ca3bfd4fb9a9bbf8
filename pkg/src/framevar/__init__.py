"""Symmetry-preserving variational difference schemes for planar curve ODEs.

The package provides six lattice schemes (four for the bending-energy
elastica, two for a projective-symmetric model problem), discrete moving
frames as invariance oracles, exact reference solutions built on elliptic
functions, conserved-quantity drift audits, and a CLI that reproduces the
convergence tables and drift figures.
"""

from .core import EdgeData, Point2, Trajectory, cross_det, eoc, forward_diff, linf_error
from .conserved import (ConservedTriple, DriftSeries, div_conserved,
                        div_relation_residual, drift,
                        elastica_constrained_conserved, elastica_free_conserved)
from .elliptic import (arc_step_solve, elastica_solution, ellint_E_inc,
                       exact_case1, exact_case2, exact_case3, exact_div,
                       exact_free_elastica, jacobi_am, jacobi_dn, jacobi_sn)
from .errors import (DegenerateStencilError, FramevarError, InitializationError,
                     PreconditionError, SingularActionError, SolverFailure)
from .groups import (SE2Element, SL2Element, invariant_div_lagrangian,
                     invariant_elastica_lagrangian, se2_apply, se2_moving_frame,
                     sl2_apply, sl2_moving_frame)
from .schemes import (SCHEME_IDS, Residual2, SchemeParams, SolverConfig,
                      constrained_elastica_step, div_invariant_step,
                      div_standard_step, free_elastica_residual, init_div,
                      init_elastica, invariant_nonvariational_step,
                      noninvariant_variational_step, run, step_free_elastica)

__version__ = "0.1.0"
