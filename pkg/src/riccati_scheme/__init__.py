"""Unconditionally positive integration of Riccati differential equations.

The homographic scheme advances ``X' - (X A + A^T X) + X K X - Q = 0`` with
one Lyapunov solve per step and keeps every iterate positive semi-definite
for any time step.
"""

from .control import (
    ClosedLoopRun,
    ControlProblem,
    assemble_riccati,
    closed_loop_eigenvalues,
    feedback_gain,
    simulate_closed_loop,
)
from .estimators import LQRController, RiccatiSolver
from .exceptions import *  # noqa: F401,F403
from .linalg import Spectrum, cholesky, solve_dense, sym_eigen
from .lyapunov import LyapunovProblem, solve_lyapunov
from .riccati import (
    RiccatiProblem,
    SchemeConfig,
    Trajectory,
    are_residual,
    check_monotonicity_condition,
    euler_step,
    integrate,
    riccati_step,
    select_mu,
)
from .scalar import (
    Degeneracy,
    ScalarProblem,
    check_degeneracy,
    euler_scalar_step,
    measure_order,
    scalar_exact,
    scalar_fixed_point,
    scalar_integrate,
    scalar_step,
)

__version__ = "0.1.0"
