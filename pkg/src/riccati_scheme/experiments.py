"""Reproducible experiments: square-root test, damped oscillator, scalar studies.

Every experiment returns plain data (a :class:`~riccati_scheme.riccati.Trajectory`
or a small report) so results can be written to CSV or checked in tests.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math

import numpy as np

from .control import ControlProblem, assemble_riccati
from .exceptions import OraclePositivityLost, ValidationError
from .riccati import RiccatiProblem, SchemeConfig, integrate, riccati_rhs
from .scalar import ScalarProblem, euler_scalar_step, measure_order, scalar_step

__all__ = [
    "EulerReport",
    "ExperimentSpec",
    "OSCILLATOR_DEFAULTS",
    "SQRT_Q",
    "euler_failure_demo",
    "oscillator_problem",
    "oscillator_test",
    "order_study",
    "reference_solution",
    "run_experiment",
    "run_sweep",
    "sqrt_problem",
    "sqrt_test",
]

# (1/2) [[1, -1], [1, 1]] diag(1, 100) [[1, 1], [-1, 1]]
SQRT_Q = np.array([[50.5, -49.5], [-49.5, 50.5]])

OSCILLATOR_DEFAULTS = {"omega": 1.0, "delta": 0.1, "b": 1.0}

ORDER_DTS = (0.1, 0.05, 0.025)


def sqrt_problem():
    """``X' + X^2 - Q = 0``, ``X(0) = 0``: the limit is the square root of ``Q``."""
    return RiccatiProblem(np.zeros((2, 2)), np.eye(2), SQRT_Q)


def sqrt_test(mu=0.1, dt=0.01, steps=2000, steady_tol=1e-10):
    return integrate(sqrt_problem(), SchemeConfig(dt=dt, mu=mu, max_steps=steps,
                                                  steady_tol=steady_tol))


def oscillator_problem(alpha=0.01, omega=1.0, delta=0.1, b=1.0, Q=None):
    """Damped oscillator ``y'' + 2 delta y' + omega^2 y = b v`` with ``R = [alpha]``.

    The control enters the velocity equation only, so ``K`` has rank one.
    """
    if not alpha > 0:
        raise ValidationError(f"alpha must be > 0, got {alpha}")
    A = np.array([[0.0, 1.0], [-omega * omega, -2.0 * delta]])
    B = np.array([[0.0], [b]])
    return ControlProblem(A, B, np.eye(2) if Q is None else Q, np.array([[alpha]]))


def oscillator_test(alpha=0.01, dt=0.01, mu=0.1, steps=None, steady_tol=1e-10, **plant):
    """Integrate the oscillator's Riccati equation.

    ``steps`` defaults to 2000 for ``dt <= 1`` and 50 otherwise.  Positivity
    of each iterate is enforced by :func:`~riccati_scheme.riccati.integrate`.
    """
    if not (dt > 0 and mu > 0):
        raise ValidationError("dt and mu must be > 0")
    if steps is None:
        steps = 2000 if dt <= 1.0 else 50
    problem = assemble_riccati(oscillator_problem(alpha, **plant))
    return integrate(problem, SchemeConfig(dt=dt, mu=mu, max_steps=steps, steady_tol=steady_tol))


def reference_solution(p, t_final, dt_ref=None):
    """Classical RK4 approximation of ``X(t_final)``, used as an accuracy oracle.

    Each stage is symmetrized.  The oracle is only trusted while its iterates
    stay positive semi-definite.

    Raises
    ------
    OraclePositivityLost
        If an RK4 iterate has an eigenvalue below ``-1e-10 ||X||_F``; retry
        with a smaller ``dt_ref``.
    """
    if t_final < 0:
        raise ValidationError(f"t_final must be >= 0, got {t_final}")
    X = p.X0.copy()
    if t_final == 0:
        return X
    if dt_ref is None:
        dt_ref = 1e-4 * t_final
    if dt_ref > 1e-4 * t_final * (1 + 1e-12):
        raise ValidationError(f"dt_ref must be <= 1e-4 * t_final, got {dt_ref}")
    n_steps = int(math.ceil(t_final / dt_ref - 1e-9))
    h = t_final / n_steps

    def f(Z):
        D = riccati_rhs(p, Z)
        return 0.5 * (D + D.T)

    for j in range(n_steps):
        k1 = f(X)
        k2 = f(X + 0.5 * h * k1)
        k3 = f(X + 0.5 * h * k2)
        k4 = f(X + h * k3)
        X = X + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        X = 0.5 * (X + X.T)
        if np.linalg.eigvalsh(X)[0] < -1e-10 * np.linalg.norm(X):
            raise OraclePositivityLost(f"RK4 reference lost positivity at step {j + 1}")
    return X


@dataclass(frozen=True)
class EulerReport:
    """Side-by-side iterates of forward Euler and the homographic scheme."""

    problem: ScalarProblem
    dt: float
    euler: tuple
    homographic: tuple

    @property
    def euler_failed(self):
        return min(self.euler) < 0

    def format(self):
        lines = [f"scalar problem k={self.problem.k:g} a={self.problem.a:g} "
                 f"q={self.problem.q:g} d={self.problem.d:g}, dt={self.dt:g}",
                 f"{'step':>4}  {'euler':>14}  {'homographic':>14}"]
        for j, (xe, xh) in enumerate(zip(self.euler, self.homographic)):
            lines.append(f"{j:>4}  {xe:>14.8g}  {xh:>14.8g}")
        verdict = "LOST" if self.euler_failed else "kept"
        lines.append(f"euler positivity {verdict}; homographic minimum {min(self.homographic):.8g}")
        return "\n".join(lines)


def euler_failure_demo(dt=3.0, steps=2, d=0.0):
    """Run ``x' = 1 - x^2`` from ``d`` with both schemes.

    At ``dt = 3`` and ``d = 0`` Euler reaches ``-21`` at step 2 while the
    homographic scheme gives ``0.6``.
    """
    p = ScalarProblem(1.0, 0.0, 1.0, d)
    xe = xh = p.d
    euler, homographic = [xe], [xh]
    for _ in range(int(steps)):
        xe = euler_scalar_step(p, xe, dt)
        xh = scalar_step(p, xh, dt)
        euler.append(xe)
        homographic.append(xh)
    if min(homographic) < 0:
        raise AssertionError("homographic iterate went negative")
    return EulerReport(p, float(dt), tuple(euler), tuple(homographic))


def order_study(a=0.0, k=1.0, q=1.0, d=0.0, t_final=1.0, dts=ORDER_DTS):
    return measure_order(ScalarProblem(k, a, q, d), t_final, dts)


@dataclass
class ExperimentSpec:
    """A named experiment and the parameter overrides to sweep over.

    ``kind`` is one of ``"sqrt"``, ``"oscillator"``, ``"scalar"``.  Each
    sweep entry is merged over ``params``; an empty sweep runs ``params``
    once.  ``expect_failure`` lists sweep indices that are expected to raise.
    """

    name: str
    kind: str
    params: dict = field(default_factory=dict)
    sweep: list = field(default_factory=list)
    output: str = None
    expect_failure: frozenset = frozenset()

    def points(self):
        return [{**self.params, **over} for over in (self.sweep or [{}])]


_RUNNERS = {
    "sqrt": sqrt_test,
    "oscillator": oscillator_test,
    "scalar": order_study,
}


def run_sweep(func, points, max_workers=None):
    """Evaluate ``func(**point)`` for each point, possibly in threads, in input order."""
    if max_workers == 1 or len(points) <= 1:
        return [func(**pt) for pt in points]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(lambda pt: func(**pt), points))


def run_experiment(spec, max_workers=None):
    """Run every sweep point of ``spec``.

    Points listed in ``spec.expect_failure`` yield the raised exception
    instead of a result; an unexpected failure propagates.
    """
    try:
        func = _RUNNERS[spec.kind]
    except KeyError:
        raise ValidationError(f"unknown experiment kind {spec.kind!r}") from None

    def guarded(index, point):
        try:
            return func(**point)
        except Exception as exc:
            if index in spec.expect_failure:
                return exc
            raise

    points = [{"index": i, "point": pt} for i, pt in enumerate(spec.points())]
    return run_sweep(guarded, points, max_workers)
