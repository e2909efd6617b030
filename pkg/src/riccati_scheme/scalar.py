"""Scalar Riccati equation ``x' + k x^2 - 2 a x - q = 0`` and its homographic scheme.

The implicit update treats ``x^2`` as ``x_j * x_{j+1}`` and splits ``a`` into
positive and negative parts, which makes ``x_{j+1}`` a Moebius function of
``x_j`` with non-negative coefficients.  Iterates therefore stay positive for
every time step.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateTimeStep, ValidationError

__all__ = [
    "Degeneracy",
    "OrderStudy",
    "ScalarProblem",
    "check_degeneracy",
    "euler_scalar_step",
    "measure_order",
    "scalar_exact",
    "scalar_fixed_point",
    "scalar_integrate",
    "scalar_rk4",
    "scalar_step",
]

_DEGENERACY_RTOL = 1e-12


@dataclass(frozen=True)
class ScalarProblem:
    """Coefficients ``k > 0``, ``a``, ``q >= 0`` and initial value ``d >= 0``."""

    k: float
    a: float
    q: float
    d: float = 0.0

    def __post_init__(self):
        for name in ("k", "a", "q", "d"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if not self.k > 0:
            raise ValidationError(f"k must be > 0, got {self.k}")
        if self.q < 0:
            raise ValidationError(f"q must be >= 0, got {self.q}")
        if self.d < 0:
            raise ValidationError(f"d must be >= 0, got {self.d}")

    @property
    def a_plus(self):
        return max(0.0, self.a)

    @property
    def a_minus(self):
        return max(0.0, -self.a)

    @property
    def discriminant(self):
        """``sqrt(a^2 + k q)``, the decay rate of the linearized error is twice this."""
        return math.hypot(self.a, math.sqrt(self.k * self.q))

    @property
    def x_star(self):
        return scalar_fixed_point(self)

    @property
    def tau(self):
        s = self.discriminant
        return math.inf if s == 0 else 1.0 / (2.0 * s)


def scalar_fixed_point(p):
    """Non-negative root ``(a + sqrt(a^2 + k q)) / k`` of ``k x^2 - 2 a x - q``.

    For ``a < 0`` the equivalent ``q / (sqrt(a^2 + k q) - a)`` avoids cancellation.
    """
    s = p.discriminant
    if p.a < 0:
        return p.q / (s - p.a)
    return (p.a + s) / p.k


def scalar_step(p, x_j, dt):
    """One homographic step.

    ``x_{j+1} = ((1 + 2 a+ dt) x_j + q dt) / (k dt x_j + 1 + 2 a- dt)``; the
    denominator is at least 1 for ``x_j >= 0``.
    """
    if not dt > 0:
        raise ValidationError(f"dt must be > 0, got {dt}")
    num = (1.0 + 2.0 * p.a_plus * dt) * x_j + p.q * dt
    den = p.k * dt * x_j + 1.0 + 2.0 * p.a_minus * dt
    return num / den


def euler_scalar_step(p, x_j, dt):
    """Forward Euler step; unlike :func:`scalar_step` it can go negative."""
    return x_j + dt * (p.q + 2.0 * p.a * x_j - p.k * x_j * x_j)


class Degeneracy(enum.Enum):
    OK = "ok"
    DEGENERATE = "degenerate"


def check_degeneracy(p, dt):
    """Classify ``dt`` against ``1 + 2|a| dt - k q dt^2 != 0``.

    At a degenerate step the homographic map is constant, so the scheme
    jumps to ``(1 + 2 a+ dt) / (k dt)`` and stays there.  Exact zero is
    replaced by a relative band of width ``1e-12``.
    """
    if not dt > 0:
        raise ValidationError(f"dt must be > 0, got {dt}")
    lin = 1.0 + 2.0 * abs(p.a) * dt
    quad = p.k * p.q * dt * dt
    if abs(lin - quad) <= _DEGENERACY_RTOL * (lin + quad):
        return Degeneracy.DEGENERATE
    return Degeneracy.OK


def scalar_integrate(p, dt, n_steps, check=True):
    """Run the homographic scheme from ``x_0 = d``.

    Parameters
    ----------
    p : ScalarProblem
    dt : float
    n_steps : int
    check : bool
        Reject a degenerate ``dt`` (default).  Turning this off is only
        useful to observe the collapsed sequence.

    Returns
    -------
    list of (t_j, x_j)
    """
    if check and check_degeneracy(p, dt) is Degeneracy.DEGENERATE:
        raise DegenerateTimeStep(
            f"dt={dt} makes 1 + 2|a|dt - kq dt^2 vanish for k={p.k}, a={p.a}, q={p.q}"
        )
    x = p.d
    out = [(0.0, x)]
    for j in range(1, int(n_steps) + 1):
        x = scalar_step(p, x, dt)
        out.append((j * dt, x))
    return out


def scalar_exact(p, t):
    """Exact solution ``x(t; d)``.

    With ``x = x* + e`` the error obeys the Bernoulli equation
    ``e' = -lam e - k e^2`` (``lam = 2 sqrt(a^2 + k q)``), whose solution is
    ``e(t) = e0 E / (1 + k e0 (1 - E) / lam)`` with ``E = exp(-lam t)``.
    """
    if t < 0:
        raise ValidationError(f"t must be >= 0, got {t}")
    if t == 0:
        return p.d
    x_star = p.x_star
    e0 = p.d - x_star
    if e0 == 0.0:
        return x_star
    lam = 2.0 * p.discriminant
    if lam == 0.0:
        # a = q = 0: x' = -k x^2
        return p.d / (1.0 + p.k * p.d * t)
    one_minus_E = -math.expm1(-lam * t)
    den = 1.0 + p.k * e0 * one_minus_E / lam
    if den <= 0.0:
        # only reachable for d = q = 0 with a > 0, where x stays at 0
        return 0.0
    return x_star + e0 * math.exp(-lam * t) / den


def scalar_rk4(p, t, dt):
    """Classical RK4 approximation of ``x(t; d)``; used to cross-check :func:`scalar_exact`."""
    n = max(1, int(math.ceil(t / dt - 1e-9)))
    h = t / n

    def f(x):
        return p.q + 2.0 * p.a * x - p.k * x * x

    x = p.d
    for _ in range(n):
        k1 = f(x)
        k2 = f(x + 0.5 * h * k1)
        k3 = f(x + 0.5 * h * k2)
        k4 = f(x + h * k3)
        x += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
    return x


@dataclass(frozen=True)
class OrderStudy:
    """Errors at ``t_final`` and observed orders ``log2(e(2 dt) / e(dt))``.

    ``orders[i]`` compares ``dts[i]`` with ``dts[i + 1]``.  When every error
    is zero (fixed-point start) the orders are undefined and ``exact`` is set.
    """

    dts: tuple
    errors: tuple
    orders: tuple
    exact: bool


def measure_order(p, t_final, dt_list):
    dts = tuple(float(dt) for dt in dt_list)
    if len(dts) < 3:
        raise ValidationError("need at least three time steps")
    for big, small in zip(dts, dts[1:]):
        if not math.isclose(big / small, 2.0, rel_tol=1e-9):
            raise ValidationError(f"time steps must halve, got {big} -> {small}")
    x_true = scalar_exact(p, t_final)
    errors = []
    for dt in dts:
        n = int(round(t_final / dt))
        if not math.isclose(n * dt, t_final, rel_tol=1e-9):
            raise ValidationError(f"dt={dt} does not divide t_final={t_final}")
        x_num = scalar_integrate(p, dt, n)[-1][1]
        errors.append(abs(x_true - x_num))
    if all(e == 0.0 for e in errors):
        return OrderStudy(dts, tuple(errors), tuple(math.nan for _ in dts[1:]), True)
    with np.errstate(divide="ignore", invalid="ignore"):
        orders = tuple(float(np.log2(e2 / e1)) for e2, e1 in zip(errors, errors[1:]))
    return OrderStudy(dts, tuple(errors), orders, False)
