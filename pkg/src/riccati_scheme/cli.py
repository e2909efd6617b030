"""Command line front end.

Exit codes: 0 success, 2 invalid input, 3 degenerate scalar time step,
4 solver failure.
"""

import argparse
import sys

from . import experiments
from .exceptions import DegenerateTimeStep, RiccatiError, ValidationError
from .io import (
    dump_problem,
    load_problem,
    write_order_csv,
    write_scalar_csv,
    write_trajectory_csv,
)
from .riccati import SchemeConfig, integrate, select_mu
from .scalar import ScalarProblem, scalar_integrate

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_DEGENERATE = 3
EXIT_SOLVER = 4


def _mu_arg(text):
    if text == "auto":
        return None
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or a number, got {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("mu must be > 0")
    return value


def _positive(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _count(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _out(args):
    return args.out if args.out is not None else sys.stdout


def cmd_solve(args):
    problem, control = load_problem(args.problem)
    config = SchemeConfig(dt=args.dt, mu=args.mu, max_steps=args.steps,
                          steady_tol=args.tol, stride=args.stride)
    if args.mu is None:
        print(f"mu = {select_mu(problem.A):.17g} (auto)", file=sys.stderr)
    if args.dump_problem:
        dump_problem(problem, args.dump_problem, control)
    traj = integrate(problem, config)
    write_trajectory_csv(traj, _out(args))
    if not traj.converged:
        print(f"not converged after {traj.steps[-1]} steps "
              f"(residual {traj.residuals[-1]:.3g})", file=sys.stderr)
    return EXIT_OK


def cmd_scalar(args):
    p = ScalarProblem(args.k, args.a, args.q, args.d)
    samples = scalar_integrate(p, args.dt, args.steps)
    write_scalar_csv(p, samples, _out(args))
    return EXIT_OK


def cmd_sqrt_test(args):
    traj = experiments.sqrt_test(mu=args.mu, dt=args.dt, steps=args.steps)
    write_trajectory_csv(traj, _out(args))
    return EXIT_OK


def cmd_oscillator(args):
    traj = experiments.oscillator_test(alpha=args.alpha, dt=args.dt, mu=args.mu, steps=args.steps,
                                       omega=args.omega, delta=args.delta, b=args.b)
    write_trajectory_csv(traj, _out(args))
    return EXIT_OK


def cmd_order_study(args):
    study = experiments.order_study(a=args.a, k=args.k, q=args.q, d=args.d, t_final=args.t_final)
    write_order_csv(study, _out(args))
    return EXIT_OK


def cmd_euler_demo(args):
    report = experiments.euler_failure_demo(dt=args.dt, steps=args.steps, d=args.d)
    print(report.format())
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="riccati-scheme",
        description="Positivity-preserving integration of Riccati differential equations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def out_opt(p):
        p.add_argument("--out", help="CSV output path (default: standard output)")

    p = sub.add_parser("solve", help="integrate a problem file")
    p.add_argument("--problem", required=True, help="JSON problem file")
    p.add_argument("--dt", type=_positive, default=0.01)
    p.add_argument("--mu", type=_mu_arg, default=None, help="'auto' (default) or a value")
    p.add_argument("--steps", type=_count, default=2000)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--dump-problem", metavar="PATH",
                   help="write the parsed problem back out as JSON")
    out_opt(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("scalar", help="scalar homographic scheme")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--d", type=float, default=0.0)
    p.add_argument("--dt", type=_positive, default=0.1)
    p.add_argument("--steps", type=_count, default=100)
    out_opt(p)
    p.set_defaults(func=cmd_scalar)

    p = sub.add_parser("sqrt-test", help="X' + X^2 - Q = 0, limit sqrt(Q)")
    p.add_argument("--mu", type=_positive, default=0.1)
    p.add_argument("--dt", type=_positive, default=0.01)
    p.add_argument("--steps", type=_count, default=2000)
    out_opt(p)
    p.set_defaults(func=cmd_sqrt_test)

    p = sub.add_parser("oscillator", help="damped harmonic oscillator LQR")
    p.add_argument("--alpha", type=_positive, default=0.01)
    p.add_argument("--dt", type=_positive, default=0.01)
    p.add_argument("--mu", type=_positive, default=0.1)
    p.add_argument("--omega", type=float, default=experiments.OSCILLATOR_DEFAULTS["omega"])
    p.add_argument("--delta", type=float, default=experiments.OSCILLATOR_DEFAULTS["delta"])
    p.add_argument("--b", type=float, default=experiments.OSCILLATOR_DEFAULTS["b"])
    p.add_argument("--steps", type=_count, default=None,
                   help="default 2000 for dt <= 1, else 50")
    out_opt(p)
    p.set_defaults(func=cmd_oscillator)

    p = sub.add_parser("order-study", help="observed convergence order of the scalar scheme")
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--d", type=float, default=0.0)
    p.add_argument("--t-final", type=_positive, default=1.0)
    out_opt(p)
    p.set_defaults(func=cmd_order_study)

    p = sub.add_parser("euler-demo", help="forward Euler loses positivity, the scheme does not")
    p.add_argument("--dt", type=_positive, default=3.0)
    p.add_argument("--steps", type=_count, default=2)
    p.add_argument("--d", type=float, default=0.0)
    p.set_defaults(func=cmd_euler_demo)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DegenerateTimeStep as exc:
        print(f"error: degenerate time step: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (RiccatiError, ArithmeticError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
