"""Problem files (JSON) and CSV output.

A problem file is a JSON object with row-major matrices::

    {"A": [[0, 1], [-1, -0.2]], "B": [[0], [1]], "Q": [[1, 0], [0, 1]], "R": [[0.01]]}

Either ``"B"`` and ``"R"`` or a direct ``"K"`` must be given, not both.
``"X0"`` is optional.
"""

import csv
import json
import math
from pathlib import Path

import numpy as np

from .control import ControlProblem, assemble_riccati
from .exceptions import ValidationError
from .riccati import RiccatiProblem

__all__ = [
    "dump_problem",
    "load_problem",
    "parse_problem",
    "trajectory_header",
    "write_order_csv",
    "write_scalar_csv",
    "write_trajectory_csv",
]

_KNOWN_KEYS = {"A", "B", "Q", "R", "K", "X0"}


def _fmt(x):
    return format(float(x), ".17g")


def _matrix(doc, key, rows=None, cols=None):
    value = doc[key]
    if (not isinstance(value, list) or not value
            or not all(isinstance(r, list) and r for r in value)):
        raise ValidationError(f"{key!r} must be a non-empty array of arrays of numbers")
    width = len(value[0])
    if any(len(r) != width for r in value):
        raise ValidationError(f"{key!r} has rows of unequal length")
    expected = (rows if rows is not None else len(value), cols if cols is not None else width)
    if (len(value), width) != expected:
        raise ValidationError(f"{key!r} must have shape {expected[0]}x{expected[1]}, "
                              f"got {len(value)}x{width}")
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{key!r} must contain only numbers") from exc
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{key!r} has non-finite entries")
    return arr


def parse_problem(doc):
    """Build a :class:`RiccatiProblem` from a decoded problem document.

    Returns
    -------
    problem : RiccatiProblem
    control : ControlProblem or None
        Set when the document gave ``B`` and ``R``.
    """
    if not isinstance(doc, dict):
        raise ValidationError("problem file must contain a JSON object")
    unknown = set(doc) - _KNOWN_KEYS
    if unknown:
        raise ValidationError(f"unknown keys in problem file: {sorted(unknown)}")
    if "A" not in doc:
        raise ValidationError("'A' is required")
    A = _matrix(doc, "A")
    n = A.shape[0]
    if A.shape[1] != n:
        raise ValidationError(f"'A' must be square, got {A.shape[0]}x{A.shape[1]}")
    if "Q" not in doc:
        raise ValidationError("'Q' is required")
    Q = _matrix(doc, "Q", n, n)
    X0 = _matrix(doc, "X0", n, n) if "X0" in doc else None

    has_br = "B" in doc or "R" in doc
    if has_br and "K" in doc:
        raise ValidationError("give either 'B' and 'R' or 'K', not both")
    if "K" in doc:
        return RiccatiProblem(A, _matrix(doc, "K", n, n), Q, X0), None
    if not ("B" in doc and "R" in doc):
        raise ValidationError("'B' and 'R' are required when 'K' is absent")
    B = _matrix(doc, "B", n)
    m = B.shape[1]
    R = _matrix(doc, "R", m, m)
    control = ControlProblem(A, B, Q, R)
    return assemble_riccati(control, X0), control


def load_problem(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read problem file {str(path)!r}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{str(path)!r} is not valid JSON: {exc}") from exc
    return parse_problem(doc)


def dump_problem(problem, path, control=None):
    """Write ``problem`` (or the control data it came from) as a problem file."""
    if control is not None:
        doc = {"A": control.A, "B": control.B, "Q": control.Q, "R": control.R}
    else:
        doc = {"A": problem.A, "K": problem.K, "Q": problem.Q}
    doc["X0"] = problem.X0
    doc = {k: np.asarray(v).tolist() for k, v in doc.items()}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def trajectory_header(n):
    return ["step", "time", *(f"lambda_{i}" for i in range(1, n + 1)), "are_residual_fro"]


def _open_out(out):
    if hasattr(out, "write"):
        return out, False
    return open(out, "w", newline=""), True


def _write_rows(out, header, rows):
    fh, close = _open_out(out)
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    finally:
        if close:
            fh.close()


def write_trajectory_csv(traj, out):
    """Write ``step,time,lambda_1..lambda_n,are_residual_fro`` with 17 significant digits."""
    rows = ([str(r[0]), *map(_fmt, r[1:])] for r in traj.rows())
    _write_rows(out, trajectory_header(traj.n), rows)


def write_scalar_csv(problem, samples, out):
    """Scalar runs use the trajectory schema with ``n = 1``.

    ``lambda_1`` is ``x_j`` and the residual is ``|k x^2 - 2 a x - q|``.
    """
    def rows():
        for j, (t, x) in enumerate(samples):
            res = abs(problem.k * x * x - 2.0 * problem.a * x - problem.q)
            yield [str(j), _fmt(t), _fmt(x), _fmt(res)]

    _write_rows(out, trajectory_header(1), rows())


def write_order_csv(study, out):
    """One row per time step: ``dt,error,observed_order`` (order blank on the first row)."""
    def rows():
        for i, (dt, err) in enumerate(zip(study.dts, study.errors)):
            order = "" if i == 0 or math.isnan(study.orders[i - 1]) else _fmt(study.orders[i - 1])
            yield [_fmt(dt), _fmt(err), order]

    _write_rows(out, ["dt", "error", "observed_order"], rows())
