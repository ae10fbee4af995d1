"""Shoulder motion database: grid schema, CSV ingestion, synthetic data.

The database holds one 22x3 lattice of joint rotations per joint, indexed
by humeral elevation (15..120 in 5-degree steps) and plane-of-elevation
orientation (0 frontal, 40 scapular, 90 sagittal).  Euler angles are
stored in degrees in files; the quaternion cache is built at load time
and hemisphere-aligned so downstream interpolation never crosses the
double cover.

The published bone-pin measurement tables this layout mirrors are not
redistributable, so `generate_synthetic` produces a stand-in dataset that
obeys the documented scapulohumeral rhythm; anyone holding real tables
can ship them through the same CSV schema.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from . import quat
from .quat import Quat
from .shoulder import EulerSequence, JointId, euler_to_quat, joint_sequence

CSV_HEADER = "joint,theta_deg,psi_deg,e1_deg,e2_deg,e3_deg"

THETA_KNOTS = tuple(float(t) for t in range(15, 121, 5))
PSI_KNOTS = (0.0, 40.0, 90.0)

_LATTICE_TOL = 1e-9


class DatabaseError(Exception):
    """Base class for motion-database failures."""


class ParseError(DatabaseError):
    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class IncompleteGridError(DatabaseError):
    def __init__(self, missing: list):
        cells = ", ".join(f"({j.value}, {t:g}, {p:g})" for j, t, p in missing[:8])
        more = "" if len(missing) <= 8 else f" and {len(missing) - 8} more"
        super().__init__(f"missing {len(missing)} grid cell(s): {cells}{more}")
        self.missing = missing


class DuplicateCellError(DatabaseError):
    pass


class AxisMismatchError(DatabaseError):
    pass


class UnitsError(DatabaseError):
    pass


@dataclass(frozen=True)
class GridAxes:
    """The measured lattice: 22 elevation knots x 3 plane knots."""

    theta_knots: tuple = THETA_KNOTS
    psi_knots: tuple = PSI_KNOTS

    def __post_init__(self):
        if len(self.theta_knots) != 22:
            raise ValueError("theta lattice must have 22 knots")
        for a, b in zip(self.theta_knots, self.theta_knots[1:]):
            if abs((b - a) - 5.0) > _LATTICE_TOL:
                raise ValueError("theta lattice must increase uniformly by 5 degrees")
        if abs(self.theta_knots[0] - 15.0) > _LATTICE_TOL:
            raise ValueError("theta lattice must start at 15 degrees")
        if tuple(self.psi_knots) != PSI_KNOTS:
            raise ValueError("psi lattice must be exactly (0, 40, 90)")

    def theta_index(self, value: float):
        k = round((value - 15.0) / 5.0)
        if 0 <= k < 22 and abs(value - self.theta_knots[k]) <= _LATTICE_TOL:
            return k
        return None

    def psi_index(self, value: float):
        for k, p in enumerate(self.psi_knots):
            if abs(value - p) <= _LATTICE_TOL:
                return k
        return None


class JointRotationGrid:
    """One joint's 22x3 rotation lattice plus its derived quaternion cache.

    ``quat_grid[i][j]`` is the hemisphere-aligned unit quaternion of the
    stored Euler triple; ``theta_ctrl[i][j]`` caches the squad inner
    control point over the elevation direction (neighbors clamped at the
    column ends), which depends only on the grid and so is precomputed.
    Instances are immutable after construction and safe to share.
    """

    __slots__ = ("joint", "axes", "sequence", "euler", "quat_grid", "theta_ctrl")

    def __init__(self, joint, axes, sequence, euler, quat_grid, theta_ctrl):
        self.joint = joint
        self.axes = axes
        self.sequence = sequence
        self.euler = euler
        self.quat_grid = quat_grid
        self.theta_ctrl = theta_ctrl

    @classmethod
    def from_euler(cls, joint: JointId, axes: GridAxes, sequence: EulerSequence,
                   euler: np.ndarray) -> "JointRotationGrid":
        euler = np.asarray(euler, dtype=float)
        if euler.shape != (22, 3, 3):
            raise ValueError(f"euler grid must be 22x3x3, got {euler.shape}")
        quats = [
            [euler_to_quat(*euler[i, j], sequence) for j in range(3)]
            for i in range(22)
        ]
        # Alignment pass 1: along increasing theta within each psi column.
        for j in range(3):
            for i in range(1, 22):
                quats[i][j] = quat.align_hemisphere(quats[i - 1][j], quats[i][j])
        # Pass 2: across psi columns row-wise, anchored at the frontal plane.
        for i in range(22):
            for j in (1, 2):
                quats[i][j] = quat.align_hemisphere(quats[i][j - 1], quats[i][j])
        ctrl = [
            [
                quat.inner_quadrangle(
                    quats[max(i - 1, 0)][j], quats[i][j], quats[min(i + 1, 21)][j]
                )
                for j in range(3)
            ]
            for i in range(22)
        ]
        return cls(joint, axes, sequence, euler, quats, ctrl)


@dataclass(frozen=True)
class MotionDatabase:
    """All three joint grids over one shared lattice, immutable after load."""

    grids: dict
    axes: GridAxes = field(default_factory=GridAxes)
    source: str = ""

    def __post_init__(self):
        missing = [j for j in JointId if j not in self.grids]
        if missing:
            raise IncompleteGridError([(j, 0.0, 0.0) for j in missing])
        for g in self.grids.values():
            if g.axes != self.axes:
                raise ValueError("all grids must share the database axes")

    @property
    def sequences(self) -> dict:
        return {j: self.grids[j].sequence for j in JointId}


def get(db: MotionDatabase, joint: JointId, i: int, j: int) -> Quat:
    """Cached, hemisphere-aligned quaternion at theta index i, psi index j."""
    if not (0 <= i < 22 and 0 <= j < 3):
        raise IndexError(f"grid index ({i}, {j}) outside 22x3 lattice")
    return db.grids[joint].quat_grid[i][j]


# ---------------------------------------------------------------------------
# Synthetic data


def _st_upward_rotation(theta: float) -> float:
    # Scapulothoracic contribution: silent below 30 degrees of elevation,
    # then one degree for every three of humerothoracic elevation, which
    # leaves the glenohumeral share accruing twice as fast.
    return 0.0 if theta <= 30.0 else (theta - 30.0) / 3.0


def synthetic_euler(joint: JointId, theta: float, psi: float) -> tuple:
    """Deterministic stand-in Euler triple (degrees) for one grid cell."""
    u = (theta - 15.0) / 105.0
    v = psi / 90.0
    st = _st_upward_rotation(theta)
    if joint is JointId.SC:
        a1 = -12.0 + 9.0 * u + 5.0 * v - 3.0 * u * v
        a2 = 0.4 * st
        a3 = 2.0 + 14.0 * u * u + 3.0 * u * v
    elif joint is JointId.AC:
        a1 = 21.0 + 6.0 * u - 4.0 * v + 2.0 * u * u
        a2 = 0.6 * st
        a3 = -4.0 + 10.0 * u * u - 2.0 * v
    else:
        a1 = 24.0 * v - 6.0 * u * v
        a2 = theta - st
        a3 = 8.0 * v + 6.0 * u * v - 3.0 * u * u
    return (a1, a2, a3)


def generate_synthetic() -> MotionDatabase:
    """Build the deterministic synthetic database.

    In the frontal plane the glenohumeral elevation and the
    scapulothoracic upward rotation (split 40/60 between SC elevation and
    AC upward rotation) sum to the humerothoracic elevation, with the
    classic 2:1 increment ratio above 30 degrees.  The remaining DOFs are
    smooth low-order polynomials bounded by 30 degrees, and every cell is
    gimbal-safe.
    """
    axes = GridAxes()
    grids = {}
    for joint in JointId:
        euler = np.empty((22, 3, 3))
        for i, theta in enumerate(axes.theta_knots):
            for j, psi in enumerate(axes.psi_knots):
                euler[i, j] = synthetic_euler(joint, theta, psi)
        grids[joint] = JointRotationGrid.from_euler(joint, axes, joint_sequence(joint), euler)
    return MotionDatabase(grids=grids, axes=axes, source="synthetic-v1")


# ---------------------------------------------------------------------------
# CSV schema


def load_csv(path) -> MotionDatabase:
    """Parse and validate a motion-database CSV file.

    Raises ParseError (with line number), UnitsError, AxisMismatchError,
    DuplicateCellError, or IncompleteGridError; a returned database is
    complete and carries its quaternion cache.
    """
    with open(path, "r", encoding="utf-8", newline="") as f:
        return _load_csv_stream(f)


def _load_csv_stream(f) -> MotionDatabase:
    axes = GridAxes()
    metadata = {}
    header_seen = False
    cells = {joint: {} for joint in JointId}

    for line_no, raw in enumerate(f, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        if line.startswith("#"):
            if header_seen:
                raise ParseError("comment lines are only allowed before the header", line_no)
            body = line.lstrip("#").strip()
            if "=" in body:
                key, value = body.split("=", 1)
                metadata[key.strip()] = value.strip()
            continue
        if not header_seen:
            _check_header(line, line_no)
            header_seen = True
            continue
        fields = line.split(",")
        if len(fields) != 6:
            raise ParseError(f"expected 6 fields, got {len(fields)}", line_no)
        joint_label = fields[0].strip()
        try:
            joint = JointId(joint_label)
        except ValueError:
            raise ParseError(f"unknown joint {joint_label!r}", line_no) from None
        try:
            theta, psi, e1, e2, e3 = (float(v) for v in fields[1:])
        except ValueError:
            raise ParseError(f"non-numeric field in {line!r}", line_no) from None
        i = axes.theta_index(theta)
        j = axes.psi_index(psi)
        if i is None:
            raise AxisMismatchError(
                f"line {line_no}: theta_deg={theta:g} is off the 15..120 step-5 lattice"
            )
        if j is None:
            raise AxisMismatchError(
                f"line {line_no}: psi_deg={psi:g} is not one of 0, 40, 90"
            )
        if (i, j) in cells[joint]:
            raise DuplicateCellError(
                f"line {line_no}: duplicate cell ({joint.value}, {theta:g}, {psi:g})"
            )
        cells[joint][(i, j)] = (e1, e2, e3)

    if not header_seen:
        raise ParseError("missing header line", 1)

    missing = [
        (joint, axes.theta_knots[i], axes.psi_knots[j])
        for joint in JointId
        for i in range(22)
        for j in range(3)
        if (i, j) not in cells[joint]
    ]
    if missing:
        raise IncompleteGridError(missing)

    grids = {}
    for joint in JointId:
        seq_label = metadata.get(f"sequence.{joint.value}")
        sequence = EulerSequence.parse(seq_label) if seq_label else joint_sequence(joint)
        euler = np.empty((22, 3, 3))
        for (i, j), triple in cells[joint].items():
            euler[i, j] = triple
        grids[joint] = JointRotationGrid.from_euler(joint, axes, sequence, euler)
    return MotionDatabase(grids=grids, axes=axes, source=metadata.get("source", ""))


def _check_header(line: str, line_no: int) -> None:
    if line.strip() == CSV_HEADER:
        return
    got = [c.strip() for c in line.split(",")]
    expected = CSV_HEADER.split(",")
    if len(got) == len(expected):
        stems_match = all(
            g.rsplit("_", 1)[0] == e.rsplit("_", 1)[0] for g, e in zip(got, expected)
        )
        if stems_match:
            raise UnitsError(
                f"line {line_no}: header declares non-degree units ({line.strip()!r}); "
                "all angle columns must be *_deg"
            )
    raise ParseError(f"bad header {line.strip()!r} (expected {CSV_HEADER!r})", line_no)


def export_csv(db: MotionDatabase, path) -> None:
    """Write the canonical CSV form; loading it back reproduces db exactly."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps_csv(db))


def dumps_csv(db: MotionDatabase) -> str:
    out = io.StringIO()
    if db.source:
        out.write(f"# source={db.source}\n")
    for joint in JointId:
        out.write(f"# sequence.{joint.value}={db.grids[joint].sequence.label}\n")
    out.write(CSV_HEADER + "\n")
    for joint in JointId:
        grid = db.grids[joint]
        for j, psi in enumerate(db.axes.psi_knots):
            for i, theta in enumerate(db.axes.theta_knots):
                e1, e2, e3 = (float(v) for v in grid.euler[i, j])
                # repr() emits the shortest decimal that parses back to the
                # same float, keeping the round trip lossless.
                out.write(
                    f"{joint.value},{theta!r},{psi!r},{e1!r},{e2!r},{e3!r}\n"
                )
    return out.getvalue()
