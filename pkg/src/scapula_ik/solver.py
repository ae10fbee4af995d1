"""Shoulder IK: bi-spherical interpolation of the motion grid.

Given the humerothoracic elevation angle theta and the plane-of-elevation
orientation psi (degrees), the solver picks the four surrounding grid
cells, interpolates each joint's quaternions along the elevation
direction first (three intermediates, one per plane knot), then blends
those intermediates along the plane direction.  Both stages run either as
squad (smooth, the default) or plain slerp (the comparison baseline);
both pass exactly through the grid knots.

The solver is stateless over an immutable database: concurrent solves
need no synchronization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from . import quat
from .database import GridAxes, JointRotationGrid, MotionDatabase
from .quat import Quat
from .shoulder import JointId, ShoulderPose

METHOD_SQUAD = "squad"
METHOD_SLERP = "slerp"
CLAMP_CLAMP = "clamp"
CLAMP_ERROR = "error"

THETA_MIN, THETA_MAX = 15.0, 120.0
PSI_MIN, PSI_MAX = 0.0, 90.0


class OutOfRangeError(ValueError):
    """Input outside the measured grid under the error clamp policy."""


@dataclass(frozen=True)
class PoseInput:
    """The IK's only runtime input: (theta, psi) in degrees."""

    theta: float
    psi: float


class InterpolationCell(NamedTuple):
    """Grid cell indices and the in-cell interpolation weights."""

    i: int
    j: int
    t_theta: float
    t_psi: float


@dataclass(frozen=True)
class SolveOptions:
    method: str = METHOD_SQUAD
    clamp_policy: str = CLAMP_CLAMP

    def __post_init__(self):
        if self.method not in (METHOD_SQUAD, METHOD_SLERP):
            raise ValueError(f"unknown method {self.method!r}")
        if self.clamp_policy not in (CLAMP_CLAMP, CLAMP_ERROR):
            raise ValueError(f"unknown clamp policy {self.clamp_policy!r}")


def clamp_input(pose: PoseInput, policy: str = CLAMP_CLAMP):
    """Apply the domain policy; returns (in-domain PoseInput, clamped flag)."""
    theta, psi = pose.theta, pose.psi
    if not (math.isfinite(theta) and math.isfinite(psi)):
        raise OutOfRangeError(f"non-finite input ({theta}, {psi})")
    if THETA_MIN <= theta <= THETA_MAX and PSI_MIN <= psi <= PSI_MAX:
        return pose, False
    if policy == CLAMP_ERROR:
        raise OutOfRangeError(
            f"(theta={theta:g}, psi={psi:g}) outside grid domain "
            f"[{THETA_MIN:g}, {THETA_MAX:g}] x [{PSI_MIN:g}, {PSI_MAX:g}]"
        )
    theta = min(max(theta, THETA_MIN), THETA_MAX)
    psi = min(max(psi, PSI_MIN), PSI_MAX)
    return PoseInput(theta, psi), True


def select_cell(axes: GridAxes, pose: PoseInput) -> InterpolationCell:
    """Choose cell indices and weights for an in-domain input.

    The cell satisfies knot[i] < theta <= knot[i+1] (same for psi), with
    the lower domain boundary mapped to index 0 at weight 0 - the only
    continuous extension of the strict left inequality.  Weights divide by
    the local knot spacing: 5 along theta, 40 then 50 along psi.
    """
    theta, psi = pose.theta, pose.psi
    idx = math.ceil((theta - THETA_MIN) / 5.0)
    i = idx - 1
    if i < 0:
        i = 0
    elif i > 20:
        i = 20
    t_theta = (theta - axes.theta_knots[i]) / 5.0
    if t_theta < 0.0:
        t_theta = 0.0
    elif t_theta > 1.0:
        t_theta = 1.0
    if psi <= 40.0:
        j = 0
        t_psi = psi / 40.0
    else:
        j = 1
        t_psi = (psi - 40.0) / 50.0
    return InterpolationCell(i, j, t_theta, t_psi)


def theta_interpolate(grid: JointRotationGrid, cell: InterpolationCell, method: str) -> tuple:
    """First stage: interpolate along elevation in every plane column.

    Returns one intermediate rotation per plane knot; the third value is
    needed by the next stage's inner control points even though the cell
    only spans two plane knots.  All inputs are hemisphere-aligned to the
    cell's base quaternion before blending.
    """
    i, j, t = cell.i, cell.j, cell.t_theta
    qg = grid.quat_grid
    base = qg[i][j]
    row0, row1 = qg[i], qg[i + 1]
    if method == METHOD_SQUAD:
        c0, c1 = grid.theta_ctrl[i], grid.theta_ctrl[i + 1]
        out = []
        for k in range(3):
            q0, q1 = row0[k], row1[k]
            s0, s1 = c0[k], c1[k]
            # Flip each keyframe together with its control point so the
            # quadrangle stays on one hemisphere.
            if quat.dot(base, q0) < 0.0:
                q0, s0 = quat.negate(q0), quat.negate(s0)
            if quat.dot(base, q1) < 0.0:
                q1, s1 = quat.negate(q1), quat.negate(s1)
            out.append(quat.squad(q0, q1, s0, s1, t))
        return tuple(out)
    out = []
    for k in range(3):
        q0 = quat.align_hemisphere(base, row0[k])
        q1 = quat.align_hemisphere(base, row1[k])
        out.append(quat.slerp(q0, q1, t))
    return tuple(out)


def psi_interpolate(intermediates: tuple, cell: InterpolationCell, method: str) -> Quat:
    """Second stage: blend the three plane-knot intermediates at t_psi.

    Squad forms its inner control points over the three-value sequence,
    clamping the missing neighbor at either end; slerp just connects the
    cell's two knots.
    """
    j, t = cell.j, cell.t_psi
    q0 = intermediates[j]
    q1 = quat.align_hemisphere(q0, intermediates[j + 1])
    if method == METHOD_SLERP:
        return quat.slerp(q0, q1, t)
    if j == 0:
        q2 = quat.align_hemisphere(q0, intermediates[2])
        s0 = quat.inner_quadrangle(q0, q0, q1)
        s1 = quat.inner_quadrangle(q0, q1, q2)
    else:
        qm = quat.align_hemisphere(q0, intermediates[0])
        s0 = quat.inner_quadrangle(qm, q0, q1)
        s1 = quat.inner_quadrangle(q0, q1, q1)
    return quat.squad(q0, q1, s0, s1, t)


_JOINT_ORDER = (JointId.SC, JointId.AC, JointId.GH)

_DEFAULT_OPTIONS = SolveOptions()


def solve(db: MotionDatabase, pose: PoseInput, opts: SolveOptions = _DEFAULT_OPTIONS) -> ShoulderPose:
    """Map (theta, psi) to the SC, AC, and GH joint rotations.

    Deterministic: identical inputs produce bit-identical outputs.
    """
    pose, _ = clamp_input(pose, opts.clamp_policy)
    cell = select_cell(db.axes, pose)
    method = opts.method
    rotations = []
    for joint in _JOINT_ORDER:
        grid = db.grids[joint]
        inter = theta_interpolate(grid, cell, method)
        rotations.append(psi_interpolate(inter, cell, method))
    return ShoulderPose(q_sc=rotations[0], q_ac=rotations[1], q_gh=rotations[2])


def sample_range(start: float, end: float, step: float) -> list:
    """Inclusive sample values from start to end; a short final step is
    clamped onto end, and start == end yields a single sample."""
    if step <= 0.0:
        raise ValueError("step must be positive")
    if end < start:
        raise ValueError("range end must not precede start")
    n = int(math.floor((end - start) / step + 1e-9))
    values = [start + k * step for k in range(n + 1)]
    if values[-1] < end - 1e-9:
        values.append(end)
    return values


def sweep(db: MotionDatabase, thetas, psis, opts: SolveOptions = _DEFAULT_OPTIONS) -> list:
    """Solve over a dense parameter sweep.

    One of thetas/psis is a list of sample values and the other a fixed
    scalar (two scalars give a single sample).  Output quaternions are
    kept hemisphere-continuous along the sweep so trajectory metrics never
    see sign flips.
    """
    if isinstance(thetas, (int, float)):
        thetas = [float(thetas)]
    if isinstance(psis, (int, float)):
        psis = [float(psis)]
    if len(thetas) > 1 and len(psis) > 1:
        raise ValueError("sweep varies one parameter; the other must be fixed")
    if len(thetas) >= len(psis):
        inputs = [PoseInput(t, psis[0]) for t in thetas]
    else:
        inputs = [PoseInput(thetas[0], p) for p in psis]

    results = []
    prev = None
    for pose_in in inputs:
        pose = solve(db, pose_in, opts)
        if prev is not None:
            pose = ShoulderPose(
                q_sc=quat.align_hemisphere(prev.q_sc, pose.q_sc),
                q_ac=quat.align_hemisphere(prev.q_ac, pose.q_ac),
                q_gh=quat.align_hemisphere(prev.q_gh, pose.q_gh),
            )
        results.append((pose_in, pose))
        prev = pose
    return results
