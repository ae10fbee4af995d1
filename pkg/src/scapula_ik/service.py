"""Shared plumbing for the CLI and the HTTP endpoint.

Builds solve responses (rotations, Euler reports, landmarks), sweep rows,
and the smoothness report that compares squad against slerp through the
discrete second difference of the elbow trajectory.  All JSON numbers are
emitted at a fixed 9 significant digits so identical invocations are
byte-identical.
"""

from __future__ import annotations

import json
import math
import os
import time

from . import database, quat, solver
from .shoulder import (
    JointId,
    LandmarkSet,
    ShoulderPose,
    SkeletonConfig,
    forward_kinematics,
    quat_to_euler,
)

ENV_DB_PATH = "SCAPULA_IK_DB"

_default_db = None


def default_database() -> database.MotionDatabase:
    """The built-in synthetic database (generated once per process)."""
    global _default_db
    if _default_db is None:
        _default_db = database.generate_synthetic()
    return _default_db


def resolve_database(path=None) -> database.MotionDatabase:
    """Load --db path, else $SCAPULA_IK_DB, else the synthetic default."""
    if path is None:
        path = os.environ.get(ENV_DB_PATH) or None
    if path is None:
        return default_database()
    return database.load_csv(path)


def load_skeleton(path=None) -> SkeletonConfig:
    if path is None:
        return SkeletonConfig()
    with open(path, "r", encoding="utf-8") as f:
        return SkeletonConfig.from_dict(json.load(f))


def solve_response(db, skeleton: SkeletonConfig, theta: float, psi: float,
                   method: str = solver.METHOD_SQUAD,
                   clamp_policy: str = solver.CLAMP_CLAMP) -> dict:
    """One full solve as a JSON-ready dict: quats, Euler reports, landmarks."""
    opts = solver.SolveOptions(method=method, clamp_policy=clamp_policy)
    applied, clamped = solver.clamp_input(solver.PoseInput(theta, psi), clamp_policy)
    pose = solver.solve(db, applied, opts)
    return response_from_pose(db, skeleton, applied, clamped, method, pose)


def response_from_pose(db, skeleton: SkeletonConfig, applied, clamped: bool,
                       method: str, pose: ShoulderPose) -> dict:
    landmarks = forward_kinematics(pose, skeleton)
    joints = {}
    for joint in JointId:
        q = pose.joint(joint)
        seq = db.grids[joint].sequence
        triple = quat_to_euler(q, seq)
        joints[joint.value] = {
            "quat": list(q),
            "euler_deg": [triple.a1, triple.a2, triple.a3],
            "sequence": seq.label,
        }
    return {
        "theta_deg": applied.theta,
        "psi_deg": applied.psi,
        "method": method,
        "clamped": clamped,
        "joints": joints,
        "landmarks": {
            "sc": list(landmarks.sc),
            "ac": list(landmarks.ac),
            "gh": list(landmarks.gh),
            "elbow": list(landmarks.elbow),
        },
    }


def info_response(db, skeleton: SkeletonConfig) -> dict:
    return {
        "theta_knots": list(db.axes.theta_knots),
        "psi_knots": list(db.axes.psi_knots),
        "sequences": {j.value: db.grids[j].sequence.label for j in JointId},
        "skeleton": skeleton.to_dict(),
        "source": db.source,
        "methods": [solver.METHOD_SQUAD, solver.METHOD_SLERP],
    }


# ---------------------------------------------------------------------------
# Sweeps

SWEEP_CSV_HEADER = "theta_deg,psi_deg,joint,qw,qx,qy,qz,elbow_x,elbow_y,elbow_z"


def parse_range_spec(spec: str):
    """`start:end:step` -> sample list; a plain number -> fixed scalar."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"bad range {spec!r} (expected start:end:step)")
        start, end, step = (float(p) for p in parts)
        return solver.sample_range(start, end, step)
    return float(spec)


def run_sweep(db, thetas, psis, method: str, clamp_policy: str = solver.CLAMP_CLAMP):
    """Timed sweep; returns (samples, elapsed_seconds).

    Each sample is (PoseInput, ShoulderPose); the timer wraps only the
    solve loop so the reported rate reflects the per-solve cost.
    """
    opts = solver.SolveOptions(method=method, clamp_policy=clamp_policy)
    t0 = time.perf_counter()
    samples = solver.sweep(db, thetas, psis, opts)
    elapsed = time.perf_counter() - t0
    return samples, elapsed


def sweep_rows(db, skeleton: SkeletonConfig, samples) -> list:
    """CSV rows (one per joint per sample) for a finished sweep."""
    rows = []
    for pose_in, pose in samples:
        lm = forward_kinematics(pose, skeleton)
        for joint in JointId:
            q = pose.joint(joint)
            rows.append(
                (pose_in.theta, pose_in.psi, joint.value,
                 q[0], q[1], q[2], q[3], lm.elbow[0], lm.elbow[1], lm.elbow[2])
            )
    return rows


def format_sweep_csv(rows) -> str:
    lines = [SWEEP_CSV_HEADER]
    for row in rows:
        lines.append(",".join(_fmt_number(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Smoothness metrics


def _elbow_positions(skeleton: SkeletonConfig, samples) -> list:
    return [forward_kinematics(pose, skeleton).elbow for _, pose in samples]


def _second_differences(points) -> list:
    out = []
    for k in range(1, len(points) - 1):
        p0, p1, p2 = points[k - 1], points[k], points[k + 1]
        dx = p2[0] - 2.0 * p1[0] + p0[0]
        dy = p2[1] - 2.0 * p1[1] + p0[1]
        dz = p2[2] - 2.0 * p1[2] + p0[2]
        out.append(math.sqrt(dx * dx + dy * dy + dz * dz))
    return out


def smoothness_report(db, skeleton: SkeletonConfig, thetas, psis,
                      clamp_policy: str = solver.CLAMP_CLAMP) -> dict:
    """Run the same sweep under both methods and compare elbow smoothness.

    The metric is the discrete second difference of the elbow position
    over the uniform sweep; squad_smoother reports whether squad's maximum
    is strictly below slerp's.  Needs at least 3 samples.
    """
    varying = thetas if isinstance(thetas, list) else psis
    if not isinstance(varying, list) or len(varying) < 3:
        raise ValueError("need >=3 samples for second differences")
    knots = db.axes.theta_knots if isinstance(thetas, list) else db.axes.psi_knots

    report = {"sweep": _describe_sweep(thetas, psis)}
    maxima = {}
    for method in (solver.METHOD_SQUAD, solver.METHOD_SLERP):
        samples, elapsed = run_sweep(db, thetas, psis, method, clamp_policy)
        elbows = _elbow_positions(skeleton, samples)
        diffs = _second_differences(elbows)
        knot_values = {}
        for k in range(1, len(varying) - 1):
            value = varying[k]
            if any(abs(value - knot) <= 1e-9 for knot in knots):
                knot_values[_fmt_number(value)] = diffs[k - 1]
        maxima[method] = max(diffs)
        report[method] = {
            "elbow": [list(p) for p in elbows],
            "max_second_diff": max(diffs),
            "mean_second_diff": sum(diffs) / len(diffs),
            "knot_second_diffs": knot_values,
            "timing": {
                "solves": len(samples),
                "seconds": elapsed,
                "microseconds_per_solve": elapsed / len(samples) * 1e6,
            },
        }
    report["squad_smoother"] = bool(
        maxima[solver.METHOD_SQUAD] < maxima[solver.METHOD_SLERP]
    )
    return report


def _describe_sweep(thetas, psis) -> dict:
    def describe(v):
        if isinstance(v, list):
            return {"start": v[0], "end": v[-1], "samples": len(v)}
        return {"fixed": v}

    return {"theta_deg": describe(thetas), "psi_deg": describe(psis)}


# ---------------------------------------------------------------------------
# Deterministic JSON


def _fmt_number(v: float) -> str:
    if not math.isfinite(v):
        raise ValueError("non-finite number in output")
    s = format(v, ".9g")
    # ".9g" can emit bare exponents like 1e-07, which JSON accepts, but
    # normalize negative zero for byte-stable output.
    return "0" if s == "-0" else s


def dumps_json(value, indent: int = 0) -> str:
    """json.dumps with floats pinned to 9 significant digits."""
    return _dump(value, indent, 0) + "\n"


def _dump(value, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1)) if indent else ""
    close_pad = " " * (indent * level) if indent else ""
    sep = ",\n" if indent else ", "
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k))}: {_dump(v, indent, level + 1)}"
            for k, v in value.items()
        ]
        body = sep.join(items)
        return "{\n" + body + "\n" + close_pad + "}" if indent else "{" + body + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        inner = [_dump(v, 0, 0) for v in value]
        return "[" + ", ".join(inner) + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _fmt_number(value)
    if isinstance(value, int):
        return str(value)
    if value is None:
        return "null"
    return json.dumps(str(value))
