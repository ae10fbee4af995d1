"""Shoulder complex model: joints, Euler conventions, and forward kinematics.

The chain is thorax -> clavicle (SC joint) -> scapula (AC joint) ->
humerus (GH joint); the sternum and ribs are treated as the fixed world
frame.  The scapulothoracic interface is not a joint here: its motion is
the combined effect of SC and AC.

Per-joint angle conventions follow the ISB-style recommendations:
SC and AC decompose as intrinsic Y-X'-Z'' and GH as intrinsic Y-X'-Y''.
The sequences are configuration, not constants, so a dataset that was
reduced with a different convention can declare its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from . import quat
from .quat import Quat, Vec3

GIMBAL_MARGIN_DEG = 0.1

_AXIS_INDEX = {"X": 0, "Y": 1, "Z": 2}
_UNIT_AXES = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))


class GimbalSingularityError(ValueError):
    """Middle Euler angle too close to the sequence's singular value."""


class JointId(Enum):
    SC = "SC"
    AC = "AC"
    GH = "GH"


@dataclass(frozen=True)
class EulerSequence:
    """Ordered rotation-axis triple, e.g. axes='YXZ' applied intrinsically."""

    axes: str
    intrinsic: bool = True

    def __post_init__(self):
        if len(self.axes) != 3 or any(a not in _AXIS_INDEX for a in self.axes):
            raise ValueError(f"axes must be three of X/Y/Z, got {self.axes!r}")
        if self.axes[1] == self.axes[0] or self.axes[1] == self.axes[2]:
            raise ValueError(f"middle axis must differ from its neighbors: {self.axes!r}")

    @property
    def symmetric(self) -> bool:
        """True for proper-Euler sequences (first and third axes equal)."""
        return self.axes[0] == self.axes[2]

    @property
    def label(self) -> str:
        return f"{self.axes}-{'intrinsic' if self.intrinsic else 'extrinsic'}"

    @classmethod
    def parse(cls, label: str) -> "EulerSequence":
        parts = label.strip().split("-")
        if len(parts) != 2 or parts[1] not in ("intrinsic", "extrinsic"):
            raise ValueError(f"bad sequence label {label!r} (expected e.g. 'YXZ-intrinsic')")
        return cls(axes=parts[0].upper(), intrinsic=parts[1] == "intrinsic")

    def singular_values(self) -> tuple:
        """Middle angles (degrees) where the decomposition loses a DOF."""
        return (0.0, 180.0, -180.0) if self.symmetric else (90.0, -90.0)

    def check_gimbal_safe(self, a2_deg: float) -> None:
        if self.symmetric:
            safe = GIMBAL_MARGIN_DEG < a2_deg < 180.0 - GIMBAL_MARGIN_DEG
        else:
            safe = -90.0 + GIMBAL_MARGIN_DEG < a2_deg < 90.0 - GIMBAL_MARGIN_DEG
        if not safe:
            raise GimbalSingularityError(
                f"middle angle {a2_deg}° is outside the gimbal-safe range of {self.axes}"
            )


YXZ_INTRINSIC = EulerSequence("YXZ")
YXY_INTRINSIC = EulerSequence("YXY")

# SC: protraction / elevation / posterior rotation; AC: internal rotation /
# upward rotation / posterior tilt; GH: plane of elevation / elevation /
# axial rotation.
JOINT_SEQUENCES = {
    JointId.SC: YXZ_INTRINSIC,
    JointId.AC: YXZ_INTRINSIC,
    JointId.GH: YXY_INTRINSIC,
}


def joint_sequence(joint: JointId) -> EulerSequence:
    """Default angle-decomposition convention for a joint."""
    return JOINT_SEQUENCES[joint]


@dataclass(frozen=True)
class EulerTriple:
    """Three rotation angles in degrees under a declared sequence.

    ``degenerate`` marks a decomposition taken at a gimbal singularity,
    where the canonical a3=0 split was substituted.
    """

    a1: float
    a2: float
    a3: float
    sequence: EulerSequence
    degenerate: bool = False

    @property
    def angles(self) -> tuple:
        return (self.a1, self.a2, self.a3)


def _elemental(axis_letter: str, angle_deg: float) -> Quat:
    half = math.radians(angle_deg) * 0.5
    s = math.sin(half)
    i = _AXIS_INDEX[axis_letter]
    v = [0.0, 0.0, 0.0]
    v[i] = s
    return (math.cos(half), v[0], v[1], v[2])


def euler_to_quat(a1: float, a2: float, a3: float, sequence: EulerSequence) -> Quat:
    """Compose the three elemental rotations of an Euler triple (degrees).

    Intrinsic sequences multiply left to right (each rotation about the
    freshly rotated axis); extrinsic reverses the order.  Raises
    GimbalSingularityError when a2 sits within 0.1 degrees of the
    sequence's singular values.
    """
    sequence.check_gimbal_safe(a2)
    q1 = _elemental(sequence.axes[0], a1)
    q2 = _elemental(sequence.axes[1], a2)
    q3 = _elemental(sequence.axes[2], a3)
    if sequence.intrinsic:
        return quat.mul(quat.mul(q1, q2), q3)
    return quat.mul(quat.mul(q3, q2), q1)


def triple_to_quat(triple: EulerTriple) -> Quat:
    return euler_to_quat(triple.a1, triple.a2, triple.a3, triple.sequence)


def _is_even_permutation(i: int, j: int, k: int) -> bool:
    return (i, j, k) in ((0, 1, 2), (1, 2, 0), (2, 0, 1))


def quat_to_euler(q: Quat, sequence: EulerSequence) -> EulerTriple:
    """Decompose a unit quaternion into the sequence's angles (degrees).

    At a gimbal singularity the a3 = 0 canonical decomposition is returned
    with ``degenerate=True`` instead of raising, so reporting stays total.
    """
    seq = sequence
    if not seq.intrinsic:
        # Extrinsic a1,a2,a3 about fixed axes equals intrinsic a3,a2,a1
        # over the reversed axis string.
        inner = quat_to_euler(q, EulerSequence(seq.axes[::-1], intrinsic=True))
        return EulerTriple(inner.a3, inner.a2, inner.a1, seq, inner.degenerate)

    m = quat.to_matrix(q)
    i = _AXIS_INDEX[seq.axes[0]]
    j = _AXIS_INDEX[seq.axes[1]]

    if seq.symmetric:
        k = 3 - i - j
        eps = 1.0 if _is_even_permutation(i, j, k) else -1.0
        c2 = max(-1.0, min(1.0, m[i][i]))
        if abs(c2) >= 1.0 - 1e-12:
            # a2 at 0 or 180: only a1 +/- a3 is determined; pin a3 = 0.
            a2 = 0.0 if c2 > 0.0 else 180.0
            sign = -eps if c2 > 0.0 else eps
            a1 = math.atan2(sign * m[j][k], m[j][j])
            return EulerTriple(math.degrees(a1), a2, 0.0, seq, degenerate=True)
        a2 = math.acos(c2)
        a1 = math.atan2(m[j][i], -eps * m[k][i])
        a3 = math.atan2(m[i][j], eps * m[i][k])
    else:
        k = _AXIS_INDEX[seq.axes[2]]
        eps = 1.0 if _is_even_permutation(i, j, k) else -1.0
        s2 = max(-1.0, min(1.0, eps * m[i][k]))
        if abs(s2) >= 1.0 - 1e-12:
            a2 = math.copysign(math.pi / 2.0, s2)
            a1 = math.atan2(eps * m[k][j], m[j][j])
            return EulerTriple(math.degrees(a1), math.degrees(a2), 0.0, seq, degenerate=True)
        a2 = math.asin(s2)
        a1 = math.atan2(-eps * m[j][k], m[k][k])
        a3 = math.atan2(-eps * m[i][j], m[i][i])
    return EulerTriple(math.degrees(a1), math.degrees(a2), math.degrees(a3), seq)


@dataclass(frozen=True)
class SkeletonConfig:
    """Segment lengths and rest-frame offsets for the thorax->elbow chain.

    The clavicle's long axis is local +z (SC toward AC); the humeral shaft
    is local y, so the elbow hangs at -y from the GH center in the rest
    pose.  Defaults are plausible adult dimensions for visualization.
    """

    clavicle_length: float = 0.17
    scapula_offset: Vec3 = (0.01, -0.02, 0.10)
    humerus_length: float = 0.30
    thorax_origin: Vec3 = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not (self.clavicle_length > 0.0 and self.humerus_length > 0.0):
            raise ValueError("segment lengths must be positive")
        for v in (*self.scapula_offset, *self.thorax_origin):
            if not math.isfinite(v):
                raise ValueError("offsets must be finite")

    def to_dict(self) -> dict:
        return {
            "clavicle_length": self.clavicle_length,
            "scapula_offset": list(self.scapula_offset),
            "humerus_length": self.humerus_length,
            "thorax_origin": list(self.thorax_origin),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SkeletonConfig":
        kwargs = {}
        if "clavicle_length" in d:
            kwargs["clavicle_length"] = float(d["clavicle_length"])
        if "humerus_length" in d:
            kwargs["humerus_length"] = float(d["humerus_length"])
        if "scapula_offset" in d:
            kwargs["scapula_offset"] = tuple(float(v) for v in d["scapula_offset"])
        if "thorax_origin" in d:
            kwargs["thorax_origin"] = tuple(float(v) for v in d["thorax_origin"])
        return cls(**kwargs)


@dataclass(frozen=True)
class ShoulderPose:
    """Parent-relative rotations of the SC, AC, and GH joints."""

    q_sc: Quat
    q_ac: Quat
    q_gh: Quat

    def joint(self, joint: JointId) -> Quat:
        return {JointId.SC: self.q_sc, JointId.AC: self.q_ac, JointId.GH: self.q_gh}[joint]


@dataclass(frozen=True)
class LandmarkSet:
    """Joint-center positions in thorax coordinates (meters)."""

    sc: Vec3
    ac: Vec3
    gh: Vec3
    elbow: Vec3


def forward_kinematics(pose: ShoulderPose, cfg: SkeletonConfig) -> LandmarkSet:
    """Chain the pose rotations from the thorax out to the elbow point.

    Each joint rotation is relative to its parent segment, so world
    orientations compose down the chain; segment lengths are preserved
    exactly because only rotations and translations are applied.
    """
    sc = cfg.thorax_origin
    r_c = pose.q_sc
    dx, dy, dz = quat.rotate(r_c, (0.0, 0.0, cfg.clavicle_length))
    ac = (sc[0] + dx, sc[1] + dy, sc[2] + dz)
    r_s = quat.mul(r_c, pose.q_ac)
    dx, dy, dz = quat.rotate(r_s, cfg.scapula_offset)
    gh = (ac[0] + dx, ac[1] + dy, ac[2] + dz)
    r_h = quat.mul(r_s, pose.q_gh)
    dx, dy, dz = quat.rotate(r_h, (0.0, -cfg.humerus_length, 0.0))
    elbow = (gh[0] + dx, gh[1] + dy, gh[2] + dz)
    return LandmarkSet(sc=sc, ac=ac, gh=gh, elbow=elbow)
