"""Unit-quaternion algebra and the spherical interpolation primitives.

Quaternions are plain ``(w, x, y, z)`` tuples: Hamilton product,
scalar-first storage, right-handed frames.  Pure quaternions (the log/exp
intermediates) are ``(x, y, z)`` tuples with an implicit zero scalar part,
and 3-vectors are ``(x, y, z)`` tuples.  Plain tuples keep the hot
interpolation path allocation-light; the full shoulder solve has to stay
inside a real-time budget and numpy's per-call overhead on 4-element
arrays is an order of magnitude too slow for that.

Everything here is a pure function on immutable values, so concurrent
callers need no locking.
"""

from __future__ import annotations

import math

Quat = tuple  # (w, x, y, z)
PureQuat = tuple  # (x, y, z), scalar part implicitly 0
Vec3 = tuple  # (x, y, z)

IDENTITY: Quat = (1.0, 0.0, 0.0, 0.0)

# Below this angle slerp degenerates to normalized lerp and log/exp switch
# to their series forms; above pi minus this, slerp switches to the
# deterministic perpendicular-geodesic branch.
SMALL_ANGLE = 1e-6


class DegenerateQuaternionError(ValueError):
    """Raised when an operation receives a (near-)zero-norm quaternion."""


def normalize(q: Quat) -> Quat:
    """Scale q to unit norm.  Raises DegenerateQuaternionError on zero norm."""
    w, x, y, z = q
    n = math.sqrt(w * w + x * x + y * y + z * z)
    if n < 1e-12:
        raise DegenerateQuaternionError("cannot normalize zero-norm quaternion")
    return (w / n, x / n, y / n, z / n)


def mul(p: Quat, q: Quat) -> Quat:
    """Hamilton product p * q."""
    pw, px, py, pz = p
    qw, qx, qy, qz = q
    return (
        pw * qw - px * qx - py * qy - pz * qz,
        pw * qx + px * qw + py * qz - pz * qy,
        pw * qy - px * qz + py * qw + pz * qx,
        pw * qz + px * qy - py * qx + pz * qw,
    )


def conjugate(q: Quat) -> Quat:
    w, x, y, z = q
    return (w, -x, -y, -z)


def inverse(q: Quat) -> Quat:
    """Inverse of a unit quaternion (its conjugate)."""
    w, x, y, z = q
    return (w, -x, -y, -z)


def dot(p: Quat, q: Quat) -> float:
    return p[0] * q[0] + p[1] * q[1] + p[2] * q[2] + p[3] * q[3]


def negate(q: Quat) -> Quat:
    return (-q[0], -q[1], -q[2], -q[3])


def from_axis_angle(axis: Vec3, angle_rad: float) -> Quat:
    """Unit quaternion rotating by angle_rad about axis (need not be unit)."""
    ax, ay, az = axis
    n = math.sqrt(ax * ax + ay * ay + az * az)
    if n < 1e-12:
        raise DegenerateQuaternionError("axis must be nonzero")
    half = 0.5 * angle_rad
    s = math.sin(half) / n
    return (math.cos(half), ax * s, ay * s, az * s)


def rotate(q: Quat, v: Vec3) -> Vec3:
    """Rotate vector v by unit quaternion q."""
    w, x, y, z = q
    vx, vy, vz = v
    # t = 2 * (u x v); v' = v + w*t + u x t
    tx = 2.0 * (y * vz - z * vy)
    ty = 2.0 * (z * vx - x * vz)
    tz = 2.0 * (x * vy - y * vx)
    return (
        vx + w * tx + y * tz - z * ty,
        vy + w * ty + z * tx - x * tz,
        vz + w * tz + x * ty - y * tx,
    )


def to_matrix(q: Quat) -> tuple:
    """Rotation matrix of a unit quaternion as three row tuples (internal use)."""
    w, x, y, z = q
    return (
        (1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)),
        (2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)),
        (2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)),
    )


def qlog(q: Quat) -> PureQuat:
    """Logarithm of a unit quaternion as a pure quaternion (x, y, z).

    Returns the short-arc log: q and -q map to the same value, so the
    encoded rotation angle is always <= pi.  Near the identity the
    third-order series replaces atan2(|v|, w)/|v|, which loses precision
    as |v| -> 0.
    """
    w, x, y, z = q
    if w < 0.0:
        w, x, y, z = -w, -x, -y, -z
    vn = math.sqrt(x * x + y * y + z * z)
    if vn < SMALL_ANGLE:
        if w < 1e-12:
            raise DegenerateQuaternionError("log of zero-norm quaternion")
        s = (1.0 - vn * vn / (3.0 * w * w)) / w
    else:
        s = math.atan2(vn, w) / vn
    return (x * s, y * s, z * s)


def qexp(v: PureQuat) -> Quat:
    """Exponential of a pure quaternion (x, y, z); inverse of qlog up to sign."""
    x, y, z = v
    ang = math.sqrt(x * x + y * y + z * z)
    if ang < SMALL_ANGLE:
        s = 1.0 - ang * ang / 6.0
        w = 1.0 - ang * ang / 2.0
    else:
        s = math.sin(ang) / ang
        w = math.cos(ang)
    qx, qy, qz = x * s, y * s, z * s
    n = math.sqrt(w * w + qx * qx + qy * qy + qz * qz)
    return (w / n, qx / n, qy / n, qz / n)


def align_hemisphere(reference: Quat, q: Quat) -> Quat:
    """Return q or -q, whichever has non-negative dot product with reference."""
    if reference[0] * q[0] + reference[1] * q[1] + reference[2] * q[2] + reference[3] * q[3] < 0.0:
        return (-q[0], -q[1], -q[2], -q[3])
    return q


def angular_distance(p: Quat, q: Quat) -> float:
    """Rotation angle in radians between two unit quaternions.

    Equals 2*arccos(min(1, |<p, q>|)) but is evaluated through the chord
    between the hemisphere-aligned quaternions, which stays accurate for
    nearly identical rotations where arccos alone quantizes to ~1e-8.
    Sign-invariant: d(p, q) == d(p, -q).
    """
    qw, qx, qy, qz = q
    if p[0] * qw + p[1] * qx + p[2] * qy + p[3] * qz < 0.0:
        qw, qx, qy, qz = -qw, -qx, -qy, -qz
    dw, dx, dy, dz = p[0] - qw, p[1] - qx, p[2] - qy, p[3] - qz
    sw, sx, sy, sz = p[0] + qw, p[1] + qx, p[2] + qy, p[3] + qz
    dm = math.sqrt(dw * dw + dx * dx + dy * dy + dz * dz)
    sm = math.sqrt(sw * sw + sx * sx + sy * sy + sz * sz)
    return 4.0 * math.atan2(dm, sm)


def _perpendicular(q: Quat) -> Quat:
    # Deterministic unit 4-vector orthogonal to q: take the smallest-index
    # nonzero component and swap it (negated) with its cyclic successor.
    for k in range(4):
        if q[k] != 0.0:
            j = (k + 1) % 4
            u = [0.0, 0.0, 0.0, 0.0]
            u[k] = -q[j]
            u[j] = q[k]
            n = math.sqrt(u[k] * u[k] + u[j] * u[j])
            return (u[0] / n, u[1] / n, u[2] / n, u[3] / n)
    raise DegenerateQuaternionError("no nonzero component")


def slerp(q0: Quat, q1: Quat, t: float) -> Quat:
    """Constant-angular-speed interpolation from q0 (t=0) to q1 (t=1).

    Callers are expected to hemisphere-align the endpoints first; no sign
    flip happens here.  Angles below SMALL_ANGLE fall back to normalized
    linear interpolation; an exactly antipodal pair follows a deterministic
    perpendicular geodesic so the primitive stays total.
    """
    d = dot(q0, q1)
    if d > 1.0:
        d = 1.0
    elif d < -1.0:
        d = -1.0
    omega = math.acos(d)
    if omega < SMALL_ANGLE:
        a, b = 1.0 - t, t
    elif omega > math.pi - SMALL_ANGLE:
        u = _perpendicular(q0)
        c, s = math.cos(omega * t), math.sin(omega * t)
        w = c * q0[0] + s * u[0]
        x = c * q0[1] + s * u[1]
        y = c * q0[2] + s * u[2]
        z = c * q0[3] + s * u[3]
        n = math.sqrt(w * w + x * x + y * y + z * z)
        return (w / n, x / n, y / n, z / n)
    else:
        s = math.sin(omega)
        a = math.sin((1.0 - t) * omega) / s
        b = math.sin(t * omega) / s
    w = a * q0[0] + b * q1[0]
    x = a * q0[1] + b * q1[1]
    y = a * q0[2] + b * q1[2]
    z = a * q0[3] + b * q1[3]
    n = math.sqrt(w * w + x * x + y * y + z * z)
    return (w / n, x / n, y / n, z / n)


def inner_quadrangle(q_prev: Quat, q_i: Quat, q_next: Quat) -> Quat:
    """Inner control point for squad at keyframe q_i given its neighbors.

    s_i = q_i * exp(-(log(q_i^-1 q_next) + log(q_i^-1 q_prev)) / 4); the
    neighbors are hemisphere-aligned to q_i first so the logs stay on the
    short arc.  A constant triple returns q_i unchanged.
    """
    q_prev = align_hemisphere(q_i, q_prev)
    q_next = align_hemisphere(q_i, q_next)
    inv = (q_i[0], -q_i[1], -q_i[2], -q_i[3])
    ln = qlog(mul(inv, q_next))
    lp = qlog(mul(inv, q_prev))
    v = (-0.25 * (ln[0] + lp[0]), -0.25 * (ln[1] + lp[1]), -0.25 * (ln[2] + lp[2]))
    return mul(q_i, qexp(v))


def squad(q_i: Quat, q_ip1: Quat, s_i: Quat, s_ip1: Quat, t: float) -> Quat:
    """Spherical quadrangle blend between q_i and q_ip1 with inner points s_i, s_ip1."""
    return slerp(slerp(q_i, q_ip1, t), slerp(s_i, s_ip1, t), 2.0 * t * (1.0 - t))


def lerp(x0: Vec3, x1: Vec3, t: float) -> Vec3:
    """Linear interpolation between 3-vectors."""
    s = 1.0 - t
    return (s * x0[0] + t * x1[0], s * x0[1] + t * x1[1], s * x0[2] + t * x1[2])


def bezier3(p1: Vec3, p2: Vec3, b1: Vec3, a2: Vec3, t: float) -> Vec3:
    """Third-order Bezier through p1, p2 with auxiliary points b1, a2.

    Euclidean reference analog of squad: three linear interpolations with
    the middle blend weighted by 2t(1-t).
    """
    return lerp(lerp(p1, p2, t), lerp(b1, a2, t), 2.0 * t * (1.0 - t))
