"""Forward/inverse kinematics, DOF counting and workspace sampling.

Forward kinematics composes per-row D-H transforms
Rot_z(theta + offset) * Trans_z(d) * Trans_x(a) * Rot_x(alpha); the
closed-form position evaluates the expanded scalar expressions for the
same chain and doubles as an independent cross-check of the matrix
product. Inverse kinematics is the classic geometric construction:
base angle from the target's plan-view bearing, wrist center by backing
off the grip offset along the commanded pitch, then a two-link planar
triangle with an elbow-up/elbow-down branch choice.

Angles are degrees at every interface and radians internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from armforge.model import ArmModel, DHRow

# Tolerance for clamping acos arguments that drift past +/-1 at the
# reachability boundary.
_ACOS_EPS = 1e-9
# Joint-limit tolerance (deg) absorbing acos round-off near full
# extension; solutions inside it are clamped onto the limit.
_LIMIT_EPS_DEG = 1e-4


class KinematicsError(ValueError):
    pass


class JointLimitError(KinematicsError):
    """A joint angle falls outside its configured range."""


class UnreachableTargetError(KinematicsError):
    """Target lies outside the annulus the two-link chain can reach."""


class SingularTargetError(KinematicsError):
    """Target on the base axis: theta1 is indeterminate."""


@dataclass(frozen=True)
class JointState:
    """Five joint angles (deg) plus the gripper opening fraction 0..1."""

    theta: tuple[float, float, float, float, float]
    grip_opening: float = 1.0


@dataclass(frozen=True)
class PoseTarget:
    """Cartesian grip-tip goal (cm) with the grip pitch psi (deg,
    positive above the horizontal plane)."""

    position: tuple[float, float, float]
    psi: float = 0.0


@dataclass
class PointCloud:
    points: np.ndarray  # (N, 3) cm

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class WorkspaceExtent:
    max_reach: float  # max horizontal radius from the base axis, cm
    diameter: float  # max pairwise distance, cm


class HomogeneousTransform:
    """Rigid transform: 3x3 rotation plus translation vector (cm).

    Composes with @. Arrays are copied and frozen on construction.
    """

    __slots__ = ("rotation", "translation")

    def __init__(self, rotation: np.ndarray, translation: np.ndarray):
        r = np.array(rotation, dtype=float)
        t = np.array(translation, dtype=float)
        if r.shape != (3, 3) or t.shape != (3,):
            raise ValueError("rotation must be 3x3 and translation length 3")
        r.flags.writeable = False
        t.flags.writeable = False
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", t)

    @classmethod
    def identity(cls) -> "HomogeneousTransform":
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "HomogeneousTransform":
        m = np.asarray(m, dtype=float)
        if m.shape != (4, 4):
            raise ValueError("expected a 4x4 matrix")
        return cls(m[:3, :3], m[:3, 3])

    @property
    def matrix(self) -> np.ndarray:
        m = np.eye(4)
        m[:3, :3] = self.rotation
        m[:3, 3] = self.translation
        return m

    def __matmul__(self, other: "HomogeneousTransform") -> "HomogeneousTransform":
        return HomogeneousTransform(
            self.rotation @ other.rotation,
            self.rotation @ other.translation + self.translation,
        )

    def rigidity_error(self) -> float:
        """Max deviation from orthonormality and unit determinant."""
        r = self.rotation
        ortho = float(np.abs(r.T @ r - np.eye(3)).max())
        det = abs(float(np.linalg.det(r)) - 1.0)
        return max(ortho, det)

    def __repr__(self) -> str:
        return f"HomogeneousTransform(t={self.translation.round(6).tolist()})"


def dh_transform(row: DHRow, theta: float) -> HomogeneousTransform:
    """Transform for one D-H row at commanded joint angle theta (deg)."""
    th = math.radians(theta + row.theta_offset)
    al = math.radians(row.alpha)
    ct, st = math.cos(th), math.sin(th)
    ca, sa = math.cos(al), math.sin(al)
    rotation = np.array(
        [
            [ct, -st * ca, st * sa],
            [st, ct * ca, -ct * sa],
            [0.0, sa, ca],
        ]
    )
    translation = np.array([row.a * ct, row.a * st, row.d])
    return HomogeneousTransform(rotation, translation)


def check_joint_limits(m: ArmModel, q: JointState) -> None:
    for i, (angle, (lo, hi)) in enumerate(zip(q.theta, m.joint_limits)):
        if not (lo - _LIMIT_EPS_DEG <= angle <= hi + _LIMIT_EPS_DEG):
            raise JointLimitError(
                f"theta{i + 1}={angle:.4f} deg outside joint limits [{lo}, {hi}]"
            )
    if not (0.0 <= q.grip_opening <= 1.0):
        raise JointLimitError(f"grip_opening={q.grip_opening} outside [0, 1]")


def chain_frames(m: ArmModel, q: JointState) -> list[HomogeneousTransform]:
    """Base frame plus the cumulative transform after each of the 5 rows."""
    frames = [HomogeneousTransform.identity()]
    t = frames[0]
    for row, angle in zip(m.dh_table, q.theta):
        t = t @ dh_transform(row, angle)
        frames.append(t)
    return frames


def forward_kinematics(m: ArmModel, q: JointState) -> HomogeneousTransform:
    """Base-to-grip-tip transform; raises JointLimitError out of range."""
    check_joint_limits(m, q)
    return chain_frames(m, q)[-1]


def wrist_position(m: ArmModel, q: JointState) -> np.ndarray:
    """Origin of the wrist frame (tip minus the grip offset d5)."""
    check_joint_limits(m, q)
    return chain_frames(m, q)[4].translation


def closed_form_position(m: ArmModel, q: JointState) -> np.ndarray:
    """Grip-tip position from the expanded scalar expressions.

    Independent of the matrix product: evaluates d_x, d_y, d_z directly
    with c_i = cos(theta_i), s_i = sin(theta_i), theta_4 including its
    90-degree offset.
    """
    t = [math.radians(q.theta[i] + m.dh_table[i].theta_offset) for i in range(5)]
    c1, c2, c3, c4 = (math.cos(t[i]) for i in range(4))
    s1, s2, s3, s4 = (math.sin(t[i]) for i in range(4))
    a3, a4, d5, d1 = m.a3, m.a4, m.d5, m.d1
    dx = (-(c1 * c2 * c3 - c1 * s2 * s3) * s4 + (-c1 * c2 * s3 - c1 * s2 * c3) * c4) * d5 \
        + (c1 * c2 * c3 - c1 * s2 * s3) * a4 + c1 * c2 * a3
    dy = (-(s1 * c2 * c3 - s1 * s2 * s3) * s4 + (-s1 * c2 * s3 - s1 * s2 * c3) * c4) * d5 \
        + (s1 * c2 * c3 - s1 * s2 * s3) * a4 + s1 * c2 * a3
    dz = (-(s2 * c3 + c2 * s3) * s4 + (-s2 * s3 + c2 * c3) * c4) * d5 \
        + (s2 * c3 + c2 * s3) * a4 + s2 * a3 + d1
    return np.array([dx, dy, dz])


def grip_pitch(m: ArmModel, q: JointState) -> float:
    """Achieved grip pitch psi (deg): elevation of the wrist-to-tip
    direction, measured in the vertical plane through the tip's plan-view
    bearing. Positive pitch points above the horizon."""
    frames = chain_frames(m, q)
    tip = frames[5].translation
    approach = frames[5].rotation[:, 2]  # tip - wrist = d5 * approach
    theta1 = math.atan2(tip[1], tip[0])
    radial = approach[0] * math.cos(theta1) + approach[1] * math.sin(theta1)
    return math.degrees(math.atan2(approach[2], radial))


def wrap_deg(angle: float) -> float:
    """Wrap to (-180, 180]."""
    a = (angle + 180.0) % 360.0 - 180.0
    return 180.0 if a == -180.0 else a


def _fit_into_limits(angle: float, lo: float, hi: float, name: str) -> float:
    for shift in (0.0, -360.0, 360.0):
        v = angle + shift
        if lo - _LIMIT_EPS_DEG <= v <= hi + _LIMIT_EPS_DEG:
            return min(max(v, lo), hi)
    raise JointLimitError(f"{name}={angle:.4f} deg outside joint limits [{lo}, {hi}]")


def inverse_kinematics(m: ArmModel, target: PoseTarget, branch: str = "elbow-up") -> JointState:
    """Joint angles placing the grip tip at target.position with pitch psi.

    branch selects the elbow-up or elbow-down planar solution. Raises
    SingularTargetError when the target sits on the base axis (theta1
    indeterminate), UnreachableTargetError when the wrist center lies
    outside the two-link annulus, and JointLimitError when the solved
    angles cannot be folded into the configured joint ranges. theta5 is a
    roll about the approach axis and does not affect the tip; it is
    returned as 0.
    """
    if branch not in ("elbow-up", "elbow-down"):
        raise ValueError(f"branch must be 'elbow-up' or 'elbow-down', got {branch!r}")
    x, y, z = target.position
    if not all(math.isfinite(v) for v in (x, y, z)):
        raise ValueError("target position must be finite")
    if x == 0.0 and y == 0.0:
        raise SingularTargetError("singular: theta1 indeterminate (target on the base axis)")

    a3, a4, d5, d1 = m.a3, m.a4, m.d5, m.d1
    theta1 = math.degrees(math.atan2(y, x))
    c1, s1 = math.cos(math.radians(theta1)), math.sin(math.radians(theta1))
    psi = math.radians(target.psi)

    # Wrist center: back off the grip offset along the pitch direction.
    wx = x - d5 * math.cos(psi) * c1
    wy = y - d5 * math.cos(psi) * s1
    wz = z - d5 * math.sin(psi)

    # Planar coordinates in the vertical plane through theta1. The radial
    # coordinate keeps its sign so wrist centers behind the base axis
    # solve correctly.
    rho = wx * c1 + wy * s1
    h = wz - d1
    c = math.hypot(rho, h)

    if c > a3 + a4 + _ACOS_EPS:
        raise UnreachableTargetError(
            f"unreachable: wrist distance {c:.4f} cm exceeds a3+a4 = {a3 + a4:.4f} cm"
        )
    if c < abs(a3 - a4) - _ACOS_EPS:
        raise UnreachableTargetError(
            f"unreachable: wrist distance {c:.4f} cm inside |a3-a4| = {abs(a3 - a4):.4f} cm"
        )

    big_a1 = math.degrees(math.atan2(h, rho))
    cos_a2 = (a3 * a3 + c * c - a4 * a4) / (2.0 * a3 * c) if c > 0 else 1.0
    big_a2 = math.degrees(math.acos(min(max(cos_a2, -1.0), 1.0)))
    cos_elbow = (a3 * a3 + a4 * a4 - c * c) / (2.0 * a3 * a4)
    interior = math.degrees(math.acos(min(max(cos_elbow, -1.0), 1.0)))

    if branch == "elbow-up":
        theta2 = big_a1 + big_a2
        theta3 = -(180.0 - interior)
    else:
        theta2 = big_a1 - big_a2
        theta3 = 180.0 - interior

    # Wrist pitch closes the chain: total elevation of the grip must equal
    # psi. The -180 folds in the row-4 construction offset.
    theta4 = target.psi - 180.0 - theta2 - theta3

    limits = m.joint_limits
    solved = (
        _fit_into_limits(wrap_deg(theta1), *limits[0], name="theta1"),
        _fit_into_limits(wrap_deg(theta2), *limits[1], name="theta2"),
        _fit_into_limits(wrap_deg(theta3), *limits[2], name="theta3"),
        _fit_into_limits(wrap_deg(theta4), *limits[3], name="theta4"),
        _fit_into_limits(0.0, *limits[4], name="theta5"),
    )
    return JointState(theta=solved)


def degrees_of_freedom(n_links: int, j1: int, j2: int) -> int:
    """Gruebler-Kutzbach mobility of a planar chain: 3(n-1) - 2*j1 - j2."""
    if n_links < 1:
        raise ValueError("n_links must be >= 1")
    if j1 < 0 or j2 < 0:
        raise ValueError("joint counts must be >= 0")
    return 3 * (n_links - 1) - 2 * j1 - j2


def _grid_positions(m: ArmModel, steps_per_joint: int) -> np.ndarray:
    """Vectorized closed-form tip positions over the theta1..theta4 grid."""
    axes = [np.linspace(lo, hi, steps_per_joint) for lo, hi in m.joint_limits[:4]]
    t1, t2, t3, t4 = (g.ravel() for g in np.meshgrid(*axes, indexing="ij"))
    off = [row.theta_offset for row in m.dh_table]
    t1r = np.radians(t1 + off[0])
    t2r = np.radians(t2 + off[1])
    t3r = np.radians(t3 + off[2])
    t4r = np.radians(t4 + off[3])
    c1, s1 = np.cos(t1r), np.sin(t1r)
    c2, s2 = np.cos(t2r), np.sin(t2r)
    c23 = np.cos(t2r + t3r)
    s23 = np.sin(t2r + t3r)
    s234 = np.sin(t2r + t3r + t4r)
    c234 = np.cos(t2r + t3r + t4r)
    a3, a4, d5, d1 = m.a3, m.a4, m.d5, m.d1
    radial = a3 * c2 + a4 * c23 - d5 * s234
    x = c1 * radial
    y = s1 * radial
    z = d1 + a3 * s2 + a4 * s23 + d5 * c234
    return np.column_stack([x, y, z])


def sample_workspace(m: ArmModel, steps_per_joint: int, dedup: bool = True) -> PointCloud:
    """Grip-tip positions on a regular joint-space grid.

    Sweeps theta1..theta4 over their limits with steps_per_joint points
    each; theta5 only rolls about the approach axis and never moves the
    tip, so it is excluded. Points are deduplicated to 1e-6 cm unless
    dedup is False.
    """
    if steps_per_joint < 2:
        raise ValueError("steps_per_joint must be >= 2")
    pts = _grid_positions(m, steps_per_joint)
    if dedup:
        pts = np.unique(np.round(pts, 6), axis=0)
    return PointCloud(points=pts)


def workspace_extent(pc: PointCloud) -> WorkspaceExtent:
    """Horizontal max reach and overall diameter of a point cloud.

    max_reach is measured in the horizontal plane through the shoulder
    (radius from the base axis); diameter is the maximum pairwise
    distance, computed over the convex hull for large clouds.
    """
    pts = np.asarray(pc.points, dtype=float)
    if pts.size == 0:
        raise ValueError("point cloud is empty")
    max_reach = float(np.hypot(pts[:, 0], pts[:, 1]).max())

    candidates = pts
    if len(pts) > 4000:
        from scipy.spatial import ConvexHull, QhullError

        try:
            candidates = pts[ConvexHull(pts).vertices]
        except QhullError:
            # Degenerate (coplanar/collinear) cloud; joggle the input so
            # qhull still yields the hull vertices.
            candidates = pts[ConvexHull(pts, qhull_options="QJ").vertices]
    if len(candidates) == 1:
        return WorkspaceExtent(max_reach=max_reach, diameter=0.0)
    diff = candidates[:, None, :] - candidates[None, :, :]
    diameter = float(np.sqrt((diff * diff).sum(axis=2)).max())
    return WorkspaceExtent(max_reach=max_reach, diameter=diameter)


def point_cloud_to_csv(pc: PointCloud) -> str:
    """CSV export: x,y,z header, one point per line, cm, 6 decimals."""
    lines = ["x,y,z"]
    for x, y, z in pc.points:
        lines.append(f"{x:.6f},{y:.6f},{z:.6f}")
    return "\n".join(lines) + "\n"


def point_cloud_to_ply(pc: PointCloud) -> str:
    """ASCII PLY export of the cloud vertices."""
    header = [
        "ply",
        "format ascii 1.0",
        f"element vertex {len(pc.points)}",
        "property float x",
        "property float y",
        "property float z",
        "end_header",
    ]
    body = [f"{x:.6f} {y:.6f} {z:.6f}" for x, y, z in pc.points]
    return "\n".join(header + body) + "\n"
