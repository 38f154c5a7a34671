"""Rigid-body pose algebra on numpy arrays.

Conventions used across the package:
  * a Pose maps points from its own frame into the parent frame,
  * rotation matrices are world-from-local, columns are the local axes,
  * the forward axis is +x (rotation column 0),
  * angles are radians unless a name says otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_EPS = 1e-12


def _as_vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=np.float64).reshape(3)
    return a.copy()


def _as_rot(R) -> np.ndarray:
    a = np.asarray(R, dtype=np.float64).reshape(3, 3)
    return a.copy()


@dataclass(frozen=True)
class Pose:
    """Position + rotation of a child frame expressed in its parent frame."""

    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        object.__setattr__(self, "position", _as_vec3(self.position))
        object.__setattr__(self, "rotation", _as_rot(self.rotation))

    def as_matrix(self) -> np.ndarray:
        """Pack into a 4x4 homogeneous transform."""
        T = np.eye(4)
        T[:3, :3] = self.rotation
        T[:3, 3] = self.position
        return T

    @classmethod
    def from_matrix(cls, T) -> "Pose":
        T = np.asarray(T, dtype=np.float64)
        return cls(T[:3, 3], T[:3, :3])


def identity_pose() -> Pose:
    return Pose()


def to_transform(position, rotation) -> Pose:
    """Build the transform carrying a (position, rotation) pair."""
    return Pose(position, rotation)


def from_transform(pose: Pose) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of to_transform: recover the (position, rotation) pair."""
    return pose.position.copy(), pose.rotation.copy()


def compose(a: Pose, b: Pose) -> Pose:
    """a then b: the pose of b's frame seen from a's parent."""
    return Pose(a.rotation @ b.position + a.position, a.rotation @ b.rotation)


def inverse(a: Pose) -> Pose:
    Rt = a.rotation.T
    return Pose(-(Rt @ a.position), Rt)


def transform_point(a: Pose, point) -> np.ndarray:
    """Map a point from a's frame into the parent frame."""
    return a.rotation @ _as_vec3(point) + a.position


def rot_x(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rot_axis_angle(axis, angle: float) -> np.ndarray:
    """Rodrigues rotation about a unit axis."""
    a = np.asarray(axis, dtype=np.float64).reshape(3)
    n = np.linalg.norm(a)
    if n < _EPS:
        raise ValueError("zero-length axis")
    x, y, z = a / n
    K = np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
    return np.eye(3) + math.sin(angle) * K + (1.0 - math.cos(angle)) * (K @ K)


def is_rotation(R, tol: float = 1e-9) -> bool:
    R = np.asarray(R, dtype=np.float64)
    if R.shape != (3, 3):
        return False
    ortho = np.allclose(R.T @ R, np.eye(3), atol=tol)
    return ortho and np.linalg.det(R) > 0


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniform-ish random rotation via QR with a sign fix."""
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q *= np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 2] = -q[:, 2]
    return q


def rot_to_6d(R) -> np.ndarray:
    """First two rotation columns, flattened column-major (6 reals)."""
    R = _as_rot(R)
    return np.concatenate([R[:, 0], R[:, 1]])


def rot_from_6d(v) -> np.ndarray:
    """Gram-Schmidt decode of the two-column encoding.

    Raises ValueError on degenerate input (near-zero or near-parallel columns).
    """
    v = np.asarray(v, dtype=np.float64).reshape(6)
    a, b = v[:3], v[3:]
    na = np.linalg.norm(a)
    if na < 1e-8:
        raise ValueError("first column is near zero")
    c0 = a / na
    b_orth = b - (c0 @ b) * c0
    nb = np.linalg.norm(b_orth)
    if nb < 1e-8:
        raise ValueError("columns are near parallel")
    c1 = b_orth / nb
    c2 = np.cross(c0, c1)
    return np.column_stack([c0, c1, c2])


def wrap_angle(angle: float) -> float:
    """Wrap into (-pi, pi]."""
    return math.pi - (math.pi - angle) % (2.0 * math.pi)


def yaw_error(a, b) -> float:
    """Signed yaw from direction b to direction a, wrapped into (-pi, pi]."""
    a = np.asarray(a, dtype=np.float64).reshape(2)
    b = np.asarray(b, dtype=np.float64).reshape(2)
    if np.linalg.norm(a) < _EPS or np.linalg.norm(b) < _EPS:
        raise ValueError("zero-length direction")
    return wrap_angle(math.atan2(a[1], a[0]) - math.atan2(b[1], b[0]))


def heading_of(pose: Pose) -> np.ndarray:
    """Unit horizontal projection of the pose's forward (+x) axis.

    Raises ValueError when the forward axis is near vertical.
    """
    f = pose.rotation[:, 0]
    h = f[:2]
    n = np.linalg.norm(h)
    if n < 1e-6:
        raise ValueError("forward axis is near vertical; heading undefined")
    return h / n


def heading_from_yaw(yaw: float) -> np.ndarray:
    return np.array([math.cos(yaw), math.sin(yaw)])


def perp_heading(h) -> np.ndarray:
    """Left perpendicular of a planar direction: (x, y) -> (-y, x)."""
    h = np.asarray(h, dtype=np.float64).reshape(2)
    return np.array([-h[1], h[0]])


def yaw_of(pose: Pose) -> float:
    """Yaw of the heading; same domain restrictions as heading_of."""
    h = heading_of(pose)
    return math.atan2(h[1], h[0])
