"""Simulated onboard sensing: head camera, drifting odometry, marker detections.

The simulated world is a SensorScene: ground-truth base and object pose
sequences at a fixed step, plus the sensor models that corrupt them.
Everything is seeded and reproducible; zeroing all noise parameters makes
every sensor exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import se3
from .se3 import Pose


@dataclass(frozen=True)
class CameraModel:
    """Forward-down head camera with a limited detection envelope."""

    h_fov_deg: float = 86.0
    v_fov_deg: float = 57.0
    mount_offset: tuple = (0.08, 0.01, 0.40)
    mount_pitch_deg: float = 40.0
    max_range: float = 2.5
    facing_limit_deg: float = 60.0
    facing_jitter_deg: float = 10.0


@dataclass(frozen=True)
class OdometryModel:
    """Accumulating base-odometry error.

    Translation drift grows as drift_rate * path length along a per-episode
    random direction; heading drift is a Gaussian random walk scaled per
    meter; noise_sigma adds independent per-step position noise.
    """

    drift_rate: float = 0.005
    heading_drift_rate: float = 0.001
    noise_sigma: float = 0.0
    seed: int = 0


@dataclass(frozen=True)
class TagModel:
    """Fiducial detection noise: the marker spans a square on the object's
    front (+x) face, centered at the object origin."""

    position_noise_sigma: float = 0.02
    rotation_noise_deg: float = 2.0
    dropout_prob: float = 0.1
    half_size: float = 0.08
    seed: int = 0


@dataclass(frozen=True)
class SensorScene:
    robot_gt: list
    object_gt: list
    camera: CameraModel = field(default_factory=CameraModel)
    odom: OdometryModel = field(default_factory=OdometryModel)
    tags: TagModel = field(default_factory=TagModel)
    dt: float = 0.02

    def __post_init__(self):
        if len(self.robot_gt) != len(self.object_gt):
            raise ValueError("robot and object tracks differ in length")
        if self.dt <= 0:
            raise ValueError("dt must be positive")

    def __len__(self):
        return len(self.robot_gt)


def mount_pose(camera: CameraModel) -> Pose:
    """Camera pose in the base frame."""
    return Pose(np.asarray(camera.mount_offset), se3.rot_y(math.radians(camera.mount_pitch_deg)))


def camera_pose(base: Pose, camera: CameraModel) -> Pose:
    """Camera pose in the world, given the base pose."""
    return se3.compose(base, mount_pose(camera))


def tag_corners(object_pose: Pose, half_size: float) -> np.ndarray:
    """World positions of the marker corners (marker plane = object yz)."""
    corners = np.array(
        [
            [0.0, -half_size, -half_size],
            [0.0, half_size, -half_size],
            [0.0, half_size, half_size],
            [0.0, -half_size, half_size],
        ]
    )
    return corners @ object_pose.rotation.T + object_pose.position


def visibility(
    cam_pose: Pose,
    object_pose: Pose,
    camera: CameraModel,
    jitter_deg: float = 0.0,
    tag_half_size: float | None = None,
) -> bool:
    """Whether the object's marker is detectable from the given camera pose.

    Requires all of: the marker face oriented toward the camera within the
    (jittered) facing limit, every marker corner inside both FOV half-angles,
    and the mean marker position within max_range.
    """
    if abs(jitter_deg) > camera.facing_jitter_deg + 1e-12:
        raise ValueError("jitter outside the configured range")
    half = 0.08 if tag_half_size is None else tag_half_size

    center = object_pose.position
    to_cam = cam_pose.position - center
    dist = np.linalg.norm(to_cam)
    if dist > camera.max_range or dist < 1e-9:
        return False

    normal = object_pose.rotation[:, 0]
    cosang = float(np.clip(normal @ (to_cam / dist), -1.0, 1.0))
    if math.degrees(math.acos(cosang)) > camera.facing_limit_deg + jitter_deg:
        return False

    inv_cam = se3.inverse(cam_pose)
    for corner in tag_corners(object_pose, half):
        q = se3.transform_point(inv_cam, corner)
        if q[0] <= 0:
            return False
        if abs(math.degrees(math.atan2(q[1], q[0]))) > camera.h_fov_deg / 2:
            return False
        if abs(math.degrees(math.atan2(q[2], math.hypot(q[0], q[1])))) > camera.v_fov_deg / 2:
            return False
    return True


def simulate_odometry(scene: SensorScene) -> list:
    """Base poses relative to the starting base frame, with accumulated error.

    The first sample is exactly identity. With all error parameters zero the
    output equals the ground-truth relative motion.
    """
    model = scene.odom
    rng = np.random.default_rng(model.seed)
    theta = rng.uniform(0.0, 2.0 * math.pi)
    drift_dir = np.array([math.cos(theta), math.sin(theta), 0.0])

    base0_inv = se3.inverse(scene.robot_gt[0])
    out = [se3.identity_pose()]
    cum_dist = 0.0
    heading_err = 0.0
    prev = scene.robot_gt[0].position
    for gt in scene.robot_gt[1:]:
        rel = se3.compose(base0_inv, gt)
        ds = float(np.linalg.norm(gt.position - prev))
        prev = gt.position
        cum_dist += ds
        heading_err += model.heading_drift_rate * ds * rng.standard_normal()
        noise = rng.normal(0.0, model.noise_sigma, size=3) if model.noise_sigma > 0 else np.zeros(3)
        Rerr = se3.rot_z(heading_err)
        pos = Rerr @ rel.position + model.drift_rate * cum_dist * drift_dir + noise
        out.append(Pose(pos, Rerr @ rel.rotation))
    return out


def simulate_detection(scene: SensorScene, t: int, visible: bool) -> Pose | None:
    """Noisy marker pose in the camera frame at step t, or None.

    Draws are keyed by (seed, t), so results do not depend on call order.
    """
    if not visible:
        return None
    model = scene.tags
    rng = np.random.default_rng([model.seed, t])
    if model.dropout_prob > 0 and rng.random() < model.dropout_prob:
        return None
    cam = camera_pose(scene.robot_gt[t], scene.camera)
    truth = se3.compose(se3.inverse(cam), scene.object_gt[t])
    pos = truth.position.copy()
    rot = truth.rotation
    if model.position_noise_sigma > 0:
        pos = pos + rng.normal(0.0, model.position_noise_sigma, size=3)
    if model.rotation_noise_deg > 0:
        axis = rng.standard_normal(3)
        axis /= np.linalg.norm(axis)
        angle = rng.normal(0.0, math.radians(model.rotation_noise_deg))
        rot = se3.rot_axis_angle(axis, angle) @ rot
    return Pose(pos, rot)


def _smoothstep(u: float) -> float:
    return u * u * (3.0 - 2.0 * u)


class _Track:
    """Accumulates (xy, yaw) base samples and object poses segment by segment."""

    def __init__(self, xy, yaw, base_height, dt):
        self.dt = dt
        self.base_height = base_height
        self.xy = [np.asarray(xy, dtype=float)]
        self.yaw = [float(yaw)]

    def _steps(self, duration):
        return max(1, round(duration / self.dt))

    def line_to(self, target_xy, speed):
        p0 = self.xy[-1]
        p1 = np.asarray(target_xy, dtype=float)
        dist = float(np.linalg.norm(p1 - p0))
        if dist < 1e-9:
            return
        n = self._steps(dist / speed)
        yaw = math.atan2(p1[1] - p0[1], p1[0] - p0[0])
        self.yaw[-1] = yaw  # face the travel direction from the segment start
        for i in range(1, n + 1):
            self.xy.append(p0 + (p1 - p0) * _smoothstep(i / n))
            self.yaw.append(yaw)

    def turn_to(self, target_yaw, rate=1.0):
        y0 = self.yaw[-1]
        delta = se3.wrap_angle(target_yaw - y0)
        n = self._steps(max(abs(delta) / rate, 0.3))
        for i in range(1, n + 1):
            self.xy.append(self.xy[-1].copy())
            self.yaw.append(y0 + delta * _smoothstep(i / n))
        self.yaw[-1] = target_yaw

    def pause(self, duration):
        for _ in range(self._steps(duration)):
            self.xy.append(self.xy[-1].copy())
            self.yaw.append(self.yaw[-1])

    def poses(self):
        return [
            Pose(np.array([p[0], p[1], self.base_height]), se3.rot_z(y))
            for p, y in zip(self.xy, self.yaw)
        ]


def scripted_trajectory(kind: str, **params) -> SensorScene:
    """Build a kinematic ground-truth scene for one of the canned behaviors.

    Kinds: "approach" (walk straight at the object), "approach_turn_sit"
    (walk to the seat, then align heading with it), "approach_carry" (walk to
    the box, lift it, carry it to the goal, set it down).
    Unknown kinds and unreachable geometry raise ValueError.
    """
    p = dict(params)
    start_xy = np.asarray(p.pop("start_xy", (0.0, 0.0)), dtype=float)
    object_xy = np.asarray(p.pop("object_xy", (4.5, 0.0)), dtype=float)
    object_z = float(p.pop("object_z", 0.2))
    default_yaw = math.atan2(start_xy[1] - object_xy[1], start_xy[0] - object_xy[0])
    object_yaw = float(p.pop("object_yaw", default_yaw))
    base_height = float(p.pop("base_height", 0.75))
    speed = float(p.pop("speed", 0.85))
    dt = float(p.pop("dt", 0.02))
    camera = p.pop("camera", CameraModel())
    odom = p.pop("odom", OdometryModel())
    tags = p.pop("tags", TagModel())

    if speed <= 0 or dt <= 0:
        raise ValueError("speed and dt must be positive")
    dist = float(np.linalg.norm(object_xy - start_xy))
    approach_yaw = math.atan2(object_xy[1] - start_xy[1], object_xy[0] - start_xy[0])
    track = _Track(start_xy, approach_yaw, base_height, dt)
    object_pose = Pose(np.array([object_xy[0], object_xy[1], object_z]), se3.rot_z(object_yaw))

    def static_objects(n):
        return [object_pose] * n

    if kind == "approach":
        standoff = float(p.pop("standoff", 0.0))
        _reject_unknown(p)
        if dist - standoff <= 0:
            raise ValueError("standoff leaves no distance to travel")
        direction = (object_xy - start_xy) / dist
        track.line_to(start_xy + direction * (dist - standoff), speed)
        base = track.poses()
        return SensorScene(base, static_objects(len(base)), camera, odom, tags, dt)

    if kind == "approach_turn_sit":
        standoff = float(p.pop("standoff", 0.8))
        _reject_unknown(p)
        if dist - standoff <= 0:
            raise ValueError("standoff leaves no distance to travel")
        direction = (object_xy - start_xy) / dist
        track.line_to(start_xy + direction * (dist - standoff), speed)
        track.turn_to(object_yaw)
        track.pause(0.5)
        base = track.poses()
        return SensorScene(base, static_objects(len(base)), camera, odom, tags, dt)

    if kind == "approach_carry":
        goal_xy = np.asarray(p.pop("goal_xy", (0.0, 3.0)), dtype=float)
        goal_z = float(p.pop("goal_z", 0.3))
        grasp_standoff = float(p.pop("grasp_standoff", 0.45))
        carry_rel = np.asarray(p.pop("carry_rel", (0.35, 0.0, 0.15)), dtype=float)
        _reject_unknown(p)
        if dist - grasp_standoff <= 0:
            raise ValueError("grasp standoff leaves no distance to travel")
        if float(np.linalg.norm(goal_xy - object_xy)) < 2 * grasp_standoff:
            raise ValueError("goal too close to the pickup point")

        direction = (object_xy - start_xy) / dist
        track.line_to(start_xy + direction * (dist - grasp_standoff), speed)
        track.pause(0.6)
        grasp_end = len(track.xy) - 1
        lift_steps = track._steps(1.0)
        track.pause(1.0)
        track.turn_to(math.atan2(goal_xy[1] - track.xy[-1][1], goal_xy[0] - track.xy[-1][0]))
        goal_dist = float(np.linalg.norm(goal_xy - track.xy[-1]))
        direction = (goal_xy - track.xy[-1]) / goal_dist
        track.line_to(track.xy[-1] + direction * (goal_dist - grasp_standoff), speed)
        lower_start = len(track.xy) - 1
        lower_steps = track._steps(1.0)
        track.pause(1.0)
        track.pause(0.4)

        base = track.poses()
        objects = []
        rel_at_grasp = None
        rel_at_lower = None
        for t, b in enumerate(base):
            if t <= grasp_end:
                objects.append(object_pose)
            elif t <= grasp_end + lift_steps:
                if rel_at_grasp is None:
                    rel_at_grasp = se3.compose(se3.inverse(base[grasp_end]), object_pose)
                u = _smoothstep((t - grasp_end) / lift_steps)
                rel_pos = rel_at_grasp.position + (carry_rel - rel_at_grasp.position) * u
                objects.append(se3.compose(b, Pose(rel_pos, rel_at_grasp.rotation)))
            elif t <= lower_start:
                objects.append(se3.compose(b, Pose(carry_rel, rel_at_grasp.rotation)))
            elif t <= lower_start + lower_steps:
                if rel_at_lower is None:
                    goal_world = np.array([goal_xy[0], goal_xy[1], goal_z])
                    rel_at_lower = se3.transform_point(se3.inverse(base[lower_start]), goal_world)
                u = _smoothstep((t - lower_start) / lower_steps)
                rel_pos = carry_rel + (rel_at_lower - carry_rel) * u
                objects.append(se3.compose(b, Pose(rel_pos, rel_at_grasp.rotation)))
            else:
                objects.append(objects[-1])
        return SensorScene(base, objects, camera, odom, tags, dt)

    raise ValueError(f"unknown trajectory kind: {kind!r}")


def _reject_unknown(params: dict):
    if params:
        raise ValueError(f"unknown trajectory parameters: {sorted(params)}")
