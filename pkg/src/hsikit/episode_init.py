"""Episode start-state machinery: per-task scene randomization, hybrid
reference/default-pose initialization, and domain-randomization draws.

Offsets are drawn once per episode and held constant; noise is redrawn on
every call that applies it. All sampling runs off an explicit numpy
Generator, so identical seeds give identical episode sequences.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import se3
from .motion_data import MotionClip, OBJECT_SUBSETS
from .state import NUM_JOINTS, Task

_PI = math.pi

# Printed sampling intervals per task. Two-dimensional keys draw one value
# per axis from the same interval.
_SCENE_RANGES = {
    Task.CARRY: {
        "object_xy": (-4.0, 4.0),
        "object_height": (0.0, 0.6),
        "goal_xy": (-4.0, 4.0),
        "goal_height": (0.0, 0.6),
        "box_width": (0.2, 0.5),
        "box_height": (0.15, 0.35),
        "density": (10.0, 100.0),
        "object_yaw": (-_PI, _PI),
    },
    Task.SIT: {
        "object_xy": (-5.0, 5.0),
        "surface_height": (0.2, 0.5),
        "chair_depth": (0.3, 0.6),
        "chair_width": (0.3, 0.6),
        "object_yaw": (-_PI, _PI),
    },
    Task.LIE: {
        "object_xy": (-5.0, 5.0),
        "surface_height": (0.2, 0.5),
        "bed_length": (1.2, 3.2),
        "bed_width": (0.38, 0.63),
        "object_yaw": (-_PI, _PI),
    },
    Task.STAND_UP: {
        "target_xy": (-5.0, 5.0),
        "chair_height": (0.2, 0.6),
        "chair_side": (0.38, 0.63),
        "object_yaw": (-_PI, _PI),
    },
    Task.STYLE_LOCO: {},
}

VECTOR_KEYS = frozenset({"object_xy", "goal_xy", "target_xy"})


def scene_ranges(task: Task) -> dict[str, tuple[float, float]]:
    """Copy of the sampling intervals used for a task's scene."""
    return dict(_SCENE_RANGES[task])


def _draw_ranges(ranges: dict, rng: np.random.Generator) -> dict:
    out = {}
    for key, (lo, hi) in ranges.items():
        if lo > hi:
            raise ValueError(f"empty range for {key}")
        size = 2 if key in VECTOR_KEYS else None
        draw = rng.uniform(lo, hi, size=size)
        out[key] = draw if size else float(draw)
    return out


def randomize_scene(task: Task, rng: np.random.Generator, ranges=None) -> dict:
    """Draw every scene parameter uniformly within its interval."""
    return _draw_ranges(scene_ranges(task) if ranges is None else ranges, rng)


@dataclass(frozen=True)
class RsiConfig:
    """Hybrid initialization settings; the default-pose share is required."""

    default_pose_fraction: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.default_pose_fraction <= 1.0:
            raise ValueError("default_pose_fraction must lie in [0, 1]")


@dataclass
class DomainDraw:
    """One episode's randomization: constant offsets plus noise amplitudes.

    The amplitude fields set the half-width of per-step uniform noise
    (or sigma = amplitude / 3 in gaussian mode); the remaining fields are
    held fixed for the whole episode.
    """

    actuator_offset: np.ndarray
    motor_strength: np.ndarray
    payload_kg: float
    com_offset: np.ndarray
    kp_factor: float
    kd_factor: float
    box_friction: float
    box_restitution: float
    platform_friction: float
    loc_pos_offset: np.ndarray
    loc_rot_offset: float
    delay_steps: int
    ang_vel_noise: float = 0.3
    joint_pos_noise: float = 0.02
    joint_vel_noise: float = 2.0
    gravity_noise: float = 0.05
    fk_noise: float = 0.05
    loc_pos_noise: float = 0.05
    loc_rot_noise: float = math.radians(5.0)
    gaussian_noise: bool = False

    def __post_init__(self):
        self.actuator_offset = np.asarray(self.actuator_offset, dtype=np.float64).reshape(
            NUM_JOINTS
        )
        self.motor_strength = np.asarray(self.motor_strength, dtype=np.float64).reshape(
            NUM_JOINTS
        )
        self.com_offset = np.asarray(self.com_offset, dtype=np.float64).reshape(3)
        self.loc_pos_offset = np.asarray(self.loc_pos_offset, dtype=np.float64).reshape(3)
        self.delay_steps = int(self.delay_steps)
        if self.delay_steps < 0:
            raise ValueError("delay_steps must be >= 0")

    @classmethod
    def zero(cls) -> "DomainDraw":
        """Neutral draw: no offsets, unit gains, zero noise amplitudes."""
        return cls(
            actuator_offset=np.zeros(NUM_JOINTS),
            motor_strength=np.ones(NUM_JOINTS),
            payload_kg=0.0,
            com_offset=np.zeros(3),
            kp_factor=1.0,
            kd_factor=1.0,
            box_friction=0.85,
            box_restitution=0.1,
            platform_friction=0.85,
            loc_pos_offset=np.zeros(3),
            loc_rot_offset=0.0,
            delay_steps=0,
            ang_vel_noise=0.0,
            joint_pos_noise=0.0,
            joint_vel_noise=0.0,
            gravity_noise=0.0,
            fk_noise=0.0,
            loc_pos_noise=0.0,
            loc_rot_noise=0.0,
        )


# (lo, hi) intervals for the per-episode constants drawn by sample_domain.
DOMAIN_RANGES = {
    "actuator_offset": (-0.05, 0.05),
    "motor_strength": (0.9, 1.1),
    "payload_kg": (-2.0, 2.0),
    "com_offset": (-0.05, 0.05),
    "kp_factor": (0.85, 1.15),
    "kd_factor": (0.85, 1.15),
    "box_friction": (0.5, 1.2),
    "box_restitution": (0.0, 0.2),
    "platform_friction": (0.5, 1.2),
    "loc_pos_offset": (-0.05, 0.05),
    "loc_rot_offset": (-math.radians(5.0), math.radians(5.0)),
}


def sample_domain(rng: np.random.Generator, gaussian_noise: bool = False) -> DomainDraw:
    """Draw the per-episode randomization constants."""
    r = DOMAIN_RANGES
    return DomainDraw(
        actuator_offset=rng.uniform(*r["actuator_offset"], size=NUM_JOINTS),
        motor_strength=rng.uniform(*r["motor_strength"], size=NUM_JOINTS),
        payload_kg=float(rng.uniform(*r["payload_kg"])),
        com_offset=rng.uniform(*r["com_offset"], size=3),
        kp_factor=float(rng.uniform(*r["kp_factor"])),
        kd_factor=float(rng.uniform(*r["kd_factor"])),
        box_friction=float(rng.uniform(*r["box_friction"])),
        box_restitution=float(rng.uniform(*r["box_restitution"])),
        platform_friction=float(rng.uniform(*r["platform_friction"])),
        loc_pos_offset=rng.uniform(*r["loc_pos_offset"], size=3),
        loc_rot_offset=float(rng.uniform(*r["loc_rot_offset"])),
        delay_steps=int(rng.integers(0, 3)),
        gaussian_noise=gaussian_noise,
    )


def _noise(rng: np.random.Generator, amplitude: float, size, gaussian: bool):
    if amplitude == 0.0:
        return np.zeros(size) if size else 0.0
    if gaussian:
        return rng.normal(0.0, amplitude / 3.0, size=size)
    return rng.uniform(-amplitude, amplitude, size=size)


def apply_obs_noise(obs: np.ndarray, draw: DomainDraw, rng: np.random.Generator) -> np.ndarray:
    """Per-step noise over a proprioceptive vector; the action slots stay clean."""
    obs = np.asarray(obs, dtype=np.float64)
    if obs.shape != (108,):
        raise ValueError("expected a 108-dim proprioceptive observation")
    g = draw.gaussian_noise
    out = obs.copy()
    out[0:3] += _noise(rng, draw.ang_vel_noise, 3, g)
    out[3:6] += _noise(rng, draw.gravity_noise, 3, g)
    out[6:35] += _noise(rng, draw.joint_pos_noise, NUM_JOINTS, g)
    out[35:64] += _noise(rng, draw.joint_vel_noise, NUM_JOINTS, g)
    out[64:79] += _noise(rng, draw.fk_noise, 15, g)
    return out


def apply_pose_randomization(
    position: np.ndarray,
    rotation: np.ndarray,
    draw: DomainDraw,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Perturb an object-pose estimate: constant offset plus fresh noise.

    Translation is additive; the rotation offset and noise compose as an
    extra yaw on top of the given rotation.
    """
    g = draw.gaussian_noise
    position = np.asarray(position, dtype=np.float64).reshape(3)
    pos = position + draw.loc_pos_offset + _noise(rng, draw.loc_pos_noise, 3, g)
    yaw = draw.loc_rot_offset + _noise(rng, draw.loc_rot_noise, None, g)
    rot = se3.rot_z(float(yaw)) @ np.asarray(rotation, dtype=np.float64).reshape(3, 3)
    return pos, rot


class DelayBuffer:
    """Fixed-lag observation queue; early steps return the oldest sample."""

    def __init__(self, delay_steps: int):
        if delay_steps < 0:
            raise ValueError("delay_steps must be >= 0")
        self._depth = int(delay_steps) + 1
        self._queue: deque = deque()

    def step(self, obs: np.ndarray) -> np.ndarray:
        self._queue.append(np.array(obs, dtype=np.float64))
        if len(self._queue) > self._depth:
            self._queue.popleft()
        return self._queue[0].copy()


class InitMode(Enum):
    REFERENCE = "reference"
    DEFAULT_POSE = "default_pose"


@dataclass
class EpisodeInit:
    """Everything needed to start one training episode."""

    mode: InitMode
    scene: dict
    domain: DomainDraw
    clip_id: str | None = None
    phase: float | None = None
    frame_index: int | None = None


def phase_to_frame(phase: float, length: int) -> int:
    """Map a phase in [0, 1] onto a frame index by rounding."""
    if not 0.0 <= phase <= 1.0:
        raise ValueError("phase must lie in [0, 1]")
    return int(round(phase * (length - 1)))


def sample_init(
    dataset: list[MotionClip],
    ranges: dict,
    cfg: RsiConfig,
    rng: np.random.Generator,
) -> EpisodeInit:
    """Hybrid start-state draw.

    With probability default_pose_fraction the episode starts from the
    default standing pose with a fully random scene. Otherwise a clip and a
    phase are drawn uniformly; when the clip carries an annotated object
    track, the scene's object pose is pinned to the clip's pose at the
    sampled frame so the pre-phase context matches the reference motion.
    """
    if not dataset:
        raise ValueError("empty motion dataset")
    scene = _draw_ranges(ranges, rng)
    domain = sample_domain(rng)
    if rng.uniform() < cfg.default_pose_fraction:
        return EpisodeInit(mode=InitMode.DEFAULT_POSE, scene=scene, domain=domain)
    clip = dataset[int(rng.integers(len(dataset)))]
    phase = float(rng.uniform(0.0, 1.0))
    frame = phase_to_frame(phase, len(clip))
    if clip.subset in OBJECT_SUBSETS and clip.annotated:
        scene["object_xy"] = clip.object_pos[frame][:2].copy()
        scene["object_height"] = float(clip.object_pos[frame][2])
        scene["object_yaw"] = se3.yaw_of(clip.object_pose(frame))
    return EpisodeInit(
        mode=InitMode.REFERENCE,
        scene=scene,
        domain=domain,
        clip_id=clip.clip_id,
        phase=phase,
        frame_index=frame,
    )
