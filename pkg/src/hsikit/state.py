"""Shared state types for the task kernels.

Frame conventions: the base pose is world-frame; velocities, gravity
direction, and end-effector positions are base-frame (the policy's view).
Reward kernels that need world-frame velocity derive it through the base
pose. SceneState carries the object/goal both in the base frame (what the
policy sees) and in the world frame (what the rewards score).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .se3 import Pose

NUM_JOINTS = 29
NUM_END_EFFECTORS = 5  # left hand, right hand, left foot, right foot, head
HEAD_INDEX = 4
HAND_INDICES = (0, 1)


class Task(enum.Enum):
    CARRY = "carry"
    SIT = "sit"
    LIE = "lie"
    STAND_UP = "stand_up"
    STYLE_LOCO = "style_loco"


def _zeros(n):
    return lambda: np.zeros(n)


@dataclass
class RobotState:
    """Snapshot of the robot at one control step."""

    base_pose: Pose = field(default_factory=Pose)
    base_height: float = 0.0
    # Base frame.
    base_lin_vel: np.ndarray = field(default_factory=_zeros(3))
    base_ang_vel: np.ndarray = field(default_factory=_zeros(3))
    gravity_dir: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, -1.0]))
    joint_pos: np.ndarray = field(default_factory=_zeros(NUM_JOINTS))
    joint_vel: np.ndarray = field(default_factory=_zeros(NUM_JOINTS))
    ee_pos: np.ndarray = field(default_factory=_zeros((NUM_END_EFFECTORS, 3)))
    prev_action: np.ndarray = field(default_factory=_zeros(NUM_JOINTS))
    torques: np.ndarray = field(default_factory=_zeros(NUM_JOINTS))
    joint_acc: np.ndarray = field(default_factory=_zeros(NUM_JOINTS))

    def __post_init__(self):
        for name, shape in (
            ("base_lin_vel", (3,)),
            ("base_ang_vel", (3,)),
            ("gravity_dir", (3,)),
            ("joint_pos", (NUM_JOINTS,)),
            ("joint_vel", (NUM_JOINTS,)),
            ("ee_pos", (NUM_END_EFFECTORS, 3)),
            ("prev_action", (NUM_JOINTS,)),
            ("torques", (NUM_JOINTS,)),
            ("joint_acc", (NUM_JOINTS,)),
        ):
            arr = np.asarray(getattr(self, name), dtype=np.float64).reshape(shape)
            setattr(self, name, arr)

    def world_lin_vel(self) -> np.ndarray:
        return self.base_pose.rotation @ self.base_lin_vel

    def world_ee_pos(self, index: int) -> np.ndarray:
        return self.base_pose.rotation @ self.ee_pos[index] + self.base_pose.position


@dataclass
class SceneState:
    """Object and goal context for one task instance."""

    object_pose: Pose = field(default_factory=Pose)  # base frame
    object_world: Pose = field(default_factory=Pose)
    goal_pos: np.ndarray = field(default_factory=_zeros(3))  # base frame
    goal_world: np.ndarray = field(default_factory=_zeros(3))
    object_bbox: np.ndarray = field(default_factory=lambda: np.array([0.3, 0.3, 0.25]))
    hand_mid: np.ndarray = field(default_factory=_zeros(3))  # world frame

    def __post_init__(self):
        self.goal_pos = np.asarray(self.goal_pos, dtype=np.float64).reshape(3)
        self.goal_world = np.asarray(self.goal_world, dtype=np.float64).reshape(3)
        self.object_bbox = np.asarray(self.object_bbox, dtype=np.float64).reshape(3)
        self.hand_mid = np.asarray(self.hand_mid, dtype=np.float64).reshape(3)

    def object_heading(self) -> np.ndarray:
        from . import se3

        return se3.heading_of(self.object_world)


@dataclass(frozen=True)
class JointLimits:
    lower: np.ndarray
    upper: np.ndarray
    velocity: np.ndarray
    torque: np.ndarray

    @classmethod
    def uniform(cls, lower=-3.0, upper=3.0, velocity=30.0, torque=200.0) -> "JointLimits":
        return cls(
            np.full(NUM_JOINTS, lower, dtype=np.float64),
            np.full(NUM_JOINTS, upper, dtype=np.float64),
            np.full(NUM_JOINTS, velocity, dtype=np.float64),
            np.full(NUM_JOINTS, torque, dtype=np.float64),
        )


@dataclass(frozen=True)
class RewardWeights:
    task: float = 0.7
    regularization: float = 0.7
    style: float = 0.3
    gradient_penalty: float = 1.0
