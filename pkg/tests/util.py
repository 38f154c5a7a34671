"""State builders shared across test modules."""

import numpy as np

from hsikit import se3
from hsikit.motion_data import MotionClip, Subset
from hsikit.se3 import Pose
from hsikit.state import HEAD_INDEX, NUM_JOINTS, RobotState, SceneState


def make_state(
    base_pos=(0.0, 0.0, 0.75),
    yaw=0.0,
    world_vel=(0.0, 0.0, 0.0),
    ang_vel=(0.0, 0.0, 0.0),
    head_world=None,
    rotation=None,
    **fields,
):
    """RobotState from world-frame inputs (velocity is rotated into the base)."""
    rot = se3.rot_z(yaw) if rotation is None else rotation
    pose = Pose(np.asarray(base_pos, dtype=float), rot)
    base_vel = rot.T @ np.asarray(world_vel, dtype=float)
    state = RobotState(
        base_pose=pose,
        base_height=float(base_pos[2]),
        base_lin_vel=base_vel,
        base_ang_vel=np.asarray(ang_vel, dtype=float),
        **fields,
    )
    if head_world is not None:
        state.ee_pos[HEAD_INDEX] = rot.T @ (np.asarray(head_world, dtype=float) - pose.position)
    return state


def make_scene(
    object_pos=(0.0, 0.0, 0.0),
    object_yaw=0.0,
    goal=(0.0, 0.0, 0.0),
    hand_mid=(0.0, 0.0, 0.0),
    bbox=(0.3, 0.3, 0.25),
    base_pose=None,
):
    """SceneState from world-frame inputs; base-frame copies derived if a base
    pose is given, otherwise the base is assumed at the world origin."""
    base = Pose() if base_pose is None else base_pose
    obj_world = Pose(np.asarray(object_pos, dtype=float), se3.rot_z(object_yaw))
    inv = se3.inverse(base)
    return SceneState(
        object_pose=se3.compose(inv, obj_world),
        object_world=obj_world,
        goal_pos=se3.transform_point(inv, goal),
        goal_world=np.asarray(goal, dtype=float),
        object_bbox=np.asarray(bbox, dtype=float),
        hand_mid=np.asarray(hand_mid, dtype=float),
    )


def random_state(rng):
    yaw = rng.uniform(-np.pi, np.pi)
    pitch = rng.uniform(-1.2, 1.2)
    rot = se3.rot_z(yaw) @ se3.rot_y(pitch)
    pose = Pose(
        np.array([rng.uniform(-6, 6), rng.uniform(-6, 6), rng.uniform(0.0, 1.2)]), rot
    )
    ee = rng.uniform(-0.8, 0.8, size=(5, 3))
    # Keep the head-to-base axis defined.
    if np.linalg.norm((rot @ ee[HEAD_INDEX])[:2]) < 1e-3:
        ee[HEAD_INDEX, 0] += 0.2
    return RobotState(
        base_pose=pose,
        base_height=pose.position[2],
        base_lin_vel=rng.uniform(-2, 2, size=3),
        base_ang_vel=rng.uniform(-3, 3, size=3),
        joint_pos=rng.uniform(-3.5, 3.5, size=NUM_JOINTS),
        joint_vel=rng.uniform(-35, 35, size=NUM_JOINTS),
        ee_pos=ee,
        prev_action=rng.uniform(-1, 1, size=NUM_JOINTS),
        torques=rng.uniform(-250, 250, size=NUM_JOINTS),
        joint_acc=rng.uniform(-50, 50, size=NUM_JOINTS),
    )


def random_clip(rng, n=40, subset=Subset.PICK_UP, fps=30.0, clip_id=None):
    """Smooth random-walk motion clip; rotations change gently per frame."""
    if clip_id is None:
        clip_id = f"clip{rng.integers(10_000)}"
    base_pos = np.cumsum(rng.uniform(-0.03, 0.03, size=(n, 3)), axis=0)
    base_pos[:, 2] += 0.75
    rot = se3.rot_z(rng.uniform(-np.pi, np.pi))
    base_rot = np.empty((n, 3, 3))
    for t in range(n):
        axis = rng.standard_normal(3)
        axis /= np.linalg.norm(axis)
        rot = rot @ se3.rot_axis_angle(axis, rng.uniform(-0.05, 0.05))
        base_rot[t] = rot
    joint_pos = np.cumsum(rng.uniform(-0.02, 0.02, size=(n, NUM_JOINTS)), axis=0)
    ee_pos = np.cumsum(rng.uniform(-0.01, 0.01, size=(n, 5, 3)), axis=0)
    ee_pos[:, 0] += [0.3, 0.2, -0.2]
    ee_pos[:, 1] += [0.3, -0.2, -0.2]
    ee_pos[:, HEAD_INDEX] += [0.05, 0.0, 0.55]
    return MotionClip(
        clip_id=clip_id,
        subset=subset,
        fps=fps,
        joint_pos=joint_pos,
        base_pos=base_pos,
        base_rot=base_rot,
        ee_pos=ee_pos,
    )


def random_scene(rng):
    return make_scene(
        object_pos=rng.uniform(-6, 6, size=3) * [1, 1, 0] + [0, 0, rng.uniform(0, 1.2)],
        object_yaw=rng.uniform(-np.pi, np.pi),
        goal=np.array([rng.uniform(-6, 6), rng.uniform(-6, 6), rng.uniform(0, 1.2)]),
        hand_mid=rng.uniform(-6, 6, size=3),
        bbox=rng.uniform(0.1, 1.0, size=3),
    )
