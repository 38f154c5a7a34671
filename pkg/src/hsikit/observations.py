"""Fixed-layout observation vectors for the policy and the discriminator.

Layouts (index ranges are half-open):

  proprio_obs, 108 reals:
    [0:3]    base angular velocity (base frame)
    [3:6]    gravity direction (base frame)
    [6:35]   joint positions
    [35:64]  joint velocities
    [64:79]  end-effector positions, 5 x 3, base frame
    [79:108] previous action

  discriminator_obs, 57 reals:
    [0]      base height
    [1:4]    base linear velocity (base frame)
    [4:7]    base angular velocity
    [7:10]   gravity direction
    [10:39]  joint positions
    [39:54]  end-effector positions
    [54:57]  object position (base frame)

  task_obs:
    CARRY, 15:    [0:3] object bbox, [3:6] object position, [6:12] object
                  rotation (two-column encoding), [12:15] goal position
    SIT / LIE, 9: [0:3] object position, [3:9] object rotation
    STAND_UP, 12: [0:3] object position, [3:9] object rotation, [9:12] goal
    STYLE_LOCO, 3: commanded [vx, vy, yaw rate]

Masking (carry only) zeroes the object position and rotation slots.
"""

from __future__ import annotations

import numpy as np

from . import se3
from .state import NUM_JOINTS, RobotState, SceneState, Task

PROPRIO_DIM = 108
DISC_DIM = 57
TASK_DIMS = {
    Task.CARRY: 15,
    Task.SIT: 9,
    Task.LIE: 9,
    Task.STAND_UP: 12,
    Task.STYLE_LOCO: 3,
}


def proprio_obs(s: RobotState) -> np.ndarray:
    out = np.concatenate(
        [
            s.base_ang_vel,
            s.gravity_dir,
            s.joint_pos,
            s.joint_vel,
            s.ee_pos.reshape(-1),
            s.prev_action,
        ]
    )
    assert out.shape == (PROPRIO_DIM,)
    return out


def discriminator_obs(s: RobotState, scene: SceneState) -> np.ndarray:
    out = np.concatenate(
        [
            [s.base_height],
            s.base_lin_vel,
            s.base_ang_vel,
            s.gravity_dir,
            s.joint_pos,
            s.ee_pos.reshape(-1),
            scene.object_pose.position,
        ]
    )
    assert out.shape == (DISC_DIM,)
    return out


def task_obs(
    task: Task,
    s: RobotState,
    scene: SceneState | None = None,
    masked: bool = False,
    command=None,
) -> np.ndarray:
    """Task-conditioned goal observation; see the module docstring for slots."""
    if task is Task.STYLE_LOCO:
        if command is None:
            raise ValueError("style locomotion needs a [vx, vy, yaw rate] command")
        if masked:
            raise ValueError("masking applies to the carry task only")
        out = np.asarray(command, dtype=np.float64).reshape(3).copy()
        return out

    if scene is None:
        raise ValueError("scene context required")
    obj_pos = scene.object_pose.position
    obj_rot6 = se3.rot_to_6d(scene.object_pose.rotation)

    if task is Task.CARRY:
        if masked:
            obj_pos = np.zeros(3)
            obj_rot6 = np.zeros(6)
        out = np.concatenate([scene.object_bbox, obj_pos, obj_rot6, scene.goal_pos])
    elif task in (Task.SIT, Task.LIE):
        if masked:
            raise ValueError("masking applies to the carry task only")
        out = np.concatenate([obj_pos, obj_rot6])
    elif task is Task.STAND_UP:
        if masked:
            raise ValueError("masking applies to the carry task only")
        out = np.concatenate([obj_pos, obj_rot6, scene.goal_pos])
    else:  # pragma: no cover
        raise ValueError(f"unknown task {task}")
    assert out.shape == (TASK_DIMS[task],)
    return out
