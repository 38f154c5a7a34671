"""Plot reward kernels as ASCII profiles over one swept variable each.

Shows how the shaped terms behave: the approach term saturates inside 0.7 m,
the sit term peaks when the pelvis meets the seat, the stand-up term rises
with base height, and the style reward grows as the discriminator score
approaches the reference manifold.
"""

import math

import numpy as np

from hsikit import rewards
from hsikit.se3 import Pose, rot_z
from hsikit.state import RobotState, SceneState


def state_at(x, vx=0.0, z=0.75):
    rot = np.eye(3)
    return RobotState(
        base_pose=Pose(np.array([x, 0.0, z]), rot),
        base_height=z,
        base_lin_vel=np.array([vx, 0.0, 0.0]),
    )


def scene_with(object_x, object_z=0.5, yaw=0.0):
    obj = Pose(np.array([object_x, 0.0, object_z]), rot_z(yaw))
    return SceneState(
        object_pose=obj, object_world=obj,
        goal_pos=np.array([6.0, 0.0, 0.3]), goal_world=np.array([6.0, 0.0, 0.3]),
    )


def profile(title, xs, values, unit):
    peak = max(values)
    print(f"\n{title}")
    for x, v in zip(xs, values):
        bar = "#" * int(round(28 * v / peak)) if peak > 0 else ""
        print(f"  {x:6.2f} {unit}  {v:6.3f}  {bar}")


def main():
    speeds = np.linspace(0.0, 1.7, 12)
    far = scene_with(3.0)
    profile(
        "approach term vs walking speed toward an object 3 m away",
        speeds,
        [rewards.approach_reward(state_at(0.0, vx=v), far) for v in speeds],
        "m/s",
    )

    xs = np.linspace(0.0, 2.0, 9)
    profile(
        "approach term vs distance while standing still (arrival bonus inside 0.7 m)",
        xs,
        [rewards.approach_reward(state_at(0.0), scene_with(x)) for x in xs],
        "m",
    )

    offsets = np.linspace(0.0, 0.8, 9)
    seat = scene_with(0.0, object_z=0.45)
    profile(
        "sit term vs horizontal offset from the seat center",
        offsets,
        [rewards.sit_reward(state_at(d, z=0.45), seat) for d in offsets],
        "m",
    )

    heights = np.linspace(0.3, 0.8, 11)
    profile(
        "stand-up term vs base height",
        heights,
        [rewards.standup_reward(state_at(0.0, z=h)) for h in heights],
        "m",
    )

    scores = np.linspace(0.05, 0.95, 10)
    profile(
        "style reward vs discriminator score",
        scores,
        [rewards.style_reward(s) for s in scores],
        "  ",
    )
    print(f"\nstyle_reward(0.5) = {rewards.style_reward(0.5):.12f} = ln 2")
    print(f"ln 2               = {math.log(2.0):.12f}")


if __name__ == "__main__":
    main()
