"""Sample training episode initializations and domain randomizations.

Draws a few thousand episode starts for the carry task from a small clip set:
half begin from the default pose with a fully random scene, half re-enter a
reference clip at a random phase with the scene pinned to the clip's object
track. Also shows one physics/sensing randomization draw and the observation
noise plus delay pipeline it parameterizes.
"""

from collections import Counter

import numpy as np

from hsikit import annotation, episode_init
from hsikit.motion_data import MotionClip, Subset
from hsikit.state import HAND_INDICES, HEAD_INDEX, Task


def reference_clips():
    n, fps = 60, 30.0
    t = np.arange(n) / fps
    ee = np.zeros((n, 5, 3))
    ee[:, HAND_INDICES[0]] = [0.3, 0.2, -0.2]
    ee[:, HAND_INDICES[1]] = [0.3, -0.2, -0.2]
    ee[:, HEAD_INDEX] = [0.05, 0.0, 0.55]
    lift = MotionClip(
        clip_id="ref/lift",
        subset=Subset.LOCO,
        fps=fps,
        joint_pos=np.zeros((n, 29)),
        base_pos=np.stack([0.4 * t, np.zeros(n), np.full(n, 0.75)], axis=1),
        base_rot=np.tile(np.eye(3), (n, 1, 1)),
        ee_pos=ee,
    )
    lift = annotation.annotate_object(lift, annotation.ContactAnnotation(15, 45))
    return list(annotation.split_subsets(lift, annotation.ContactAnnotation(15, 45)))


def main():
    rng = np.random.default_rng(0)
    dataset = reference_clips()
    ranges = episode_init.scene_ranges(Task.CARRY)
    cfg = episode_init.RsiConfig(default_pose_fraction=0.5)

    draws = [episode_init.sample_init(dataset, ranges, cfg, rng) for _ in range(4000)]
    modes = Counter(d.mode.value for d in draws)
    print(f"4000 draws: {dict(modes)}")
    share = modes["default_pose"] / len(draws)
    print(f"default-pose share {share:.3f} (configured {cfg.default_pose_fraction})")

    clips = Counter(d.clip_id for d in draws if d.clip_id)
    print(f"reference clip usage: {dict(clips)}")

    ref = next(d for d in draws if d.clip_id)
    print(f"\none reference start: {ref.clip_id} at phase {ref.phase:.3f}"
          f" (frame {ref.frame_index})")
    print(f"  scene pinned to the clip's object pose:"
          f" xy={np.round(ref.scene['object_xy'], 3)},"
          f" height={ref.scene['object_height']:.3f}")

    draw = episode_init.sample_domain(np.random.default_rng(7))
    print("\none domain randomization draw:")
    print(f"  payload {draw.payload_kg:+.2f} kg, motor strength"
          f" [{draw.motor_strength.min():.3f}, {draw.motor_strength.max():.3f}]")
    print(f"  box friction {draw.box_friction:.3f}, observation delay"
          f" {draw.delay_steps} steps")

    obs = np.zeros(108)
    noisy = episode_init.apply_obs_noise(obs, draw, rng)
    print(f"  joint-angle noise band +/-{np.abs(noisy[6:35]).max():.4f} rad"
          f" (amplitude {draw.joint_pos_noise})")

    buffer = episode_init.DelayBuffer(draw.delay_steps)
    stamps = [float(buffer.step(np.full(1, t))[0]) for t in range(5)]
    print(f"  delayed observation stamps: {stamps}")


if __name__ == "__main__":
    main()
