"""Turn a raw motion clip into annotated training subsets.

Builds a synthetic walk-and-lift recording, smooths it, synthesizes an object
track from the hand midpoints between two contact frames, splits the result
into pick-up / carry / put-down subsets, and round-trips everything through
the on-disk format.
"""

import tempfile
from pathlib import Path

import numpy as np

from hsikit import annotation, motion_data
from hsikit.motion_data import MotionClip, Subset
from hsikit.state import HAND_INDICES, HEAD_INDEX


def record_session(n=81, fps=30.0):
    t = np.arange(n) / fps
    ee = np.zeros((n, 5, 3))
    ee[:, HAND_INDICES[0]] = [0.3, 0.2, -0.1]
    ee[:, HAND_INDICES[1]] = [0.3, -0.2, -0.1]
    ee[:, HEAD_INDEX] = [0.05, 0.0, 0.55]
    # Hands bob slightly, as a real take would.
    ee[:, HAND_INDICES[0], 2] += 0.03 * np.sin(4.0 * t)
    ee[:, HAND_INDICES[1], 2] += 0.03 * np.sin(4.0 * t + 0.4)
    return MotionClip(
        clip_id="session/take1",
        subset=Subset.LOCO,
        fps=fps,
        joint_pos=0.1 * np.sin(np.outer(t, np.ones(29)) * 3.0),
        base_pos=np.stack([0.5 * t, np.zeros(n), np.full(n, 0.75)], axis=1),
        base_rot=np.tile(np.eye(3), (n, 1, 1)),
        ee_pos=ee,
    )


def main():
    clip = record_session()
    print(f"recorded {clip.clip_id}: {len(clip)} frames at {clip.fps:g} fps,"
          f" {clip.duration:.2f} s, object track: {clip.annotated}")

    smoothed = annotation.smooth_motion(clip, window=5)
    drift = np.abs(smoothed.joint_pos - clip.joint_pos).max()
    print(f"smoothed with a 5-frame window (max joint change {drift:.4f} rad)")

    ann = annotation.ContactAnnotation(pickup_frame=10, place_frame=50)
    tracked = annotation.annotate_object(smoothed, ann)
    pre = np.linalg.norm(tracked.object_pos[9] - tracked.object_pos[10])
    post = np.linalg.norm(tracked.object_pos[51] - tracked.object_pos[50])
    print(f"object track synthesized: contact jumps {pre:.1e} / {post:.1e} m"
          " (frozen outside the carry span)")

    pick, carry, put = annotation.split_subsets(tracked, ann)
    for part in (pick, carry, put):
        print(f"  {part.clip_id}: {len(part)} frames [{part.subset.value}]")

    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "take1.npz"
        motion_data.save_clip(path, tracked)
        annotation.save_annotation(Path(tmp) / "take1.json", tracked.clip_id, ann)
        reloaded = motion_data.load_clip(path)
        identical = (
            np.array_equal(reloaded.object_pos, tracked.object_pos)
            and np.array_equal(reloaded.joint_pos, tracked.joint_pos)
        )
        print(f"save/load round trip lossless: {identical}")


if __name__ == "__main__":
    main()
