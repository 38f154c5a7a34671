"""Post-processing of retargeted motion: jitter smoothing, contact-frame
annotation, and subset splitting.

The object track of a carrying demonstration is synthesized rather than
captured: between the pickup and placement frames the object rides at the
midpoint of the two hands with a yaw-only copy of the base orientation;
outside that span it stays frozen at the nearest contact pose, so the
track is continuous at both contact frames by construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import se3
from .motion_data import MotionClip, Subset
from .state import HAND_INDICES

ANNOTATION_VERSION = 1


@dataclass
class ContactAnnotation:
    """Key contact frames of a pick-and-place demonstration.

    The contact poses start out empty and are filled by annotate_object.
    """

    pickup_frame: int
    place_frame: int
    pickup_pose: se3.Pose | None = None
    place_pose: se3.Pose | None = None

    def __post_init__(self):
        self.pickup_frame = int(self.pickup_frame)
        self.place_frame = int(self.place_frame)
        if not 0 <= self.pickup_frame < self.place_frame:
            raise ValueError("need 0 <= pickup_frame < place_frame")

    def check_against(self, clip: MotionClip) -> None:
        if self.place_frame >= len(clip):
            raise ValueError("place_frame beyond the last clip frame")


def _window_mean(x: np.ndarray, half: int) -> np.ndarray:
    """Centered moving average; the window shrinks symmetrically at the ends."""
    n = len(x)
    out = np.empty_like(x)
    for t in range(n):
        h = min(half, t, n - 1 - t)
        out[t] = x[t - h : t + h + 1].mean(axis=0)
    return out


def smooth_motion(clip: MotionClip, window: int = 5) -> MotionClip:
    """Moving-average filter over the robot channels.

    Joint, base-position, and end-effector channels are averaged element-wise;
    the base rotation is averaged entry-wise and re-orthonormalized, so its
    entries are not a convex combination of the inputs. The object track, if
    present, is left untouched.
    """
    window = int(window)
    if window < 1 or window % 2 == 0:
        raise ValueError("window must be odd and >= 1")
    if window > len(clip):
        raise ValueError("window exceeds clip length")
    if window == 1:
        return clip.slice(0, len(clip))
    half = window // 2
    rot_mean = _window_mean(clip.base_rot, half)
    base_rot = np.empty_like(clip.base_rot)
    for t in range(len(clip)):
        base_rot[t] = se3.rot_from_6d(
            np.concatenate([rot_mean[t, :, 0], rot_mean[t, :, 1]])
        )
    out = clip.slice(0, len(clip))
    out.joint_pos = _window_mean(clip.joint_pos, half)
    out.base_pos = _window_mean(clip.base_pos, half)
    out.ee_pos = _window_mean(clip.ee_pos, half)
    out.base_rot = base_rot
    return out


def _held_pose(clip: MotionClip, t: int) -> se3.Pose:
    """Object pose implied by the robot at frame t: hand midpoint, base yaw."""
    mid_local = clip.ee_pos[t][list(HAND_INDICES)].mean(axis=0)
    position = se3.transform_point(clip.base_pose(t), mid_local)
    yaw = se3.yaw_of(clip.base_pose(t))
    return se3.Pose(position, se3.rot_z(yaw))


def annotate_object(clip: MotionClip, ann: ContactAnnotation) -> MotionClip:
    """Synthesize the object track from the hand midpoint between contacts.

    Frames before the pickup hold the pickup-frame pose; frames after the
    placement hold the placement-frame pose. Fills the annotation's contact
    poses in place. Re-annotating with the same annotation is a no-op.
    """
    ann.check_against(clip)
    n = len(clip)
    object_pos = np.empty((n, 3))
    object_rot = np.empty((n, 3, 3))
    for t in range(ann.pickup_frame, ann.place_frame + 1):
        pose = _held_pose(clip, t)
        object_pos[t] = pose.position
        object_rot[t] = pose.rotation
    object_pos[: ann.pickup_frame] = object_pos[ann.pickup_frame]
    object_rot[: ann.pickup_frame] = object_rot[ann.pickup_frame]
    object_pos[ann.place_frame + 1 :] = object_pos[ann.place_frame]
    object_rot[ann.place_frame + 1 :] = object_rot[ann.place_frame]
    ann.pickup_pose = se3.Pose(object_pos[ann.pickup_frame], object_rot[ann.pickup_frame])
    ann.place_pose = se3.Pose(object_pos[ann.place_frame], object_rot[ann.place_frame])
    out = clip.slice(0, n)
    out.object_pos = object_pos
    out.object_rot = object_rot
    return out


def split_subsets(
    clip: MotionClip, ann: ContactAnnotation
) -> tuple[MotionClip, MotionClip, MotionClip]:
    """Cut a demonstration at its contact frames into three labeled clips.

    The contact frames are duplicated across the cut so an episode can start
    exactly at a transition: [0..pickup], [pickup..place], [place..end].
    """
    ann.check_against(clip)
    parts = (
        (0, ann.pickup_frame + 1, Subset.PICK_UP),
        (ann.pickup_frame, ann.place_frame + 1, Subset.CARRY_WITH),
        (ann.place_frame, len(clip), Subset.PUT_DOWN),
    )
    return tuple(
        clip.slice(a, b, clip_id=f"{clip.clip_id}/{subset.value}", subset=subset)
        for a, b, subset in parts
    )


def save_annotation(path, clip_id: str, ann: ContactAnnotation) -> None:
    """Sidecar record tying contact frames to a clip id."""
    record = {
        "version": ANNOTATION_VERSION,
        "clip_id": clip_id,
        "pickup_frame": ann.pickup_frame,
        "place_frame": ann.place_frame,
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(record, f, indent=2, sort_keys=True)
        f.write("\n")


def load_annotation(path) -> tuple[str, ContactAnnotation]:
    with open(path, encoding="utf-8") as f:
        record = json.load(f)
    if record.get("version") != ANNOTATION_VERSION:
        raise ValueError("unsupported annotation record version")
    return record["clip_id"], ContactAnnotation(record["pickup_frame"], record["place_frame"])
