"""Reference motion clips and their on-disk container.

A clip stores per-frame arrays in a fixed field order: joint positions,
base position, base rotation, end-effector positions, then the optional
object pose track added by annotation. Files are numpy ``.npz`` archives
carrying a format version so readers can reject unknown layouts; writing
then reading a clip is lossless.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .se3 import Pose
from .state import NUM_END_EFFECTORS, NUM_JOINTS

FORMAT_VERSION = 1


class Subset(Enum):
    """Which motion family a clip belongs to."""

    LOCO = "loco"
    PICK_UP = "pick_up"
    CARRY_WITH = "carry_with"
    PUT_DOWN = "put_down"
    SIT = "sit"
    LIE = "lie"
    GET_UP = "get_up"
    STYLE_FORWARD = "style_forward"
    STYLE_BACKWARD = "style_backward"
    STYLE_SIDE = "style_side"


# Subsets whose clips carry an object pose track once annotated.
OBJECT_SUBSETS = frozenset(
    {Subset.PICK_UP, Subset.CARRY_WITH, Subset.PUT_DOWN, Subset.SIT, Subset.LIE, Subset.GET_UP}
)


def _frames(a, name, shape_tail) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 1 + len(shape_tail) or a.shape[1:] != shape_tail:
        raise ValueError(f"{name} must have shape (T, {', '.join(map(str, shape_tail))})")
    return a.copy()


@dataclass
class MotionClip:
    """One reference motion: per-frame robot track plus optional object track."""

    clip_id: str
    subset: Subset
    fps: float
    joint_pos: np.ndarray
    base_pos: np.ndarray
    base_rot: np.ndarray
    ee_pos: np.ndarray
    object_pos: np.ndarray | None = None
    object_rot: np.ndarray | None = None

    def __post_init__(self):
        self.joint_pos = _frames(self.joint_pos, "joint_pos", (NUM_JOINTS,))
        self.base_pos = _frames(self.base_pos, "base_pos", (3,))
        self.base_rot = _frames(self.base_rot, "base_rot", (3, 3))
        self.ee_pos = _frames(self.ee_pos, "ee_pos", (NUM_END_EFFECTORS, 3))
        n = len(self.joint_pos)
        if n < 1:
            raise ValueError("clip must hold at least one frame")
        for name in ("base_pos", "base_rot", "ee_pos"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} length differs from joint_pos")
        if float(self.fps) <= 0:
            raise ValueError("fps must be positive")
        self.fps = float(self.fps)
        if (self.object_pos is None) != (self.object_rot is None):
            raise ValueError("object position and rotation tracks come together")
        if self.object_pos is not None:
            self.object_pos = _frames(self.object_pos, "object_pos", (3,))
            self.object_rot = _frames(self.object_rot, "object_rot", (3, 3))
            if len(self.object_pos) != n or len(self.object_rot) != n:
                raise ValueError("object track length differs from joint_pos")

    def __len__(self) -> int:
        return len(self.joint_pos)

    @property
    def annotated(self) -> bool:
        return self.object_pos is not None

    @property
    def duration(self) -> float:
        """Clip length in seconds, first frame at t=0."""
        return (len(self) - 1) / self.fps

    def base_pose(self, t: int) -> Pose:
        return Pose(self.base_pos[t], self.base_rot[t])

    def object_pose(self, t: int) -> Pose | None:
        if self.object_pos is None:
            return None
        return Pose(self.object_pos[t], self.object_rot[t])

    def slice(self, start: int, stop: int, clip_id: str | None = None,
              subset: Subset | None = None) -> "MotionClip":
        """Copy of frames [start, stop), optionally relabeled."""
        if not 0 <= start < stop <= len(self):
            raise ValueError("slice bounds out of range")
        sel = np.s_[start:stop]
        return replace(
            self,
            clip_id=self.clip_id if clip_id is None else clip_id,
            subset=self.subset if subset is None else subset,
            joint_pos=self.joint_pos[sel],
            base_pos=self.base_pos[sel],
            base_rot=self.base_rot[sel],
            ee_pos=self.ee_pos[sel],
            object_pos=None if self.object_pos is None else self.object_pos[sel],
            object_rot=None if self.object_rot is None else self.object_rot[sel],
        )


def save_clip(path, clip: MotionClip) -> None:
    """Write a clip as a versioned npz archive."""
    n = len(clip)
    np.savez(
        path,
        format_version=np.int64(FORMAT_VERSION),
        clip_id=np.str_(clip.clip_id),
        subset=np.str_(clip.subset.value),
        fps=np.float64(clip.fps),
        joint_pos=clip.joint_pos,
        base_pos=clip.base_pos,
        base_rot=clip.base_rot,
        ee_pos=clip.ee_pos,
        annotated=np.bool_(clip.annotated),
        object_pos=clip.object_pos if clip.annotated else np.zeros((n, 3)),
        object_rot=clip.object_rot if clip.annotated else np.zeros((n, 3, 3)),
    )


def load_clip(path) -> MotionClip:
    """Read a clip written by save_clip."""
    with np.load(path) as data:
        version = int(data["format_version"])
        if version != FORMAT_VERSION:
            raise ValueError(f"unsupported clip format version {version}")
        annotated = bool(data["annotated"])
        return MotionClip(
            clip_id=str(data["clip_id"]),
            subset=Subset(str(data["subset"])),
            fps=float(data["fps"]),
            joint_pos=data["joint_pos"],
            base_pos=data["base_pos"],
            base_rot=data["base_rot"],
            ee_pos=data["ee_pos"],
            object_pos=data["object_pos"] if annotated else None,
            object_rot=data["object_rot"] if annotated else None,
        )
