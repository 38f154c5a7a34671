"""Clip container validation and file round trips."""

import numpy as np
import pytest

from hsikit import motion_data
from hsikit.motion_data import MotionClip, Subset
from util import random_clip


def test_lossless_round_trip(tmp_path):
    rng = np.random.default_rng(5)
    clip = random_clip(rng, n=25)
    path = tmp_path / "clip.npz"
    motion_data.save_clip(path, clip)
    back = motion_data.load_clip(path)
    assert back.clip_id == clip.clip_id
    assert back.subset is clip.subset
    assert back.fps == clip.fps
    np.testing.assert_array_equal(back.joint_pos, clip.joint_pos)
    np.testing.assert_array_equal(back.base_pos, clip.base_pos)
    np.testing.assert_array_equal(back.base_rot, clip.base_rot)
    np.testing.assert_array_equal(back.ee_pos, clip.ee_pos)
    assert back.object_pos is None and back.object_rot is None


def test_round_trip_with_object_track(tmp_path):
    rng = np.random.default_rng(6)
    clip = random_clip(rng, n=12)
    clip.object_pos = rng.uniform(-1, 1, size=(12, 3))
    clip.object_rot = np.tile(np.eye(3), (12, 1, 1))
    path = tmp_path / "annotated.npz"
    motion_data.save_clip(path, clip)
    back = motion_data.load_clip(path)
    assert back.annotated
    np.testing.assert_array_equal(back.object_pos, clip.object_pos)
    np.testing.assert_array_equal(back.object_rot, clip.object_rot)


def test_every_subset_round_trips(tmp_path):
    rng = np.random.default_rng(7)
    for subset in Subset:
        clip = random_clip(rng, n=3, subset=subset)
        motion_data.save_clip(tmp_path / f"{subset.value}.npz", clip)
        assert motion_data.load_clip(tmp_path / f"{subset.value}.npz").subset is subset


def test_unknown_version_rejected(tmp_path):
    rng = np.random.default_rng(8)
    path = tmp_path / "clip.npz"
    motion_data.save_clip(path, random_clip(rng, n=4))
    with np.load(path) as data:
        fields = dict(data)
    fields["format_version"] = np.int64(99)
    np.savez(path, **fields)
    with pytest.raises(ValueError):
        motion_data.load_clip(path)


def test_empty_clip_rejected():
    with pytest.raises(ValueError):
        MotionClip(
            clip_id="x",
            subset=Subset.LOCO,
            fps=30.0,
            joint_pos=np.zeros((0, 29)),
            base_pos=np.zeros((0, 3)),
            base_rot=np.zeros((0, 3, 3)),
            ee_pos=np.zeros((0, 5, 3)),
        )


def test_mismatched_lengths_rejected():
    with pytest.raises(ValueError):
        MotionClip(
            clip_id="x",
            subset=Subset.LOCO,
            fps=30.0,
            joint_pos=np.zeros((4, 29)),
            base_pos=np.zeros((3, 3)),
            base_rot=np.tile(np.eye(3), (4, 1, 1)),
            ee_pos=np.zeros((4, 5, 3)),
        )


def test_object_track_needs_both_fields():
    rng = np.random.default_rng(9)
    clip = random_clip(rng, n=4)
    with pytest.raises(ValueError):
        MotionClip(
            clip_id="x",
            subset=Subset.PICK_UP,
            fps=30.0,
            joint_pos=clip.joint_pos,
            base_pos=clip.base_pos,
            base_rot=clip.base_rot,
            ee_pos=clip.ee_pos,
            object_pos=np.zeros((4, 3)),
        )


def test_bad_fps_rejected():
    rng = np.random.default_rng(10)
    clip = random_clip(rng, n=4)
    with pytest.raises(ValueError):
        MotionClip(
            clip_id="x",
            subset=Subset.LOCO,
            fps=0.0,
            joint_pos=clip.joint_pos,
            base_pos=clip.base_pos,
            base_rot=clip.base_rot,
            ee_pos=clip.ee_pos,
        )


def test_slice_bounds_and_copy():
    rng = np.random.default_rng(11)
    clip = random_clip(rng, n=10)
    part = clip.slice(2, 7)
    assert len(part) == 5
    np.testing.assert_array_equal(part.joint_pos, clip.joint_pos[2:7])
    part.joint_pos[0, 0] = 99.0
    assert clip.joint_pos[2, 0] != 99.0
    with pytest.raises(ValueError):
        clip.slice(5, 3)
    with pytest.raises(ValueError):
        clip.slice(0, 11)


def test_duration():
    rng = np.random.default_rng(12)
    clip = random_clip(rng, n=31, fps=30.0)
    assert clip.duration == pytest.approx(1.0)
