"""Contact annotation, object-track synthesis, smoothing, and splitting."""

import math

import numpy as np
import pytest

from hsikit import annotation, se3
from hsikit.annotation import ContactAnnotation
from hsikit.motion_data import MotionClip, Subset
from hsikit.state import HAND_INDICES
from util import random_clip


def flat_clip(n=20, joint0=None):
    """Constant clip except an optional first-joint signal."""
    joint_pos = np.zeros((n, 29))
    if joint0 is not None:
        joint_pos[:, 0] = joint0
    return MotionClip(
        clip_id="flat",
        subset=Subset.PICK_UP,
        fps=30.0,
        joint_pos=joint_pos,
        base_pos=np.tile([0.0, 0.0, 0.75], (n, 1)),
        base_rot=np.tile(np.eye(3), (n, 1, 1)),
        ee_pos=np.zeros((n, 5, 3)),
    )


class TestAnnotateObject:
    def test_hand_midpoint_rule(self):
        clip = flat_clip(n=10)
        clip.base_pos[:] = 0.0
        clip.ee_pos[:, HAND_INDICES[0]] = [0.3, 0.2, 0.8]
        clip.ee_pos[:, HAND_INDICES[1]] = [0.3, -0.2, 0.8]
        out = annotation.annotate_object(clip, ContactAnnotation(2, 7))
        np.testing.assert_allclose(out.object_pos[5], [0.3, 0.0, 0.8], atol=1e-12)

    def test_world_frame_midpoint(self):
        rng = np.random.default_rng(0)
        clip = random_clip(rng, n=30)
        ann = ContactAnnotation(5, 25)
        out = annotation.annotate_object(clip, ann)
        t = 14
        base = clip.base_pose(t)
        mid = clip.ee_pos[t][list(HAND_INDICES)].mean(axis=0)
        np.testing.assert_allclose(
            out.object_pos[t], se3.transform_point(base, mid), atol=1e-12
        )

    def test_orientation_is_yaw_only(self):
        rng = np.random.default_rng(1)
        clip = random_clip(rng, n=20)
        out = annotation.annotate_object(clip, ContactAnnotation(3, 15))
        for t in (3, 9, 15):
            R = out.object_rot[t]
            assert R[2, 2] == pytest.approx(1.0)
            expected = se3.rot_z(se3.yaw_of(clip.base_pose(t)))
            np.testing.assert_allclose(R, expected, atol=1e-12)

    def test_frozen_outside_contacts(self):
        rng = np.random.default_rng(2)
        clip = random_clip(rng, n=40)
        ann = ContactAnnotation(10, 30)
        out = annotation.annotate_object(clip, ann)
        for t in range(10):
            np.testing.assert_array_equal(out.object_pos[t], out.object_pos[10])
            np.testing.assert_array_equal(out.object_rot[t], out.object_rot[10])
        for t in range(31, 40):
            np.testing.assert_array_equal(out.object_pos[t], out.object_pos[30])

    def test_continuity_exact(self):
        rng = np.random.default_rng(3)
        clip = random_clip(rng, n=50)
        ann = ContactAnnotation(12, 37)
        out = annotation.annotate_object(clip, ann)
        assert np.linalg.norm(out.object_pos[11] - out.object_pos[12]) == 0.0
        assert np.linalg.norm(out.object_pos[38] - out.object_pos[37]) == 0.0

    def test_idempotent(self):
        rng = np.random.default_rng(4)
        clip = random_clip(rng, n=30)
        ann = ContactAnnotation(6, 20)
        once = annotation.annotate_object(clip, ann)
        twice = annotation.annotate_object(once, ann)
        np.testing.assert_array_equal(once.object_pos, twice.object_pos)
        np.testing.assert_array_equal(once.object_rot, twice.object_rot)

    def test_fills_contact_poses(self):
        rng = np.random.default_rng(5)
        clip = random_clip(rng, n=30)
        ann = ContactAnnotation(6, 20)
        out = annotation.annotate_object(clip, ann)
        np.testing.assert_array_equal(ann.pickup_pose.position, out.object_pos[6])
        np.testing.assert_array_equal(ann.place_pose.rotation, out.object_rot[20])

    def test_validation(self):
        with pytest.raises(ValueError):
            ContactAnnotation(5, 5)
        with pytest.raises(ValueError):
            ContactAnnotation(-1, 5)
        rng = np.random.default_rng(6)
        clip = random_clip(rng, n=10)
        with pytest.raises(ValueError):
            annotation.annotate_object(clip, ContactAnnotation(2, 10))


class TestSmoothing:
    def test_window_one_is_identity(self):
        rng = np.random.default_rng(7)
        clip = random_clip(rng, n=15)
        out = annotation.smooth_motion(clip, 1)
        np.testing.assert_array_equal(out.joint_pos, clip.joint_pos)
        np.testing.assert_array_equal(out.base_rot, clip.base_rot)

    def test_constant_signal_unchanged(self):
        clip = flat_clip(n=20, joint0=0.4)
        out = annotation.smooth_motion(clip, 7)
        np.testing.assert_allclose(out.joint_pos, clip.joint_pos, atol=1e-12)
        np.testing.assert_allclose(out.base_pos, clip.base_pos, atol=1e-12)

    def test_alternating_signal(self):
        n = 9
        clip = flat_clip(n=n, joint0=[(-1.0) ** t for t in range(n)])
        out = annotation.smooth_motion(clip, 3)
        # Interior frames average two opposing neighbors against one sample,
        # flipping the sign at a third of the magnitude; endpoints shrink to
        # a width-one window and keep their value.
        for t in range(1, n - 1):
            assert out.joint_pos[t, 0] == pytest.approx(-((-1.0) ** t) / 3.0)
        assert out.joint_pos[0, 0] == 1.0
        assert out.joint_pos[n - 1, 0] == (-1.0) ** (n - 1)

    def test_range_containment(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            clip = random_clip(rng, n=rng.integers(7, 40))
            out = annotation.smooth_motion(clip, 5)
            for field in ("joint_pos", "base_pos", "ee_pos"):
                before = getattr(clip, field).reshape(len(clip), -1)
                after = getattr(out, field).reshape(len(clip), -1)
                assert (after.min(axis=0) >= before.min(axis=0) - 1e-12).all()
                assert (after.max(axis=0) <= before.max(axis=0) + 1e-12).all()

    def test_rotations_stay_orthonormal(self):
        rng = np.random.default_rng(9)
        clip = random_clip(rng, n=25)
        out = annotation.smooth_motion(clip, 9)
        for t in range(len(out)):
            assert se3.is_rotation(out.base_rot[t], tol=1e-9)

    def test_window_validation(self):
        rng = np.random.default_rng(10)
        clip = random_clip(rng, n=10)
        with pytest.raises(ValueError):
            annotation.smooth_motion(clip, 4)
        with pytest.raises(ValueError):
            annotation.smooth_motion(clip, 0)
        with pytest.raises(ValueError):
            annotation.smooth_motion(clip, 11)

    def test_object_track_untouched(self):
        rng = np.random.default_rng(11)
        clip = annotation.annotate_object(random_clip(rng, n=20), ContactAnnotation(4, 15))
        out = annotation.smooth_motion(clip, 5)
        np.testing.assert_array_equal(out.object_pos, clip.object_pos)


class TestSplit:
    def test_printed_lengths(self):
        rng = np.random.default_rng(12)
        clip = random_clip(rng, n=81)
        pick, carry, put = annotation.split_subsets(clip, ContactAnnotation(10, 50))
        assert (len(pick), len(carry), len(put)) == (11, 41, 31)
        assert pick.subset is Subset.PICK_UP
        assert carry.subset is Subset.CARRY_WITH
        assert put.subset is Subset.PUT_DOWN

    def test_reassembly(self):
        rng = np.random.default_rng(13)
        clip = annotation.annotate_object(random_clip(rng, n=80), ContactAnnotation(10, 50))
        pick, carry, put = annotation.split_subsets(clip, ContactAnnotation(10, 50))
        joined = np.concatenate([pick.joint_pos, carry.joint_pos[1:], put.joint_pos[1:]])
        np.testing.assert_array_equal(joined, clip.joint_pos)
        joined_obj = np.concatenate([pick.object_pos, carry.object_pos[1:], put.object_pos[1:]])
        np.testing.assert_array_equal(joined_obj, clip.object_pos)

    def test_boundary_frames_shared(self):
        rng = np.random.default_rng(14)
        clip = random_clip(rng, n=30)
        pick, carry, put = annotation.split_subsets(clip, ContactAnnotation(8, 21))
        np.testing.assert_array_equal(pick.base_pos[-1], carry.base_pos[0])
        np.testing.assert_array_equal(carry.base_pos[-1], put.base_pos[0])

    def test_adjacent_contacts(self):
        rng = np.random.default_rng(15)
        clip = random_clip(rng, n=30)
        _, carry, _ = annotation.split_subsets(clip, ContactAnnotation(9, 10))
        assert len(carry) == 2

    def test_subset_ids_derived(self):
        rng = np.random.default_rng(16)
        clip = random_clip(rng, n=30, clip_id="demo")
        pick, carry, put = annotation.split_subsets(clip, ContactAnnotation(5, 20))
        assert pick.clip_id == "demo/pick_up"
        assert carry.clip_id == "demo/carry_with"
        assert put.clip_id == "demo/put_down"


def test_sidecar_round_trip(tmp_path):
    ann = ContactAnnotation(4, 19)
    annotation.save_annotation(tmp_path / "ann.json", "demo", ann)
    clip_id, back = annotation.load_annotation(tmp_path / "ann.json")
    assert clip_id == "demo"
    assert (back.pickup_frame, back.place_frame) == (4, 19)
