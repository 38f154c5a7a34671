"""Pose algebra checked against an independent 4x4 homogeneous-matrix oracle."""

import math

import numpy as np
import pytest

from hsikit import se3


# Oracle: plain 4x4 homogeneous matrices, no use of the library under test.
def mat(p, R):
    T = np.eye(4)
    T[:3, :3] = np.asarray(R, dtype=float)
    T[:3, 3] = np.asarray(p, dtype=float)
    return T


def mat_of(pose):
    return mat(pose.position, pose.rotation)


def random_pose(rng):
    return se3.Pose(rng.uniform(-5, 5, size=3), se3.random_rotation(rng))


def test_identity_compose():
    rng = np.random.default_rng(0)
    a = random_pose(rng)
    e = se3.identity_pose()
    for c in (se3.compose(a, e), se3.compose(e, a)):
        np.testing.assert_allclose(mat_of(c), mat_of(a), atol=1e-12)


def test_compose_matches_matrix_product():
    rng = np.random.default_rng(1)
    for _ in range(100):
        a, b = random_pose(rng), random_pose(rng)
        np.testing.assert_allclose(
            mat_of(se3.compose(a, b)), mat_of(a) @ mat_of(b), atol=1e-12
        )


def test_inverse_matches_matrix_inverse():
    rng = np.random.default_rng(2)
    for _ in range(100):
        a = random_pose(rng)
        np.testing.assert_allclose(
            mat_of(se3.inverse(a)), np.linalg.inv(mat_of(a)), atol=1e-9
        )


def test_compose_associative():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a, b, c = (random_pose(rng) for _ in range(3))
        left = se3.compose(se3.compose(a, b), c)
        right = se3.compose(a, se3.compose(b, c))
        np.testing.assert_allclose(mat_of(left), mat_of(right), atol=1e-9)


def test_transform_round_trip():
    rng = np.random.default_rng(4)
    for _ in range(100):
        p = rng.uniform(-5, 5, size=3)
        R = se3.random_rotation(rng)
        q, S = se3.from_transform(se3.to_transform(p, R))
        np.testing.assert_allclose(q, p, atol=0)
        np.testing.assert_allclose(S, R, atol=0)


def test_transform_point_matches_matrix():
    rng = np.random.default_rng(5)
    a = random_pose(rng)
    x = rng.uniform(-2, 2, size=3)
    hom = mat_of(a) @ np.append(x, 1.0)
    np.testing.assert_allclose(se3.transform_point(a, x), hom[:3], atol=1e-12)


def test_rot6d_identity():
    np.testing.assert_allclose(se3.rot_to_6d(np.eye(3)), [1, 0, 0, 0, 1, 0], atol=0)


def test_rot6d_yaw90():
    enc = se3.rot_to_6d(se3.rot_z(math.pi / 2))
    np.testing.assert_allclose(enc, [0, 1, 0, -1, 0, 0], atol=1e-12)


def test_rot6d_round_trip():
    rng = np.random.default_rng(6)
    for _ in range(200):
        R = se3.random_rotation(rng)
        np.testing.assert_allclose(se3.rot_from_6d(se3.rot_to_6d(R)), R, atol=1e-9)


def test_rot6d_decode_renormalizes():
    # Scaling the encoding must not change the decoded rotation.
    rng = np.random.default_rng(7)
    R = se3.random_rotation(rng)
    enc = se3.rot_to_6d(R)
    np.testing.assert_allclose(se3.rot_from_6d(3.7 * enc), R, atol=1e-9)


@pytest.mark.parametrize(
    "bad",
    [np.zeros(6), np.array([1, 0, 0, 2, 0, 0.0]), np.array([0, 0, 1e-12, 0, 1, 0.0])],
)
def test_rot6d_degenerate_raises(bad):
    with pytest.raises(ValueError):
        se3.rot_from_6d(bad)


def test_wrap_angle_half_open_interval():
    assert se3.wrap_angle(math.pi) == pytest.approx(math.pi)
    assert se3.wrap_angle(-math.pi) == pytest.approx(math.pi)
    assert se3.wrap_angle(3 * math.pi / 2) == pytest.approx(-math.pi / 2)
    assert se3.wrap_angle(0.3) == pytest.approx(0.3)
    rng = np.random.default_rng(8)
    for x in rng.uniform(-20, 20, size=200):
        w = se3.wrap_angle(x)
        assert -math.pi < w <= math.pi
        # Same angle modulo a full turn.
        assert math.isclose(math.sin(w), math.sin(x), abs_tol=1e-9)
        assert math.isclose(math.cos(w), math.cos(x), abs_tol=1e-9)


def test_yaw_error_quarter_turn():
    assert se3.yaw_error([0, 1], [1, 0]) == pytest.approx(math.pi / 2)
    assert se3.yaw_error([1, 0], [0, 1]) == pytest.approx(-math.pi / 2)
    assert se3.yaw_error([-1, 0], [1, 0]) == pytest.approx(math.pi)


def test_yaw_error_zero_direction_raises():
    with pytest.raises(ValueError):
        se3.yaw_error([0, 0], [1, 0])


def test_heading_ignores_pitch():
    # Pitch must not change the heading, only yaw does.
    pose = se3.Pose(np.zeros(3), se3.rot_z(math.radians(30)) @ se3.rot_y(math.radians(40)))
    np.testing.assert_allclose(
        se3.heading_of(pose),
        [math.cos(math.radians(30)), math.sin(math.radians(30))],
        atol=1e-12,
    )


def test_heading_vertical_raises():
    pose = se3.Pose(np.zeros(3), se3.rot_y(math.pi / 2))
    with pytest.raises(ValueError):
        se3.heading_of(pose)


def test_heading_unit_norm():
    rng = np.random.default_rng(9)
    for _ in range(100):
        R = se3.rot_z(rng.uniform(-math.pi, math.pi)) @ se3.rot_y(rng.uniform(-1.2, 1.2))
        h = se3.heading_of(se3.Pose(np.zeros(3), R))
        assert np.linalg.norm(h) == pytest.approx(1.0, abs=1e-12)


def test_perp_heading_left():
    np.testing.assert_allclose(se3.perp_heading([1, 0]), [0, 1], atol=0)
    np.testing.assert_allclose(se3.perp_heading([0, 1]), [-1, 0], atol=0)


def test_matrix_bridge_round_trip():
    rng = np.random.default_rng(10)
    a = random_pose(rng)
    b = se3.Pose.from_matrix(a.as_matrix())
    np.testing.assert_allclose(b.position, a.position, atol=0)
    np.testing.assert_allclose(b.rotation, a.rotation, atol=0)
