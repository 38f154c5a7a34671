"""Coarse-to-fine object localization in the robot base frame.

An object's pose is tracked through four modes:

  * COARSE: only a manually seeded world anchor exists; the current estimate
    is that anchor carried backward through accumulated odometry.
  * FINE: a marker detection is available; the estimate is camera FK composed
    with the detection.
  * PROPAGATING: the last detection is carried forward through relative
    odometry, assuming the object has not moved since.
  * MASKED: a graspable object is in hand and out of view; the estimate is a
    sentinel (zero position, identity rotation) flagged as masked.

Every update returns a new state; callers serialize updates themselves.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from . import se3
from .se3 import Pose


class Mode(enum.Enum):
    COARSE = "coarse"
    FINE = "fine"
    PROPAGATING = "propagating"
    MASKED = "masked"


class ObjectClass(enum.Enum):
    STATIC = "static"
    DYNAMIC = "dynamic"


@dataclass(frozen=True)
class LocalizerConfig:
    object_class: ObjectClass = ObjectClass.STATIC
    # Estimated-distance threshold that latches the in-hand phase.
    grasp_distance: float = 0.6


@dataclass(frozen=True)
class LocalizerState:
    mode: Mode
    # Object pose in the initial base frame, from the manual world anchor.
    anchor_object: Pose
    # Odometry pose of the base at the current step (initial base frame).
    latest_odometry: Pose
    # Retained at the most recent detection.
    anchor_detection: Pose | None = None
    anchor_fk: Pose | None = None
    anchor_odometry: Pose | None = None
    # Latched once the estimated object distance drops below the threshold.
    grasp_entered: bool = False


@dataclass(frozen=True)
class PoseEstimate:
    position: np.ndarray
    rotation: np.ndarray
    mode: Mode
    masked: bool


def init_coarse(anchor_position, anchor_rotation=None) -> LocalizerState:
    """Start tracking from a manually picked object position.

    The anchor is expressed in the base frame at time zero; orientation
    defaults to identity because a picked point carries none.
    """
    rot = np.eye(3) if anchor_rotation is None else anchor_rotation
    return LocalizerState(
        mode=Mode.COARSE,
        anchor_object=Pose(anchor_position, rot),
        latest_odometry=se3.identity_pose(),
    )


def update_odometry(state: LocalizerState, odometry: Pose) -> LocalizerState:
    """Record the newest base pose relative to the initial base frame."""
    return replace(state, latest_odometry=odometry)


def update_detection(
    state: LocalizerState, detection: Pose | None, fk_camera: Pose
) -> LocalizerState:
    """Fold in a marker detection (camera frame), or its absence.

    A detection always moves the machine to FINE, re-anchoring on the current
    odometry. Losing the detection demotes FINE to PROPAGATING; COARSE and
    MASKED are left as they are until a detection or a grasp-phase update.
    """
    if detection is not None:
        if not se3.is_rotation(detection.rotation, tol=1e-6):
            raise ValueError("detection rotation is not orthonormal")
        return replace(
            state,
            mode=Mode.FINE,
            anchor_detection=detection,
            anchor_fk=fk_camera,
            anchor_odometry=state.latest_odometry,
        )
    if state.mode in (Mode.FINE, Mode.PROPAGATING):
        return replace(state, mode=Mode.PROPAGATING)
    return state


def query_pose(state: LocalizerState, config: LocalizerConfig) -> PoseEstimate:
    """Current object pose in the current base frame."""
    if state.mode is Mode.MASKED:
        return PoseEstimate(np.zeros(3), np.eye(3), Mode.MASKED, masked=True)
    if state.mode is Mode.COARSE:
        est = se3.compose(se3.inverse(state.latest_odometry), state.anchor_object)
    else:
        fused = se3.compose(state.anchor_fk, state.anchor_detection)
        if state.mode is Mode.FINE:
            est = fused
        else:
            # Base motion since the anchor detection, undone.
            rel = se3.compose(se3.inverse(state.anchor_odometry), state.latest_odometry)
            est = se3.compose(se3.inverse(rel), fused)
    return PoseEstimate(est.position, est.rotation, state.mode, masked=False)


def update_grasp_phase(
    state: LocalizerState,
    config: LocalizerConfig,
    estimate: PoseEstimate,
    in_view: bool,
) -> LocalizerState:
    """Apply the in-hand masking rule for graspable objects.

    Once the estimated distance falls below the threshold the grasp phase is
    latched for the rest of the episode. While latched, out-of-view masks the
    estimate; back-in-view resumes propagation (a detection will promote to
    FINE on its own).
    """
    if config.object_class is ObjectClass.STATIC:
        raise ValueError("grasp phase applies to graspable objects only")
    grasped = state.grasp_entered
    if not estimate.masked and float(np.linalg.norm(estimate.position)) <= config.grasp_distance:
        grasped = True
    mode = state.mode
    if grasped and not in_view:
        mode = Mode.MASKED
    elif mode is Mode.MASKED and in_view:
        mode = Mode.PROPAGATING if state.anchor_detection is not None else Mode.COARSE
    return replace(state, grasp_entered=grasped, mode=mode)
