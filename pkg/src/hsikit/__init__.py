"""Toolkit for humanoid scene-interaction work: rigid-body pose algebra,
object localization with simulated sensing, task reward kernels,
observation builders, motion-clip annotation, and episode initialization.
"""

from .se3 import (
    Pose,
    compose,
    inverse,
    rot_from_6d,
    rot_to_6d,
    rot_x,
    rot_y,
    rot_z,
    transform_point,
    wrap_angle,
)
from .localization import (
    LocalizerConfig,
    LocalizerState,
    Mode,
    ObjectClass,
    PoseEstimate,
    init_coarse,
    query_pose,
    update_detection,
    update_grasp_phase,
    update_odometry,
)
from .sensors import (
    CameraModel,
    OdometryModel,
    SensorScene,
    TagModel,
    camera_pose,
    scripted_trajectory,
    simulate_detection,
    simulate_odometry,
    visibility,
)
from .state import (
    NUM_JOINTS,
    JointLimits,
    RewardWeights,
    RobotState,
    SceneState,
    Task,
)
from .observations import (
    DISC_DIM,
    PROPRIO_DIM,
    TASK_DIMS,
    discriminator_obs,
    proprio_obs,
    task_obs,
)
from .rewards import (
    RewardBreakdown,
    compute_task_terms,
    discriminator_loss,
    evaluate_success,
    regularization_penalty,
    style_reward,
    total_reward,
)
from .motion_data import MotionClip, Subset, load_clip, save_clip
from .annotation import (
    ContactAnnotation,
    annotate_object,
    smooth_motion,
    split_subsets,
)
from .episode_init import (
    DomainDraw,
    EpisodeInit,
    InitMode,
    RsiConfig,
    apply_obs_noise,
    apply_pose_randomization,
    randomize_scene,
    sample_domain,
    sample_init,
    scene_ranges,
)
from .experiment import run_scenario, run_trial, summarize_trial, zero_noise_scenario

__version__ = "0.1.0"

__all__ = [
    "Pose", "compose", "inverse", "rot_from_6d", "rot_to_6d", "rot_x", "rot_y",
    "rot_z", "transform_point", "wrap_angle",
    "LocalizerConfig", "LocalizerState", "Mode", "ObjectClass", "PoseEstimate",
    "init_coarse", "query_pose", "update_detection", "update_grasp_phase",
    "update_odometry",
    "CameraModel", "OdometryModel", "SensorScene", "TagModel", "camera_pose",
    "scripted_trajectory", "simulate_detection", "simulate_odometry", "visibility",
    "NUM_JOINTS", "JointLimits", "RewardWeights", "RobotState", "SceneState", "Task",
    "DISC_DIM", "PROPRIO_DIM", "TASK_DIMS", "discriminator_obs", "proprio_obs",
    "task_obs",
    "RewardBreakdown", "compute_task_terms", "discriminator_loss", "evaluate_success",
    "regularization_penalty", "style_reward", "total_reward",
    "MotionClip", "Subset", "load_clip", "save_clip",
    "ContactAnnotation", "annotate_object", "smooth_motion", "split_subsets",
    "DomainDraw", "EpisodeInit", "InitMode", "RsiConfig", "apply_obs_noise",
    "apply_pose_randomization", "randomize_scene", "sample_domain", "sample_init",
    "scene_ranges",
    "run_scenario", "run_trial", "summarize_trial", "zero_noise_scenario",
    "__version__",
]
