"""Task reward kernels, regularization penalty, and adversarial-style terms.

All task kernels score world-frame quantities and are written as scalar
float math (they sit in hot evaluation loops). Piecewise branches use strict
comparisons exactly as documented in each docstring; callers provide states
whose base forward axis is not vertical wherever a heading enters.

Two height-difference exponentials (sit and put) are capped at 1 so the
kernels stay inside their documented bounds; the cap only engages above the
reference height, where every documented value is unaffected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import se3
from .state import JointLimits, RewardWeights, RobotState, SceneState, Task


def _heading_gap(a, b) -> float:
    return abs(se3.yaw_error(a, b))


def _base_heading(s: RobotState) -> np.ndarray:
    return se3.heading_of(s.base_pose)


def _speed_term(coeff: float, scale: float, target: float, direction, vel_xy) -> float:
    along = float(direction[0] * vel_xy[0] + direction[1] * vel_xy[1])
    return coeff * math.exp(-scale * (target - along) ** 2)


def approach_reward(s: RobotState, scene: SceneState) -> float:
    """1.5 inside a 0.7 m arrival radius around the object; otherwise
    speed-toward-object plus heading-alignment exponentials."""
    bp = s.base_pose.position
    op = scene.object_world.position
    dx, dy = op[0] - bp[0], op[1] - bp[1]
    dist = math.hypot(dx, dy)
    if dist < 0.7:
        return 1.5
    d_star = np.array([dx / dist, dy / dist])
    vel = s.world_lin_vel()
    term1 = _speed_term(1.0, 5.0, 0.85, d_star, vel)
    term2 = 0.5 * math.exp(-0.75 * _heading_gap(d_star, _base_heading(s)))
    return term1 + term2


def carry_reward(s: RobotState, scene: SceneState) -> float:
    """0 once the object strays beyond 0.7 m of the base; 2.2 inside a 0.7 m
    goal radius; otherwise speed/heading toward the goal plus a hand-proximity
    exponential."""
    bp = s.base_pose.position
    op = scene.object_world.position
    if math.hypot(op[0] - bp[0], op[1] - bp[1]) > 0.7:
        return 0.0
    gp = scene.goal_world
    gx, gy = gp[0] - bp[0], gp[1] - bp[1]
    goal_dist = math.hypot(gx, gy)
    if goal_dist < 0.7:
        return 2.2
    d_sharp = np.array([gx / goal_dist, gy / goal_dist])
    vel = s.world_lin_vel()
    term1 = _speed_term(1.0, 5.0, 0.85, d_sharp, vel)
    term2 = 0.5 * math.exp(-0.75 * _heading_gap(d_sharp, _base_heading(s)))
    hand = scene.hand_mid
    hand_err2 = float((op[0] - hand[0]) ** 2 + (op[1] - hand[1]) ** 2 + (op[2] - hand[2]) ** 2)
    term3 = 0.7 * math.exp(-3.0 * hand_err2)
    return term1 + term2 + term3


def pick_reward(s: RobotState, scene: SceneState) -> float:
    """0 when the object is out of reach; 2.0 once near the goal or lifted
    past 0.75 m; otherwise an exponential in the lift-height error."""
    bp = s.base_pose.position
    op = scene.object_world.position
    if math.hypot(op[0] - bp[0], op[1] - bp[1]) > 0.7:
        return 0.0
    gp = scene.goal_world
    if math.hypot(gp[0] - bp[0], gp[1] - bp[1]) < 0.7 or op[2] > 0.75:
        return 2.0
    return 2.0 * math.exp(-3.0 * abs(0.75 - op[2]))


def put_reward(s: RobotState, scene: SceneState) -> float:
    """0 until the base is within 0.7 m of the goal; 2.0 once the object sits
    within 0.05 m of it; otherwise placement-distance and lowering terms."""
    bp = s.base_pose.position
    gp = scene.goal_world
    if math.hypot(gp[0] - bp[0], gp[1] - bp[1]) > 0.7:
        return 0.0
    op = scene.object_world.position
    err = math.sqrt((op[0] - gp[0]) ** 2 + (op[1] - gp[1]) ** 2 + (op[2] - gp[2]) ** 2)
    if err < 0.05:
        return 2.0
    lowering = min(math.exp(-3.0 * (op[2] - gp[2])), 1.0)
    return math.exp(-10.0 * err) + lowering


def sit_reward(s: RobotState, scene: SceneState) -> float:
    """0 beyond a 0.7 m radius of the seat; otherwise proximity, descent, and
    heading-alignment exponentials."""
    bp = s.base_pose.position
    op = scene.object_world.position
    if math.hypot(op[0] - bp[0], op[1] - bp[1]) > 0.7:
        return 0.0
    err = math.sqrt((op[0] - bp[0]) ** 2 + (op[1] - bp[1]) ** 2 + (op[2] - bp[2]) ** 2)
    term1 = math.exp(-3.0 * err)
    term2 = min(math.exp(-5.0 * (op[2] - bp[2])), 1.0)
    term3 = math.exp(-0.75 * _heading_gap(scene.object_heading(), _base_heading(s)))
    return term1 + term2 + term3


def head_to_base_heading(s: RobotState) -> np.ndarray:
    """Horizontal unit direction from the head to the base.

    Raises ValueError when the head sits directly above the base.
    """
    from .state import HEAD_INDEX

    head = s.world_ee_pos(HEAD_INDEX)
    bp = s.base_pose.position
    d = np.array([bp[0] - head[0], bp[1] - head[1]])
    n = np.linalg.norm(d)
    if n < 1e-9:
        raise ValueError("head is directly above the base; body axis undefined")
    return d / n


def lie_reward(s: RobotState, scene: SceneState, swap_branches: bool = False) -> float:
    """Near-and-level guard selects the sit kernel; otherwise a 3.0 bonus plus
    body-flatness and bed-axis-alignment exponentials.

    The printed branch order looks inverted (the bonus branch pays out at any
    distance); swap_branches=True exchanges the two branches and is off by
    default.
    """
    bp = s.base_pose.position
    op = scene.object_world.position
    near = math.hypot(op[0] - bp[0], op[1] - bp[1]) < 0.3
    level = (op[2] - bp[2]) < 0.05
    guard = near and level
    if swap_branches:
        guard = not guard
    if guard:
        return sit_reward(s, scene)
    up_dot = abs(float(s.base_pose.rotation[2, 2]))
    term1 = 0.5 * math.exp(-0.75 * up_dot)
    bed_axis = se3.perp_heading(scene.object_heading())
    term2 = 0.5 * math.exp(-2.0 * _heading_gap(bed_axis, head_to_base_heading(s)))
    return 3.0 + term1 + term2


def standup_reward(s: RobotState) -> float:
    """3.0 above a 0.72 m base height; otherwise an exponential in the
    remaining rise."""
    z = float(s.base_pose.position[2])
    if z > 0.72:
        return 3.0
    return 3.0 * math.exp(-5.0 * (0.72 - z))


def goal_locomotion_reward(s: RobotState, scene: SceneState) -> float:
    """Speed and heading toward the goal point (half-weight variant used
    after standing up)."""
    bp = s.base_pose.position
    gp = scene.goal_world
    gx, gy = gp[0] - bp[0], gp[1] - bp[1]
    dist = math.hypot(gx, gy)
    if dist < 1e-9:
        raise ValueError("goal coincides with the base; direction undefined")
    d_prime = np.array([gx / dist, gy / dist])
    vel = s.world_lin_vel()
    term1 = _speed_term(0.5, 5.0, 0.85, d_prime, vel)
    term2 = 0.5 * math.exp(-0.75 * _heading_gap(d_prime, _base_heading(s)))
    return term1 + term2


def velocity_tracking_reward(s: RobotState, command) -> float:
    """Planar linear-velocity and yaw-rate tracking of a command, both in the
    base frame."""
    cmd = np.asarray(command, dtype=np.float64).reshape(3)
    v = s.base_lin_vel
    err2 = float((v[0] - cmd[0]) ** 2 + (v[1] - cmd[1]) ** 2)
    term1 = math.exp(-4.0 * err2)
    term2 = 0.5 * math.exp(-4.0 * (float(s.base_ang_vel[2]) - cmd[2]) ** 2)
    return term1 + term2


# Penalty weights; every term is nonnegative, so the sum is always <= 0.
REG_WEIGHTS = {
    "dof_velocity": -2e-4,
    "torques": -1e-4,
    "dof_acceleration": -1e-7,
    "torque_limits": -0.1,
    "dof_pos_limits": -5.0,
    "action_rate": -0.03,
    "dof_vel_limits": -1e-3,
}


def regularization_penalty(
    s: RobotState, prev_action, action, limits: JointLimits
) -> float:
    """Weighted sum of the usual smoothness/limit penalties; <= 0 always.

    Squared sums for joint velocity, torque, and joint acceleration; squared
    action difference for the action rate; linear excess beyond the limit for
    the three limit terms.
    """
    prev_action = np.asarray(prev_action, dtype=np.float64)
    action = np.asarray(action, dtype=np.float64)
    terms = {
        "dof_velocity": float(np.sum(s.joint_vel**2)),
        "torques": float(np.sum(s.torques**2)),
        "dof_acceleration": float(np.sum(s.joint_acc**2)),
        "torque_limits": float(np.sum(np.clip(np.abs(s.torques) - limits.torque, 0, None))),
        "dof_pos_limits": float(
            np.sum(np.clip(s.joint_pos - limits.upper, 0, None))
            + np.sum(np.clip(limits.lower - s.joint_pos, 0, None))
        ),
        "action_rate": float(np.sum((action - prev_action) ** 2)),
        "dof_vel_limits": float(np.sum(np.clip(np.abs(s.joint_vel) - limits.velocity, 0, None))),
    }
    return sum(REG_WEIGHTS[k] * v for k, v in terms.items())


def style_reward(d_score: float, clamp_eps: float = 1e-4) -> float:
    """-log(1 - D) with the score clamped into [eps, 1-eps]."""
    if not math.isfinite(d_score):
        raise ValueError("discriminator score must be finite")
    s = min(max(d_score, clamp_eps), 1.0 - clamp_eps)
    return -math.log(1.0 - s)


def discriminator_loss(
    scores_data,
    scores_policy,
    grad_norms_sq=(),
    gp_weight: float = 1.0,
    clamp_eps: float = 1e-4,
) -> float:
    """Empirical two-sided log loss plus a gradient penalty term.

    Scores are clamped into (0,1); gradient norms (already squared) come from
    the caller, no differentiation happens here.
    """
    data = np.clip(np.asarray(scores_data, dtype=np.float64), clamp_eps, 1.0 - clamp_eps)
    policy = np.clip(np.asarray(scores_policy, dtype=np.float64), clamp_eps, 1.0 - clamp_eps)
    if data.size == 0 or policy.size == 0:
        raise ValueError("empty score batch")
    gp = np.asarray(grad_norms_sq, dtype=np.float64)
    if np.any(gp < 0):
        raise ValueError("squared gradient norms must be >= 0")
    loss = -float(np.mean(np.log(data))) - float(np.mean(np.log(1.0 - policy)))
    if gp.size:
        loss += gp_weight * float(np.mean(gp))
    return loss


TASK_TERMS = {
    Task.CARRY: ("loco", "carry", "pick", "put"),
    Task.SIT: ("loco", "sit"),
    Task.LIE: ("loco", "lie"),
    Task.STAND_UP: ("standup", "loco_target"),
    Task.STYLE_LOCO: ("velocity_tracking",),
}


def compute_task_terms(
    task: Task, s: RobotState, scene: SceneState | None = None, command=None
) -> dict:
    """Evaluate the stage kernels that make up a task's total."""
    if task is Task.CARRY:
        return {
            "loco": approach_reward(s, scene),
            "carry": carry_reward(s, scene),
            "pick": pick_reward(s, scene),
            "put": put_reward(s, scene),
        }
    if task is Task.SIT:
        return {"loco": approach_reward(s, scene), "sit": sit_reward(s, scene)}
    if task is Task.LIE:
        return {"loco": approach_reward(s, scene), "lie": lie_reward(s, scene)}
    if task is Task.STAND_UP:
        return {
            "standup": standup_reward(s),
            "loco_target": goal_locomotion_reward(s, scene),
        }
    if task is Task.STYLE_LOCO:
        return {"velocity_tracking": velocity_tracking_reward(s, command)}
    raise ValueError(f"unknown task {task}")


@dataclass(frozen=True)
class RewardBreakdown:
    terms: dict
    task_total: float
    regularization: float
    style: float
    total: float


def total_reward(
    task: Task,
    terms: dict,
    weights: RewardWeights = RewardWeights(),
    regularization: float = 0.0,
    style: float = 0.0,
) -> RewardBreakdown:
    """Combine stage terms with the weighted regularization and style parts.

    The stage maxima are branch-exclusive (e.g. the carry stages can never
    all pay their maximum at the same state); summing them here is plain
    arithmetic over whatever terms the caller computed.
    """
    expected = TASK_TERMS[task]
    if set(terms) != set(expected):
        raise ValueError(f"expected terms {sorted(expected)}, got {sorted(terms)}")
    task_total = float(sum(terms.values()))
    total = (
        weights.task * task_total
        + weights.regularization * regularization
        + weights.style * style
    )
    return RewardBreakdown(dict(terms), task_total, regularization, style, total)


def linear_schedule(
    step: float, start_step: float, end_step: float, start_value: float, end_value: float
) -> float:
    """Linear ramp between two values, clamped outside the step range."""
    if end_step <= start_step:
        raise ValueError("end_step must exceed start_step")
    u = (step - start_step) / (end_step - start_step)
    return start_value + (end_value - start_value) * min(max(u, 0.0), 1.0)


SUCCESS_POSITION_TOL = 0.1
SUCCESS_HEADING_TOL = math.radians(15.0)
SUCCESS_STAND_HEIGHT = 0.72
SUCCESS_TARGET_TOL = 0.3


def evaluate_success(task: Task, final_state: RobotState, scene: SceneState) -> bool:
    """Strict-inequality terminal success tests, one rule set per task."""
    s, bp = final_state, final_state.base_pose.position
    if task is Task.CARRY:
        err = np.linalg.norm(scene.object_world.position - scene.goal_world)
        return bool(err < SUCCESS_POSITION_TOL)
    if task in (Task.SIT, Task.LIE):
        err = np.linalg.norm(scene.object_world.position - bp)
        if not err < SUCCESS_POSITION_TOL:
            return False
        gap = _heading_gap(scene.object_heading(), _base_heading(s))
        if not gap < SUCCESS_HEADING_TOL:
            return False
        if task is Task.LIE:
            # Body axis parallel to the bed as a line (either direction).
            axis_gap = _heading_gap(
                se3.perp_heading(scene.object_heading()), head_to_base_heading(s)
            )
            axis_gap = min(axis_gap, math.pi - axis_gap)
            if not axis_gap < SUCCESS_HEADING_TOL:
                return False
        return True
    if task is Task.STAND_UP:
        if not bp[2] > SUCCESS_STAND_HEIGHT:
            return False
        target_err = math.hypot(
            scene.goal_world[0] - bp[0], scene.goal_world[1] - bp[1]
        )
        return bool(target_err < SUCCESS_TARGET_TOL)
    raise ValueError(f"no success criterion for task {task}")
