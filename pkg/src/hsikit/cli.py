"""Command-line front end.

Subcommands:
  localize-sim   run scripted localization trials, write records + summary
  reward-check   evaluate reward cases against expected values
  annotate       synthesize an object track for a motion clip file
  rsi-sample     draw episode initializations and report statistics

Common flags: --seed, --out-dir, --config. Environment variables
HSIKIT_SEED and HSIKIT_OUT_DIR fill in when the flags are absent. Outputs
carry no timestamps, so identical inputs and seeds rerun byte-identically.
Every command exits 0 only when its internal checks pass; failures emit a
single JSON line on stderr.
"""

from __future__ import annotations

import argparse
import csv
import glob
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import annotation, episode_init, experiment, motion_data, rewards, se3
from .state import HAND_INDICES, HEAD_INDEX, Task
from .se3 import Pose
from .state import RobotState, SceneState

_TERM_NAMES = ("loco", "carry", "pick", "put", "sit", "lie", "standup",
               "loco_target", "velocity_tracking")

_TASK_NAMES = {
    "carry": Task.CARRY,
    "sit": Task.SIT,
    "lie": Task.LIE,
    "stand_up": Task.STAND_UP,
    "style_loco": Task.STYLE_LOCO,
}


class CheckFailure(Exception):
    """An internal consistency check did not pass."""


def _state_from_table(table: dict) -> RobotState:
    """RobotState from a case-file table; velocities are world-frame."""
    table = dict(table)
    base_pos = np.asarray(table.pop("base_pos", (0.0, 0.0, 0.75)), dtype=float)
    if "base_rpy" in table:
        r, p, y = table.pop("base_rpy")
        rot = se3.rot_z(y) @ se3.rot_y(p) @ se3.rot_x(r)
    else:
        rot = se3.rot_z(float(table.pop("base_yaw", 0.0)))
    lin_vel = np.asarray(table.pop("lin_vel", (0.0, 0.0, 0.0)), dtype=float)
    ang_vel = np.asarray(table.pop("ang_vel", (0.0, 0.0, 0.0)), dtype=float)
    head_pos = table.pop("head_pos", None)
    if table:
        raise ValueError(f"unknown state fields: {sorted(table)}")
    state = RobotState(
        base_pose=Pose(base_pos, rot),
        base_height=float(base_pos[2]),
        base_lin_vel=rot.T @ lin_vel,
        base_ang_vel=ang_vel,
    )
    if head_pos is not None:
        state.ee_pos[HEAD_INDEX] = rot.T @ (np.asarray(head_pos, dtype=float) - base_pos)
    return state


def _scene_from_table(table: dict) -> SceneState:
    """SceneState from a case-file table; positions are world-frame with the
    base at the origin facing +x."""
    table = dict(table)
    object_pos = np.asarray(table.pop("object_pos", (0.0, 0.0, 0.0)), dtype=float)
    object_yaw = float(table.pop("object_yaw", 0.0))
    goal = np.asarray(table.pop("goal_pos", (0.0, 0.0, 0.0)), dtype=float)
    bbox = np.asarray(table.pop("bbox", (0.3, 0.3, 0.25)), dtype=float)
    hand_mid = np.asarray(table.pop("hand_mid", (0.0, 0.0, 0.0)), dtype=float)
    if table:
        raise ValueError(f"unknown scene fields: {sorted(table)}")
    obj = Pose(object_pos, se3.rot_z(object_yaw))
    return SceneState(
        object_pose=obj,
        object_world=obj,
        goal_pos=goal,
        goal_world=goal,
        object_bbox=bbox,
        hand_mid=hand_mid,
    )


def _eval_term(term: str, state: RobotState, scene: SceneState, command) -> float:
    if term == "loco":
        return rewards.approach_reward(state, scene)
    if term == "carry":
        return rewards.carry_reward(state, scene)
    if term == "pick":
        return rewards.pick_reward(state, scene)
    if term == "put":
        return rewards.put_reward(state, scene)
    if term == "sit":
        return rewards.sit_reward(state, scene)
    if term == "lie":
        return rewards.lie_reward(state, scene)
    if term == "standup":
        return rewards.standup_reward(state)
    if term == "loco_target":
        return rewards.goal_locomotion_reward(state, scene)
    if term == "velocity_tracking":
        return rewards.velocity_tracking_reward(state, command)
    raise ValueError(f"unknown term {term!r}; expected one of {_TERM_NAMES}")


def default_reward_cases() -> dict:
    """Built-in regression table covering every kernel branch family."""
    e = math.exp
    cases = [
        {"name": "loco_arrived", "term": "loco", "expected": 1.5,
         "state": {"base_pos": [3, 0, 0.75]}, "scene": {"object_pos": [3, 0.5, 0.5]}},
        {"name": "loco_standing_far", "term": "loco",
         "expected": e(-5 * 0.85**2) + 0.5,
         "state": {}, "scene": {"object_pos": [5, 0, 0.5]}},
        {"name": "carry_goal_reached", "term": "carry", "expected": 2.2,
         "state": {"base_pos": [3, 0, 0.75]},
         "scene": {"object_pos": [3.3, 0, 0.9], "goal_pos": [3, 0.5, 0.3]}},
        {"name": "carry_mid_perfect", "term": "carry", "expected": 2.2,
         "state": {"lin_vel": [0.85, 0, 0]},
         "scene": {"object_pos": [0.35, 0, 0.9], "goal_pos": [4, 0, 0.3],
                   "hand_mid": [0.35, 0, 0.9]}},
        {"name": "pick_lifted", "term": "pick", "expected": 2.0,
         "state": {}, "scene": {"object_pos": [0.4, 0, 0.8], "goal_pos": [4, 0, 0.3]}},
        {"name": "pick_on_floor", "term": "pick", "expected": 2 * e(-3 * 0.6),
         "state": {}, "scene": {"object_pos": [0.4, 0, 0.15], "goal_pos": [4, 0, 0.3]}},
        {"name": "put_placed", "term": "put", "expected": 2.0,
         "state": {"base_pos": [3, 0, 0.75]},
         "scene": {"object_pos": [3, 0.5, 0.33], "goal_pos": [3, 0.5, 0.3]}},
        {"name": "put_partial", "term": "put", "expected": e(-2) + 1.0,
         "state": {"base_pos": [3, 0, 0.75]},
         "scene": {"object_pos": [3, 0.7, 0.3], "goal_pos": [3, 0.5, 0.3]}},
        {"name": "sit_exact", "term": "sit", "expected": 3.0,
         "state": {"base_pos": [2, 1, 0.4], "base_yaw": 0.5},
         "scene": {"object_pos": [2, 1, 0.4], "object_yaw": 0.5}},
        {"name": "lie_flat", "term": "lie", "expected": 4.0,
         "state": {"base_pos": [1, 0, 0.2], "base_rpy": [0, math.pi / 2, 0],
                   "head_pos": [1, -0.3, 0.2]},
         "scene": {"object_pos": [0, 0, 0.4]}},
        {"name": "standup_low", "term": "standup", "expected": 3 * e(-1),
         "state": {"base_pos": [0, 0, 0.52]}, "scene": {}},
        {"name": "standup_tall", "term": "standup", "expected": 3.0,
         "state": {"base_pos": [0, 0, 0.8]}, "scene": {}},
        {"name": "loco_target_perfect", "term": "loco_target", "expected": 1.0,
         "state": {"lin_vel": [0.85, 0, 0]}, "scene": {"goal_pos": [3, 0, 0]}},
        {"name": "velocity_tracking_exact", "term": "velocity_tracking", "expected": 1.5,
         "state": {"lin_vel": [0.5, 0, 0]}, "scene": {}, "command": [0.5, 0, 0]},
        {"name": "velocity_tracking_yaw_gap", "term": "velocity_tracking",
         "expected": e(-1) + 0.5 * e(0.0),
         "state": {"lin_vel": [0.5, 0, 0]}, "scene": {}, "command": [0, 0, 0]},
    ]
    return {"version": 1, "cases": cases}


def _resolve_seed(args) -> int | None:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("HSIKIT_SEED")
    return int(env) if env else None


def _resolve_out_dir(args) -> Path:
    out = args.out_dir or os.environ.get("HSIKIT_OUT_DIR") or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _cmd_localize_sim(args) -> int:
    if args.zero_noise:
        cfg = experiment.zero_noise_scenario(args.zero_noise)
    elif args.config:
        cfg = experiment.load_scenario(args.config)
    else:
        cfg = experiment.load_scenario({})
    seed = _resolve_seed(args)
    if seed is not None:
        cfg["seed"] = seed
    if args.trials is not None:
        cfg["trials"] = args.trials
    cfg = experiment.load_scenario(cfg)
    records, summaries, aggregate = experiment.run_scenario(cfg)
    out = _resolve_out_dir(args)
    experiment.write_records_csv(out / "localization_records.csv", records)
    experiment.write_summary_json(out / "localization_summary.json", summaries, aggregate, cfg)
    for s in summaries:
        print(
            f"trial {s.trial}: steps={s.steps}"
            f" coarse={'-' if s.coarse_error is None else format(s.coarse_error, '.4f')}"
            f" fine={'-' if s.fine_error is None else format(s.fine_error, '.4f')}"
            f" transition={'-' if s.transition_distance is None else format(s.transition_distance, '.3f')}"
            f" success={s.success}"
        )
    print(f"aggregate: {json.dumps(aggregate, sort_keys=True)}")
    failures = [f"trial {s.trial} did not reach a fine estimate <= 0.1 m"
                for s in summaries if not s.success]
    if args.zero_noise:
        worst = max((r.error for r in records if not r.masked), default=0.0)
        print(f"zero-noise max error: {worst:.3e}")
        if worst >= 1e-9:
            failures.append(f"zero-noise error {worst:.3e} >= 1e-9")
    if failures:
        raise CheckFailure("; ".join(failures))
    return 0


def _cmd_reward_check(args) -> int:
    if args.cases:
        with open(args.cases, encoding="utf-8") as f:
            doc = json.load(f)
    else:
        doc = default_reward_cases()
    if doc.get("version") != 1:
        raise ValueError("unsupported cases file version")
    cases = doc.get("cases", [])
    if not cases:
        raise ValueError("cases file holds no cases")
    rows = []
    for case in cases:
        actual = _eval_term(
            case["term"],
            _state_from_table(case.get("state", {})),
            _scene_from_table(case.get("scene", {})),
            case.get("command"),
        )
        tol = float(case.get("tol", 1e-9))
        err = abs(actual - float(case["expected"]))
        rows.append((case["name"], case["term"], float(case["expected"]), actual, err, err <= tol))
    out = _resolve_out_dir(args)
    with open(out / "reward_check.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["name", "term", "expected", "actual", "abs_error", "status"])
        for name, term, expected, actual, err, ok in rows:
            writer.writerow([name, term, format(expected, ".12g"), format(actual, ".12g"),
                             format(err, ".3e"), "pass" if ok else "FAIL"])
    width = max(len(r[0]) for r in rows)
    for name, term, expected, actual, err, ok in rows:
        print(f"{name:<{width}}  {'pass' if ok else 'FAIL'}  expected={expected:.12g}"
              f" actual={actual:.12g}")
    bad = [r[0] for r in rows if not r[5]]
    print(f"{len(rows) - len(bad)}/{len(rows)} cases pass")
    if bad:
        raise CheckFailure(f"failing cases: {', '.join(bad)}")
    return 0


def _cmd_annotate(args) -> int:
    clip = motion_data.load_clip(args.clip)
    if args.smooth_window > 1:
        clip = annotation.smooth_motion(clip, args.smooth_window)
    ann = annotation.ContactAnnotation(args.pickup_frame, args.place_frame)
    annotated = annotation.annotate_object(clip, ann)
    out = _resolve_out_dir(args)
    stem = Path(args.clip).name.removesuffix(".npz")
    clip_path = out / f"{stem}_annotated.npz"
    motion_data.save_clip(clip_path, annotated)
    annotation.save_annotation(out / f"{stem}_annotation.json", annotated.clip_id, ann)
    jumps = []
    if ann.pickup_frame > 0:
        jumps.append(np.linalg.norm(
            annotated.object_pos[ann.pickup_frame - 1] - annotated.object_pos[ann.pickup_frame]))
    if ann.place_frame + 1 < len(annotated):
        jumps.append(np.linalg.norm(
            annotated.object_pos[ann.place_frame + 1] - annotated.object_pos[ann.place_frame]))
    worst = max(jumps, default=0.0)
    print(f"wrote {clip_path} ({len(annotated)} frames)")
    print(f"contact continuity: max jump {worst:.3e} m")
    if worst != 0.0:
        raise CheckFailure("object track is discontinuous at a contact frame")
    return 0


def _builtin_dataset() -> list:
    """Small deterministic clip set so rsi-sample runs without data files."""
    fps = 30.0
    n = 60
    t = np.arange(n) / fps
    ee = np.zeros((n, 5, 3))
    ee[:, HAND_INDICES[0]] = [0.3, 0.2, -0.2]
    ee[:, HAND_INDICES[1]] = [0.3, -0.2, -0.2]
    ee[:, HEAD_INDEX] = [0.05, 0.0, 0.55]
    base_pos = np.stack([0.4 * t, np.zeros(n), np.full(n, 0.75)], axis=1)
    walk = motion_data.MotionClip(
        clip_id="builtin/walk",
        subset=motion_data.Subset.LOCO,
        fps=fps,
        joint_pos=np.zeros((n, 29)),
        base_pos=base_pos,
        base_rot=np.tile(np.eye(3), (n, 1, 1)),
        ee_pos=ee,
        object_pos=None,
        object_rot=None,
    )
    lift = walk.slice(0, n, clip_id="builtin/lift")
    ann = annotation.ContactAnnotation(15, 45)
    lift = annotation.annotate_object(lift, ann)
    pick, carry, put = annotation.split_subsets(lift, ann)
    return [walk, pick, carry, put]


def _cmd_rsi_sample(args) -> int:
    task = _TASK_NAMES[args.task]
    if args.dataset:
        paths = sorted(glob.glob(os.path.join(args.dataset, "*.npz")))
        if not paths:
            raise ValueError(f"no .npz clips under {args.dataset}")
        dataset = [motion_data.load_clip(p) for p in paths]
    else:
        dataset = _builtin_dataset()
    seed = _resolve_seed(args)
    cfg = episode_init.RsiConfig(args.fraction, seed=0 if seed is None else seed)
    rng = np.random.default_rng(cfg.seed)
    ranges = episode_init.scene_ranges(task)
    draws = [episode_init.sample_init(dataset, ranges, cfg, rng) for _ in range(args.count)]

    keys = sorted(ranges)
    header = ["index", "mode", "clip_id", "phase", "frame_index"]
    for key in keys:
        if key in episode_init.VECTOR_KEYS:
            header += [f"{key[:-3]}_x", f"{key[:-3]}_y"]
        else:
            header.append(key)
    out = _resolve_out_dir(args)
    with open(out / "rsi_samples.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for i, d in enumerate(draws):
            row = [i, d.mode.value, d.clip_id or "",
                   "" if d.phase is None else format(d.phase, ".12g"),
                   "" if d.frame_index is None else d.frame_index]
            for key in keys:
                value = d.scene[key]
                if key in episode_init.VECTOR_KEYS:
                    row += [format(value[0], ".12g"), format(value[1], ".12g")]
                else:
                    row.append(format(value, ".12g"))
            writer.writerow(row)

    share = sum(d.mode is episode_init.InitMode.DEFAULT_POSE for d in draws) / len(draws)
    print(f"default-pose share: {share:.4f} (configured {args.fraction})")
    failures = []
    for d in draws:
        if d.mode is not episode_init.InitMode.DEFAULT_POSE:
            continue
        for key in keys:
            lo, hi = ranges[key]
            value = np.atleast_1d(d.scene[key])
            if (value < lo).any() or (value > hi).any():
                failures.append(f"{key}={value} outside [{lo}, {hi}]")
    if args.count >= 10000 and abs(share - args.fraction) > 0.02:
        failures.append(f"share {share:.4f} deviates from {args.fraction} by more than 0.02")
    if failures:
        raise CheckFailure("; ".join(failures[:5]))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="override the random seed (env: HSIKIT_SEED)")
    common.add_argument("--out-dir", default=None,
                        help="directory for output files (env: HSIKIT_OUT_DIR)")

    parser = argparse.ArgumentParser(
        prog="hsikit",
        description="Scene-interaction toolkit: localization simulation, "
                    "reward checks, clip annotation, episode sampling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("localize-sim", parents=[common],
                       help="run scripted localization trials")
    p.add_argument("--config", default=None, help="scenario JSON file")
    p.add_argument("--trials", type=int, default=None, help="override trial count")
    p.add_argument("--zero-noise",
                   choices=["approach", "approach_turn_sit", "approach_carry"],
                   default=None, help="run a noiseless oracle scenario")
    p.set_defaults(func=_cmd_localize_sim)

    p = sub.add_parser("reward-check", parents=[common],
                       help="evaluate reward cases against expected values")
    p.add_argument("--cases", default=None,
                   help="JSON cases file (defaults to the built-in table)")
    p.set_defaults(func=_cmd_reward_check)

    p = sub.add_parser("annotate", parents=[common],
                       help="add an object track to a clip file")
    p.add_argument("--clip", required=True, help="input clip (.npz)")
    p.add_argument("--pickup-frame", type=int, required=True)
    p.add_argument("--place-frame", type=int, required=True)
    p.add_argument("--smooth-window", type=int, default=1,
                   help="odd moving-average window applied before annotation")
    p.set_defaults(func=_cmd_annotate)

    p = sub.add_parser("rsi-sample", parents=[common],
                       help="draw episode initializations")
    p.add_argument("--task", choices=sorted(_TASK_NAMES), default="carry")
    p.add_argument("--fraction", type=float, default=0.5,
                   help="default-pose episode share")
    p.add_argument("--count", "-n", type=int, default=1000)
    p.add_argument("--dataset", default=None,
                   help="directory of clip .npz files (default: built-in clips)")
    p.set_defaults(func=_cmd_rsi_sample)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CheckFailure as exc:
        print(json.dumps({"error": "checks_failed", "message": str(exc)}), file=sys.stderr)
        return 1
    except (ValueError, OSError, KeyError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
