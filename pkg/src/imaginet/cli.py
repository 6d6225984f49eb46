"""Command line entry point: ``imaginet {train,imagine,eval,oracle}``."""

import argparse
import logging
import sys

import numpy as np

from . import io
from .config import ConfigError, TrainConfig, format_config, load_config, parse_cell
from .evaluate import METRICS, evaluate
from .gridworld import bfs_distance, value_iteration
from .imagine import imagine
from .trainer import run


class UsageError(Exception):
    pass


def _config(path):
    return TrainConfig() if path is None else load_config(path)


def cmd_train(args):
    cfg = _config(args.config)
    model, metrics = run(cfg, progress=args.verbose)
    io.save_checkpoint(model, args.out)
    if args.metrics:
        io.write_metrics_csv(metrics, args.metrics)
    if args.q_csv:
        io.write_qtable_csv(model.q.values, args.q_csv)
    print(f"trained {cfg.episodes} episodes; checkpoint -> {args.out}")
    return 0


def cmd_imagine(args):
    model = io.load_checkpoint(args.ckpt)
    cfg = model.config
    try:
        cell = parse_cell(args.start)
    except ValueError as exc:
        raise UsageError(f"--start: {exc}") from None
    if not model.grid.is_free(cell):
        raise UsageError(f"--start {cell} is a wall or out of bounds")
    label = model.states.label(cell)
    temperature = cfg.temperature if args.temperature is None else args.temperature
    rng = np.random.default_rng(args.seed)
    traj = imagine(
        model, label,
        max_steps=cfg.max_steps if args.max_steps is None else args.max_steps,
        done_threshold=cfg.done_threshold,
        temperature=temperature,
        rng=rng,
        reground=args.reground,
    )
    io.write_trajectory(traj, args.dump, args.frames)
    for st in traj.steps:
        act = "-" if st.action is None else io.ACTION_NAMES[st.action]
        print(f"{st.index:3d}  cell={model.states.cell(st.label)}  done={st.done_prob:.3f}  action={act}")
    print(f"termination: {traj.termination}")
    return 0


def cmd_eval(args):
    model = io.load_checkpoint(args.ckpt)
    results = evaluate(model)
    width = max(len(m) for m in METRICS)
    for name in METRICS:
        value, threshold, ok = results[name]
        print(f"{name:<{width}}  {value:.4f}  (>= {threshold:.2f})  {'PASS' if ok else 'FAIL'}")
    return 0 if all(ok for _, _, ok in results.values()) else 1


def format_distances(grid):
    dist = bfs_distance(grid)
    rows = []
    for r in range(grid.height):
        cells = []
        for c in range(grid.width):
            if (r, c) in grid.walls:
                cells.append("#")
            elif np.isinf(dist[r, c]):
                cells.append("inf")
            else:
                cells.append(str(int(dist[r, c])))
        rows.append(" ".join(f"{v:>3}" for v in cells))
    return "\n".join(rows)


def cmd_oracle(args):
    cfg = _config(args.config)
    print(format_distances(cfg.grid))
    if args.q_csv:
        io.write_qtable_csv(value_iteration(cfg.grid, cfg.gamma, 1e-9), args.q_csv)
    return 0


def cmd_config(args):
    sys.stdout.write(format_config(_config(args.config)))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="imaginet", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="collect experience and train every component")
    t.add_argument("--config", help="config file (defaults: open5, seed 7)")
    t.add_argument("--out", required=True, help="checkpoint path")
    t.add_argument("--metrics", help="per-episode metrics CSV")
    t.add_argument("--q-csv", help="dump the learned Q-table as CSV")
    t.set_defaults(func=cmd_train)

    i = sub.add_parser("imagine", help="roll out the trained model without the environment")
    i.add_argument("--ckpt", required=True)
    i.add_argument("--start", required=True, help="start cell as 'r,c'")
    i.add_argument("--max-steps", type=int)
    i.add_argument("--temperature", type=float)
    i.add_argument("--seed", type=int, default=0, help="seed for temperature > 0 sampling")
    i.add_argument("--reground", action="store_true", help="snap each predicted root to its memory mean")
    i.add_argument("--dump", help="JSONL output, one line per step")
    i.add_argument("--frames", help="directory for per-step PGM frames")
    i.set_defaults(func=cmd_imagine)

    e = sub.add_parser("eval", help="score a checkpoint against the environment oracles")
    e.add_argument("--ckpt", required=True)
    e.set_defaults(func=cmd_eval)

    o = sub.add_parser("oracle", help="print BFS distances, write value-iteration Q-table")
    o.add_argument("--config")
    o.add_argument("--q-csv")
    o.set_defaults(func=cmd_oracle)

    c = sub.add_parser("config", help="print the fully resolved config")
    c.add_argument("--config")
    c.set_defaults(func=cmd_config)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (ConfigError, io.CheckpointError, UsageError, OSError, ValueError) as exc:
        msg = str(exc).replace("\n", " ")
        print(f"imaginet {args.command}: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
