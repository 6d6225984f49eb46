"""Oracle-based scoring of a trained model against the true environment."""

from dataclasses import dataclass

import numpy as np

from .gridworld import N_ACTIONS, bfs_distance, greedy_rollout, optimal_actions, render, step, value_iteration
from .imagine import compare_to_env, imagine


@dataclass(frozen=True)
class Thresholds:
    recognition: float = 1.0
    shortest_path: float = 1.0
    q_agreement: float = 0.95
    deduction: float = 0.95
    discriminator: float = 1.0
    imagination: float = 0.90
    memory: float = 1.0


OPEN_THRESHOLDS = Thresholds()
MAZE_THRESHOLDS = Thresholds(q_agreement=0.90, deduction=0.90, imagination=0.80)


def _agent_cell(screen):
    return np.unravel_index(np.argmax(screen), screen.shape)


def recognition_accuracy(model):
    idx = model.states
    screens = np.stack([render(model.grid, c) for c in idx.cells])
    pred, _ = model.recognizer.classify(screens)
    return float(np.mean(pred == np.arange(len(idx))))


def shortest_path_rate(model):
    """Fraction of non-goal starts whose greedy rollout reaches the goal in exactly BFS-distance moves."""
    grid, idx = model.grid, model.states
    policy = model.q.greedy_policy()
    dist = bfs_distance(grid)
    ok = []
    for s, cell in enumerate(idx.cells):
        if s == idx.goal_label:
            continue
        labels = greedy_rollout(grid, policy, cell)
        ok.append(labels[-1] == idx.goal_label and len(labels) - 1 == dist[cell])
    return float(np.mean(ok))


def q_agreement(model, gamma=0.9, tol=1e-9):
    """Fraction of non-goal states whose argmax action is value-iteration optimal."""
    q_star = value_iteration(model.grid, gamma, tol)
    policy = model.q.greedy_policy()
    goal = model.states.goal_label
    hits = [policy[s] in optimal_actions(q_star, s) for s in range(len(policy)) if s != goal]
    return float(np.mean(hits))


def deduction_fidelity(model):
    """Fraction of (state, action) pairs, goal excluded, whose deduced root classifies to the true next state."""
    grid, idx = model.grid, model.states
    hits = []
    for s, cell in enumerate(idx.cells):
        if s == idx.goal_label:
            continue
        root = model.recognizer.encode(render(grid, cell))
        for a in range(N_ACTIONS):
            nxt, _, _ = step(grid, cell, a)
            pred, _ = model.recognizer.classify_root(model.deduction.deduce(root, a))
            hits.append(int(pred) == idx.label(nxt))
    return float(np.mean(hits))


def discriminator_scores(model):
    """Done probabilities for the encoded root of every state."""
    idx = model.states
    roots = model.recognizer.encode(np.stack([render(model.grid, c) for c in idx.cells]))
    return model.discriminator.is_done(roots)


def discriminator_correct(model, threshold=0.5):
    probs = discriminator_scores(model)
    goal = model.states.goal_label
    labels = np.arange(len(probs)) == goal
    exact = bool(np.all((probs > threshold) == labels))
    separated = bool(probs[goal] > np.delete(probs, goal).max())
    return exact and separated


def imagination_match(model, max_steps=50, done_threshold=0.5):
    """Fraction of non-goal starts whose imagined label sequence equals the real greedy rollout.

    A match also needs every decoded frame's brightest pixel on the recognized cell.
    """
    idx = model.states
    hits = []
    for s in range(len(idx)):
        if s == idx.goal_label:
            continue
        if model.ltm.counts[s] == 0:
            hits.append(False)
            continue
        traj = imagine(model, s, max_steps, done_threshold, 0.0)
        rep = compare_to_env(traj, model.grid, model.q)
        frames_ok = all(_agent_cell(st.screen) == idx.cell(st.label) for st in traj.steps)
        hits.append(rep.match and frames_ok)
    return float(np.mean(hits))


def memory_generation(model):
    idx = model.states
    hits = []
    for s, cell in enumerate(idx.cells):
        if model.ltm.counts[s] == 0:
            hits.append(False)
            continue
        screen = model.decoder.decode(model.ltm.generate_root(s, 0.0))
        hits.append(_agent_cell(screen) == cell)
    return float(np.mean(hits))


METRICS = (
    "recognizer_accuracy",
    "deduction_fidelity",
    "discriminator_correct",
    "imagination_match_rate",
    "q_value_iteration_agreement",
    "shortest_path_rate",
    "memory_generation",
)


def evaluate(model, thresholds=None):
    """Every acceptance metric as ``{name: (value, threshold, passed)}``."""
    if thresholds is None:
        thresholds = MAZE_THRESHOLDS if model.grid.walls else OPEN_THRESHOLDS
    t = thresholds
    cfg = model.config
    values = {
        "recognizer_accuracy": (recognition_accuracy(model), t.recognition),
        "deduction_fidelity": (deduction_fidelity(model), t.deduction),
        "discriminator_correct": (float(discriminator_correct(model)), t.discriminator),
        "imagination_match_rate": (imagination_match(model, cfg.max_steps, cfg.done_threshold), t.imagination),
        "q_value_iteration_agreement": (q_agreement(model, cfg.gamma), t.q_agreement),
        "shortest_path_rate": (shortest_path_rate(model), t.shortest_path),
        "memory_generation": (memory_generation(model), t.memory),
    }
    return {k: (v, th, v >= th) for k, (v, th) in values.items()}
