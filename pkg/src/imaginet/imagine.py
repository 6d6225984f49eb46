"""Environment-free rollouts chained through memory, recognition, agent, deduction and discriminator."""

from dataclasses import dataclass, field

import numpy as np

from .agent import greedy_policy
from .gridworld import StateIndex, greedy_rollout

DISCRIMINATOR_STOP = "discriminator_stop"
MAX_STEPS = "max_steps"


@dataclass
class ImaginedStep:
    index: int
    root: np.ndarray
    screen: np.ndarray
    label: int
    done_prob: float
    action: object = None


@dataclass
class ImaginedTrajectory:
    steps: list = field(default_factory=list)
    termination: str = MAX_STEPS

    @property
    def labels(self):
        return [s.label for s in self.steps]

    @property
    def actions(self):
        return [s.action for s in self.steps if s.action is not None]

    def __len__(self):
        return len(self.steps)


def imagine(model, start_state, max_steps=50, done_threshold=0.5, temperature=0.0, rng=None,
            reground=False):
    """Roll out the learned model from ``start_state`` without touching an environment.

    The start root is drawn from long-term memory; after that every root comes
    from the deduction net. With ``reground`` each predicted root is replaced by
    the memory mean of its recognized label.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    if not 0 < done_threshold < 1:
        raise ValueError("done_threshold must be in (0, 1)")
    if temperature > 0 and rng is None:
        raise ValueError("temperature > 0 needs an rng")
    policy = greedy_policy(model.q.values)
    v = model.ltm.generate_root(start_state, temperature, rng)
    traj = ImaginedTrajectory()
    for i in range(max_steps + 1):
        label, _ = model.recognizer.classify_root(v)
        label = int(label)
        p = float(model.discriminator.is_done(v))
        st = ImaginedStep(i, v, model.decoder.decode(v), label, p)
        traj.steps.append(st)
        if p >= done_threshold:
            traj.termination = DISCRIMINATOR_STOP
            return traj
        if i == max_steps:
            break
        st.action = int(policy[label])
        v = model.deduction.deduce(v, st.action)
        if reground:
            k = int(model.recognizer.classify_root(v)[0])
            if model.ltm.counts[k] > 0:
                v = model.ltm.means[k].copy()
    traj.termination = MAX_STEPS
    return traj


@dataclass
class MatchReport:
    imagined: list
    real: list
    match: bool
    agreement: float
    length_delta: int
    termination_delta: object


def compare_to_env(traj, grid, q):
    """Compare an imagined trajectory with the real greedy rollout from the same start."""
    idx = StateIndex(grid)
    imagined = traj.labels
    n_actions = len(traj.steps) - 1
    values = q.values if hasattr(q, "values") else q
    real = greedy_rollout(grid, greedy_policy(values), idx.cell(imagined[0]),
                          max_steps=max(n_actions, 4 * len(idx)))
    real_done = real[-1] == idx.goal_label
    img_done = traj.termination == DISCRIMINATOR_STOP
    longest = max(len(real), len(imagined))
    agree = sum(a == b for a, b in zip(real, imagined)) / longest
    if real_done and img_done:
        term_delta = len(imagined) - len(real)
    elif real_done == img_done:
        term_delta = 0
    else:
        term_delta = None
    return MatchReport(
        imagined=imagined,
        real=real,
        match=imagined == real and real_done == img_done,
        agreement=agree,
        length_delta=len(imagined) - len(real),
        termination_delta=term_delta,
    )
