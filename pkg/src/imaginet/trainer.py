"""Data collection into per-state queues and the joint component update loop."""

import logging
from dataclasses import dataclass, field

import numpy as np

from .gridworld import StateIndex, Transition, render, step
from .memory import ShortTermMemory
from .model import ImagineModel, seed_streams

log = logging.getLogger(__name__)

METRIC_COLUMNS = (
    "episode", "steps", "total_reward", "epsilon", "recognizer_loss",
    "decoder_loss", "deduction_loss", "discriminator_loss", "recognizer_accuracy",
)


@dataclass
class MetricsLog:
    rows: list = field(default_factory=list)

    def append(self, **row):
        self.rows.append(tuple(row[c] for c in METRIC_COLUMNS))

    def __len__(self):
        return len(self.rows)

    def column(self, name):
        i = METRIC_COLUMNS.index(name)
        return np.array([r[i] for r in self.rows], dtype=float)


def collect_episode(grid, q, stm, epsilon, rng, max_steps=200):
    """Run one epsilon-greedy episode from ``grid.start``.

    Each transition is stored in ``stm`` and fed to the online Q update as soon
    as its ``next_action`` is chosen.
    """
    idx = StateIndex(grid)
    pos = grid.start
    s = idx.label(pos)
    screen = render(grid, pos)
    a = q.select_action(s, epsilon, rng)
    episode = []
    for _ in range(max_steps):
        nxt, r, done = step(grid, pos, a)
        s2 = idx.label(nxt)
        screen2 = render(grid, nxt)
        a2 = None if done else q.select_action(s2, epsilon, rng)
        t = Transition(s, screen, a, r, s2, screen2, a2, done)
        stm.store(t)
        q.update(t)
        episode.append(t)
        if done:
            break
        pos, s, screen, a = nxt, s2, screen2, a2
    return episode


def train_step(model, stm, batch_size, rng, on_targets=None):
    """One balanced batch through every learned component, in a fixed order.

    1. recognizer on current and next screens with their true labels
    2. re-encode both with the updated recognizer
    3. long-term memory fit + decoder step on (root, screen)
    4. deduction on (root, action) -> next root
    5. discriminator on (next root, done)

    ``on_targets(roots, next_roots)`` is called after step 2, for inspection.
    Returns a dict of pre-step losses.
    """
    batch = stm.sample_balanced(batch_size, rng)
    screens = np.stack([t.screen for t in batch])
    next_screens = np.stack([t.next_screen for t in batch])
    labels = np.array([t.state for t in batch])
    next_labels = np.array([t.next_state for t in batch])
    actions = np.array([t.action for t in batch])
    done = np.array([t.done for t in batch], dtype=float)

    all_screens = np.concatenate([screens, next_screens])
    all_labels = np.concatenate([labels, next_labels])
    rec_loss = model.recognizer.train_batch(all_screens, all_labels)

    all_roots = model.recognizer.encode(all_screens)
    roots, next_roots = all_roots[:batch_size], all_roots[batch_size:]
    if on_targets is not None:
        on_targets(roots, next_roots)

    for s in np.unique(all_labels):
        model.ltm.fit_distribution(int(s), all_roots[all_labels == s])
    dec_loss = model.decoder.train_batch(all_roots, all_screens)

    ded_loss = model.deduction.train_batch(roots, actions, next_roots)
    disc_loss = model.discriminator.train_batch(next_roots, done)
    return {
        "recognizer": rec_loss,
        "decoder": dec_loss,
        "deduction": ded_loss,
        "discriminator": disc_loss,
    }


def recognizer_accuracy(model):
    idx = model.states
    screens = np.stack([render(model.grid, c) for c in idx.cells])
    pred, _ = model.recognizer.classify(screens)
    return float(np.mean(pred == np.arange(len(idx))))


def run(config, progress=False):
    """Train every component from scratch. Returns ``(model, metrics)``; deterministic in ``config.seed``."""
    model = ImagineModel.fresh(config)
    streams = seed_streams(config.seed)
    behavior_rng = np.random.default_rng(streams["behavior"])
    sampler_rng = np.random.default_rng(streams["sampler"])
    stm = ShortTermMemory(len(model.states), config.capacity)
    metrics = MetricsLog()

    for ep in range(config.episodes):
        eps = config.epsilon(ep)
        episode = collect_episode(config.grid, model.q, stm, eps, behavior_rng, config.steps_per_episode)
        losses = {k: [] for k in ("recognizer", "decoder", "deduction", "discriminator")}
        for _ in range(config.train_steps_per_episode):
            for k, v in train_step(model, stm, config.batch_size, sampler_rng).items():
                losses[k].append(v)
        metrics.append(
            episode=ep,
            steps=len(episode),
            total_reward=float(sum(t.reward for t in episode)),
            epsilon=eps,
            recognizer_loss=float(np.mean(losses["recognizer"])),
            decoder_loss=float(np.mean(losses["decoder"])),
            deduction_loss=float(np.mean(losses["deduction"])),
            discriminator_loss=float(np.mean(losses["discriminator"])),
            recognizer_accuracy=recognizer_accuracy(model),
        )
        if progress and (ep + 1) % 25 == 0:
            log.info("episode %d/%d steps=%d eps=%.3f acc=%.2f", ep + 1, config.episodes,
                     len(episode), eps, metrics.rows[-1][-1])
    return model, metrics
