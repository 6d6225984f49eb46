"""Tabular Q-learning selector."""

import numpy as np

from .gridworld import N_ACTIONS


class QTable:
    def __init__(self, n_states, n_actions=N_ACTIONS, alpha=0.1, gamma=0.9):
        self.values = np.zeros((n_states, n_actions))
        self.alpha = alpha
        self.gamma = gamma

    @property
    def n_states(self):
        return self.values.shape[0]

    def select_action(self, state, epsilon, rng):
        """Epsilon-greedy; greedy ties go to the lowest action index."""
        if not 0.0 <= epsilon <= 1.0:
            raise ValueError("epsilon must be in [0, 1]")
        # always consume one uniform so the stream doesn't depend on epsilon == 0
        if rng.random() < epsilon:
            return int(rng.integers(self.values.shape[1]))
        return int(np.argmax(self.values[state]))

    def update(self, transition):
        t = transition
        bootstrap = 0.0 if t.done else self.values[t.next_state].max()
        target = t.reward + self.gamma * bootstrap
        self.values[t.state, t.action] += self.alpha * (target - self.values[t.state, t.action])

    def greedy_policy(self):
        return greedy_policy(self.values)


def greedy_policy(q):
    return np.argmax(np.asarray(q), axis=1)
