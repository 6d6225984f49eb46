"""Latent dynamics: (root, action) -> next root."""

import numpy as np

from .gridworld import N_ACTIONS
from .nn import Adam, DenseNet, loss_and_grad


class DeductionNet:
    def __init__(self, root_dim=32, hidden=64, n_actions=N_ACTIONS, lr=1e-3, seed=0):
        self.root_dim = root_dim
        self.n_actions = n_actions
        self.net = DenseNet([root_dim + n_actions, hidden, hidden, root_dim], "tanh", "tanh", seed=seed)
        self.opt = Adam(self.net.params, lr=lr)

    def _inputs(self, roots, actions):
        roots = np.asarray(roots, dtype=np.float64)
        if roots.shape[-1] != self.root_dim:
            raise ValueError(f"root dimension {roots.shape[-1]} != {self.root_dim}")
        actions = np.asarray(actions, dtype=int)
        if np.any(actions < 0) or np.any(actions >= self.n_actions):
            raise ValueError("action out of range")
        return np.concatenate([roots, np.eye(self.n_actions)[actions]], axis=-1)

    def deduce(self, roots, actions):
        return self.net(self._inputs(roots, actions))

    def train_batch(self, roots, actions, target_next_roots):
        """One Adam step on mean-squared error. Returns the pre-step loss."""
        x = self._inputs(roots, actions)
        if x.ndim != 2 or len(x) == 0:
            raise ValueError("need a nonempty batch")
        _, cache = self.net.forward(x)
        loss, grads = loss_and_grad(self.net, cache, target_next_roots, "mse")
        self.opt.step(self.net.params, grads)
        return loss
