"""End-state detector over root vectors."""

import numpy as np

from .nn import Adam, DenseNet, loss_and_grad


class DiscNet:
    def __init__(self, root_dim=32, hidden=32, lr=1e-3, seed=0):
        self.root_dim = root_dim
        self.net = DenseNet([root_dim, hidden, 1], "tanh", "sigmoid", seed=seed)
        self.opt = Adam(self.net.params, lr=lr)

    def _check(self, roots):
        roots = np.asarray(roots, dtype=np.float64)
        if roots.shape[-1] != self.root_dim:
            raise ValueError(f"root dimension {roots.shape[-1]} != {self.root_dim}")
        return roots

    def is_done(self, roots):
        """Probability that each root is a terminal state (scalar for a single root)."""
        return self.net(self._check(roots))[..., 0]

    def train_batch(self, roots, done_flags):
        """One Adam step on positively reweighted binary cross-entropy.

        Positives carry weight ``negatives / positives`` within the batch (1 when
        the batch has no positives). Returns the pre-step loss.
        """
        x = self._check(roots)
        y = np.asarray(done_flags, dtype=np.float64).reshape(-1)
        if x.ndim != 2 or len(x) == 0 or len(y) != len(x):
            raise ValueError("need a nonempty batch with one flag per root")
        n_pos = y.sum()
        pos_weight = (len(y) - n_pos) / n_pos if n_pos > 0 else 1.0
        w = np.where(y > 0.5, pos_weight, 1.0)
        _, cache = self.net.forward(x)
        loss, grads = loss_and_grad(self.net, cache, y[:, None], "bce", sample_weight=w)
        self.opt.step(self.net.params, grads)
        return loss
