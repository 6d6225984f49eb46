"""Screen -> state label classifier whose penultimate layer is the shared root vector."""

import numpy as np

from .nn import Adam, DenseNet, loss_and_grad, softmax


def _argmax(probs):
    # np.argmax returns the first maximum, i.e. ties go to the lowest label
    return np.argmax(probs, axis=-1)


class Recognizer:
    """Dense net ``[H*W, hidden, root_dim, n_states]``; the ``root_dim`` layer is the root vector."""

    def __init__(self, screen_shape, n_states, root_dim=32, hidden=64, lr=1e-3, seed=0):
        self.screen_shape = tuple(screen_shape)
        self.n_states = n_states
        self.root_dim = root_dim
        n_in = int(np.prod(self.screen_shape))
        self.net = DenseNet([n_in, hidden, root_dim, n_states], "tanh", "linear", seed=seed)
        self.opt = Adam(self.net.params, lr=lr)

    def _flatten(self, screens):
        screens = np.asarray(screens, dtype=np.float64)
        if screens.shape[-2:] != self.screen_shape:
            raise ValueError(f"screen shape {screens.shape[-2:]} != {self.screen_shape}")
        return screens.reshape(*screens.shape[:-2], -1)

    def encode(self, screens):
        """Root vector(s) for one screen ``(H, W)`` or a batch ``(N, H, W)``."""
        _, cache = self.net.forward(self._flatten(screens))
        return cache[-2]

    def head(self, roots):
        roots = np.asarray(roots, dtype=np.float64)
        if roots.shape[-1] != self.root_dim:
            raise ValueError(f"root dimension {roots.shape[-1]} != {self.root_dim}")
        return roots @ self.net.weights[-1] + self.net.biases[-1]

    def classify_root(self, roots):
        probs = softmax(self.head(roots))
        return _argmax(probs), probs

    def classify(self, screens):
        logits, _ = self.net.forward(self._flatten(screens))
        probs = softmax(logits)
        return _argmax(probs), probs

    def train_batch(self, screens, labels):
        """One Adam step on softmax cross-entropy. Returns the pre-step loss."""
        x = self._flatten(screens)
        labels = np.asarray(labels, dtype=int)
        if x.ndim != 2 or len(x) == 0:
            raise ValueError("need a nonempty batch of screens")
        if labels.shape != (len(x),) or labels.min() < 0 or labels.max() >= self.n_states:
            raise ValueError("labels must be one per screen and < n_states")
        _, cache = self.net.forward(x)
        loss, grads = loss_and_grad(self.net, cache, np.eye(self.n_states)[labels], "softmax_ce")
        self.opt.step(self.net.params, grads)
        return loss
