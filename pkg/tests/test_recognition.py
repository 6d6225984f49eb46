import itertools
import math

import numpy as np
import pytest

from imaginet.gridworld import OPEN5, StateIndex, render
from imaginet.recognition import Recognizer

IDX = StateIndex(OPEN5)
SCREENS = np.stack([render(OPEN5, c) for c in IDX.cells])


@pytest.fixture
def fresh():
    return Recognizer((5, 5), 25, root_dim=32, hidden=64, seed=0)


def test_encode_shape_and_range(fresh):
    root = fresh.encode(SCREENS[3])
    assert root.shape == (32,)
    assert np.all(np.abs(root) < 1)
    assert fresh.encode(SCREENS).shape == (25, 32)


def test_encode_rejects_wrong_screen(fresh):
    with pytest.raises(ValueError):
        fresh.encode(np.zeros((4, 5)))
    with pytest.raises(ValueError):
        fresh.classify_root(np.zeros(31))


def test_untrained_classify_is_uniform(fresh):
    label, probs = fresh.classify(SCREENS[7])
    assert label == 0
    np.testing.assert_array_equal(probs, np.full(25, 1 / 25))
    label, probs = fresh.classify_root(fresh.encode(SCREENS[7]))
    assert label == 0 and np.allclose(probs, 1 / 25)


def test_classify_root_factorizes_classify(rng):
    rec = Recognizer((5, 5), 25, seed=1)
    for p in rec.net.params:
        p[...] = rng.normal(scale=0.3, size=p.shape)
    screens = rng.uniform(size=(10, 5, 5))
    l1, p1 = rec.classify(screens)
    l2, p2 = rec.classify_root(rec.encode(screens))
    np.testing.assert_array_equal(l1, l2)
    np.testing.assert_allclose(p1, p2, rtol=1e-12, atol=1e-15)
    np.testing.assert_allclose(p1.sum(axis=1), 1, atol=1e-9)


def test_first_batch_loss_is_log_n(fresh):
    assert fresh.train_batch(SCREENS[:4], [0, 1, 2, 3]) == pytest.approx(math.log(25), abs=1e-12)


def test_train_batch_validates(fresh):
    with pytest.raises(ValueError):
        fresh.train_batch(SCREENS[:0], [])
    with pytest.raises(ValueError):
        fresh.train_batch(SCREENS[:2], [0, 25])


def test_overfit_single_pair(fresh):
    for _ in range(600):
        loss = fresh.train_batch(SCREENS[[12]], [12])
    assert loss < 1e-2


def test_trained_open5_recognizes_every_state(open5_model):
    labels, probs = open5_model.recognizer.classify(SCREENS)
    np.testing.assert_array_equal(labels, np.arange(25))
    np.testing.assert_allclose(probs.sum(axis=1), 1, atol=1e-9)


def test_trained_roots_distinct(open5_model):
    roots = open5_model.recognizer.encode(SCREENS)
    gaps = [np.linalg.norm(a - b) for a, b in itertools.combinations(roots, 2)]
    assert min(gaps) > 0


def test_memory_means_classify_to_their_state(open5_model):
    labels, _ = open5_model.recognizer.classify_root(open5_model.ltm.means)
    np.testing.assert_array_equal(labels, np.arange(25))
