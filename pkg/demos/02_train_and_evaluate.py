"""
Training all five components together
=====================================

One call collects epsilon-greedy episodes into per-state queues and, after
every episode, runs a few joint updates of the recognizer, the long-term
memory and decoder, the deduction net and the discriminator. The Q-table is
updated online while collecting.
"""

import time

from imaginet import TrainConfig, run
from imaginet.evaluate import evaluate

cfg = TrainConfig()  # open5, seed 7, 300 episodes
t0 = time.perf_counter()
model, metrics = run(cfg)
print(f"trained in {time.perf_counter() - t0:.1f}s")

# Losses fall and the recognizer probe reaches every state.
for name in ("recognizer_loss", "decoder_loss", "deduction_loss", "discriminator_loss"):
    col = metrics.column(name)
    print(f"{name:<20} first={col[:30].mean():.4f}  last={col[-30:].mean():.6f}")
print("recognizer accuracy by episode 50/150/300:",
      metrics.column("recognizer_accuracy")[[49, 149, 299]])
print("episode length, last 10:", metrics.column("steps")[-10:].astype(int))

# Score the trained model against the oracles.
for name, (value, threshold, ok) in evaluate(model).items():
    print(f"{name:<28} {value:.3f}  (>= {threshold})  {'ok' if ok else 'FAIL'}")
