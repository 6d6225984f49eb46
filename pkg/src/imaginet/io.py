"""Checkpoint serialization and export formats (PGM, JSONL, CSV).

Checkpoint layout, all integers 4-byte little-endian unsigned::

    b"IMGN" | version (=1) | config text (len + UTF-8) | section count |
    sections: name (len + UTF-8) | ndims | dims... | float64 LE payload

Net sections use the layer widths as their dims; the payload is
``W0, b0, W1, b1, ...`` each row-major. Every other section's dims are its
array shape.
"""

import csv
import json
import os
import struct

import numpy as np

from .config import format_config, parse_config
from .gridworld import ACTION_NAMES
from .model import ImagineModel
from .trainer import METRIC_COLUMNS

MAGIC = b"IMGN"
VERSION = 1
NET_SECTIONS = ("recognizer", "decoder", "deduction", "discriminator")
ARRAY_SECTIONS = ("qtable", "ltm_means", "ltm_vars", "ltm_counts")
SECTIONS = NET_SECTIONS + ARRAY_SECTIONS


class CheckpointError(ValueError):
    pass


def _nets(model):
    return {
        "recognizer": model.recognizer.net,
        "decoder": model.decoder.net,
        "deduction": model.deduction.net,
        "discriminator": model.discriminator.net,
    }


def _arrays(model):
    return {
        "qtable": model.q.values,
        "ltm_means": model.ltm.means,
        "ltm_vars": model.ltm.vars,
        "ltm_counts": model.ltm.counts.astype(np.float64),
    }


def _u32(n):
    return struct.pack("<I", n)


def _text(s):
    b = s.encode("utf-8")
    return _u32(len(b)) + b


def _section(name, dims, payload):
    payload = np.ascontiguousarray(payload, dtype="<f8")
    return _text(name) + _u32(len(dims)) + b"".join(_u32(d) for d in dims) + payload.tobytes()


def checkpoint_bytes(model):
    parts = [MAGIC, _u32(VERSION), _text(format_config(model.config)), _u32(len(SECTIONS))]
    for name, net in _nets(model).items():
        parts.append(_section(name, net.layer_sizes, net.flat()))
    for name, arr in _arrays(model).items():
        parts.append(_section(name, arr.shape, arr.ravel()))
    return b"".join(parts)


def save_checkpoint(model, path):
    with open(path, "wb") as fh:
        fh.write(checkpoint_bytes(model))


class _Reader:
    def __init__(self, data):
        self.data = data
        self.pos = 0

    def take(self, n):
        if self.pos + n > len(self.data):
            raise CheckpointError("truncated checkpoint")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def u32(self):
        return struct.unpack("<I", self.take(4))[0]

    def text(self):
        try:
            return self.take(self.u32()).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CheckpointError(f"bad UTF-8 in checkpoint: {exc}") from None


def read_sections(data):
    """Parse raw checkpoint bytes into ``(config_text, {name: (dims, payload)})``."""
    r = _Reader(data)
    if r.take(4) != MAGIC:
        raise CheckpointError("not an IMGN checkpoint (bad magic)")
    version = r.u32()
    if version != VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}")
    config_text = r.text()
    sections = {}
    for _ in range(r.u32()):
        name = r.text()
        dims = [r.u32() for _ in range(r.u32())]
        if name in NET_SECTIONS:
            count = sum(a * b + b for a, b in zip(dims[:-1], dims[1:]))
        else:
            count = int(np.prod(dims))
        payload = np.frombuffer(r.take(8 * count), dtype="<f8").astype(np.float64)
        sections[name] = (dims, payload)
    if r.pos != len(data):
        raise CheckpointError("trailing bytes after last section")
    return config_text, sections


def load_checkpoint(path):
    with open(path, "rb") as fh:
        data = fh.read()
    return model_from_bytes(data)


def model_from_bytes(data):
    config_text, sections = read_sections(data)
    model = ImagineModel.fresh(parse_config(config_text))
    missing = [s for s in SECTIONS if s not in sections]
    if missing:
        raise CheckpointError(f"checkpoint missing sections: {', '.join(missing)}")
    for name, net in _nets(model).items():
        dims, payload = sections[name]
        if list(dims) != net.layer_sizes:
            raise CheckpointError(f"section {name}: layer sizes {dims} != {net.layer_sizes}")
        net.load_flat(payload)
    for name, arr in _arrays(model).items():
        dims, payload = sections[name]
        if tuple(dims) != arr.shape:
            raise CheckpointError(f"section {name}: shape {tuple(dims)} != {arr.shape}")
    model.q.values[...] = sections["qtable"][1].reshape(model.q.values.shape)
    model.ltm.means[...] = sections["ltm_means"][1].reshape(model.ltm.means.shape)
    model.ltm.vars[...] = sections["ltm_vars"][1].reshape(model.ltm.vars.shape)
    model.ltm.counts[...] = sections["ltm_counts"][1].astype(np.int64)
    return model


def quantize(screen):
    """Map intensities in [0, 1] to 0..255, rounding halves up."""
    return np.floor(np.clip(np.asarray(screen, dtype=np.float64), 0.0, 1.0) * 255 + 0.5).astype(int)


def write_pgm(screen, path):
    """Write a plain (ASCII, "P2") PGM with maxval 255."""
    q = quantize(screen)
    h, w = q.shape
    lines = ["P2", f"{w} {h}", "255"] + [" ".join(str(v) for v in row) for row in q]
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_pgm(path):
    with open(path, encoding="ascii") as fh:
        tokens = []
        for line in fh:
            tokens += line.split("#", 1)[0].split()
    if not tokens or tokens[0] != "P2":
        raise ValueError(f"{path}: not a P2 PGM")
    w, h, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    vals = np.array([int(t) for t in tokens[4:]])
    if vals.size != w * h or maxval != 255:
        raise ValueError(f"{path}: malformed PGM body")
    return vals.reshape(h, w)


def write_trajectory(traj, jsonl_path=None, frames_dir=None):
    """One JSON object per step; frames as ``frame_NNN.pgm`` under ``frames_dir``."""
    if frames_dir is not None:
        os.makedirs(frames_dir, exist_ok=True)
    records = []
    for st in traj.steps:
        frame = None
        if frames_dir is not None:
            frame = os.path.join(frames_dir, f"frame_{st.index:03d}.pgm")
            write_pgm(st.screen, frame)
        records.append({
            "step": st.index,
            "label": st.label,
            "action": None if st.action is None else ACTION_NAMES[st.action],
            "done_prob": st.done_prob,
            "frame": frame,
        })
    if jsonl_path is not None:
        with open(jsonl_path, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(rec) + "\n")
    return records


def write_qtable_csv(q, path):
    """Rows are states, columns are actions; no header."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for row in np.asarray(q):
            writer.writerow([repr(float(v)) for v in row])


def read_qtable_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return np.array([[float(v) for v in row] for row in csv.reader(fh)])


def write_metrics_csv(metrics, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(METRIC_COLUMNS)
        for row in metrics.rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
