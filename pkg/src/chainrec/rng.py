"""Deterministic random streams for reproducible parallel Monte Carlo.

Every stream is a counter-based Philox generator keyed by
``(seed, stream, substream)``: the output sequence is a pure function of
that triple, and distinct keys give statistically independent streams.
Batch drivers give chunk i of a task the key
``(seed, stream_id(label), i)``, so results never depend on how many
workers execute the chunks.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def stream_id(label: str) -> int:
    """Stable 64-bit stream id for a task label.

    The label convention for CLI-driven runs is
    ``"<command>:<estimand>:k=v:..."``; the id is the first 8 bytes of the
    label's SHA-256, so it is stable across runs, platforms and versions.
    """
    return int.from_bytes(hashlib.sha256(label.encode("utf-8")).digest()[:8], "big")


def make_stream(seed: int, stream: int = 0, substream: int = 0) -> np.random.Generator:
    """Generator for the stream keyed by ``(seed, stream, substream)``."""
    seq = np.random.SeedSequence(
        entropy=int(seed) & _MASK64,
        spawn_key=(int(stream) & _MASK64, int(substream) & _MASK64),
    )
    return np.random.Generator(np.random.Philox(seq))
