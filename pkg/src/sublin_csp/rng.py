"""Named random sub-streams derived from one 64-bit seed.

Every consumer asks for a stream by path, e.g. ``stream(seed, "walks", 3)``,
so any component can be replayed on its own without re-running the others.
"""
import hashlib

import numpy as np


def _path_key(parts):
    words = []
    for p in parts:
        h = hashlib.blake2b(str(p).encode(), digest_size=8).digest()
        words.append(int.from_bytes(h, "little") & 0xFFFFFFFF)
    return tuple(words)


def stream(seed, *path):
    """Generator for the sub-stream at ``path`` under ``seed``."""
    ss = np.random.SeedSequence(int(seed) & ((1 << 64) - 1), spawn_key=_path_key(path))
    return np.random.default_rng(ss)


class RngTree:
    """A seed plus a path prefix; ``child`` extends the path."""

    def __init__(self, seed, path=()):
        self.seed = int(seed)
        self.path = tuple(path)

    def child(self, *parts):
        return RngTree(self.seed, self.path + tuple(parts))

    def generator(self):
        return stream(self.seed, *self.path)

    def label(self):
        return "/".join(str(p) for p in self.path)

    def __repr__(self):
        return f"RngTree(seed={self.seed}, path={self.label()!r})"


def kernel_seed(rng):
    """Draw a seed for a compiled kernel from a numpy generator."""
    return int(rng.integers(0, 2**62))
