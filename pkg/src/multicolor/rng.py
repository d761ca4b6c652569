"""Deterministic keyed random streams.

Every randomized step in the package draws from a stream keyed by the global
seed plus a purpose label (and, for per-node randomness, the node id). Keys
are hashed with SHA-256 into a Mersenne Twister seed, so streams are
independent, reproducible across platforms, and insensitive to call order.
"""

from __future__ import annotations

import hashlib
import random

__all__ = ["keyed_rng", "derive_seed"]


def derive_seed(*parts) -> int:
    """Collapse key parts (ints, floats, strings) into one large integer seed."""
    material = "\x1f".join(repr(p) for p in parts).encode()
    return int.from_bytes(hashlib.sha256(material).digest(), "big")


def keyed_rng(*parts) -> random.Random:
    """Return an independent random.Random stream for the given key."""
    return random.Random(derive_seed(*parts))
