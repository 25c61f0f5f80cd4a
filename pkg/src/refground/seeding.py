"""Deterministic child-seed derivation.

Every randomized step derives its own seed from the run seed plus a
stable string path, so outputs never depend on iteration order, process
scheduling, or how many other draws happened first.
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from a run seed and any hashable path parts."""
    text = ":".join(str(p) for p in parts)
    digest = hashlib.blake2s(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def make_rng(*parts) -> random.Random:
    return random.Random(derive_seed(*parts))
