"""Deterministic per-stage seed derivation from a master seed."""

import hashlib


def derive_seed(master: int, *labels: str | int) -> int:
    """Labeled hash of (master seed, labels) -> non-negative 63-bit seed.

    A fixed scheme so any pipeline stage (or any scene index) can be
    replayed independently of the others.
    """
    key = ":".join([str(master), *map(str, labels)])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1
