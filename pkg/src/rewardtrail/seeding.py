"""Reproducible seed derivation for independent RNG streams."""

from __future__ import annotations

import hashlib


def derive_seed(master: int, *path: int | str) -> int:
    """Derive a child seed from ``master`` and a key path.

    Hash-based counter split: children are reproducible across runs and
    statistically independent of each other and of the master stream.
    """
    tag = ":".join([str(master), *map(str, path)])
    digest = hashlib.blake2b(tag.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")
