"""Seed derivation and thread-pool sizing.

Every pipeline stage draws its randomness from a numpy ``default_rng``
seeded by a value derived from the single user-facing run seed.  The
derivation is a stable, documented function of the stage name, so adding
or reordering stages never perturbs another stage's stream:

    stage_seed(seed, stage) = sha256(f"{seed}:{stage}".encode()) first 8
    bytes, big-endian unsigned.

Thread counts honor the ``RECOGRAPH_THREADS`` environment variable; unset
or ``0`` means one worker per CPU.
"""
from __future__ import annotations

import hashlib
import os

from .exceptions import InvalidParams
from .validation import check_seed

THREADS_ENV_VAR = "RECOGRAPH_THREADS"


def stage_seed(seed: int, stage: str) -> int:
    """Derive the 64-bit RNG seed for one named pipeline stage."""
    seed = check_seed(seed)
    if not stage:
        raise InvalidParams("stage name must be non-empty")
    digest = hashlib.sha256(f"{seed}:{stage}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def effective_threads(requested: int | None = None) -> int:
    """Resolve the worker count for parallel BFS/betweenness sweeps.

    ``requested`` wins over the environment; ``None`` or ``0`` at either
    level falls through to ``os.cpu_count()``.
    """
    if requested is None:
        raw = os.environ.get(THREADS_ENV_VAR, "").strip()
        if raw:
            try:
                requested = int(raw)
            except ValueError:
                raise InvalidParams(
                    f"{THREADS_ENV_VAR} must be an integer, got {raw!r}"
                ) from None
        else:
            requested = 0
    if requested < 0:
        raise InvalidParams(f"thread count must be >= 0, got {requested}")
    if requested == 0:
        return os.cpu_count() or 1
    return requested
