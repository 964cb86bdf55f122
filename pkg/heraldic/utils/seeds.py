from __future__ import annotations

from typing import Sequence

__all__: Sequence[str] = ("splitmix64", "restart_seed")

_MASK = (1 << 64) - 1


def splitmix64(value: int) -> int:
    """One step of the splitmix64 mixer. Maps any integer onto a well spread 64-bit seed."""
    z = (value + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def restart_seed(master_seed: int, restart: int) -> int:
    """
    Seed of restart number `restart`.

    Seeds only depend on the master seed and the restart counter, so any
    scheduling of restarts over workers draws the same matrices. The master
    seed is mixed before the counter, so neighbouring master seeds do not
    share restarts.
    """
    return splitmix64(splitmix64(master_seed & _MASK) ^ (restart & _MASK))
