"""Shared test helpers: a brute-force monotone counter independent of the
package internals, and small random subposet generators."""

import random

import pytest

from dedekind.poset import Subposet


def brute_count_monotone(S: Subposet) -> int:
    """Count monotone 0/1 maps by filtering all 2^|S| assignments.

    Deliberately naive: no propagation, no ordering tricks, so it shares no
    code path with the oracle or the engine it checks.  Usable up to ~16
    points."""
    masks = S.masks
    k = len(masks)
    pairs = [
        (i, j)
        for i in range(k)
        for j in range(k)
        if i != j and masks[i] & ~masks[j] == 0
    ]
    count = 0
    for bits in range(1 << k):
        if all(not (bits >> i & 1 and not bits >> j & 1) for i, j in pairs):
            count += 1
    return count


def random_subposet(rng: random.Random, n: int, density: float | None = None) -> Subposet:
    if density is None:
        density = rng.uniform(0.2, 0.9)
    return Subposet(n, tuple(m for m in range(1 << n) if rng.random() < density))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260819)
