"""Ordered partitions (compositions) and the moves used by the partitioned
domain complex: elementary coarsenings, unit enlargements, and initial/final
reductions, each with its sign.

A composition is a plain tuple of positive integers; the empty tuple is the
unique composition of 0.
"""

from __future__ import annotations

import itertools

Composition = tuple[int, ...]


class EmptyPartition(Exception):
    pass


def validate(lam: Composition) -> None:
    if any(p < 1 for p in lam):
        raise ValueError(f"composition parts must be positive: {lam}")


def total(lam: Composition) -> int:
    return sum(lam)


def length(lam: Composition) -> int:
    return len(lam)


def all_compositions(n: int):
    """All 2^(n-1) compositions of n (just () for n = 0)."""
    if n == 0:
        yield ()
        return
    for bits in itertools.product((0, 1), repeat=n - 1):
        yield from_epsilon(bits)


def epsilon(lam: Composition) -> tuple[int, ...]:
    """Bit string of length N-1: 0 between objects sharing a class, 1 between
    classes.  (2,3,1) -> 01001.  Reverses the refinement order."""
    if total(lam) == 0:
        raise EmptyPartition("epsilon is defined for N >= 1")
    bits = []
    for k, part in enumerate(lam):
        bits.extend([0] * (part - 1))
        if k < len(lam) - 1:
            bits.append(1)
    return tuple(bits)


def from_epsilon(bits) -> Composition:
    parts = []
    run = 1
    for b in bits:
        if b:
            parts.append(run)
            run = 1
        else:
            run += 1
    parts.append(run)
    return tuple(parts)


def elementary_coarsenings(lam: Composition) -> list[tuple[Composition, int]]:
    """Merge adjacent parts k, k+1; the merge at position k carries (-1)^k.

    Positions are 1-indexed as in the sign convention, so the first merge
    comes with -1.
    """
    out = []
    for k in range(1, len(lam)):
        merged = lam[: k - 1] + (lam[k - 1] + lam[k],) + lam[k + 1 :]
        out.append((merged, -1 if k % 2 else 1))
    return out


def unit_enlargements(lam: Composition) -> list[tuple[Composition, int]]:
    """Insert a part 1 before position k = 1..m+1, with sign (-1)^(k-1).

    Insertion after the last part is included: the cancellation of a final
    reduction against a unit enlargement in the last position needs it, and
    d^2 = 0 on the partitioned domain complex fails without it.  On the
    empty composition the single enlargement is ((1,), +1).
    """
    out = []
    for k in range(1, len(lam) + 2):
        enlarged = lam[: k - 1] + (1,) + lam[k - 1 :]
        out.append((enlarged, -1 if (k - 1) % 2 else 1))
    return out


def reductions(lam: Composition) -> dict:
    """Initial and final reductions; empty input reduces to nothing."""
    if not lam:
        return {"initial": None, "final": None}
    return {
        "initial": (lam[1:], lam[0]),
        "final": (lam[:-1], lam[-1]),
    }


def refines(lam: Composition, coarser: Composition) -> bool:
    """Whether ``lam`` refines ``coarser``.

    Equal totals: ``lam`` concatenates compositions of the parts of
    ``coarser``.  For total(lam) <= total(coarser) the generalized relation
    holds when ``lam`` refines some composition eta of its own total with
    len(eta) = len(coarser) and eta <= coarser entrywise.
    """
    n, m = total(lam), total(coarser)
    if n == m:
        if not coarser:
            return not lam
        pos = 0
        for part in coarser:
            acc = 0
            while acc < part:
                if pos >= len(lam):
                    return False
                acc += lam[pos]
                pos += 1
            if acc != part:
                return False
        return pos == len(lam)
    if n > m:
        return False
    if not coarser:
        return False
    # choose eta <= coarser entrywise with |eta| = n, parts >= 1, and recurse
    k = len(coarser)
    for eta in _bounded_compositions(n, [min(p, n) for p in coarser]):
        if all(e >= 1 for e in eta) and refines(lam, eta):
            return True
    return False


def _bounded_compositions(n: int, bounds: list[int]):
    if not bounds:
        if n == 0:
            yield ()
        return
    for first in range(1, min(bounds[0], n) + 1):
        for rest in _bounded_compositions(n - first, bounds[1:]):
            yield (first,) + rest


def coarsenings_of(lam: Composition) -> set[Composition]:
    """All compositions coarser than or equal to ``lam`` (same total)."""
    out = {lam}
    frontier = [lam]
    while frontier:
        cur = frontier.pop()
        for merged, _ in elementary_coarsenings(cur):
            if merged not in out:
                out.add(merged)
                frontier.append(merged)
    return out
