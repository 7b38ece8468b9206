"""Relation lifting and the cover relations used by nabla moves."""

import itertools

__all__ = ["lifting_contains", "minimal_covers", "all_covers"]


def lifting_contains(z, u, v):
    """``(u, v)`` belongs to the lifting of ``z``: every element of ``u``
    has a ``z``-partner in ``v`` and every element of ``v`` one in ``u``."""
    z = set(z)
    return (all(any((x, y) in z for y in v) for x in u)
            and all(any((x, y) in z for x in u) for y in v))


def minimal_covers(xs, ys):
    """All inclusion-minimal ``Z`` within ``xs x ys`` whose lifting contains
    ``(xs, ys)``.

    A cover is minimal exactly when every pair has an endpoint of degree
    one, so each ``y`` either hangs off a single ``x`` or is the centre of
    a star whose leaves are used nowhere else.
    """
    xs = list(xs)
    ys = list(ys)
    if not xs or not ys:
        if not xs and not ys:
            yield frozenset()
        return
    options = [c for r in range(1, len(xs) + 1) for c in itertools.combinations(xs, r)]
    deg = {x: 0 for x in xs}
    locked = set()          # leaves of a star centred on some y
    chosen = []

    def rec(i):
        if i == len(ys):
            if all(deg[x] > 0 for x in xs):
                yield frozenset((x, y) for y, part in zip(ys, chosen) for x in part)
            return
        for part in options:
            if len(part) > 1:
                if any(deg[x] > 0 for x in part):
                    continue
            elif part[0] in locked:
                continue
            for x in part:
                deg[x] += 1
            if len(part) > 1:
                locked.update(part)
            chosen.append(part)
            yield from rec(i + 1)
            chosen.pop()
            if len(part) > 1:
                locked.difference_update(part)
            for x in part:
                deg[x] -= 1

    yield from rec(0)


def all_covers(xs, ys):
    """Every ``Z`` within ``xs x ys`` covering both sides (exponential)."""
    pairs = [(x, y) for x in xs for y in ys]
    xs, ys = list(xs), list(ys)
    for r in range(len(pairs) + 1):
        for z in itertools.combinations(pairs, r):
            if lifting_contains(z, xs, ys):
                yield frozenset(z)
