"""Moves out of a nabla position, shared by evaluation and acceptance games.

Three readings are supported: ``minimal`` (the existential player picks an
inclusion-minimal cover), ``all`` (any cover) and ``expand`` (the nabla is
played as the conjunction of a diamond per member and a box over their
disjunction).  All three have the same winner.
"""

from .games import EXISTS, FORALL
from .relations import all_covers, minimal_covers

EXPANSION_TAGS = frozenset({"N-and", "N-dia", "N-box", "N-or"})
MODES = ("minimal", "all", "expand")


def step(mode, members, s, model):
    """Owner and successor keys of the nabla over ``members`` at ``s``."""
    members = sorted(members, key=repr)
    succ = model.succ[s]
    if mode == "expand":
        return FORALL, ([("N-dia", b, s) for b in members]
                        + [("N-box", frozenset(members), s)])
    if mode == "all":
        covers = all_covers(members, succ)
    elif mode == "minimal":
        covers = minimal_covers(members, succ)
    else:
        raise ValueError("unknown nabla mode %r" % mode)
    return EXISTS, [("Z", z) for z in covers]


def expansion_step(key, model, target):
    """Expand an expansion position; ``target(member, point)`` builds the
    key of the position that continues with ``member`` at ``point``."""
    tag = key[0]
    if tag == "N-dia":
        _, b, s = key
        return EXISTS, 0, [target(b, t) for t in model.succ[s]]
    if tag == "N-box":
        _, members, s = key
        return FORALL, 0, [("N-or", members, t) for t in model.succ[s]]
    if tag == "N-or":
        _, members, t = key
        return EXISTS, 0, [target(b, t) for b in sorted(members, key=repr)]
    raise ValueError("not an expansion position: %r" % (key,))
