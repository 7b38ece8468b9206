"""Modal automata over one-step formulas, including the disjunctive variant.

One-step formulas are plain tuples, so structurally equal formulas are
equal and hash alike:

    ("bot",) ("top",) ("dia", a) ("box", a) ("and", x, y) ("or", x, y)
    ("nabla", frozenset_of_states) ("lit", name, positive)

``lit`` nodes only occur in the intermediate formulas used while turning a
parity formula into an automaton.
"""

import itertools
import json
import threading

from .games import EXISTS, FORALL, ArenaBuilder, solve_zielonka
from . import nabla_moves
from .relations import lifting_contains

__all__ = ["BOT", "TOP", "dia", "box", "nabla", "lit", "conj", "disj", "big_or",
           "big_and", "sfor", "states_of", "is_disjunctive_formula", "instantiate",
           "ModalAutomaton", "automaton_size", "acceptance_game",
           "accepts", "lifting_contains", "to_json", "colours"]

BOT = ("bot",)
TOP = ("top",)


def dia(a):
    return ("dia", a)


def box(a):
    return ("box", a)


def nabla(states):
    return ("nabla", frozenset(states))


def lit(name, positive=True):
    return ("lit", name, positive)


def conj(x, y):
    if x == BOT or y == BOT:
        return BOT
    if x == TOP:
        return y
    if y == TOP or x == y:
        return x
    return ("and", x, y)


def disj(x, y):
    if x == TOP or y == TOP:
        return TOP
    if x == BOT:
        return y
    if y == BOT or x == y:
        return x
    return ("or", x, y)


def big_or(items):
    """Right-nested disjunction of ``items`` with duplicates removed."""
    items = list(dict.fromkeys(items))
    out = BOT
    for f in reversed(items):
        out = disj(f, out)
    return out


def big_and(items):
    items = list(dict.fromkeys(items))
    out = TOP
    for f in reversed(items):
        out = conj(f, out)
    return out


def sfor(alpha):
    """Subformulas of a one-step formula; nabla formulas are atomic."""
    out = set()
    stack = [alpha]
    while stack:
        f = stack.pop()
        if f in out:
            continue
        out.add(f)
        if f[0] in ("and", "or"):
            stack.extend(f[1:])
    return out


def states_of(alpha):
    out = set()
    for f in sfor(alpha):
        if f[0] in ("dia", "box"):
            out.add(f[1])
        elif f[0] == "nabla":
            out.update(f[1])
    return out


def is_disjunctive_formula(alpha):
    return all(f[0] in ("bot", "top", "nabla", "or") for f in sfor(alpha))


def instantiate(alpha, colour):
    """Replace literals by truth constants according to ``colour`` and
    simplify constants away."""
    tag = alpha[0]
    if tag == "lit":
        return TOP if (alpha[1] in colour) == alpha[2] else BOT
    if tag == "and":
        return conj(instantiate(alpha[1], colour), instantiate(alpha[2], colour))
    if tag == "or":
        return disj(instantiate(alpha[1], colour), instantiate(alpha[2], colour))
    return alpha


def colours(letters):
    letters = sorted(letters)
    for r in range(len(letters) + 1):
        for c in itertools.combinations(letters, r):
            yield frozenset(c)


class ModalAutomaton:
    """``(A, Delta, Omega, a_I)`` with a total priority map.

    ``delta`` is either a mapping ``(state, colour) -> formula`` where
    colours are subsets of ``letters``, optionally backed by a per-state
    ``default``, or a function ``(state, colour) -> formula``.  Colours
    handed to :meth:`transition` are cut down to ``letters`` first.
    """

    def __init__(self, states, initial, priority, delta, props=(), letters=None,
                 default=None, disjunctive=False, name=None):
        self.states = tuple(states)
        self.initial = initial
        self.priority = dict(priority)
        self.props = frozenset(props)
        self.letters = frozenset(letters) if letters is not None else self.props
        self.disjunctive = disjunctive
        self.name = name
        self._table = None if callable(delta) else dict(delta)
        self._fn = delta if callable(delta) else None
        self._default = dict(default or {})
        self._memo = {}
        self._lock = threading.Lock()
        known = set(self.states)
        if initial not in known:
            raise ValueError("initial state is not a state")
        if set(self.priority) != known:
            raise ValueError("priority map must be total on the states")
        if not self.letters <= self.props:
            raise ValueError("letters must be proposition letters")

    def transition(self, a, colour):
        c = frozenset(colour) & self.letters
        key = (a, c)
        if self._table is not None:
            f = self._table.get(key)
            if f is None:
                f = self._default.get(a)
                if f is None:
                    raise KeyError("no transition for %r" % (key,))
            return f
        with self._lock:
            f = self._memo.get(key)
        if f is None:
            f = self._fn(a, c)
            with self._lock:
                self._memo[key] = f
        return f

    def transitions(self):
        """All ``(state, colour, formula)`` triples over ``letters``."""
        for a in self.states:
            for c in colours(self.letters):
                yield a, c, self.transition(a, c)

    def index(self):
        return len(set(self.priority.values()))

    def __repr__(self):
        return "ModalAutomaton(%d states, index %d%s)" % (
            len(self.states), self.index(), ", disjunctive" if self.disjunctive else "")


def automaton_size(aut):
    """``(state size, size, index)``: size counts the distinct subformulas
    over the range of the transition map plus the states."""
    subs = set()
    for _, _, f in aut.transitions():
        subs |= sfor(f)
    n = len(aut.states)
    return n, len(subs) + n, aut.index()


def acceptance_game(aut, model, roots=None, nabla_mode="minimal"):
    """Acceptance game of ``aut`` on ``model``.  Position keys: ``("s", a, s)``
    for states, ``("f", formula, s)`` for one-step formulas and
    ``("Z", pairs)`` for cover choices.

    ``nabla_mode`` is ``"minimal"`` (only minimal covers), ``"all"`` (every
    cover) or ``"expand"`` (play the nabla as its diamond/box expansion).
    """
    missing = aut.letters - set(model.props)
    if missing:
        raise KeyError("model lacks proposition letters %s" % sorted(missing))

    def expand(key):
        tag = key[0]
        if tag in nabla_moves.EXPANSION_TAGS:
            return nabla_moves.expansion_step(key, model, lambda b, t: ("s", b, t))
        if tag == "s":
            _, a, s = key
            f = aut.transition(a, model.colour(s))
            return EXISTS, aut.priority[a], [("f", f, s)]
        if tag == "Z":
            return FORALL, 0, [("s", b, t) for b, t in sorted(key[1], key=repr)]
        _, f, s = key
        op = f[0]
        if op == "top":
            return FORALL, 0, ()
        if op == "bot":
            return EXISTS, 0, ()
        if op == "lit":
            holds = (s in model.val[f[1]]) == f[2]
            return (FORALL if holds else EXISTS), 0, ()
        if op == "or":
            return EXISTS, 0, [("f", f[1], s), ("f", f[2], s)]
        if op == "and":
            return FORALL, 0, [("f", f[1], s), ("f", f[2], s)]
        if op == "dia":
            return EXISTS, 0, [("s", f[1], t) for t in model.succ[s]]
        if op == "box":
            return FORALL, 0, [("s", f[1], t) for t in model.succ[s]]
        if op == "nabla":
            owner, moves = nabla_moves.step(nabla_mode, f[1], s, model)
            return owner, 0, moves
        raise ValueError("unknown one-step formula %r" % (f,))

    if roots is None:
        roots = [("s", aut.initial, s) for s in model.points]
    return ArenaBuilder(expand).build(roots)


def accepts(aut, pointed, nabla_mode="minimal"):
    root = ("s", aut.initial, pointed.point)
    arena, idx = acceptance_game(aut, pointed.model, [root], nabla_mode=nabla_mode)
    return solve_zielonka(arena).winner(idx[root]) == EXISTS


def _formula_to_json(f, number):
    tag = f[0]
    if tag in ("bot", "top"):
        return [tag]
    if tag in ("dia", "box"):
        return [tag, number[f[1]]]
    if tag == "nabla":
        return [tag, sorted(number[b] for b in f[1])]
    if tag == "lit":
        return [tag, f[1], f[2]]
    return [tag, _formula_to_json(f[1], number), _formula_to_json(f[2], number)]


def to_json(aut):
    """Automaton JSON; states are numbered in the order of ``aut.states``."""
    number = {a: i for i, a in enumerate(aut.states)}
    return json.dumps({
        "states": len(aut.states),
        "names": [str(a) for a in aut.states],
        "initial": number[aut.initial],
        "priority": [aut.priority[a] for a in aut.states],
        "letters": sorted(aut.letters),
        "disjunctive": aut.disjunctive,
        "delta": [{"state": number[a], "colour": sorted(c), "formula": _formula_to_json(f, number)}
                  for a, c, f in aut.transitions()],
    })
