"""Word automata over macrostates and the determinization pipeline for the
no-bad-trace condition.

Automata are symbolic in the alphabet: transitions are computed for the
symbols actually queried and memoized.  Parity conditions are max-parity
on states (even wins); Buchi conditions are a predicate on states.
"""

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

from .graphs import has_cycle_with_max
from .parity_formula import InvalidFormula

__all__ = ["WordAutomaton", "LassoWord", "bad_trace_npw", "npw_to_nbw", "nbw_to_dpw",
           "complement_dpw", "lasso_member", "nbt_dpw", "lasso_has_bad_trace",
           "macro_priorities", "INIT"]

INIT = "init"


class WordAutomaton:
    """Nondeterministic (``step`` returns a frozenset) or deterministic
    (``step`` returns one state) word automaton.

    ``priority(q)`` gives parity acceptance, ``accepting(q)`` Buchi
    acceptance; exactly one of them is set.  ``state_bound`` is an upper
    bound on the number of states when known, ``priorities`` the possible
    priority values.
    """

    def __init__(self, initial, step, deterministic, priority=None, accepting=None,
                 state_bound=None, priorities=None, name=""):
        if (priority is None) == (accepting is None):
            raise ValueError("give exactly one of priority and accepting")
        self.initial = initial
        self._step = step
        self.deterministic = deterministic
        self.priority = priority
        self.accepting = accepting
        self.state_bound = state_bound
        self.priorities = frozenset(priorities) if priorities is not None else None
        self.name = name
        self._memo = {}
        self._lock = threading.Lock()

    @property
    def acceptance(self):
        return "parity" if self.priority is not None else "buchi"

    def step(self, q, symbol):
        key = (q, symbol)
        with self._lock:
            out = self._memo.get(key)
        if out is None:
            out = self._step(q, symbol)
            with self._lock:
                self._memo[key] = out
        return out

    def initial_states(self):
        return (self.initial,) if self.deterministic else tuple(self.initial)

    def weight(self, q):
        """State priority, with Buchi states read as 2 (accepting) or 1."""
        if self.priority is not None:
            return self.priority(q)
        return 2 if self.accepting(q) else 1

    def explored(self):
        """States met so far by memoized transitions."""
        seen = set(self.initial_states())
        for (q, _), out in list(self._memo.items()):
            seen.add(q)
            if self.deterministic:
                seen.add(out)
            else:
                seen.update(out)
        return seen

    def to_dot(self, name="W"):
        lines = ["digraph %s {" % name]
        ids = {}
        for q in sorted(self.explored(), key=repr):
            ids[q] = len(ids)
            lines.append('  %d [label="%s : %d"];' % (ids[q], str(q).replace('"', "'")[:60],
                                                      self.weight(q)))
        for (q, sym), out in list(self._memo.items()):
            targets = [out] if self.deterministic else sorted(out, key=repr)
            for t in targets:
                lines.append('  %d -> %d [label="%d"];' % (ids[q], ids[t], hash(sym) % 1000))
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class LassoWord:
    prefix: tuple
    loop: tuple

    def __post_init__(self):
        if not self.loop:
            raise ValueError("the loop of a lasso word must be non-empty")
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "loop", tuple(self.loop))

    def __len__(self):
        return len(self.prefix) + len(self.loop)

    def symbol(self, i):
        return self.prefix[i] if i < len(self.prefix) else self.loop[i - len(self.prefix)]

    def next(self, i):
        return i + 1 if i + 1 < len(self) else len(self.prefix)


@lru_cache(maxsize=1 << 16)
def _by_source(m):
    out = {}
    for u, k, v in m:
        out.setdefault(u, []).append((v, k))
    return out


def macro_priorities(g):
    return frozenset(g.priority.values()) | {0}


def bad_trace_npw(g):
    """Nondeterministic parity automaton accepting the macrostate streams
    that carry a bad trace.

    States are ``INIT`` and pairs ``(u, k)``: the trace sits at ``u`` and
    reached it through a triple of priority ``k``; the state priority is
    ``k + 1`` so that odd trace priorities become winning.  ``INIT`` may
    start a trace at any source of the first symbol.
    """
    if set(g.priority) != set(range(g.n)):
        raise InvalidFormula("bad_trace_npw needs a total priority map")
    ks = macro_priorities(g)

    def step(q, m):
        index = _by_source(m)
        if q == INIT:
            return frozenset((v, k) for lst in index.values() for v, k in lst)
        return frozenset(index.get(q[0], ()))

    def priority(q):
        return 0 if q == INIT else q[1] + 1

    return WordAutomaton(frozenset([INIT]), step, False, priority=priority,
                         state_bound=1 + g.n * len(ks),
                         priorities={0} | {k + 1 for k in ks}, name="npw")


def npw_to_nbw(w):
    """Buchi automaton for a nondeterministic parity automaton: a run may
    at any time commit to an even priority ``d``, after which no larger
    priority may appear and ``d`` must recur."""
    if w.acceptance == "buchi":
        return w
    if w.priorities is None:
        raise ValueError("npw_to_nbw needs the priority range")
    evens = sorted(d for d in w.priorities if d % 2 == 0)

    def lift(targets, d):
        if d is None:
            out = {(q, None) for q in targets}
            out.update((q, e) for q in targets for e in evens if w.priority(q) <= e)
            return frozenset(out)
        return frozenset((q, d) for q in targets if w.priority(q) <= d)

    def step(state, symbol):
        q, d = state
        targets = w.step(q, symbol)
        if w.deterministic:
            targets = (targets,)
        return lift(targets, d)

    def accepting(state):
        q, d = state
        return d is not None and w.priority(q) == d

    bound = None if w.state_bound is None else w.state_bound * (1 + len(evens))
    return WordAutomaton(lift(w.initial_states(), None), step, False, accepting=accepting,
                         state_bound=bound, name="nbw")


# --------------------------------------------------------------------------
# Safra trees
#
# A tree is a tuple of nodes in order of age, each node a pair
# (label, parent position); the root comes first and has parent -1.  The
# position of a node in this tuple is its name, so names stay compact.

def _safra_step(w, tree, symbol, n_bound):
    labels = [set(lab) for lab, _ in tree]
    parents = [p for _, p in tree]
    old = len(tree)
    for i in range(old):
        spawn = {q for q in labels[i] if w.accepting(q)}
        if spawn:
            labels.append(spawn)
            parents.append(i)
    for i, lab in enumerate(labels):
        nxt = set()
        for q in lab:
            nxt |= w.step(q, symbol)
        labels[i] = nxt
    children = [[] for _ in labels]
    for i, p in enumerate(parents):
        if p >= 0:
            children[p].append(i)

    def merge(i, forbidden):
        labels[i] -= forbidden
        seen = set(forbidden)
        for c in children[i]:
            merge(c, seen)
            seen |= labels[c]

    if labels:
        merge(0, set())
    alive = [bool(lab) for lab in labels]
    events = []
    for i in range(old):
        if not alive[i]:
            events.append(2 * (i + 1) - 1)
    for i in range(len(labels)):
        if not alive[i]:
            continue
        kids = [c for c in children[i] if alive[c]]
        if kids and labels[i] == set().union(*(labels[c] for c in kids)):
            stack = list(kids)
            while stack:
                c = stack.pop()
                if alive[c]:
                    alive[c] = False
                    if c < old:
                        events.append(2 * (c + 1) - 1)
                    stack.extend(children[c])
            events.append(2 * (i + 1))
    rename = {}
    nodes = []
    for i in range(len(labels)):
        if alive[i]:
            rename[i] = len(nodes)
            p = parents[i]
            nodes.append((frozenset(labels[i]), rename[p] if p >= 0 else -1))
    low = min(events) if events else 2 * n_bound + 1
    return tuple(nodes), 2 * n_bound + 2 - low


def nbw_to_dpw(w):
    """Deterministic parity automaton for a Buchi automaton, built lazily.

    Safra trees whose nodes are named by age; a step reports the smallest
    name that was removed (odd) or turned green (even), which yields a
    parity condition on the transition, stored in the successor state.
    """
    if w.deterministic:
        if w.acceptance == "parity":
            return w
        return WordAutomaton(w.initial, w.step, True,
                             priority=lambda q: 2 if w.accepting(q) else 1,
                             state_bound=w.state_bound, priorities={1, 2}, name="dpw")
    if w.acceptance != "buchi":
        raise ValueError("nbw_to_dpw expects a Buchi automaton")
    if w.state_bound is None:
        raise ValueError("nbw_to_dpw needs a bound on the number of states")
    n = w.state_bound
    start = frozenset(w.initial_states())
    tree0 = ((start, -1),) if start else ()

    def step(state, symbol):
        return _safra_step(w, state[0], symbol, n)

    budget = 2 ** math.ceil(2 * n * math.log2(n + 1)) if n else 1
    return WordAutomaton((tree0, 0), step, True, priority=lambda state: state[1],
                         state_bound=budget, priorities=range(0, 2 * n + 2), name="dpw")


def complement_dpw(w):
    """Same automaton with every priority raised by one."""
    if not w.deterministic or w.acceptance != "parity":
        raise ValueError("complement_dpw expects a deterministic parity automaton")
    pr = w.priority
    prios = None if w.priorities is None else {p + 1 for p in w.priorities}
    return WordAutomaton(w.initial, w.step, True, priority=lambda q: pr(q) + 1,
                         state_bound=w.state_bound, priorities=prios, name="co-" + w.name)


def lasso_member(w, word):
    """Membership of an ultimately periodic word, by cycle analysis of the
    product of ``w`` with the lasso."""
    if w.deterministic:
        q = w.initial
        i = 0
        seen = {}
        trail = []
        while (q, i) not in seen:
            seen[(q, i)] = len(trail)
            trail.append(q)
            q = w.step(q, word.symbol(i))
            i = word.next(i)
        return max(w.weight(r) for r in trail[seen[(q, i)]:]) % 2 == 0
    nodes = set()
    edges = []
    frontier = [(q, 0) for q in w.initial_states()]
    nodes.update(frontier)
    while frontier:
        q, i = frontier.pop()
        j = word.next(i)
        for r in w.step(q, word.symbol(i)):
            edges.append(((q, i), w.weight(r), (r, j)))
            if (r, j) not in nodes:
                nodes.add((r, j))
                frontier.append((r, j))
    return has_cycle_with_max(nodes, edges, want_odd=False) is not None


def nbt_dpw(g):
    """Deterministic parity automaton for the streams without bad trace."""
    npw = bad_trace_npw(g)
    nbw = npw_to_nbw(npw)
    dpw = nbw_to_dpw(nbw)
    out = complement_dpw(dpw)
    n, k = g.n, len(macro_priorities(g))
    assert nbw.state_bound <= npw.state_bound * (k + 1), "Buchi size bound violated"
    assert len(out.priorities) <= 2 * nbw.state_bound + 2
    out.stages = (npw, nbw, dpw)
    out.bounds = {"n": n, "k": k, "nbw_states": nbw.state_bound}
    return out


def lasso_has_bad_trace(word, vertices=None):
    """Direct check: some trace on the lasso has an odd highest priority
    among those seen infinitely often.  Traces may start at any source of
    the first symbol."""
    start = set()
    first = word.symbol(0)
    for u, _, _ in first:
        start.add((u, 0))
    nodes = set(start)
    edges = []
    frontier = list(start)
    while frontier:
        v, i = frontier.pop()
        j = word.next(i)
        for u, k in _by_source(word.symbol(i)).get(v, ()):
            edges.append(((v, i), k, (u, j)))
            if (u, j) not in nodes:
                nodes.add((u, j))
                frontier.append((u, j))
    return has_cycle_with_max(nodes, edges, want_odd=True) is not None
