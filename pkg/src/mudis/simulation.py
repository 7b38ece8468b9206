"""Disjunctive modal automata simulating parity formulas, via macrostates.

A macrostate is a frozenset of triples ``(u, k, v)``: a stretch of play
from ``u`` to ``v`` whose highest priority after ``u`` is ``k``.  The
simulating automaton has macrostates as states and guesses, per point of a
model, a local strategy of the existential player on disjunction vertices.
Its acceptance condition (no bad trace) is turned into a parity condition
by a product with a deterministic parity word automaton.
"""

import itertools
import math
from dataclasses import dataclass, field

from . import modal_automaton as ma
from . import nabla_moves
from .games import EXISTS, FORALL, ArenaBuilder, solve_zielonka
from .graphs import has_cycle_with_max
from .modal_automaton import ModalAutomaton, colours
from .omega_word import macro_priorities, nbt_dpw
from .parity_formula import InvalidFormula, check, normalize_for_simulation
from .syntax import Lit
from .transforms import from_automaton

__all__ = ["SimulationBudgetExceeded", "delta", "ran", "compose", "consistent",
           "compatible", "Context", "stationary_closure", "locally_compatible", "demands",
           "local_strategies", "theta", "theta_size", "SimulationAutomaton",
           "build_simulation", "accepts", "wreath_product", "to_disjunctive_parity_formula",
           "DEFAULT_MAX_STATES", "WREATH_INDEX_FACTOR"]

DEFAULT_MAX_STATES = 1 << 20
# measured index of the wreath product is checked against this multiple of n * k
WREATH_INDEX_FACTOR = 8


class SimulationBudgetExceeded(RuntimeError):
    pass


# --------------------------------------------------------------------------
# macrostate algebra

def delta(us):
    return frozenset((u, 0, u) for u in us)


def ran(m):
    return frozenset(v for _, _, v in m)


def _index(m):
    out = {}
    for u, k, v in m:
        out.setdefault(u, []).append((k, v))
    return out


def compose(m, m2):
    idx = _index(m2)
    return frozenset((u, max(k, k2), w) for u, k, v in m for k2, w in idx.get(v, ()))


def compatible(g, vertices, colour):
    """No bottom vertex, and every literal vertex agrees with ``colour``."""
    for u in vertices:
        lab = g.labels[u]
        if lab == "bot":
            return False
        if isinstance(lab, Lit) and (lab.name in colour) != lab.positive:
            return False
    return True


def consistent(g, m):
    """No bottom vertex and no complementary literals in the range."""
    pos, neg = set(), set()
    for u in ran(m):
        lab = g.labels[u]
        if lab == "bot":
            return False
        if isinstance(lab, Lit):
            (pos if lab.positive else neg).add(lab.name)
    return not (pos & neg)


# --------------------------------------------------------------------------
# local strategies

class Context:
    """Precomputed vertex classes of a normalized parity formula."""

    def __init__(self, g):
        if g.disjunctive:
            raise InvalidFormula("simulation expects a standard parity formula")
        if set(g.priority) != set(range(g.n)) or "eps" in g.labels:
            raise InvalidFormula("formula is not normalized for simulation")
        self.g = g
        self.n = g.n
        self.omega = [g.priority[v] for v in range(g.n)]
        self.ors = frozenset(v for v in range(g.n) if g.labels[v] == "or")
        self.ands = frozenset(v for v in range(g.n) if g.labels[v] == "and")
        self.boolean = self.ors | self.ands
        self.dias = frozenset(v for v in range(g.n) if g.labels[v] == "dia")
        self.boxes = frozenset(v for v in range(g.n) if g.labels[v] == "box")
        self.letters = frozenset(sorted(g.props()))
        self.k = len(set(self.omega))

    def moves(self, chi, v):
        if v in self.ors:
            return (chi[v],)
        if v in self.ands:
            return self.g.edges[v]
        return ()


def _plays_from(ctx, chi, v):
    """Triples ``(v, n, u)`` for the stationary plays from ``v``."""
    out = set()
    stack = [(w, ctx.omega[w]) for w in ctx.moves(chi, v)]
    while stack:
        u, n = stack.pop()
        if (v, n, u) in out:
            continue
        out.add((v, n, u))
        for w in ctx.moves(chi, u):
            stack.append((w, max(n, ctx.omega[w])))
    return out


def stationary_closure(ctx, chi, sources=None):
    """``(e_minus, e)`` for the local strategy ``chi``.  With ``sources``
    only plays from those vertices are collected (the diagonal part of
    ``e`` is always the full one)."""
    vs = ctx.boolean if sources is None else [v for v in sources if v in ctx.boolean]
    e_minus = set()
    for v in vs:
        e_minus |= _plays_from(ctx, chi, v)
    e_minus = frozenset(e_minus)
    return e_minus, e_minus | delta(range(ctx.n))


def _bad_stationary_cycle(ctx, chi, roots):
    nodes, edges = set(roots), []
    stack = list(roots)
    while stack:
        u = stack.pop()
        for w in ctx.moves(chi, u):
            edges.append((u, ctx.omega[w], w))
            if w not in nodes:
                nodes.add(w)
                stack.append(w)
    return has_cycle_with_max(nodes, edges, want_odd=True) is not None


def locally_compatible(ctx, m, colour, chi):
    """(i) the range of ``m ; e_chi`` agrees with ``colour`` and (ii) no
    infinite stationary play from the range of ``m`` is bad."""
    e_minus, e = stationary_closure(ctx, chi, ran(m))
    if not compatible(ctx.g, ran(compose(m, e)), colour):
        return False
    return not _bad_stationary_cycle(ctx, chi, ran(m))


def demands(ctx, m):
    """``(d_box, {x: d_x})`` for the modal vertices in the range of ``m``."""
    r = ran(m)
    g = ctx.g
    d_box = frozenset((u, ctx.omega[v], v) for u in r & ctx.boxes for v in g.edges[u])
    d_x = {x: d_box | frozenset((x, ctx.omega[v], v) for v in g.edges[x])
           for x in r & ctx.dias}
    return d_box, d_x


def local_strategies(ctx, roots):
    """Partial local strategies defined exactly on the disjunction vertices
    met by stationary play from ``roots``; every total strategy agrees with
    exactly one of them on that region."""

    def go(chi, stack, seen):
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            if v in ctx.ors and v not in chi:
                for w in ctx.g.edges[v]:
                    yield from go({**chi, v: w}, stack + [w], set(seen))
                return
            stack.extend(ctx.moves(chi, v))
        yield chi

    yield from go({}, sorted(roots, reverse=True), set())


def total_strategies(ctx):
    ors = sorted(ctx.ors)
    for choice in itertools.product(*(ctx.g.edges[v] for v in ors)):
        yield dict(zip(ors, choice))


@dataclass(frozen=True)
class Choice:
    """What a local strategy contributes to the transitions out of one
    macrostate: the literal requirements on the colour and the disjuncts."""
    chi: tuple
    positive: frozenset
    negative: frozenset
    blocked: bool
    disjuncts: tuple

    def allows(self, colour):
        return (not self.blocked and self.positive <= colour
                and not (self.negative & colour))


def _choice(ctx, m, chi, literal):
    r = ran(m)
    if literal:
        e_minus, e = stationary_closure(ctx, chi)
        lead = e
    else:
        e_minus, e = stationary_closure(ctx, chi, r)
        lead = delta(r) | e_minus
    mm = compose(m, e)
    rr = ran(mm)
    pos, neg, blocked = set(), set(), False
    for u in rr:
        lab = ctx.g.labels[u]
        if lab == "bot":
            blocked = True
        elif isinstance(lab, Lit):
            (pos if lab.positive else neg).add(lab.name)
    if pos & neg or _bad_stationary_cycle(ctx, chi, r):
        blocked = True
    d_box, d_x = demands(ctx, mm)
    nxt = frozenset([compose(lead, d_box)] + [compose(lead, d) for d in d_x.values()])
    disjuncts = (ma.nabla(nxt),) if d_x else (ma.nabla(nxt), ma.nabla(()))
    return Choice(tuple(sorted(chi.items())), frozenset(pos), frozenset(neg), blocked,
                  disjuncts)


def _choices(ctx, m, literal=False):
    strategies = total_strategies(ctx) if literal else local_strategies(ctx, ran(m))
    return [c for c in (_choice(ctx, m, chi, literal) for chi in strategies) if not c.blocked]


def _theta_from(choices, colour):
    return ma.big_or(d for c in choices if c.allows(colour) for d in c.disjuncts)


def theta(ctx, m, colour, literal=False):
    """Transition of the simulating automaton at ``m`` under ``colour``."""
    return _theta_from(_choices(ctx, m, literal), frozenset(colour) & ctx.letters)


def theta_size(f):
    """Sum over the distinct nabla disjuncts of ``max(1, |B|)``."""
    return sum(max(1, len(s[1])) for s in ma.sfor(f) if s[0] == "nabla")


# --------------------------------------------------------------------------
# the simulating automaton

@dataclass
class SimulationAutomaton:
    source: object
    context: Context
    automaton: ModalAutomaton
    choices: dict
    provenance: dict
    dpw: object = None
    stats: dict = field(default_factory=dict)

    @property
    def initial(self):
        return self.automaton.initial

    @property
    def states(self):
        return self.automaton.states

    def theta(self, m, colour):
        return self.automaton.transition(m, colour)

    def nbt(self):
        if self.dpw is None:
            self.dpw = nbt_dpw(self.context.g)
        return self.dpw


def build_simulation(g, max_states=DEFAULT_MAX_STATES, literal=False):
    """Reachable part of the simulating disjunctive automaton of ``g``.

    The priority map of the underlying automaton is a placeholder; its
    acceptance condition is the absence of bad traces, available through
    :meth:`SimulationAutomaton.nbt`.
    """
    check(g)
    h = normalize_for_simulation(g)
    ctx = Context(h)
    letters = sorted(ctx.letters)
    m_init = delta([h.initial])
    table, choices, provenance = {}, {}, {m_init: None}
    order = [m_init]
    todo = [m_init]
    biggest = table_size = 0
    while todo:
        m = todo.pop()
        cs = choices[m] = _choices(ctx, m, literal)
        for c in colours(letters):
            f = table[(m, c)] = _theta_from(cs, c)
            biggest = max(biggest, theta_size(f))
            table_size += theta_size(f)
            for s in ma.states_of(f):
                if s not in provenance:
                    if len(order) >= max_states:
                        raise SimulationBudgetExceeded(
                            "more than %d reachable macrostates" % max_states)
                    provenance[s] = (m, c)
                    order.append(s)
                    todo.append(s)
    aut = ModalAutomaton(order, m_init, {m: 0 for m in order}, table, props=letters,
                         disjunctive=True, name="simulation")
    n, k, l = h.n, len(set(ctx.omega)), len(letters)
    n_states, n_size, _ = ma.automaton_size(aut)
    assert n_states <= 2 ** (n * n * k), "reachable macrostates exceed 2^(n^2 k)"
    assert biggest <= n * 2 ** n, "transition size exceeds n 2^n"
    bound = n * 2 ** (n * n * k + l + n)
    assert table_size <= bound, "transition table size bound violated"
    # the size measure also counts disjunction nodes and states
    assert n_size <= 2 * bound + n_states, "automaton size bound violated"
    stats = {"n": n, "k": k, "letters": l, "states": n_states, "size": n_size,
             "table_size": table_size, "max_theta": biggest}
    return SimulationAutomaton(g, ctx, aut, choices, provenance, stats=stats)


def _relabel(f, fn):
    tag = f[0]
    if tag == "nabla":
        return ma.nabla(fn(b) for b in f[1])
    if tag == "or":
        return ("or", _relabel(f[1], fn), _relabel(f[2], fn))
    return f


def accepts(sim, pointed, nabla_mode="minimal"):
    """Acceptance of a pointed model, on the product of the acceptance game
    with the no-bad-trace word automaton, explored lazily."""
    dpw = sim.nbt()
    model = pointed.model
    aut = sim.automaton
    missing = aut.letters - set(model.props)
    if missing:
        raise KeyError("model lacks proposition letters %s" % sorted(missing))

    def state(m, p):
        return ("s", m, dpw.step(p, m))

    def expand(key):
        tag = key[0]
        if tag in nabla_moves.EXPANSION_TAGS:
            return nabla_moves.expansion_step(key, model, lambda b, t: state(b[0], b[1]) + (t,))
        if tag == "s":
            _, m, p, s = key
            return EXISTS, dpw.priority(p), [("f", aut.transition(m, model.colour(s)), p, s)]
        if tag == "Z":
            return FORALL, 0, [state(b[0], b[1]) + (t,) for b, t in sorted(key[1], key=repr)]
        _, f, p, s = key
        op = f[0]
        if op == "top":
            return FORALL, 0, ()
        if op == "bot":
            return EXISTS, 0, ()
        if op == "or":
            return EXISTS, 0, [("f", f[1], p, s), ("f", f[2], p, s)]
        if op == "nabla":
            owner, moves = nabla_moves.step(nabla_mode, [(b, p) for b in f[1]], s, model)
            return owner, 0, moves
        raise ValueError("unexpected one-step formula %r" % (f,))

    root = state(sim.initial, dpw.initial) + (pointed.point,)
    arena, idx = ArenaBuilder(expand).build([root])
    return solve_zielonka(arena).winner(idx[root]) == EXISTS


def wreath_product(sim, max_states=DEFAULT_MAX_STATES):
    """Disjunctive parity automaton: macrostates paired with states of the
    no-bad-trace parity automaton.  States are numbered; ``origin`` maps
    them back to pairs."""
    dpw = sim.nbt()
    aut = sim.automaton
    letters = sorted(aut.letters)
    number = {}
    origin = []

    def intern(m, p):
        key = (m, p)
        i = number.get(key)
        if i is None:
            if len(origin) >= max_states:
                raise SimulationBudgetExceeded("wreath product exceeds %d states" % max_states)
            i = number[key] = len(origin)
            origin.append(key)
            todo.append(i)
        return i

    todo = []
    start = intern(aut.initial, dpw.step(dpw.initial, aut.initial))
    table = {}
    while todo:
        i = todo.pop()
        m, p = origin[i]
        for c in colours(letters):
            f = aut.transition(m, c)
            g = _relabel(f, lambda b: intern(b, dpw.step(p, b)))
            assert len(ma.sfor(g)) == len(ma.sfor(f)), "wreath transition changed size"
            table[(i, c)] = g
    priority = {i: dpw.priority(p) for i, (_, p) in enumerate(origin)}
    out = ModalAutomaton(range(len(origin)), start, priority, table, props=letters,
                         disjunctive=True, name="wreath")
    out.origin = origin
    ctx = sim.context
    k = len(macro_priorities(ctx.g))
    bound = WREATH_INDEX_FACTOR * ctx.n * k
    assert out.index() <= bound, "wreath index exceeds c n k"
    sim.stats.update(wreath_states=len(origin), wreath_index=out.index(),
                     wreath_index_bound=bound, dpw_states=len(dpw.explored()))
    return out


def to_disjunctive_parity_formula(g, max_states=DEFAULT_MAX_STATES):
    """Equivalent disjunctive parity formula, by way of the simulating
    automaton and its wreath product."""
    sim = build_simulation(g, max_states=max_states)
    wreath = wreath_product(sim, max_states=max_states)
    out = from_automaton(wreath)
    ctx = sim.context
    n, k = ctx.n, len(macro_priorities(ctx.g))
    budget = 4 * n * n * k * math.ceil(math.log2(n * k + 1)) + len(ctx.letters)
    assert out.n <= 2 ** budget, "disjunctive formula exceeds its size budget"
    return out
