"""Translations between formulas, parity formulas and modal automata."""

from . import modal_automaton as ma
from .modal_automaton import BOT, TOP, ModalAutomaton, colours, conj, disj, instantiate
from .parity_formula import (AndLit, InvalidFormula, ParityFormula, check, guard,
                             guard_report, index, is_disjunctive)
from .syntax import (And, Bot, Box, Dia, Fix, Lit, Or, Top, alternation_depth, closure_graph,
                     component_tops, free_names, hierarchy_levels, size, substitute)

__all__ = ["to_parity", "from_parity", "to_automaton", "from_automaton"]


def to_parity(phi):
    """Parity formula on the closure of ``phi``.

    Fixpoint vertices lying on a cycle become states.  Their priorities
    follow the nesting inside each strongly connected part of the closure
    graph: an enclosing fixpoint gets a priority at least as high as the
    ones it encloses, strictly higher when the kind changes, odd for least
    and even for greatest fixpoints.
    """
    members, succ = closure_graph(phi)
    sigma, pi = hierarchy_levels(members, succ)
    tops, scc_of, level = component_tops(members, succ)
    ad = min(sigma, pi)
    lean_mu = sigma <= pi
    top_priority = ad if ad % 2 == (1 if lean_mu else 0) else ad - 1
    priority = {}
    for v, lev in level.items():
        top_level, kinds = tops[scc_of[v]]
        aligned = kinds == ({"mu"} if lean_mu else {"nu"})
        span = top_level if aligned else top_level + 1
        p = top_priority - (span - lev)
        if p % 2 != (1 if members[v].kind == "mu" else 0):
            p += 1
        priority[v] = p
    labels = []
    for f in members:
        if isinstance(f, Lit):
            labels.append(f)
        elif isinstance(f, Top):
            labels.append("top")
        elif isinstance(f, Bot):
            labels.append("bot")
        elif isinstance(f, And):
            labels.append("and")
        elif isinstance(f, Or):
            labels.append("or")
        elif isinstance(f, Dia):
            labels.append("dia")
        elif isinstance(f, Box):
            labels.append("box")
        else:
            labels.append("eps")
    edges = [tuple(dict.fromkeys(s)) for s in succ]
    g = ParityFormula(labels, edges, priority, 0, names=[str(f) for f in members])
    assert g.n == size(phi), "closure size mismatch"
    assert index(g) <= ad, "index %d exceeds alternation depth %d" % (index(g), ad)
    return check(g)


def _fresh_prefix(taken):
    prefix = "x"
    while any(t.startswith(prefix) for t in taken):
        prefix += "x"
    return prefix


def from_parity(g):
    """Formula in standard syntax equivalent to the parity formula ``g``.

    Every state gets a fixpoint variable; the resulting equation system is
    solved by elimination from the lowest priority upwards.
    """
    check(g)
    if g.disjunctive:
        raise InvalidFormula("from_parity expects a standard parity formula")
    prefix = _fresh_prefix(g.props())
    var = {u: "%s%d" % (prefix, u) for u in g.priority}
    memo = {}

    def ref(v):
        return Lit(var[v]) if v in var else body(v)

    def body(v):
        if v in memo:
            return memo[v]
        lab = g.labels[v]
        kids = [ref(w) for w in g.edges[v]]
        if isinstance(lab, Lit):
            f = lab
        elif lab == "top":
            f = Top()
        elif lab == "bot":
            f = Bot()
        elif lab == "and":
            f = _fold(And, kids, Top())
        elif lab == "or":
            f = _fold(Or, kids, Bot())
        elif lab == "dia":
            f = Dia(kids[0])
        elif lab == "box":
            f = Box(kids[0])
        else:
            f = kids[0]
        memo[v] = f
        return f

    equations = {u: body(u) for u in var}
    root = ref(g.initial)
    for u in sorted(var, key=lambda u: (g.priority[u], u)):
        rhs = equations.pop(u)
        if var[u] in free_names(rhs):
            closed = Fix("mu" if g.priority[u] % 2 else "nu", var[u], rhs)
        else:
            closed = rhs
        for w in equations:
            equations[w] = substitute(equations[w], var[u], closed)
        root = substitute(root, var[u], closed)
    assert size(root) <= 2 * g.n, "size %d exceeds 2 * %d" % (size(root), g.n)
    assert alternation_depth(root) <= max(index(g), 0), "alternation depth exceeds index"
    return root


def _fold(ctor, kids, unit):
    if not kids:
        return unit
    out = kids[-1]
    for k in reversed(kids[:-1]):
        out = ctor(k, out)
    return out


def to_automaton(g):
    """Modal automaton equivalent to the standard parity formula ``g``.

    The formula is guarded first; automaton states are the initial vertex
    and the successors of modal vertices.
    """
    check(g)
    if g.disjunctive:
        raise InvalidFormula("to_automaton expects a standard parity formula")
    h = guard(g)
    states = sorted({w for v in range(h.n) if h.kind(v) == "modal" for w in h.edges[v]}
                    | {h.initial})
    memo = {}

    def alpha(v):
        if v in memo:
            return memo[v]
        lab = h.labels[v]
        if isinstance(lab, Lit):
            f = ma.lit(lab.name, lab.positive)
        elif lab == "top":
            f = TOP
        elif lab == "bot":
            f = BOT
        elif lab in ("dia", "box"):
            f = (lab, h.edges[v][0])
        elif lab == "and":
            f = ma.big_and(alpha(w) for w in h.edges[v])
        elif lab == "or":
            f = ma.big_or(alpha(w) for w in h.edges[v])
        else:
            f = alpha(h.edges[v][0])
        memo[v] = f
        return f

    letters = sorted(h.props())
    table = {(a, c): instantiate(alpha(a), c) for a in states for c in colours(letters)}
    ran = sorted(set(h.priority.values()))
    low = ran[0] if ran else 0
    priority = {a: h.priority.get(a, low) for a in states}
    aut = ModalAutomaton(states, h.initial, priority, table, props=letters)
    n_states, n_size, ind = ma.automaton_size(aut)
    dom = len(g.priority)
    assert n_states <= 2 ** (1 + dom) * g.n, "state size bound violated"
    assert n_size <= 2 ** (len(letters) + 1 + dom) * g.n, "size bound violated"
    assert ind <= max(1, index(g)), "index bound violated"
    return aut


def from_automaton(aut):
    """Strongly guarded parity formula equivalent to ``aut``; disjunctive
    automata give disjunctive formulas.

    The colour case split in front of each state is a decision tree over
    the letters the transitions depend on; letters that make no difference
    on a branch are not tested.
    """
    letters = sorted(aut.letters)
    disjunctive = aut.disjunctive
    labels, edges = [], []
    state_vertex = {}
    for a in aut.states:
        state_vertex[a] = len(labels)
        labels.append("eps")
        edges.append(None)
    term_vertex = {}

    def vertex(t):
        v = term_vertex.get(t)
        if v is not None:
            return v
        tag = t[0]
        if tag == "top":
            lab, kids = "top", ()
        elif tag == "bot":
            lab, kids = ("or" if disjunctive else "bot"), ()
        elif tag in ("dia", "box"):
            lab, kids = tag, (state_vertex[t[1]],)
        elif tag == "nabla":
            lab, kids = "nabla", tuple(sorted(state_vertex[b] for b in t[1]))
        elif tag in ("and", "or"):
            lab, kids = tag, (vertex(t[1]), vertex(t[2]))
        elif tag == "lit":
            lab, kids = Lit(t[1], t[2]), ()
        elif tag == "andlit":
            lab, kids = AndLit(Lit(t[1], t[2])), (vertex(t[3]),)
        else:
            raise ValueError("unexpected term %r" % (t,))
        v = term_vertex[t] = len(labels)
        labels.append(lab)
        edges.append(kids)
        return v

    def split(a, i, c):
        if i == len(letters):
            return aut.transition(a, c)
        p = letters[i]
        yes = split(a, i + 1, c | {p})
        no = split(a, i + 1, c)
        if yes == no:
            return yes

        def test(positive, t):
            if t == BOT:
                return BOT
            if disjunctive:
                return ("andlit", p, positive, t)
            return conj(ma.lit(p, positive), t)

        return disj(test(True, yes), test(False, no))

    for a in aut.states:
        edges[state_vertex[a]] = (vertex(split(a, 0, frozenset())),)
    priority = {state_vertex[a]: aut.priority[a] for a in aut.states}
    names = [str(a) for a in aut.states] + [None] * (len(labels) - len(aut.states))
    g = ParityFormula(labels, edges, priority, state_vertex[aut.initial],
                      disjunctive=disjunctive, names=names)
    check(g)
    _, aut_size, _ = ma.automaton_size(aut)
    assert g.n <= 2 ** len(aut.props) * aut_size, "size bound violated"
    assert index(g) <= aut.index(), "index bound violated"
    assert guard_report(g).strongly_guarded, "output not strongly guarded"
    if disjunctive:
        assert is_disjunctive(g), "disjunctive automaton gave a non-disjunctive formula"
    return g
