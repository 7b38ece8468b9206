"""Hypothesis strategies shared by the property tests."""

from hypothesis import strategies as st

from mudis.kripke import KripkeModel, PointedModel
from mudis.syntax import And, Bot, Box, Dia, Fix, Lit, Or, Top

PROPS = ("p", "q")
VARS = ("x", "y", "z")


@st.composite
def formulas(draw, depth=4, bound=()):
    """Closed NNF formulas; bound variables occur only positively."""
    leaves = [st.just(Top()), st.just(Bot()),
              st.builds(Lit, st.sampled_from(PROPS), st.booleans())]
    if bound:
        leaves.append(st.sampled_from(bound).map(Lit))
    if depth <= 0:
        return draw(st.one_of(leaves))
    kind = draw(st.sampled_from(["leaf", "and", "or", "dia", "box", "fix", "fix"]))
    if kind == "leaf":
        return draw(st.one_of(leaves))
    if kind in ("and", "or"):
        left = draw(formulas(depth - 1, bound))
        right = draw(formulas(depth - 1, bound))
        return (And if kind == "and" else Or)(left, right)
    if kind in ("dia", "box"):
        return (Dia if kind == "dia" else Box)(draw(formulas(depth - 1, bound)))
    var = draw(st.sampled_from(VARS))
    body = draw(formulas(depth - 1, tuple(set(bound) | {var})))
    return Fix(draw(st.sampled_from(["mu", "nu"])), var, body)


@st.composite
def models(draw, max_points=4, props=PROPS):
    n = draw(st.integers(1, max_points))
    pairs = [(u, v) for u in range(n) for v in range(n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    val = {p: draw(st.sets(st.integers(0, n - 1))) for p in props}
    return KripkeModel(n, edges, val, props)


@st.composite
def pointed_models(draw, max_points=4, props=PROPS):
    m = draw(models(max_points, props))
    return PointedModel(m, draw(st.integers(0, m.n - 1)))


def macrostates(n_vertices=4, priorities=(0, 1, 2, 3), max_size=8):
    triple = st.tuples(st.integers(0, n_vertices - 1), st.sampled_from(priorities),
                       st.integers(0, n_vertices - 1))
    return st.frozensets(triple, max_size=max_size)


# --------------------------------------------------------------------------
# disjunctive parity formulas

def random_disjunctive(rng, n, props=PROPS):
    """Random disjunctive parity formula on ``n`` vertices with every vertex
    prioritised, so every cycle is legal."""
    from mudis.parity_formula import AndLit, ParityFormula, check
    labels, edges = [], []
    for _ in range(n):
        kind = rng.choice(["nabla", "nabla", "or", "andlit", "top"])
        if kind == "nabla":
            labels.append("nabla")
            edges.append(tuple(sorted(rng.sample(range(n), rng.randint(0, min(3, n))))))
        elif kind == "or":
            labels.append("or")
            edges.append(tuple(sorted(rng.sample(range(n), rng.randint(0, min(2, n))))))
        elif kind == "andlit":
            labels.append(AndLit(Lit(rng.choice(props), rng.random() < 0.5)))
            edges.append((rng.randrange(n),))
        else:
            labels.append("top")
            edges.append(())
    priority = {v: rng.randint(0, 3) for v in range(n)}
    return check(ParityFormula(labels, edges, priority, 0, disjunctive=True))


def expand_nabla(g):
    """Standard parity formula in which every nabla is spelled out as
    diamonds of its members and a box of their disjunction."""
    from mudis.parity_formula import AndLit, ParityFormula, check
    labels = list(g.labels)
    edges = [list(e) for e in g.edges]

    def new(lab, kids):
        labels.append(lab)
        edges.append(list(kids))
        return len(labels) - 1

    def fold(op, kids, unit):
        if not kids:
            return new(unit, ())
        out = kids[-1]
        for k in reversed(kids[:-1]):
            out = new(op, (k, out))
        return out

    for v in range(g.n):
        lab = g.labels[v]
        if lab == "nabla":
            members = list(g.edges[v])
            parts = [new("dia", (b,)) for b in members]
            parts.append(new("box", (fold("or", members, "bot"),)))
            labels[v] = "eps"
            edges[v] = [fold("and", parts, "top")]
        elif isinstance(lab, AndLit):
            labels[v] = "and"
            edges[v] = [new(lab.lit, ()), g.edges[v][0]]
        elif lab == "or" and len(g.edges[v]) == 0:
            labels[v] = "bot"
        elif lab == "or" and len(g.edges[v]) == 1:
            labels[v] = "eps"
    return check(ParityFormula(labels, edges, dict(g.priority), g.initial))
