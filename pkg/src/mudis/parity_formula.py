"""Parity formulas: graph-shaped mu-calculus formulas with a partial priority map.

Vertex labels are the strings ``top bot and or dia box eps nabla``, a
:class:`~mudis.syntax.Lit` for literal atoms, or an :class:`AndLit` for the
unary literal conjunction of disjunctive formulas.  In a disjunctive formula
falsum is written as a disjunction without children.
"""

import json
from collections import deque
from dataclasses import dataclass

from . import nabla_moves
from .games import EXISTS, FORALL, ArenaBuilder, solve_zielonka
from .graphs import reachable, tarjan_scc
from .syntax import Lit

__all__ = ["AndLit", "ParityFormula", "GuardReport", "InvalidFormula", "validate",
           "index", "size", "is_disjunctive", "evaluation_game", "holds",
           "guard_report", "normalize_for_simulation", "guard", "to_json",
           "from_json", "to_dot", "STANDARD_OPS", "DISJUNCTIVE_OPS"]

STANDARD_OPS = frozenset({"top", "bot", "and", "or", "dia", "box", "eps"})
DISJUNCTIVE_OPS = frozenset({"top", "or", "eps", "nabla"})
MODAL = frozenset({"dia", "box"})


@dataclass(frozen=True)
class AndLit:
    lit: Lit

    def __str__(self):
        return "&" + str(self.lit)


class InvalidFormula(ValueError):
    pass


class ParityFormula:
    """Immutable labelled graph ``(V, E, L, Omega, v_I)`` over ``0..n-1``."""

    def __init__(self, labels, edges, priority, initial, disjunctive=False, names=None):
        self.labels = tuple(labels)
        self.edges = tuple(tuple(e) for e in edges)
        self.priority = {int(v): int(p) for v, p in dict(priority).items()}
        self.initial = initial
        self.disjunctive = bool(disjunctive)
        self.names = tuple(names) if names is not None else None
        if len(self.edges) != len(self.labels):
            raise InvalidFormula("labels and edges differ in length")
        if not 0 <= initial < len(self.labels):
            raise InvalidFormula("initial vertex out of range")

    @property
    def n(self):
        return len(self.labels)

    @property
    def states(self):
        return frozenset(self.priority)

    def kind(self, v):
        """Coarse vertex kind: 'atomic', 'boolean', 'modal', 'eps', 'nabla', 'andlit'."""
        lab = self.labels[v]
        if isinstance(lab, Lit) or lab in ("top", "bot"):
            return "atomic"
        if isinstance(lab, AndLit):
            return "andlit"
        if lab in ("and", "or"):
            return "boolean"
        if lab in MODAL:
            return "modal"
        return lab

    def props(self):
        out = set()
        for lab in self.labels:
            if isinstance(lab, Lit):
                out.add(lab.name)
            elif isinstance(lab, AndLit):
                out.add(lab.lit.name)
        return frozenset(out)

    def __eq__(self, other):
        return (isinstance(other, ParityFormula) and self.labels == other.labels
                and self.edges == other.edges and self.priority == other.priority
                and self.initial == other.initial and self.disjunctive == other.disjunctive)

    def __hash__(self):
        return hash((self.labels, self.edges, self.initial))

    def __repr__(self):
        return "ParityFormula(n=%d, index=%d%s)" % (
            self.n, index(self), ", disjunctive" if self.disjunctive else "")


def _arity_ok(lab, k, disjunctive):
    if disjunctive:
        if isinstance(lab, AndLit) or lab == "eps":
            return k == 1
        if lab == "top":
            return k == 0
        if lab == "or":
            return k <= 2
        return lab == "nabla"
    if isinstance(lab, Lit) or lab in ("top", "bot"):
        return k == 0
    if lab in ("dia", "box", "eps"):
        return k == 1
    return k <= 2


def validate(g):
    """List of violations; empty means ``g`` is a well-formed parity formula."""
    out = []
    for v, lab in enumerate(g.labels):
        if g.disjunctive:
            ok = isinstance(lab, AndLit) or lab in DISJUNCTIVE_OPS
        else:
            ok = isinstance(lab, Lit) or lab in STANDARD_OPS
        if not ok:
            out.append("vertex %d: label %r not allowed" % (v, lab))
            continue
        if not _arity_ok(lab, len(g.edges[v]), g.disjunctive):
            out.append("vertex %d: out-degree %d not allowed for %s" % (v, len(g.edges[v]), lab))
        for w in g.edges[v]:
            if not 0 <= w < g.n:
                out.append("vertex %d: edge to missing vertex %r" % (v, w))
        if len(set(g.edges[v])) != len(g.edges[v]):
            out.append("vertex %d: repeated edge" % v)
    for v, p in g.priority.items():
        if not 0 <= v < g.n:
            out.append("priority on missing vertex %r" % v)
        if p < 0:
            out.append("vertex %d: negative priority" % v)
    if out:
        return out
    free = [v for v in range(g.n) if v not in g.priority]
    sub = {v: [w for w in g.edges[v] if w not in g.priority] for v in free}
    for comp in tarjan_scc(0, sub, free):
        if len(comp) > 1 or comp[0] in sub[comp[0]]:
            out.append("priority-free cycle through %s" % sorted(comp))
    return out


def check(g):
    problems = validate(g)
    if problems:
        raise InvalidFormula("; ".join(problems))
    return g


def index(g):
    return len(set(g.priority.values()))


def size(g):
    return g.n


def is_disjunctive(g):
    if not all(isinstance(lab, AndLit) or lab in DISJUNCTIVE_OPS for lab in g.labels):
        return False
    return all(_arity_ok(lab, len(e), True) for lab, e in zip(g.labels, g.edges))


# --------------------------------------------------------------------------
# evaluation game

def _literal_true(model, lit, s):
    if lit.name not in model.val:
        raise KeyError("unknown proposition letter %r" % lit.name)
    return (s in model.val[lit.name]) == lit.positive


def evaluation_game(g, model, roots=None, nabla_mode="minimal"):
    """Evaluation game of ``g`` on ``model``, explored from ``roots``
    (default: the initial vertex at every point).

    Returns ``(arena, index)`` where ``index`` maps position keys to arena
    indices.  Vertex positions are keyed ``(v, s)``, cover positions
    ``("Z", frozenset_of_pairs)``.  ``nabla_mode`` selects how nabla
    vertices are played, see :mod:`mudis.nabla_moves`.
    """
    for name in g.props():
        if name not in model.val:
            raise KeyError("unknown proposition letter %r" % name)

    def expand(key):
        if key[0] == "Z":
            return FORALL, 0, sorted(key[1])
        if key[0] in nabla_moves.EXPANSION_TAGS:
            return nabla_moves.expansion_step(key, model, lambda w, t: (w, t))
        v, s = key
        lab = g.labels[v]
        prio = g.priority.get(v, 0)
        succ = g.edges[v]
        if isinstance(lab, Lit):
            return (FORALL if _literal_true(model, lab, s) else EXISTS), prio, ()
        if isinstance(lab, AndLit):
            if not _literal_true(model, lab.lit, s):
                return EXISTS, prio, ()
            return FORALL, prio, [(w, s) for w in succ]
        if lab == "top":
            return FORALL, prio, ()
        if lab == "bot":
            return EXISTS, prio, ()
        if lab in ("or", "eps"):
            return EXISTS, prio, [(w, s) for w in succ]
        if lab == "and":
            return FORALL, prio, [(w, s) for w in succ]
        if lab == "dia":
            return EXISTS, prio, [(w, t) for w in succ for t in model.succ[s]]
        if lab == "box":
            return FORALL, prio, [(w, t) for w in succ for t in model.succ[s]]
        if lab == "nabla":
            owner, moves = nabla_moves.step(nabla_mode, succ, s, model)
            return owner, prio, moves
        raise InvalidFormula("unknown label %r" % (lab,))

    if roots is None:
        roots = [(g.initial, s) for s in model.points]
    return ArenaBuilder(expand).build(roots)


def holds(g, pointed, nabla_mode="minimal"):
    """Whether ``g`` holds at the designated point of ``pointed``."""
    root = (g.initial, pointed.point)
    arena, idx = evaluation_game(g, pointed.model, [root], nabla_mode=nabla_mode)
    return solve_zielonka(arena).winner(idx[root]) == EXISTS


def holds_everywhere(g, model, nabla_mode="minimal"):
    """Set of points where ``g`` holds, from a single game."""
    arena, idx = evaluation_game(g, model, nabla_mode=nabla_mode)
    sol = solve_zielonka(arena)
    return frozenset(s for s in model.points if sol.winner(idx[(g.initial, s)]) == EXISTS)


# --------------------------------------------------------------------------
# guardedness

@dataclass(frozen=True)
class GuardReport:
    verdict: str                # "strongly guarded", "guarded" or "unguarded"
    witness: tuple = ()

    @property
    def strongly_guarded(self):
        return self.verdict == "strongly guarded"


_GUARDS = frozenset({"modal", "nabla"})


def _modal_free_paths(g, start):
    """BFS from a state through non-modal vertices; parent links."""
    parent = {}
    queue = deque()
    for w in g.edges[start]:
        if g.kind(w) not in _GUARDS and w not in parent:
            parent[w] = start
            queue.append(w)
    while queue:
        v = queue.popleft()
        for w in g.edges[v]:
            if g.kind(w) not in _GUARDS and w not in parent:
                parent[w] = v
                queue.append(w)
    return parent


def _path_to(parent, start, end):
    path = [end]
    v = end
    while True:
        v = parent[v]
        path.append(v)
        if v == start:
            break
    return tuple(reversed(path))


def guard_report(g):
    witness_path = None
    for u in sorted(g.priority):
        parent = _modal_free_paths(g, u)
        if u in parent:
            return GuardReport("unguarded", _path_to(parent, u, u))
        if witness_path is None:
            for w in sorted(g.priority):
                if w in parent:
                    witness_path = _path_to(parent, u, w)
                    break
    if witness_path is None:
        return GuardReport("strongly guarded")
    return GuardReport("guarded", witness_path)


# --------------------------------------------------------------------------
# normalisation

def normalize_for_simulation(g):
    """Equivalent formula with total priority map, no epsilon vertices and
    no childless boolean vertices; vertices unreachable from the initial
    vertex are dropped."""
    if g.disjunctive:
        raise InvalidFormula("normalisation expects a standard parity formula")
    check(g)
    if (all(v in g.priority for v in range(g.n))
            and "eps" not in g.labels
            and not any(lab in ("and", "or") and not e for lab, e in zip(g.labels, g.edges))
            and len(reachable([g.initial], g.edges)) == g.n):
        return g

    def target(v):
        seen = set()
        while g.labels[v] == "eps" and v not in g.priority:
            if v in seen:
                raise InvalidFormula("priority-free epsilon cycle")
            seen.add(v)
            v = g.edges[v][0]
        return v

    root = target(g.initial)
    order = []
    new_index = {}
    stack = [root]
    while stack:
        v = stack.pop()
        if v in new_index:
            continue
        new_index[v] = len(order)
        order.append(v)
        for w in reversed(g.edges[v]):
            t = target(w)
            if t not in new_index:
                stack.append(t)
    labels, edges, priority, names = [], [], {}, []
    for v in order:
        lab = g.labels[v]
        succ = [new_index[target(w)] for w in g.edges[v]]
        if lab == "eps":
            lab = "or"
        elif lab == "and" and not succ:
            lab = "top"
        elif lab == "or" and not succ:
            lab = "bot"
        labels.append(lab)
        edges.append(tuple(dict.fromkeys(succ)))
        priority[new_index[v]] = g.priority.get(v, 0)
        names.append(g.names[v] if g.names else str(v))
    return ParityFormula(labels, edges, priority, 0, names=names)


# --------------------------------------------------------------------------
# guarding

def _has_modal_predecessors(g):
    for v, succ in enumerate(g.edges):
        if g.kind(v) not in _GUARDS:
            if any(w in g.priority for w in succ):
                return False
    return True


def guard(g):
    """Strongly guarded equivalent of ``g`` in which every predecessor of a
    prioritised vertex is modal.

    Within a modal-free stretch the construction remembers the states seen
    so far whose priority has not been exceeded since; meeting one of them
    again closes a loop whose highest priority is that state's, and the loop
    is decided on the spot.  The highest priority of a stretch is moved onto
    the vertex following the modal step that ends it.
    """
    if g.disjunctive:
        raise InvalidFormula("guarding expects a standard parity formula")
    check(g)
    if guard_report(g).strongly_guarded and _has_modal_predecessors(g):
        return g
    budget = 2 ** (1 + len(g.priority)) * g.n
    ran = sorted(set(g.priority.values()))
    low = ran[0] if ran else None
    prio = g.priority
    keys = []
    index_of = {}
    labels, edges, priority, names = [], [], {}, []

    def intern(key):
        i = index_of.get(key)
        if i is None:
            i = index_of[key] = len(keys)
            keys.append(key)
            labels.append(None)
            edges.append(None)
            names.append(None)
        return i

    def arrive(w, record):
        if w not in prio:
            return ("in", w, record)
        if w in record:
            return ("cut", prio[w] % 2)
        kept = frozenset(t for t in record if prio[t] >= prio[w]) | {w}
        return ("in", w, kept)

    root = intern(("start", g.initial, None))
    todo = [root]
    while todo:
        i = todo.pop()
        if labels[i] is not None:
            continue
        key = keys[i]
        if key[0] == "cut":
            labels[i] = "top" if key[1] == 0 else "bot"
            edges[i] = ()
            names[i] = labels[i]
            continue
        if key[0] == "start":
            _, w, p = key
            labels[i] = "eps"
            if p is not None:
                priority[i] = p
            succ_keys = [arrive(w, frozenset())]
            names[i] = "%s^" % (g.names[w] if g.names else w)
        else:
            _, v, record = key
            labels[i] = g.labels[v]
            names[i] = "%s%s" % (g.names[v] if g.names else v,
                                 sorted(record) if record else "")
            if g.kind(v) == "modal":
                top = max((prio[t] for t in record), default=low)
                succ_keys = [("start", w, top) for w in g.edges[v]]
            else:
                succ_keys = [arrive(w, record) for w in g.edges[v]]
        targets = []
        for k in succ_keys:
            j = intern(k)
            targets.append(j)
            if labels[j] is None:
                todo.append(j)
        edges[i] = tuple(dict.fromkeys(targets))
    out = ParityFormula(labels, edges, priority, root, names=names)
    assert out.n <= budget, "guard: size %d exceeds %d" % (out.n, budget)
    assert index(out) <= index(g), "guard: index grew"
    assert not validate(out), validate(out)
    assert guard_report(out).strongly_guarded
    assert _has_modal_predecessors(out)
    return out


# --------------------------------------------------------------------------
# serialisation

def _label_to_json(lab):
    if isinstance(lab, Lit):
        return ("+" if lab.positive else "-") + lab.name
    if isinstance(lab, AndLit):
        return "&" + _label_to_json(lab.lit)
    return lab


def _label_from_json(text):
    if text.startswith("&"):
        return AndLit(_label_from_json(text[1:]))
    if text[:1] in "+-":
        return Lit(text[1:], text[0] == "+")
    return text


def to_json(g):
    return json.dumps({
        "vertices": g.n,
        "labels": [_label_to_json(lab) for lab in g.labels],
        "edges": [list(e) for e in g.edges],
        "priority": {str(v): p for v, p in sorted(g.priority.items())},
        "initial": g.initial,
        "disjunctive": g.disjunctive,
    })


def from_json(text):
    data = json.loads(text)
    labels = [_label_from_json(t) for t in data["labels"]]
    if len(labels) != data["vertices"]:
        raise InvalidFormula("vertex count does not match labels")
    g = ParityFormula(labels, data["edges"], {int(k): v for k, v in data.get("priority", {}).items()},
                      data["initial"], data.get("disjunctive", False))
    return check(g)


def to_dot(g, name="G"):
    lines = ["digraph %s {" % name]
    for v in range(g.n):
        lab = _label_to_json(g.labels[v])
        extra = ""
        if v in g.priority:
            extra = " : %d" % g.priority[v]
        shape = "doublecircle" if v == g.initial else "circle"
        lines.append('  %d [shape=%s, label="%s%s"];' % (v, shape, lab, extra))
        for w in g.edges[v]:
            lines.append("  %d -> %d;" % (v, w))
    lines.append("}")
    return "\n".join(lines)
