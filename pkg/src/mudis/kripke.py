"""Finite Kripke models and a Knaster-Tarski evaluator used as ground truth."""

import json
import random
from dataclasses import dataclass

from .syntax import And, Bot, Box, Dia, Fix, Lit, Or, Top

__all__ = ["KripkeModel", "PointedModel", "eval_naive", "random_model",
           "random_pointed_models", "load_model", "dump_model"]


class KripkeModel:
    """Points ``0..n-1``, successor lists and a valuation over ``props``."""

    def __init__(self, n_points, edges, val, props=None):
        if n_points < 1:
            raise ValueError("a model needs at least one point")
        self.n = n_points
        succ = [set() for _ in range(n_points)]
        for u, v in edges:
            if not (0 <= u < n_points and 0 <= v < n_points):
                raise ValueError("edge (%r, %r) out of range" % (u, v))
            succ[u].add(v)
        self.succ = tuple(tuple(sorted(s)) for s in succ)
        if props is None:
            props = val.keys()
        self.props = tuple(sorted(set(props)))
        unknown = set(val) - set(self.props)
        if unknown:
            raise ValueError("valuation for undeclared letters %s" % sorted(unknown))
        self.val = {p: frozenset(val.get(p, ())) for p in self.props}
        for p, pts in self.val.items():
            if any(not 0 <= s < n_points for s in pts):
                raise ValueError("valuation of %r out of range" % p)
        self._colours = tuple(frozenset(p for p in self.props if s in self.val[p])
                              for s in range(n_points))

    @property
    def points(self):
        return range(self.n)

    def edges(self):
        return [(u, v) for u in range(self.n) for v in self.succ[u]]

    def colour(self, s):
        return self._colours[s]

    def literal_holds(self, s, name, positive=True):
        if name not in self.val:
            raise KeyError("unknown proposition letter %r" % name)
        return (s in self.val[name]) == positive

    def __repr__(self):
        return "KripkeModel(%d, %r, %r)" % (self.n, self.edges(),
                                            {p: sorted(v) for p, v in self.val.items()})


@dataclass(frozen=True)
class PointedModel:
    model: KripkeModel
    point: int

    def __post_init__(self):
        if not 0 <= self.point < self.model.n:
            raise ValueError("designated point %r out of range" % self.point)


def eval_naive(phi, model, env=None):
    """Denotation of ``phi`` in ``model`` by fixpoint iteration.

    ``env`` maps fixpoint variables to point sets; any other name is a
    proposition letter of the model.
    """
    env = dict(env or {})
    everything = frozenset(model.points)

    def ev(f, env):
        if isinstance(f, Top):
            return everything
        if isinstance(f, Bot):
            return frozenset()
        if isinstance(f, Lit):
            if f.name in env:
                if not f.positive:
                    raise ValueError("negated fixpoint variable %r" % f.name)
                return env[f.name]
            if f.name not in model.val:
                raise KeyError("unknown proposition letter %r" % f.name)
            ext = model.val[f.name]
            return ext if f.positive else everything - ext
        if isinstance(f, And):
            return ev(f.left, env) & ev(f.right, env)
        if isinstance(f, Or):
            return ev(f.left, env) | ev(f.right, env)
        if isinstance(f, Dia):
            target = ev(f.arg, env)
            return frozenset(s for s in everything
                             if any(t in target for t in model.succ[s]))
        if isinstance(f, Box):
            target = ev(f.arg, env)
            return frozenset(s for s in everything
                             if all(t in target for t in model.succ[s]))
        current = frozenset() if f.kind == "mu" else everything
        while True:
            inner = dict(env)
            inner[f.var] = current
            nxt = ev(f.body, inner)
            if nxt == current:
                return current
            current = nxt
    return ev(phi, env)


def random_model(seed, n_points, edge_density, props):
    """Random model; every edge and valuation bit is an independent coin
    with bias ``edge_density``."""
    if n_points < 1:
        raise ValueError("n_points must be at least 1")
    if not 0.0 <= edge_density <= 1.0:
        raise ValueError("edge_density must lie in [0, 1]")
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n_points) for v in range(n_points)
             if rng.random() < edge_density]
    val = {p: [s for s in range(n_points) if rng.random() < edge_density]
           for p in sorted(props)}
    return KripkeModel(n_points, edges, val, props)


def random_pointed_models(seed, count, props, max_points=6):
    """A reproducible stream of small pointed models with varied density."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, max_points)
        density = rng.choice((0.15, 0.3, 0.5, 0.7))
        m = random_model(rng.getrandbits(32), n, density, props)
        out.append(PointedModel(m, rng.randrange(n)))
    return out


def dump_model(model, initial=0):
    return json.dumps({
        "points": model.n,
        "edges": [list(e) for e in model.edges()],
        "val": {p: sorted(v) for p, v in model.val.items()},
        "initial": initial,
    })


def load_model(text):
    """Read the model JSON format; returns a :class:`PointedModel`."""
    data = json.loads(text)
    model = KripkeModel(data["points"], [tuple(e) for e in data.get("edges", [])],
                        data.get("val", {}))
    return PointedModel(model, data.get("initial", 0))
