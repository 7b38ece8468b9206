# Formulas, their closure, parity formulas and the evaluation game.
from mudis.kripke import KripkeModel, PointedModel, eval_naive
from mudis.parity_formula import guard, guard_report, holds, index
from mudis.syntax import alternation_depth, closure, parse, size
from mudis.transforms import from_parity, to_parity

# "some path reaches a q-point", written with a least fixpoint
phi = parse("mu x. (q \\/ <>x)")
print("formula      :", phi)
print("closure      :", [str(f) for f in closure(phi)])
print("size, depth  :", size(phi), alternation_depth(phi))

# the parity formula lives on the closure; the binder carries an odd priority
g = to_parity(phi)
for v in range(g.n):
    print("  vertex %d %-28s %-4s -> %s  priority %s"
          % (v, g.names[v], g.labels[v], g.edges[v], g.priority.get(v, "-")))
print("index        :", index(g))

# a three point chain 0 -> 1 -> 2 with q true at the end
model = KripkeModel(3, [(0, 1), (1, 2)], {"q": [2]})
print("fixpoint iteration :", sorted(eval_naive(phi, model)))
print("evaluation game    :", [s for s in model.points if holds(g, PointedModel(model, s))])

# back to ordinary syntax
print("read back    :", from_parity(g))

# an unguarded formula: the variable recurs without passing a modality
psi = parse("nu z. mu x. (x \\/ (p /\\ <>z))")
h = to_parity(psi)
print(guard_report(h).verdict, "->", guard_report(guard(h)).verdict,
      "(%d -> %d vertices)" % (h.n, guard(h).n))
