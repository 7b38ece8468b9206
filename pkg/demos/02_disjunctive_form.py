# From an unguarded formula to an equivalent disjunctive parity formula.
from mudis import modal_automaton as ma
from mudis.kripke import eval_naive, random_pointed_models
from mudis.parity_formula import holds, index, is_disjunctive
from mudis.simulation import accepts, build_simulation, wreath_product
from mudis.syntax import parse
from mudis.transforms import from_automaton, to_parity

phi = parse("mu x. (x \\/ (p /\\ <>x))")
g = to_parity(phi)
sim = build_simulation(g)

# macrostates are sets of triples (from, highest priority, to)
print("reachable macrostates:", len(sim.states))
for m in sim.states:
    print("  ", sorted(m))

# one transition: a disjunction of nablas over next macrostates
m0 = sim.initial
for colour in (frozenset(), frozenset({"p"})):
    print("Theta(m_I, %s) = %s" % (sorted(colour), sim.theta(m0, colour)))

# the acceptance condition is turned into a parity condition by a product
# with a deterministic parity automaton for "no bad trace"
wreath = wreath_product(sim)
d = from_automaton(wreath)
print("wreath product: %d states, index %d" % (len(wreath.states), wreath.index()))
print("disjunctive formula: %d vertices, index %d, disjunctive=%s"
      % (d.n, index(d), is_disjunctive(d)))
for key, value in sorted(sim.stats.items()):
    print("  %-20s %s" % (key, value))

# every route agrees with plain fixpoint iteration
models = random_pointed_models(0, 200, ["p"])
agree = sum((pm.point in eval_naive(phi, pm.model))
            == holds(g, pm) == accepts(sim, pm) == ma.accepts(wreath, pm) == holds(d, pm)
            for pm in models)
print("agreement on %d random models: %d" % (len(models), agree))
