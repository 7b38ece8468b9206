import pytest
from hypothesis import given
from hypothesis import strategies as st

from mudis import modal_automaton as ma
from mudis.kripke import KripkeModel, PointedModel, eval_naive, random_pointed_models
from mudis.modal_automaton import BOT, nabla
from mudis.parity_formula import (InvalidFormula, ParityFormula, holds, is_disjunctive,
                                  normalize_for_simulation)
from mudis.simulation import (Context, SimulationBudgetExceeded, accepts, build_simulation,
                              compatible, compose, consistent, delta, demands,
                              local_strategies, locally_compatible, ran, stationary_closure,
                              theta, to_disjunctive_parity_formula, total_strategies,
                              wreath_product)
from mudis.syntax import Lit, parse
from mudis.transforms import to_parity
from strategies import formulas, macrostates, pointed_models

TOP_G = ParityFormula(["top"], [()], {0: 0}, 0)
BOT_G = ParityFormula(["bot"], [()], {0: 0}, 0)
DIA_TOP = ParityFormula(["dia", "top"], [(1,), ()], {0: 0, 1: 0}, 0)


class TestAlgebra:
    def test_compose(self):
        assert compose({("u", 1, "v")}, {("v", 2, "w")}) == {("u", 2, "w")}
        assert compose({("u", 1, "v")}, {("x", 2, "w")}) == frozenset()

    def test_diagonal(self):
        assert delta([]) == frozenset()
        assert delta(["v"]) == {("v", 0, "v")}
        assert ran(delta({1, 2, 3})) == {1, 2, 3}

    @given(macrostates(), macrostates(), macrostates())
    def test_associative(self, a, b, c):
        assert compose(compose(a, b), c) == compose(a, compose(b, c))

    @given(macrostates())
    def test_diagonal_is_identity(self, m):
        d = delta(range(4))
        assert compose(m, d) == m and compose(d, m) == m


class TestCompatibility:
    def test_empty_macrostate(self):
        g = ParityFormula(["bot"], [()], {0: 0}, 0)
        assert compatible(g, ran(frozenset()), {"p"}) and consistent(g, frozenset())

    def test_bottom_in_range(self):
        assert not compatible(BOT_G, ran(delta([0])), set())
        assert not consistent(BOT_G, delta([0]))

    def test_literal(self):
        g = ParityFormula([Lit("p")], [()], {0: 0}, 0)
        assert compatible(g, {0}, {"p"}) and not compatible(g, {0}, set())


class TestStationaryPlays:
    def test_no_boolean_vertices(self):
        ctx = Context(DIA_TOP)
        e_minus, e = stationary_closure(ctx, {})
        assert e_minus == frozenset() and e == delta(range(2))

    def test_single_step(self):
        g = ParityFormula(["or", "top", "top"], [(1, 2), (), ()], {0: 1, 1: 2, 2: 0}, 0)
        e_minus, _ = stationary_closure(Context(g), {0: 1})
        assert (0, 2, 1) in e_minus and (0, 0, 2) not in e_minus

    def test_self_loop(self):
        g = ParityFormula(["or"], [(0,)], {0: 1}, 0)
        e_minus, e = stationary_closure(Context(g), {0: 0})
        assert e_minus == {(0, 1, 0)} and e == {(0, 1, 0), (0, 0, 0)}

    def test_needs_normalised_formula(self):
        with pytest.raises(InvalidFormula):
            Context(ParityFormula(["eps", "top"], [(1,), ()], {}, 0))


class TestLocalCompatibility:
    def test_no_stationary_plays(self):
        ctx = Context(DIA_TOP)
        assert locally_compatible(ctx, delta([0]), set(), {})

    def test_odd_self_loop_is_bad(self):
        g = ParityFormula(["or"], [(0,)], {0: 1}, 0)
        assert not locally_compatible(Context(g), delta([0]), set(), {0: 0})

    def test_even_self_loop_is_fine(self):
        g = ParityFormula(["or"], [(0,)], {0: 2}, 0)
        assert locally_compatible(Context(g), delta([0]), set(), {0: 0})

    def test_colour_clash(self):
        g = ParityFormula(["or", Lit("p"), "top"], [(1, 2), (), ()], {0: 0, 1: 0, 2: 0}, 0)
        ctx = Context(g)
        assert not locally_compatible(ctx, delta([0]), set(), {0: 1})
        assert locally_compatible(ctx, delta([0]), {"p"}, {0: 1})
        assert locally_compatible(ctx, delta([0]), set(), {0: 2})


class TestDemands:
    def test_no_modal_vertices(self):
        assert demands(Context(TOP_G), delta([0])) == (frozenset(), {})

    def test_box(self):
        g = ParityFormula(["box", "top"], [(1,), ()], {0: 0, 1: 3}, 0)
        assert demands(Context(g), delta([0])) == ({(0, 3, 1)}, {})

    def test_diamond(self):
        g = ParityFormula(["dia", "top"], [(1,), ()], {0: 0, 1: 2}, 0)
        assert demands(Context(g), delta([0])) == (frozenset(), {0: {(0, 2, 1)}})


class TestTheta:
    def test_top(self):
        f = theta(Context(TOP_G), delta([0]), set())
        assert f == ma.disj(nabla({frozenset()}), nabla(()))

    def test_bottom(self):
        assert theta(Context(BOT_G), delta([0]), set()) == BOT

    def test_diamond_top(self):
        f = theta(Context(DIA_TOP), delta([0]), set())
        assert f == nabla({frozenset(), frozenset({(0, 0, 1)})})

    def test_literal_mode_is_equivalent(self):
        for text in ["mu x. (p \\/ <>x)", "nu x. ((p \\/ q) /\\ []x)"]:
            g = to_parity(parse(text))
            lit_sim = build_simulation(g, literal=True)
            sim = build_simulation(g)
            for pm in random_pointed_models(4, 40, ["p", "q"]):
                assert accepts(lit_sim, pm) == accepts(sim, pm)


class TestBuild:
    def test_top(self):
        sim = build_simulation(TOP_G)
        assert set(sim.states) == {delta([0]), frozenset()}

    def test_bottom(self):
        sim = build_simulation(BOT_G)
        assert list(sim.states) == [delta([0])]
        for pm in random_pointed_models(1, 30, ["p"]):
            assert not accepts(sim, pm)

    def test_diamond_top(self):
        sim = build_simulation(DIA_TOP)
        assert accepts(sim, PointedModel(KripkeModel(1, [(0, 0)], {}), 0))
        assert not accepts(sim, PointedModel(KripkeModel(1, [], {}), 0))

    def test_budget(self):
        g = to_parity(parse("nu z. mu x. nu y. ((p /\\ <>z) \\/ (q /\\ <>x) \\/ []y)"))
        with pytest.raises(SimulationBudgetExceeded):
            build_simulation(g, max_states=2)

    def test_provenance(self):
        sim = build_simulation(to_parity(parse("mu x. (p \\/ <>x)")))
        assert sim.provenance[sim.initial] is None
        for m in sim.states:
            if m != sim.initial:
                src, colour = sim.provenance[m]
                assert m in ma.states_of(sim.theta(src, colour))

    @given(formulas(depth=3), st.data())
    def test_range_inclusions_and_closure_identity(self, phi, data):
        sim = build_simulation(to_parity(phi))
        ctx = sim.context
        g = ctx.g
        atoms = {v for v in range(g.n) if not g.edges[v]}
        modal = ctx.dias | ctx.boxes
        m = data.draw(st.sampled_from(list(sim.states)))
        for chi in list(total_strategies(ctx))[:16]:
            e_minus, e = stationary_closure(ctx, chi)
            mm = compose(m, e)
            assert ran(m) & atoms <= ran(mm)
            assert ran(m) & modal <= ran(mm)
            assert mm == compose(m, e_minus) | m

    @given(formulas(depth=3))
    def test_local_strategies_cover_total_ones(self, phi):
        ctx = Context(normalize_for_simulation(to_parity(phi)))
        roots = {ctx.g.initial}
        partial = list(local_strategies(ctx, roots))
        for chi in list(total_strategies(ctx))[:32]:
            assert sum(all(chi[v] == w for v, w in p.items()) for p in partial) == 1


class TestEquivalence:
    @given(formulas(depth=3), pointed_models(max_points=3))
    def test_all_routes_agree(self, phi, pm):
        g = to_parity(phi)
        expected = pm.point in eval_naive(phi, pm.model)
        sim = build_simulation(g)
        assert accepts(sim, pm) == expected
        assert ma.accepts(wreath_product(sim), pm) == expected

    def test_top_disjunctive(self):
        d = to_disjunctive_parity_formula(TOP_G)
        assert is_disjunctive(d)
        for pm in random_pointed_models(2, 30, ["p"]):
            assert holds(d, pm)

    def test_unguarded_least_fixpoint(self):
        d = to_disjunctive_parity_formula(to_parity(parse("mu p. (p \\/ q)")))
        assert is_disjunctive(d)
        for pm in random_pointed_models(3, 100, ["q"]):
            assert holds(d, pm) == (pm.point in pm.model.val["q"])

    def test_wreath_bounds(self):
        sim = build_simulation(to_parity(parse("nu x. mu y. ((p /\\ <>x) \\/ <>y)")))
        w = wreath_product(sim)
        assert w.disjunctive
        assert sim.stats["wreath_index"] <= sim.stats["wreath_index_bound"]
        for i, (m, _) in enumerate(w.origin):
            assert m in sim.states
            assert w.transition(i, frozenset()) is not None
