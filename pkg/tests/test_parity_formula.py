import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mudis.games import EXISTS, solve_bruteforce
from mudis.kripke import KripkeModel, PointedModel, eval_naive, random_pointed_models
from mudis.parity_formula import (AndLit, InvalidFormula, ParityFormula, evaluation_game,
                                  from_json, guard, guard_report, holds, index,
                                  is_disjunctive, normalize_for_simulation, size, to_dot,
                                  to_json, validate)
from mudis.syntax import Lit, parse
from mudis.transforms import to_parity
from strategies import expand_nabla, formulas, pointed_models, random_disjunctive

q = Lit("q")


def chain():
    return KripkeModel(3, [(0, 1), (1, 2)], {"q": [2]})


def top_vertex():
    return ParityFormula(["top"], [()], {}, 0)


class TestValidate:
    def test_single_top(self):
        assert validate(top_vertex()) == []

    def test_priority_free_cycle(self):
        g = ParityFormula(["eps"], [(0,)], {}, 0)
        assert any("priority-free cycle" in p for p in validate(g))

    def test_out_degree(self):
        g = ParityFormula(["dia", "top", "top"], [(1, 2), (), ()], {}, 0)
        assert any("out-degree" in p for p in validate(g))

    def test_disjunctive_labels(self):
        g = ParityFormula(["nabla", "top", "top", "top"], [(1, 2, 3), (), (), ()], {}, 0,
                          disjunctive=True)
        assert validate(g) == [] and is_disjunctive(g)
        assert not is_disjunctive(to_parity(parse("<>q")))

    def test_json_round_trip(self):
        g = to_parity(parse("mu p. (q \\/ <>p)"))
        back = from_json(to_json(g))
        assert back.labels == g.labels and back.edges == g.edges and back.priority == g.priority
        assert "digraph" in to_dot(g)


class TestIndex:
    def test_empty(self):
        assert index(top_vertex()) == 0

    def test_one_value(self):
        g = ParityFormula(["dia", "dia"], [(1,), (0,)], {0: 1, 1: 1}, 0)
        assert index(g) == 1 and size(g) == 2

    def test_two_values(self):
        g = ParityFormula(["dia", "dia"], [(1,), (0,)], {0: 1, 1: 2}, 0)
        assert index(g) == 2


class TestEvaluation:
    def test_top_holds_everywhere(self):
        m = chain()
        assert all(holds(top_vertex(), PointedModel(m, s)) for s in m.points)

    def test_diamond_needs_successor(self):
        g = ParityFormula(["dia", "top"], [(1,), ()], {}, 0)
        assert not holds(g, PointedModel(KripkeModel(1, [], {}), 0))

    def test_reachability_on_chain(self):
        g = to_parity(parse("mu p. (q \\/ <>p)"))
        assert holds(g, PointedModel(chain(), 0))

    def test_unknown_letter(self):
        g = ParityFormula([Lit("r")], [()], {}, 0)
        with pytest.raises(KeyError):
            evaluation_game(g, chain())

    @given(formulas(depth=3), pointed_models())
    def test_agrees_with_fixpoint_iteration(self, phi, pm):
        expected = pm.point in eval_naive(phi, pm.model)
        assert holds(to_parity(phi), pm) == expected


class TestGuardReport:
    def test_strongly_guarded(self):
        g = ParityFormula(["eps", "dia"], [(1,), (0,)], {0: 1}, 0)
        assert guard_report(g).verdict == "strongly guarded"

    def test_unguarded_self_loop(self):
        g = ParityFormula(["eps"], [(0,)], {0: 1}, 0)
        report = guard_report(g)
        assert report.verdict == "unguarded" and report.witness == (0, 0)

    def test_guarded_not_strongly(self):
        # u -> v by epsilon, v -> diamond -> u
        g = ParityFormula(["eps", "eps", "dia"], [(1,), (2,), (0,)], {0: 1, 1: 2}, 0)
        report = guard_report(g)
        assert report.verdict == "guarded" and report.witness == (0, 1)


class TestNormalize:
    def test_already_normal(self):
        g = normalize_for_simulation(to_parity(parse("mu p. (q \\/ <>p)")))
        assert normalize_for_simulation(g) is g

    def test_epsilon_chain_contracted(self):
        g = ParityFormula(["dia", "eps", "top"], [(1,), (2,), ()], {}, 0)
        h = normalize_for_simulation(g)
        assert h.labels == ("dia", "top") and h.edges == ((1,), ())
        assert h.priority == {0: 0, 1: 0}

    def test_prioritised_epsilon_becomes_unary_or(self):
        g = to_parity(parse("mu p. (q \\/ <>p)"))
        h = normalize_for_simulation(g)
        assert "eps" not in h.labels
        fix = [v for v in range(h.n) if h.labels[v] == "or" and len(h.edges[v]) == 1]
        assert fix and {h.priority[v] for v in fix} == {g.priority[g.initial]}
        for pm in random_pointed_models(5, 100, ["q"]):
            assert holds(g, pm) == holds(h, pm)

    def test_childless_booleans(self):
        g = ParityFormula(["and", "or", "and"], [(), (), (0, 1)], {}, 2)
        h = normalize_for_simulation(g)
        assert set(h.labels) == {"top", "bot", "and"}

    def test_rejects_disjunctive(self):
        with pytest.raises(InvalidFormula):
            normalize_for_simulation(ParityFormula(["top"], [()], {}, 0, disjunctive=True))


class TestGuard:
    def test_strongly_guarded_input_is_kept(self):
        g = ParityFormula(["dia", "eps"], [(1,), (0,)], {1: 2}, 0)
        assert guard(g) is g

    def test_strongly_guarded_input_normalised_cheaply(self):
        g = to_parity(parse("nu p. []p"))
        h = guard(g)
        assert guard_report(h).strongly_guarded
        assert h.n <= g.n + 2 * len(g.priority)

    def test_unguarded_least_fixpoint(self):
        phi = parse("mu p. (p \\/ q)")
        h = guard(to_parity(phi))
        assert guard_report(h).strongly_guarded
        for pm in random_pointed_models(2, 100, ["q"]):
            assert holds(h, pm) == (pm.point in pm.model.val["q"])

    @given(formulas(depth=4))
    def test_bounds(self, phi):
        g = to_parity(phi)
        h = guard(g)
        assert h.n <= 2 ** (1 + len(g.priority)) * g.n
        assert index(h) <= index(g)
        assert guard_report(h).strongly_guarded
        assert validate(h) == []

    @given(formulas(depth=3), pointed_models())
    def test_equivalence_preserved(self, phi, pm):
        g = to_parity(phi)
        expected = holds(g, pm)
        assert holds(normalize_for_simulation(g), pm) == expected
        assert holds(guard(g), pm) == expected


class TestNabla:
    def test_and_literal_dead_end(self):
        g = ParityFormula([AndLit(Lit("q")), "top"], [(1,), ()], {}, 0, disjunctive=True)
        assert holds(g, PointedModel(chain(), 2))
        assert not holds(g, PointedModel(chain(), 0))

    def test_empty_nabla_means_no_successor(self):
        g = ParityFormula(["nabla"], [()], {}, 0, disjunctive=True)
        assert holds(g, PointedModel(chain(), 2))
        assert not holds(g, PointedModel(chain(), 1))

    @given(st.integers(0, 2 ** 32), st.integers(1, 5), pointed_models(max_points=3))
    def test_expansion_and_cover_modes_agree(self, seed, n, pm):
        g = random_disjunctive(random.Random(seed), n)
        expected = holds(expand_nabla(g), pm)
        for mode in ("minimal", "all", "expand"):
            assert holds(g, pm, nabla_mode=mode) == expected

    @given(st.integers(0, 2 ** 32), st.integers(1, 3), pointed_models(max_points=2))
    def test_minimal_covers_by_brute_force(self, seed, n, pm):
        g = random_disjunctive(random.Random(seed), n)
        root = (g.initial, pm.point)
        winners = []
        for mode in ("minimal", "all"):
            arena, idx = evaluation_game(g, pm.model, [root], nabla_mode=mode)
            if len(arena) > 12:
                return
            winners.append(solve_bruteforce(arena).winner(idx[root]))
        assert winners[0] == winners[1]
        assert (winners[0] == EXISTS) == holds(g, pm)
