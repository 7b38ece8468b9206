import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mudis.games import (EXISTS, FORALL, ArenaTooLarge, ParityGameArena, random_arena,
                         solve_bruteforce, solve_zielonka, to_dot, verify_strategy, winner_from)
from mudis.graphs import has_cycle_with_max, reachable, tarjan_scc


def single(owner, moves, priority):
    return ParityGameArena([owner], [moves], [priority])


@pytest.mark.parametrize("solve", [solve_zielonka, solve_bruteforce])
class TestTinyArenas:
    def test_even_self_loop(self, solve):
        assert solve(single(EXISTS, [0], 2)).winner(0) == EXISTS

    def test_odd_self_loop(self, solve):
        assert solve(single(EXISTS, [0], 1)).winner(0) == FORALL

    def test_stuck_universal_player_loses(self, solve):
        assert solve(single(FORALL, [], 0)).winner(0) == EXISTS

    def test_stuck_existential_player_loses(self, solve):
        assert solve(single(EXISTS, [], 4)).winner(0) == FORALL


def test_winner_from_projection():
    arena = ParityGameArena([EXISTS, FORALL], [[1], [0]], [1, 2])
    assert winner_from(arena, 0) == EXISTS


def test_brute_force_size_limit():
    arena = random_arena(random.Random(0), 13)
    with pytest.raises(ArenaTooLarge):
        solve_bruteforce(arena)


def test_invalid_arena():
    with pytest.raises(ValueError):
        ParityGameArena([EXISTS], [[3]], [0])
    with pytest.raises(ValueError):
        ParityGameArena([7], [[0]], [0])


def test_dot_export():
    text = to_dot(ParityGameArena([EXISTS, FORALL], [[1], []], [0, 3]))
    assert text.startswith("digraph") and "0 -> 1" in text


@st.composite
def arenas(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2 ** 32))
    return random_arena(random.Random(seed), n)


@given(arenas())
def test_zielonka_matches_brute_force(arena):
    z, b = solve_zielonka(arena), solve_bruteforce(arena)
    assert z.win[EXISTS] == b.win[EXISTS]
    assert z.win[FORALL] == b.win[FORALL]


@given(arenas(max_n=10))
def test_determinacy_and_strategies(arena):
    sol = solve_zielonka(arena)
    assert not (sol.win[EXISTS] & sol.win[FORALL])
    assert sol.win[EXISTS] | sol.win[FORALL] == set(range(len(arena)))
    for player in (EXISTS, FORALL):
        assert verify_strategy(arena, player, sol.win[player], sol.strategy[player])


def test_verify_strategy_rejects_bad_strategy():
    # existential player must move 0 -> 1 (even loop); 0 -> 2 runs into an odd loop
    arena = ParityGameArena([EXISTS, EXISTS, EXISTS], [[1, 2], [1], [2]], [0, 2, 1])
    assert verify_strategy(arena, EXISTS, {0, 1}, {0: 1, 1: 1})
    assert not verify_strategy(arena, EXISTS, {0, 1, 2}, {0: 2, 1: 1, 2: 2})


def nx_cycle_with_max(nodes, edges, want_odd):
    """Oracle: for every label d of the wanted parity, look for a cycle
    through a d-edge using edges of label at most d."""
    for d in {k for _, k, _ in edges if (k % 2 == 1) == want_odd}:
        g = nx.DiGraph()
        g.add_nodes_from(nodes)
        g.add_edges_from((u, v) for u, k, v in edges if k <= d)
        for u, k, v in edges:
            if k == d and (u == v or nx.has_path(g, v, u)):
                return True
    return False


@given(st.integers(1, 7).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, 5),
                                   st.integers(0, n - 1)), max_size=14))),
       st.booleans())
def test_cycle_search_matches_networkx(graph, want_odd):
    n, edges = graph
    found = has_cycle_with_max(range(n), edges, want_odd)
    assert (found is not None) == nx_cycle_with_max(range(n), edges, want_odd)


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=20))))
def test_scc_matches_networkx(graph):
    n, pairs = graph
    succ = {v: [w for u, w in pairs if u == v] for v in range(n)}
    ours = {frozenset(c) for c in tarjan_scc(0, succ, list(range(n)))}
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    g.add_edges_from(pairs)
    assert ours == {frozenset(c) for c in nx.strongly_connected_components(g)}
    assert reachable([0], succ) == nx.descendants(g, 0) | {0}
