"""Finite parity games with max-parity winning condition.

Player 0 is the existential player (wins plays whose highest priority seen
infinitely often is even), player 1 the universal one.  A player who has to
move from a position without moves loses.
"""

import itertools
from dataclasses import dataclass, field

from .graphs import reachable, tarjan_scc

__all__ = ["EXISTS", "FORALL", "ParityGameArena", "ArenaBuilder", "Solution",
           "solve_zielonka", "solve_bruteforce", "winner_from",
           "verify_strategy", "random_arena", "to_dot", "ArenaTooLarge"]

EXISTS = 0
FORALL = 1


class ArenaTooLarge(ValueError):
    pass


class ParityGameArena:
    def __init__(self, owner, moves, priority, keys=None):
        n = len(owner)
        if len(moves) != n or len(priority) != n:
            raise ValueError("owner, moves and priority must have equal length")
        self.owner = tuple(owner)
        self.moves = tuple(tuple(m) for m in moves)
        self.priority = tuple(priority)
        self.keys = tuple(keys) if keys is not None else tuple(range(n))
        for v, ms in enumerate(self.moves):
            if self.owner[v] not in (EXISTS, FORALL):
                raise ValueError("position %d has no valid owner" % v)
            if self.priority[v] < 0:
                raise ValueError("negative priority at %d" % v)
            for w in ms:
                if not 0 <= w < n:
                    raise ValueError("move %d -> %r out of range" % (v, w))
        self._preds = None

    def __len__(self):
        return len(self.owner)

    @property
    def preds(self):
        if self._preds is None:
            preds = [[] for _ in self.owner]
            for v, ms in enumerate(self.moves):
                for w in ms:
                    preds[w].append(v)
            self._preds = preds
        return self._preds


class ArenaBuilder:
    """Explores a game graph from a root key.

    ``expand(key)`` returns ``(owner, priority, successor_keys)``.
    """

    def __init__(self, expand, max_positions=None):
        self.expand = expand
        self.max_positions = max_positions

    def build(self, roots):
        index = {}
        keys = []
        owner, priority, moves = [], [], []

        def intern(k):
            i = index.get(k)
            if i is None:
                i = index[k] = len(keys)
                keys.append(k)
                owner.append(None)
                priority.append(0)
                moves.append(None)
                if self.max_positions is not None and len(keys) > self.max_positions:
                    raise ArenaTooLarge("arena exceeds %d positions" % self.max_positions)
            return i

        todo = [intern(r) for r in roots]
        while todo:
            i = todo.pop()
            if moves[i] is not None:
                continue
            o, p, succ = self.expand(keys[i])
            owner[i] = o
            priority[i] = p
            targets = []
            for k in succ:
                fresh = k not in index
                j = intern(k)
                targets.append(j)
                if fresh:
                    todo.append(j)
            moves[i] = targets
        return ParityGameArena(owner, moves, priority, keys), index


@dataclass
class Solution:
    win: tuple                 # (winning set of player 0, winning set of player 1)
    strategy: tuple = field(default_factory=lambda: ({}, {}))

    def winner(self, v):
        return EXISTS if v in self.win[EXISTS] else FORALL


def _attractor(arena, region, target, player):
    attr = set(target)
    strategy = {}
    count = {}
    queue = list(attr)
    preds = arena.preds
    while queue:
        v = queue.pop()
        for u in preds[v]:
            if u not in region or u in attr:
                continue
            if arena.owner[u] == player:
                attr.add(u)
                strategy[u] = v
                queue.append(u)
            else:
                c = count.get(u)
                if c is None:
                    c = sum(1 for w in arena.moves[u] if w in region)
                c -= 1
                count[u] = c
                if c == 0:
                    attr.add(u)
                    queue.append(u)
    return attr, strategy


def _zielonka(arena, region):
    if not region:
        return (set(), set()), ({}, {})
    d = max(arena.priority[v] for v in region)
    i = d % 2
    top = {v for v in region if arena.priority[v] == d}
    a, sa = _attractor(arena, region, top, i)
    (w0, w1), (s0, s1) = _zielonka(arena, region - a)
    sub_win = (w0, w1)
    sub_strat = (s0, s1)
    if not sub_win[1 - i]:
        strat_i = dict(sub_strat[i])
        strat_i.update(sa)
        for v in top:
            if arena.owner[v] == i:
                strat_i[v] = next(w for w in arena.moves[v] if w in region)
        win = [None, None]
        strat = [None, None]
        win[i], win[1 - i] = set(region), set()
        strat[i], strat[1 - i] = strat_i, {}
        return tuple(win), tuple(strat)
    b, sb = _attractor(arena, region, sub_win[1 - i], 1 - i)
    (x0, x1), (t0, t1) = _zielonka(arena, region - b)
    rest_win = (x0, x1)
    rest_strat = (t0, t1)
    strat_o = dict(rest_strat[1 - i])
    strat_o.update(sub_strat[1 - i])
    strat_o.update(sb)
    win = [None, None]
    strat = [None, None]
    win[1 - i] = rest_win[1 - i] | b
    win[i] = rest_win[i]
    strat[1 - i] = strat_o
    strat[i] = dict(rest_strat[i])
    return tuple(win), tuple(strat)


def _totalise(arena):
    """Add two sinks so every position has a move; dead ends lose."""
    n = len(arena)
    sink_e, sink_a = n, n + 1     # won by player 0, resp. player 1
    owner = list(arena.owner) + [EXISTS, EXISTS]
    priority = list(arena.priority) + [0, 1]
    moves = [list(m) for m in arena.moves] + [[sink_e], [sink_a]]
    for v in range(n):
        if not moves[v]:
            moves[v] = [sink_a] if arena.owner[v] == EXISTS else [sink_e]
    return ParityGameArena(owner, moves, priority)


def solve_zielonka(arena):
    """Solve ``arena`` with Zielonka's recursive algorithm."""
    n = len(arena)
    total = _totalise(arena)
    (w0, w1), (s0, s1) = _zielonka(total, set(range(n + 2)))
    w0 = {v for v in w0 if v < n}
    w1 = {v for v in w1 if v < n}
    s0 = {v: w for v, w in s0.items() if v < n and arena.moves[v] and w < n}
    s1 = {v: w for v, w in s1.items() if v < n and arena.moves[v] and w < n}
    return Solution((frozenset(w0), frozenset(w1)), (s0, s1))


def winner_from(arena, position, solution=None):
    solution = solution or solve_zielonka(arena)
    return solution.winner(position)


# --------------------------------------------------------------------------
# brute force oracle

def _opponent_wins(arena, player, choice, region=None):
    """Positions from which the opponent of ``player`` wins when ``player``
    is fixed to the positional ``choice``; the opponent then faces a
    one-player graph."""
    n = len(arena)
    nodes = range(n) if region is None else region
    succ = {}
    losing = set()        # positions where the opponent wins on the spot
    for v in nodes:
        if arena.owner[v] == player:
            if not arena.moves[v]:
                losing.add(v)
                succ[v] = ()
            else:
                succ[v] = (choice[v],)
        else:
            succ[v] = arena.moves[v]
    opp_parity = 1 - player
    for d in sorted({arena.priority[v] for v in nodes}):
        if d % 2 != opp_parity:
            continue
        sub = {v: [w for w in succ[v] if arena.priority[w] <= d]
               for v in nodes if arena.priority[v] <= d}
        for comp in tarjan_scc(0, sub, list(sub)):
            if any(arena.priority[v] == d for v in comp) and (
                    len(comp) > 1 or comp[0] in sub[comp[0]]):
                losing.update(comp)
    pred = {v: [] for v in nodes}
    for v in nodes:
        for w in succ[v]:
            pred[w].append(v)
    return reachable(losing, pred)


def _strategy_space(arena, player):
    mine = [v for v in range(len(arena)) if arena.owner[v] == player and arena.moves[v]]
    for combo in itertools.product(*(arena.moves[v] for v in mine)):
        yield dict(zip(mine, combo))


def solve_bruteforce(arena, limit=12):
    """Solve by enumerating positional strategies of each player and
    computing the opponent's best response on the induced one-player game."""
    if len(arena) > limit:
        raise ArenaTooLarge("brute force limited to %d positions" % limit)
    n = len(arena)
    all_pos = set(range(n))
    win = [None, None]
    strat = [None, None]
    for player in (EXISTS, FORALL):
        best, best_choice = set(), {}
        union = set()
        candidates = []
        for choice in _strategy_space(arena, player):
            won = all_pos - _opponent_wins(arena, player, choice)
            union |= won
            candidates.append((won, choice))
            if len(won) > len(best):
                best, best_choice = won, choice
        for won, choice in candidates:
            if won == union:
                best, best_choice = won, choice
                break
        win[player] = frozenset(union)
        strat[player] = {v: w for v, w in best_choice.items() if v in union}
    if win[0] & win[1] or (win[0] | win[1]) != all_pos:
        raise AssertionError("brute force found an undetermined arena")
    return Solution(tuple(win), tuple(strat))


def verify_strategy(arena, player, region, strategy):
    """Replay ``strategy`` on ``region`` against every opponent behaviour.

    Returns True if every play from ``region`` consistent with the strategy
    is won by ``player``.
    """
    region = set(region)
    for v in region:
        if arena.owner[v] == player and arena.moves[v]:
            if strategy.get(v) not in region or strategy[v] not in arena.moves[v]:
                return False
        elif arena.owner[v] != player:
            if any(w not in region for w in arena.moves[v]):
                return False
    choice = {v: strategy[v] for v in region
              if arena.owner[v] == player and arena.moves[v]}
    return not _opponent_wins(arena, player, choice, region)


def random_arena(rng, n, max_priority=5, max_out=3, dead_end_rate=0.1):
    owner = [rng.randrange(2) for _ in range(n)]
    priority = [rng.randint(0, max_priority) for _ in range(n)]
    moves = []
    for _ in range(n):
        if rng.random() < dead_end_rate:
            moves.append([])
        else:
            k = rng.randint(1, max_out)
            moves.append(sorted(set(rng.randrange(n) for _ in range(k))))
    return ParityGameArena(owner, moves, priority)


def to_dot(arena, name="arena"):
    lines = ["digraph %s {" % name]
    for v in range(len(arena)):
        shape = "circle" if arena.owner[v] == EXISTS else "box"
        label = "%s\\n%d" % (str(arena.keys[v]).replace('"', "'"), arena.priority[v])
        lines.append('  %d [shape=%s, label="%s"];' % (v, shape, label))
        for w in arena.moves[v]:
            lines.append("  %d -> %d;" % (v, w))
    lines.append("}")
    return "\n".join(lines)
