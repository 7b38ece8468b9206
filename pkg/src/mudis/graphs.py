"""Small graph helpers shared by the formula, game and automaton code."""

__all__ = ["tarjan_scc", "reachable", "has_cycle_with_max", "nontrivial"]


def tarjan_scc(n, succ, nodes=None):
    """Strongly connected components of the graph ``0..n-1`` (or ``nodes``)
    with adjacency ``succ`` (a sequence or mapping of iterables).

    Components come out in reverse topological order (sinks first).
    """
    if nodes is None:
        nodes = range(n)
    index = {}
    low = {}
    on_stack = set()
    stack = []
    comps = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def nontrivial(comp, succ):
    """True if ``comp`` contains a cycle (size > 1 or a self-loop)."""
    return len(comp) > 1 or comp[0] in succ[comp[0]]


def reachable(sources, succ):
    seen = set(sources)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for w in succ[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def has_cycle_with_max(nodes, edges, want_odd):
    """Decide whether the edge-labelled graph has a cycle whose largest
    label has the requested parity.

    ``nodes`` is an iterable of hashable nodes, ``edges`` a list of
    ``(u, label, v)`` triples.  Returns a node on such a cycle or ``None``.
    """
    nodes = list(nodes)
    labels = sorted({k for _, k, _ in edges if (k % 2 == 1) == want_odd}, reverse=True)
    for d in labels:
        succ = {v: [] for v in nodes}
        for u, k, v in edges:
            if k <= d:
                succ[u].append(v)
        comps = tarjan_scc(0, succ, nodes)
        comp_of = {}
        for ci, comp in enumerate(comps):
            for v in comp:
                comp_of[v] = ci
        for u, k, v in edges:
            if k == d and comp_of[u] == comp_of[v]:
                return u
    return None
