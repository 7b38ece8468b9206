"""Modal mu-calculus formulas in negation normal form.

Concrete grammar (loosest binding first)::

    formula ::= ('mu' | 'nu') ident '.' formula
              | disj
    disj    ::= conj ('\\/' conj)*
    conj    ::= unary ('/\\' unary)*
    unary   ::= '~' unary | '<>' unary | '[]' unary | atom
    atom    ::= 'tt' | 'ff' | ident | '(' formula ')' | binder

Binders extend as far to the right as possible.  General negation is
accepted by the parser and pushed down to literals.
"""

import re
from collections import deque

__all__ = [
    "Formula", "Top", "Bot", "Lit", "And", "Or", "Dia", "Box", "Fix",
    "TOP", "BOT", "ParseError", "PositivityError",
    "parse", "to_text", "negate", "substitute", "free_names", "bound_names",
    "closure", "size", "alternation_depth", "closure_graph",
    "fixpoint_levels", "propositions", "subformula_occurrences",
]


class Formula:
    __slots__ = ("_hash",)
    _fields = ()

    def _key(self):
        return tuple(getattr(self, f) for f in self._fields)

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or hash(self) != hash(other):
            return False
        return self._key() == other._key()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return self._hash

    def children(self):
        return ()

    def __repr__(self):
        return "%s(%s)" % (type(self).__name__,
                           ", ".join(repr(v) for v in self._key()))

    def __str__(self):
        return to_text(self)


class Top(Formula):
    __slots__ = ()

    def __init__(self):
        self._hash = hash("tt")


class Bot(Formula):
    __slots__ = ()

    def __init__(self):
        self._hash = hash("ff")


TOP = Top()
BOT = Bot()


class Lit(Formula):
    """A proposition letter or fixpoint variable, possibly negated."""

    __slots__ = ("name", "positive")
    _fields = ("name", "positive")

    def __init__(self, name, positive=True):
        self.name = name
        self.positive = bool(positive)
        self._hash = hash(("lit", name, self.positive))

    def negated(self):
        return Lit(self.name, not self.positive)


class _Binary(Formula):
    __slots__ = ("left", "right")
    _fields = ("left", "right")
    _tag = ""

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self._hash = hash((self._tag, left._hash, right._hash))

    def children(self):
        return (self.left, self.right)


class And(_Binary):
    __slots__ = ()
    _tag = "and"


class Or(_Binary):
    __slots__ = ()
    _tag = "or"


class _Modal(Formula):
    __slots__ = ("arg",)
    _fields = ("arg",)
    _tag = ""

    def __init__(self, arg):
        self.arg = arg
        self._hash = hash((self._tag, arg._hash))

    def children(self):
        return (self.arg,)


class Dia(_Modal):
    __slots__ = ()
    _tag = "dia"


class Box(_Modal):
    __slots__ = ()
    _tag = "box"


class Fix(Formula):
    """``mu var. body`` (kind ``'mu'``) or ``nu var. body`` (kind ``'nu'``)."""

    __slots__ = ("kind", "var", "body")
    _fields = ("kind", "var", "body")

    def __init__(self, kind, var, body):
        if kind not in ("mu", "nu"):
            raise ValueError("fixpoint kind must be 'mu' or 'nu', got %r" % kind)
        self.kind = kind
        self.var = var
        self.body = body
        self._hash = hash((kind, var, body._hash))

    def children(self):
        return (self.body,)

    def unfold(self):
        return substitute(self.body, self.var, self)


class ParseError(ValueError):
    def __init__(self, message, position):
        super().__init__("%s at position %d" % (message, position))
        self.position = position


class PositivityError(ValueError):
    pass


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(<>)|(\[\])|(\\/)|(/\\)|([~().])|([a-z][a-z0-9_]*)|(\S))")
_KEYWORDS = {"mu", "nu", "tt", "ff"}
_END = "$"


def _tokenize(text):
    tokens = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.lastindex is None:
            break
        tok = m.group(m.lastindex)
        start = m.start(m.lastindex)
        if m.lastindex == 7:
            raise ParseError("unexpected character %r" % tok, start)
        tokens.append((tok, start))
        pos = m.end()
    tokens.append((_END, len(text)))
    return tokens


def _show_token(tok):
    return "end of input" if tok == _END else repr(tok)


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def pos(self):
        return self.tokens[self.i][1]

    def take(self, expected=None):
        tok, pos = self.tokens[self.i]
        if expected is not None and tok != expected:
            raise ParseError("expected %r, found %s" % (expected, _show_token(tok)), pos)
        self.i += 1
        return tok

    def formula(self):
        if self.peek() in ("mu", "nu"):
            return self.binder()
        return self.disj()

    def binder(self):
        kind = self.take()
        name, pos = self.tokens[self.i]
        if not re.fullmatch(r"[a-z][a-z0-9_]*", name) or name in _KEYWORDS:
            raise ParseError("expected variable name, found %s" % _show_token(name), pos)
        self.i += 1
        self.take(".")
        return _Pre("fix", kind, name, self.formula())

    def disj(self):
        left = self.conj()
        while self.peek() == "\\/":
            self.take()
            left = _Pre("or", left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.peek() == "/\\":
            self.take()
            left = _Pre("and", left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok == "~":
            self.take()
            return _Pre("not", self.unary())
        if tok == "<>":
            self.take()
            return _Pre("dia", self.unary())
        if tok == "[]":
            self.take()
            return _Pre("box", self.unary())
        return self.atom()

    def atom(self):
        tok, pos = self.tokens[self.i]
        if tok == "(":
            self.take()
            inner = self.formula()
            self.take(")")
            return inner
        if tok in ("mu", "nu"):
            return self.binder()
        if tok == "tt":
            self.take()
            return _Pre("tt")
        if tok == "ff":
            self.take()
            return _Pre("ff")
        if re.fullmatch(r"[a-z][a-z0-9_]*", tok):
            self.take()
            return _Pre("id", tok)
        raise ParseError("unexpected %s" % _show_token(tok), pos)


class _Pre:
    """Parse tree node before negation is pushed inwards."""

    __slots__ = ("op", "args")

    def __init__(self, op, *args):
        self.op = op
        self.args = args


def _to_nnf(node, negate_, keep):
    # keep: variables bound by a dualised binder; their occurrences keep polarity
    op, a = node.op, node.args
    if op == "not":
        return _to_nnf(a[0], not negate_, keep)
    if op == "tt":
        return BOT if negate_ else TOP
    if op == "ff":
        return TOP if negate_ else BOT
    if op == "id":
        name = a[0]
        positive = True if name in keep else not negate_
        return Lit(name, positive)
    if op in ("and", "or"):
        left = _to_nnf(a[0], negate_, keep)
        right = _to_nnf(a[1], negate_, keep)
        if (op == "and") != negate_:
            return And(left, right)
        return Or(left, right)
    if op in ("dia", "box"):
        arg = _to_nnf(a[0], negate_, keep)
        return Dia(arg) if (op == "dia") != negate_ else Box(arg)
    if op == "fix":
        kind, var, body = a
        if negate_:
            kind = "nu" if kind == "mu" else "mu"
            return Fix(kind, var, _to_nnf(body, True, keep | {var}))
        return Fix(kind, var, _to_nnf(body, False, keep - {var}))
    raise AssertionError(op)


def parse(text):
    """Parse ``text`` into an NNF formula.

    Raises :class:`ParseError` on malformed input and
    :class:`PositivityError` if a bound variable ends up negated.
    """
    p = _Parser(text)
    tree = p.formula()
    if p.peek() != _END:
        raise ParseError("trailing input %r" % p.peek(), p.pos())
    phi = _to_nnf(tree, False, frozenset())
    check_positive(phi)
    return phi


def check_positive(phi):
    def walk(f, bound):
        if isinstance(f, Lit):
            if not f.positive and f.name in bound:
                raise PositivityError(
                    "variable %r occurs negatively under its binder" % f.name)
        elif isinstance(f, Fix):
            walk(f.body, bound | {f.var})
        else:
            for c in f.children():
                walk(c, bound)
    walk(phi, frozenset())


def negate(phi):
    """Dual of ``phi``: negation pushed to the literals."""
    def neg(f, keep):
        if isinstance(f, Top):
            return BOT
        if isinstance(f, Bot):
            return TOP
        if isinstance(f, Lit):
            return f if f.name in keep else f.negated()
        if isinstance(f, And):
            return Or(neg(f.left, keep), neg(f.right, keep))
        if isinstance(f, Or):
            return And(neg(f.left, keep), neg(f.right, keep))
        if isinstance(f, Dia):
            return Box(neg(f.arg, keep))
        if isinstance(f, Box):
            return Dia(neg(f.arg, keep))
        kind = "nu" if f.kind == "mu" else "mu"
        return Fix(kind, f.var, neg(f.body, keep | {f.var}))
    return neg(phi, frozenset())


# --------------------------------------------------------------------------
# printing

def to_text(phi):
    """Render ``phi`` in the parser's grammar; ``parse(to_text(f)) == f``."""
    return _show(phi, top=True)


def _show(f, top=False):
    if isinstance(f, Top):
        return "tt"
    if isinstance(f, Bot):
        return "ff"
    if isinstance(f, Lit):
        return f.name if f.positive else "~" + f.name
    if isinstance(f, And):
        s = "%s /\\ %s" % (_show(f.left), _show(f.right))
    elif isinstance(f, Or):
        s = "%s \\/ %s" % (_show(f.left), _show(f.right))
    elif isinstance(f, Dia):
        return "<>" + _show(f.arg)
    elif isinstance(f, Box):
        return "[]" + _show(f.arg)
    else:
        s = "%s %s. %s" % (f.kind, f.var, _show(f.body, top=True))
    return s if top else "(" + s + ")"


# --------------------------------------------------------------------------
# variables and substitution

def free_names(phi):
    """Names occurring free in ``phi`` (proposition letters and open variables)."""
    memo = {}

    def walk(f):
        r = memo.get(id(f))
        if r is not None:
            return r
        if isinstance(f, Lit):
            r = frozenset([f.name])
        elif isinstance(f, Fix):
            r = walk(f.body) - {f.var}
        else:
            r = frozenset()
            for c in f.children():
                r = r | walk(c)
        memo[id(f)] = r
        return r
    return walk(phi)


def bound_names(phi):
    out = set()
    stack = [phi]
    seen = set()
    while stack:
        f = stack.pop()
        if id(f) in seen:
            continue
        seen.add(id(f))
        if isinstance(f, Fix):
            out.add(f.var)
        stack.extend(f.children())
    return out


def propositions(phi):
    """Proposition letters of a closed formula, sorted."""
    return tuple(sorted(free_names(phi)))


def _fresh(base, avoid):
    name = base
    while name in avoid:
        name += "_"
    return name


def substitute(phi, var, psi):
    """Capture-avoiding ``phi[psi/var]``; only positive occurrences of a
    variable are ever substituted (negated occurrences are proposition
    literals by positivity)."""
    psi_free = free_names(psi)
    memo = {}

    def sub(f):
        key = id(f)
        if key in memo:
            return memo[key]
        if isinstance(f, Lit):
            r = psi if (f.name == var and f.positive) else f
        elif isinstance(f, (Top, Bot)):
            r = f
        elif isinstance(f, Fix):
            if f.var == var or var not in free_names(f):
                r = f
            elif f.var in psi_free:
                new = _fresh(f.var, psi_free | free_names(f.body) | {var})
                body = substitute(f.body, f.var, Lit(new))
                r = Fix(f.kind, new, sub(body))
            else:
                body = sub(f.body)
                r = f if body is f.body else Fix(f.kind, f.var, body)
        elif isinstance(f, _Binary):
            left, right = sub(f.left), sub(f.right)
            r = f if (left is f.left and right is f.right) else type(f)(left, right)
        else:
            arg = sub(f.arg)
            r = f if arg is f.arg else type(f)(arg)
        memo[key] = r
        return r
    return sub(phi)


def subformula_occurrences(phi):
    """Number of nodes of the syntax tree of ``phi``."""
    memo = {}

    def count(f):
        if id(f) not in memo:
            memo[id(f)] = 1 + sum(count(c) for c in f.children())
        return memo[id(f)]
    return count(phi)


# --------------------------------------------------------------------------
# Fischer-Ladner closure

def _closure_successors(f):
    if isinstance(f, Fix):
        return (f.unfold(),)
    return f.children()


def closure(phi):
    """Fischer-Ladner closure of ``phi`` as a list in discovery order
    (``phi`` first).  Members are compared structurally."""
    order = [phi]
    seen = {phi}
    queue = deque([phi])
    while queue:
        f = queue.popleft()
        for g in _closure_successors(f):
            if g not in seen:
                seen.add(g)
                order.append(g)
                queue.append(g)
    return order


def size(phi):
    return len(closure(phi))


def closure_graph(phi):
    """Closure members together with their successor lists (as indices)."""
    members = closure(phi)
    index = {f: i for i, f in enumerate(members)}
    succ = [[index[g] for g in _closure_successors(f)] for f in members]
    return members, succ


def _is_proper_subterm(small, big):
    stack = list(big.children())
    seen = set()
    while stack:
        f = stack.pop()
        if f == small:
            return True
        if id(f) in seen:
            continue
        seen.add(id(f))
        stack.extend(f.children())
    return False


def fixpoint_levels(members, succ):
    """Dominance levels of the fixpoint formulas of a closure graph.

    Returns ``(sccs, scc_of, level)`` where ``level`` maps the index of
    every fixpoint member lying on a cycle to its level within its strongly
    connected component.  A fixpoint formula that is a proper subterm of
    another one in the same component dominates it; levels increase along
    dominance and strictly so when the fixpoint kind flips.
    """
    from .graphs import tarjan_scc

    sccs = tarjan_scc(len(members), succ)
    scc_of = {}
    for ci, comp in enumerate(sccs):
        for v in comp:
            scc_of[v] = ci
    level = {}
    for comp in sccs:
        fix = [v for v in comp if isinstance(members[v], Fix)]
        if len(comp) == 1 and comp[0] not in succ[comp[0]]:
            continue
        # below[x] = fixpoints in this component dominated by x
        below = {x: [y for y in fix if y != x and _is_proper_subterm(members[x], members[y])]
                 for x in fix}
        # dominated formulas are strictly bigger, so sort by size ascending is
        # a reverse topological order of dominance
        by_size = sorted(fix, key=lambda v: -subformula_occurrences(members[v]))
        for x in by_size:
            lv = 1
            for y in below[x]:
                same = members[y].kind == members[x].kind
                lv = max(lv, level[y] if same else level[y] + 1)
            level[x] = lv
    return sccs, scc_of, level


def component_tops(members, succ):
    """Per cyclic component: (max level, kinds attaining it)."""
    sccs, scc_of, level = fixpoint_levels(members, succ)
    tops = {}
    for v, lv in level.items():
        ci = scc_of[v]
        best, kinds = tops.get(ci, (0, set()))
        if lv > best:
            tops[ci] = (lv, {members[v].kind})
        elif lv == best:
            kinds.add(members[v].kind)
    return tops, scc_of, level


def hierarchy_levels(members, succ):
    """Least ``n`` with the formula in Sigma_n, resp. Pi_n."""
    tops, _, _ = component_tops(members, succ)
    sigma = pi = 0
    for lv, kinds in tops.values():
        sigma = max(sigma, lv if kinds == {"mu"} else lv + 1)
        pi = max(pi, lv if kinds == {"nu"} else lv + 1)
    return sigma, pi


def alternation_depth(phi):
    """Alternation depth as the level of ``phi`` in the fixpoint hierarchy:
    the least ``n`` such that ``phi`` belongs to Sigma_n or Pi_n.

    ``q`` has depth 0, ``mu p. q \\/ <>p`` depth 1, and a greatest fixpoint
    whose variable occurs inside a least fixpoint depth 2.  Independent
    least and greatest fixpoints side by side also give depth 2.
    """
    members, succ = closure_graph(phi)
    return min(hierarchy_levels(members, succ))
