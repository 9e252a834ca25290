"""Deterministic static oracle: the transition sequence that rebuilds a gold passage.

Each gold unit is created by NODE from its *creator*, the non-implicit
primary child whose yield starts leftmost (for a pre-terminal, its first
terminal).  Every other gold edge is added by an edge transition once both
ends sit at s0/s1; SWAP brings deeper stack items up.  Rules, first match
wins:

1. FINISH once every gold unit and edge exists and FINISH is legal.
2. Unattached terminal at s0: NODE(T) if it starts its pre-terminal, else
   RIGHT-EDGE(T) when the pre-terminal is s1, else SWAP.
3. A missing gold edge between s0 and s1 (primary first, then by category).
4. NODE(X) when s0 creates its gold parent.
5. IMPLICIT(X) for a missing implicit child of s0.
6. REDUCE when every gold edge touching s0 exists.
7. SWAP when s0 still needs an edge with an item deeper in the stack.
8. SHIFT, or SWAP when the buffer is empty.
"""

from collections import defaultdict

from ..core import Category, category_key, yield_of
from ..errors import OracleFailure
from .transitions import (FINISH, IMPLICIT, LEFT_EDGE, LEFT_REMOTE, NODE, REDUCE, RIGHT_EDGE, RIGHT_REMOTE,
                          SHIFT, SWAP, TERMINAL, Transition, TransitionState)


class _Gold:
    def __init__(self, g):
        self.g = g
        self.creator = {}       # gold unit -> (creator gold node, category)
        self.created_by = {}    # gold node -> list of (gold unit, category) it creates
        for u in g.units:
            if u.implicit:
                continue
            if u.terminals:
                self.creator[u.unit_id] = ("0.%d" % min(u.terminals), Category.T)
                continue
            kids = [e for e in g.outgoing(u.unit_id, remote=False) if not g.unit(e.child).implicit]
            first = min(kids, key=lambda e: (min(yield_of(g, e.child)), sorted(yield_of(g, e.child)),
                                             category_key(e.category)))
            self.creator[u.unit_id] = (first.child, first.category)
        for uid, (child, cat) in self.creator.items():
            self.created_by[child] = (uid, cat)
        # edges still to be created by edge transitions, per gold node
        self.edges = []
        for e in g.edges:
            if g.unit(e.child).implicit and not e.remote:
                continue  # IMPLICIT creates it
            if not e.remote and self.creator.get(e.parent) == (e.child, e.category):
                continue  # NODE creates it
            self.edges.append((e.parent, e.child, e.category, e.remote))
        for u in g.units:
            for t in sorted(u.terminals)[1:]:
                self.edges.append((u.unit_id, "0.%d" % t, Category.T, False))
        self.touching = defaultdict(list)
        for edge in self.edges:
            self.touching[edge[0]].append(edge)
            self.touching[edge[1]].append(edge)
        self.implicit_children = defaultdict(list)
        for e in g.edges:
            if not e.remote and g.unit(e.child).implicit:
                self.implicit_children[e.parent].append((e.child, e.category))


def _edge_rank(edge):
    return (edge[3], category_key(edge[2]))


def oracle(gold, max_steps=None):
    """The transition sequence for ``gold``; raises :class:`OracleFailure` if it gets stuck."""
    return list(run_oracle(gold, max_steps)[0])


def run_oracle(gold, max_steps=None):
    """``(transitions, final_state)`` for ``gold``."""
    info = _Gold(gold)
    s = TransitionState(gold.terminals)
    to_gold = {t.node_id: t.node_id for t in gold.terminals}
    to_state = dict(to_gold)
    done = set()
    limit = max_steps or 50 * (len(gold.terminals) + len(gold.units) + len(gold.edges)) + 100

    def pending(node):
        return [e for e in info.touching.get(to_gold.get(node), ()) if e not in done]

    def between(parent, child):
        gp, gc = to_gold.get(parent), to_gold.get(child)
        return sorted((e for e in info.touching.get(gp, ()) if e not in done and e[0] == gp and e[1] == gc),
                      key=_edge_rank)

    def choose():
        s0, s1 = s.s(0), s.s(1)
        complete = len(done) == len(info.edges) and len(to_state) == len(gold.terminals) + len(gold.units)
        if complete and s.legal(Transition(FINISH)):
            return Transition(FINISH), None
        if s0 is None:
            return Transition(SHIFT), None
        g0 = to_gold.get(s0)
        if s.kind[s0] == TERMINAL and s0 not in s.attach:
            pre = gold.preterminal_of(int(s0[2:]))
            if info.creator[pre][0] == s0:
                return Transition(NODE, Category.T), ("node", pre)
            if s1 is not None and to_gold.get(s1) == pre:
                edge = (pre, g0, Category.T, False)
                return Transition(RIGHT_EDGE, Category.T), ("edge", edge)
            return Transition(SWAP), None
        if s1 is not None:
            options = []
            for e in between(s1, s0):
                options.append((_edge_rank(e), Transition(RIGHT_REMOTE if e[3] else RIGHT_EDGE, e[2]), e))
            for e in between(s0, s1):
                options.append((_edge_rank(e), Transition(LEFT_REMOTE if e[3] else LEFT_EDGE, e[2]), e))
            if options:
                _, t, e = min(options, key=lambda o: o[0])
                return t, ("edge", e)
        made = info.created_by.get(g0)
        if made and made[0] not in to_state:
            return Transition(NODE, made[1]), ("node", made[0])
        for child, cat in info.implicit_children.get(g0, ()):
            if child not in to_state:
                return Transition(IMPLICIT, cat), ("implicit", child)
        if not pending(s0) and s.has_parent(s0):
            return Transition(REDUCE), None
        deeper = {to_gold.get(x) for x in s.stack[:-2]}
        if any((e[0] if e[1] == g0 else e[1]) in deeper for e in pending(s0)):
            return Transition(SWAP), None
        if s.buffer:
            return Transition(SHIFT), None
        return Transition(SWAP), None

    while not s.finished:
        if len(s.history) >= limit:
            raise OracleFailure("oracle exceeded %d steps on %s" % (limit, gold.passage_id), s)
        t, effect = choose()
        if not s.legal(t):
            raise OracleFailure("no gold-consistent legal transition for %s (wanted %s)"
                                % (gold.passage_id, t), s)
        before = s.counter
        s.apply_inplace(t)
        if effect is None:
            continue
        kind, what = effect
        if kind == "edge":
            done.add(what)
        else:
            new = "1.%d" % s.counter
            assert s.counter == before + 1
            to_gold[new] = what
            to_state[what] = new
    return s.history, s
