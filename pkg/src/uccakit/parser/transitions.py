"""Transition system for building passages left to right.

Nodes on the stack and buffer are terminals (``"0.k"``) or units
(``"1.k"``, numbered in creation order).  The inventory:

========================  ====================================================
SHIFT                     move the buffer front onto the stack
REDUCE                    pop s0 (it must already have its primary parent)
NODE(X)                   new unit on the buffer front, parent of s0 via X;
                          NODE(T) turns an unattached terminal into a
                          pre-terminal
IMPLICIT(X)               new implicit unit on the buffer front, child of s0
LEFT-EDGE(X)              primary edge s0 -> s1
RIGHT-EDGE(X)             primary edge s1 -> s0 (RIGHT-EDGE(T) adds s0 to the
                          pre-terminal s1)
LEFT-REMOTE(X)            remote edge s0 -> s1
RIGHT-REMOTE(X)           remote edge s1 -> s0
SWAP                      move s1 back to the buffer front
FINISH                    stop; the single stack item is the root
========================  ====================================================

Every transition is checked against the graph invariants when it is
proposed, so any FINISH state converts to a valid passage.
"""

from dataclasses import dataclass
from typing import Optional

from ..core import LABELS, Category, Edge, Terminal, Unit, build_passage, is_punctuation
from ..errors import IllegalTransition

SHIFT = "SHIFT"
REDUCE = "REDUCE"
NODE = "NODE"
IMPLICIT = "IMPLICIT"
LEFT_EDGE = "LEFT-EDGE"
RIGHT_EDGE = "RIGHT-EDGE"
LEFT_REMOTE = "LEFT-REMOTE"
RIGHT_REMOTE = "RIGHT-REMOTE"
SWAP = "SWAP"
FINISH = "FINISH"

LABELED = (NODE, IMPLICIT, LEFT_EDGE, RIGHT_EDGE, LEFT_REMOTE, RIGHT_REMOTE)
UNLABELED = (SHIFT, REDUCE, SWAP, FINISH)
EDGE_ACTIONS = (LEFT_EDGE, RIGHT_EDGE, LEFT_REMOTE, RIGHT_REMOTE)

# node kinds
TERMINAL = "terminal"
PRETERMINAL = "preterminal"
REGULAR = "unit"
IMPLICIT_UNIT = "implicit"


@dataclass(frozen=True, order=True)
class Transition:
    action: str
    category: Optional[Category] = None

    def __post_init__(self):
        if (self.action in UNLABELED) != (self.category is None):
            raise ValueError("%s %s a category" % (self.action, "takes" if self.action in LABELED else "has no"))
        if self.action not in LABELED + UNLABELED:
            raise ValueError("unknown action %r" % self.action)

    def __str__(self):
        return self.action if self.category is None else "%s(%s)" % (self.action, self.category)

    @classmethod
    def parse(cls, text):
        if "(" in text:
            action, _, rest = text.partition("(")
            return cls(action, Category(rest.rstrip(")")))
        return cls(text)


def _all_transitions():
    out = [Transition(a) for a in UNLABELED]
    for a in LABELED:
        out += [Transition(a, c) for c in LABELS]
    out += [Transition(NODE, Category.T), Transition(RIGHT_EDGE, Category.T)]
    return tuple(sorted(out, key=str))


#: Every transition the system can ever produce, in a fixed order.
ALL_TRANSITIONS = _all_transitions()


class TransitionState:
    """Parser configuration.  ``apply`` returns a new state; states are never shared-mutated."""

    __slots__ = ("tokens", "stack", "buffer", "kind", "parent", "children", "terminals", "attach",
                 "edges", "history", "counter", "finished", "_yields")

    def __init__(self, tokens):
        self.tokens = tuple(t if isinstance(t, Terminal) else Terminal(i, t, is_punctuation(t))
                            for i, t in enumerate(tokens, start=1))
        self.stack = ()
        self.buffer = tuple(t.node_id for t in self.tokens)
        self.kind = {t.node_id: TERMINAL for t in self.tokens}
        self.parent = {}     # unit -> primary parent
        self.children = {}   # unit -> child units over any edge
        self.terminals = {}  # pre-terminal -> positions
        self.attach = {}     # terminal node id -> pre-terminal
        self.edges = ()
        self.history = ()
        self.counter = 0
        self.finished = False
        self._yields = {}

    def copy(self):
        s = TransitionState.__new__(TransitionState)
        s.tokens = self.tokens
        s.stack, s.buffer, s.edges, s.history = self.stack, self.buffer, self.edges, self.history
        s.kind = dict(self.kind)
        s.parent = dict(self.parent)
        s.children = {k: list(v) for k, v in self.children.items()}
        s.terminals = {k: list(v) for k, v in self.terminals.items()}
        s.attach = dict(self.attach)
        s.counter = self.counter
        s.finished = self.finished
        s._yields = dict(self._yields)
        return s

    def __repr__(self):
        return "TransitionState(stack=%s, buffer=%s, history=%d)" % (list(self.stack), list(self.buffer),
                                                                     len(self.history))

    # queries

    def s(self, i):
        return self.stack[-1 - i] if i < len(self.stack) else None

    def b(self, i):
        return self.buffer[i] if i < len(self.buffer) else None

    def has_parent(self, node):
        if self.kind[node] == TERMINAL:
            return node in self.attach
        return node in self.parent

    def reaches(self, src, dst):
        """True if ``dst`` is reachable from ``src`` over edges (or equal)."""
        seen = {src}
        todo = [src]
        while todo:
            x = todo.pop()
            if x == dst:
                return True
            for c in self.children.get(x, ()):
                if c not in seen:
                    seen.add(c)
                    todo.append(c)
        return False

    def has_edge(self, parent, child, category, remote):
        return any(e.parent == parent and e.child == child and e.category == category and e.remote == remote
                   for e in self.edges)

    def yield_of(self, node):
        """Terminal positions under ``node`` over primary edges."""
        if self.kind[node] == TERMINAL:
            return {int(node[2:])}
        if node not in self._yields:
            out = set(self.terminals.get(node, ()))
            for e in self.edges:
                if e.parent == node and not e.remote:
                    out |= self.yield_of(e.child)
            self._yields[node] = frozenset(out)
        return set(self._yields[node])

    def incoming_label(self, node):
        for e in self.edges:
            if e.child == node and not e.remote:
                return e.category
        return None

    # legality

    def edge_ok(self, parent, child, category, remote):
        kp, kc = self.kind[parent], self.kind[child]
        if category == Category.T:
            return not remote and kp == PRETERMINAL and kc == TERMINAL and child not in self.attach
        if kp != REGULAR or kc == TERMINAL or parent == child:
            return False
        if self.has_edge(parent, child, category, remote) or self.reaches(child, parent):
            return False
        if not remote and child in self.parent and self.parent[child] != parent:
            return False
        return True

    def legal(self, t: Transition):
        a, c = t.action, t.category
        s0, s1 = self.s(0), self.s(1)
        if self.finished:
            return False
        if a == SHIFT:
            return bool(self.buffer) and not (s0 is not None and self._loose(s0))
        if a == FINISH:
            return (not self.buffer and len(self.stack) == 1 and self.kind[s0] == REGULAR
                    and s0 not in self.parent)
        if s0 is None:
            return False
        if a == REDUCE:
            return self.has_parent(s0)
        if a == NODE:
            if self.has_parent(s0) or self.kind[s0] == IMPLICIT_UNIT:
                return False
            return (c == Category.T) == (self.kind[s0] == TERMINAL)
        if a == IMPLICIT:
            return self.kind[s0] == REGULAR
        if a == SWAP:
            return s1 is not None
        if s1 is None:
            return False
        if self._loose(s0) and not (a == RIGHT_EDGE and c == Category.T):
            return False
        if a in (LEFT_EDGE, LEFT_REMOTE):
            return self.edge_ok(s0, s1, c, a == LEFT_REMOTE)
        return self.edge_ok(s1, s0, c, a == RIGHT_REMOTE)

    def _loose(self, node):
        return self.kind[node] == TERMINAL and node not in self.attach

    def legal_transitions(self):
        """Same result as filtering ALL_TRANSITIONS with :meth:`legal`, with the
        label-independent edge checks done once per direction."""
        out = []
        ok = {}
        for t in ALL_TRANSITIONS:
            a = t.action
            if a not in EDGE_ACTIONS or t.category == Category.T:
                if self.legal(t):
                    out.append(t)
                continue
            if a not in ok:
                ok[a] = self._edge_possible(a)
            if ok[a]:
                parent, child = (self.s(0), self.s(1)) if a in (LEFT_EDGE, LEFT_REMOTE) else (self.s(1), self.s(0))
                if not self.has_edge(parent, child, t.category, a in (LEFT_REMOTE, RIGHT_REMOTE)):
                    out.append(t)
        return out

    def _edge_possible(self, a):
        """:meth:`legal` for a non-T edge action, minus the duplicate-edge check."""
        s0, s1 = self.s(0), self.s(1)
        if self.finished or s0 is None or s1 is None or self._loose(s0):
            return False
        parent, child = (s0, s1) if a in (LEFT_EDGE, LEFT_REMOTE) else (s1, s0)
        remote = a in (LEFT_REMOTE, RIGHT_REMOTE)
        if self.kind[parent] != REGULAR or self.kind[child] == TERMINAL or parent == child:
            return False
        if self.reaches(child, parent):
            return False
        return remote or child not in self.parent or self.parent[child] == parent

    # annotation rules (decoder-side filter)

    def rule_ok(self, t: Transition):
        """False if ``t`` would create an error-severity guideline violation.

        The transition system itself accepts any valid passage (the oracle
        needs that); the decoder additionally keeps at most one primary P/S
        child per unit and lets U edges reach only all-punctuation
        pre-terminals, so parser output always validates without errors.
        """
        a, c = t.action, t.category
        if c is None or (a == NODE and c != Category.U):
            return True
        s0, s1 = self.s(0), self.s(1)
        if a == NODE:
            parent, child, remote = None, s0, False
        elif a == IMPLICIT:
            parent, child, remote = s0, None, False
        elif a in (LEFT_EDGE, LEFT_REMOTE):
            parent, child, remote = s0, s1, a == LEFT_REMOTE
        else:
            parent, child, remote = s1, s0, a == RIGHT_REMOTE
        if c == Category.T:
            # a pre-terminal under U must stay punctuation-only
            return self.tokens[int(child[2:]) - 1].punct or not self._under_u(parent)
        if c == Category.U:
            if remote or child is None:
                return False
            return self.kind[child] == PRETERMINAL and all(self.tokens[i - 1].punct
                                                           for i in self.terminals[child])
        if c in (Category.P, Category.S) and not remote and parent is not None:
            return not any(e.parent == parent and not e.remote and e.category in (Category.P, Category.S)
                           for e in self.edges)
        return True

    def _under_u(self, node):
        return any(e.child == node and e.category == Category.U for e in self.edges)

    def allowed_transitions(self):
        """Legal transitions that also pass :meth:`rule_ok` (what the parser chooses from)."""
        return [t for t in self.legal_transitions() if self.rule_ok(t)]

    # transitions

    def _new_unit(self, kind):
        self.counter += 1
        uid = "1.%d" % self.counter
        self.kind[uid] = kind
        self.children[uid] = []
        return uid

    def _add_edge(self, parent, child, category, remote):
        if not remote:
            self._yields.clear()
        if category == Category.T:
            self.terminals[parent].append(int(child[2:]))
            self.attach[child] = parent
            return
        self.edges = self.edges + (Edge(parent, child, category, remote),)
        self.children[parent].append(child)
        if not remote:
            self.parent[child] = parent

    def apply_inplace(self, t: Transition):
        if not self.legal(t):
            raise IllegalTransition("%s is not legal in %r" % (t, self))
        a, c = t.action, t.category
        s0, s1 = self.s(0), self.s(1)
        if a == SHIFT:
            self.stack = self.stack + (self.buffer[0],)
            self.buffer = self.buffer[1:]
        elif a == REDUCE:
            self.stack = self.stack[:-1]
        elif a == NODE:
            if c == Category.T:
                uid = self._new_unit(PRETERMINAL)
                self.terminals[uid] = []
            else:
                uid = self._new_unit(REGULAR)
            self._add_edge(uid, s0, c, False)
            self.buffer = (uid,) + self.buffer
        elif a == IMPLICIT:
            uid = self._new_unit(IMPLICIT_UNIT)
            self._add_edge(s0, uid, c, False)
            self.buffer = (uid,) + self.buffer
        elif a == SWAP:
            self.stack = self.stack[:-2] + (s0,)
            self.buffer = (s1,) + self.buffer
        elif a == FINISH:
            self.finished = True
        elif a in (LEFT_EDGE, LEFT_REMOTE):
            self._add_edge(s0, s1, c, a == LEFT_REMOTE)
        else:
            self._add_edge(s1, s0, c, a == RIGHT_REMOTE)
        self.history = self.history + (t,)
        return self

    def apply(self, t: Transition):
        return self.copy().apply_inplace(t)

    def to_passage(self, passage_id="parsed"):
        """The finished graph as a validated passage."""
        if not self.finished:
            raise IllegalTransition("state is not finished")
        units = [Unit(uid, self.kind[uid] == IMPLICIT_UNIT, tuple(sorted(self.terminals.get(uid, ()))))
                 for uid in sorted(self.children, key=lambda u: int(u[2:]))]
        return build_passage(passage_id, self.tokens, units, self.edges)


def initial_state(tokens):
    return TransitionState(tokens)


def legal_transitions(s: TransitionState):
    return s.legal_transitions()


def apply(s: TransitionState, t: Transition):
    return s.apply(t)


def completion(s: TransitionState, choose=None):
    """A short deterministic sequence that takes ``s`` to FINISH.

    ``choose(state, candidates)`` may pick among label variants of the
    chosen action (the parser passes its scorer); default is the first.
    """
    s = s.copy()
    out = []
    pick = choose or (lambda state, cands: cands[0])

    def step(action, labels=None):
        if labels is None:
            t = Transition(action)
        else:
            cands = [Transition(action, c) for c in labels
                     if s.legal(Transition(action, c)) and s.rule_ok(Transition(action, c))]
            t = pick(s, cands)
        s.apply_inplace(t)
        out.append(t)

    while not s.finished:
        s0, s1 = s.s(0), s.s(1)
        if s0 is not None and s._loose(s0):
            step(NODE, (Category.T,))
        elif s0 is not None and s.has_parent(s0):
            step(REDUCE)
        elif s.buffer:
            step(SHIFT)
        elif s1 is None:
            if s.kind[s0] == REGULAR:
                step(FINISH)
            else:
                step(NODE, LABELS)
        elif s.has_parent(s1):
            step(SWAP)  # bring it back to s0 so it can be reduced
        elif s.kind[s0] == REGULAR and (s.reaches(s0, s1) or s.kind[s1] != REGULAR):
            step(LEFT_EDGE, LABELS)
        elif s.kind[s1] == REGULAR:
            step(RIGHT_EDGE, LABELS)
        else:
            step(NODE, LABELS)
    return out
