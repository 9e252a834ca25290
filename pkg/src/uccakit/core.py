"""In-memory model of a UCCA passage.

A passage holds an ordered sequence of terminals (layer 0) and a DAG of
foundational-layer units (layer 1) connected by labeled edges.  Terminals are
never edge endpoints: a *pre-terminal* unit lists the terminal positions it
covers, and every other relation is an :class:`Edge` between two units.

Passages are immutable.  :func:`build_passage` is the only way to create one
and it checks every structural invariant up front, so downstream code can rely
on them without re-checking.
"""

import unicodedata
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

from .errors import (
    CycleError,
    DanglingReference,
    EmptyPassage,
    InvalidUnit,
    ModelError,
    MultiplePrimaryParents,
    NoRootError,
    UnknownCategory,
    UnknownUnit,
    UnreachableTerminal,
)


class Category(str, Enum):
    """Foundational-layer edge labels.

    ``T`` marks the attachment of a terminal to its pre-terminal.  It exists so
    that serializers and the transition system can name that attachment; it is
    never stored on an :class:`Edge` and never scored.
    """

    P = "P"
    S = "S"
    A = "A"
    D = "D"
    C = "C"
    E = "E"
    N = "N"
    R = "R"
    F = "F"
    L = "L"
    H = "H"
    G = "G"
    U = "U"
    T = "T"

    def __str__(self):
        return self.value

    @property
    def description(self):
        return _DESCRIPTIONS[self]


_DESCRIPTIONS = {
    Category.P: "Process",
    Category.S: "State",
    Category.A: "Participant",
    Category.D: "Adverbial",
    Category.C: "Center",
    Category.E: "Elaborator",
    Category.N: "Connector",
    Category.R: "Relator",
    Category.F: "Function",
    Category.L: "Linker",
    Category.H: "Parallel Scene",
    Category.G: "Ground",
    Category.U: "Punctuation",
    Category.T: "Terminal attachment",
}

#: The thirteen scored labels, in declaration order.
LABELS = tuple(c for c in Category if c is not Category.T)

_CATEGORY_INDEX = {c: i for i, c in enumerate(Category)}

CategoryLike = Union[Category, str]


def parse_category(label, extensions=False) -> CategoryLike:
    """Map a label string to a :class:`Category`.

    Unknown labels raise :class:`UnknownCategory` unless ``extensions`` is
    true, in which case the raw string is returned unchanged.
    """
    if isinstance(label, Category):
        return label
    try:
        return Category(label)
    except ValueError:
        if extensions and label:
            return str(label)
        raise UnknownCategory("unknown category %r" % (label,), subject=label) from None


def category_key(category):
    """Sort key placing known categories in declaration order, extensions after."""
    index = _CATEGORY_INDEX.get(category)
    if index is None:
        return (len(_CATEGORY_INDEX), str(category))
    return (index, "")


def id_key(unit_id):
    """Numeric-aware sort key for "<layer>.<ordinal>" ids ("1.2" < "1.10")."""
    parts = str(unit_id).split(".")
    try:
        return (0, tuple(int(p) for p in parts), "")
    except ValueError:
        return (1, (), str(unit_id))


def is_punctuation(text):
    return bool(text) and all(unicodedata.category(ch)[0] in "PS" for ch in text)


@dataclass(frozen=True)
class Terminal:
    position: int
    text: str
    punct: bool = False
    extras: tuple = ()

    @property
    def node_id(self):
        return "0.%d" % self.position


@dataclass(frozen=True)
class Unit:
    """A layer-1 node.

    ``terminals`` lists the positions a pre-terminal covers; it is empty for
    every other unit.  Real corpora contain unanalyzable multi-token units
    ("such as"), so a pre-terminal may cover more than one position.
    """

    unit_id: str
    implicit: bool = False
    terminals: tuple = ()
    extras: tuple = ()

    @property
    def is_preterminal(self):
        return bool(self.terminals)

    @property
    def terminal_position(self) -> Optional[int]:
        return self.terminals[0] if self.terminals else None


@dataclass(frozen=True)
class Edge:
    parent: str
    child: str
    category: CategoryLike
    remote: bool = False
    extras: tuple = ()

    def sort_key(self):
        return (id_key(self.parent), id_key(self.child), category_key(self.category), self.remote)


@dataclass(frozen=True, eq=True)
class Passage:
    """An immutable, validated passage.  Build it with :func:`build_passage`."""

    passage_id: str
    terminals: tuple
    units: tuple
    edges: tuple
    root_id: str
    extras: tuple = ()
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __hash__(self):
        return hash((self.passage_id, self.terminals, self.units, self.edges, self.root_id))

    # lookups

    def unit(self, unit_id) -> Unit:
        try:
            return self._index["units"][unit_id]
        except KeyError:
            raise UnknownUnit("no unit %r in passage %s" % (unit_id, self.passage_id)) from None

    def __contains__(self, unit_id):
        return unit_id in self._index["units"]

    def terminal(self, position) -> Terminal:
        return self.terminals[position - 1]

    def outgoing(self, unit_id, remote=None):
        self.unit(unit_id)
        edges = self._index["out"].get(unit_id, ())
        if remote is None:
            return edges
        return tuple(e for e in edges if e.remote == remote)

    def incoming(self, unit_id, remote=None):
        self.unit(unit_id)
        edges = self._index["in"].get(unit_id, ())
        if remote is None:
            return edges
        return tuple(e for e in edges if e.remote == remote)

    def primary_parent(self, unit_id) -> Optional[str]:
        for e in self.incoming(unit_id, remote=False):
            return e.parent
        return None

    def primary_children(self, unit_id):
        """Distinct primary children of a unit, in edge order."""
        seen = []
        for e in self.outgoing(unit_id, remote=False):
            if e.child not in seen:
                seen.append(e.child)
        return seen

    def preterminal_of(self, position) -> str:
        return self._index["attach"][position]

    def topological_order(self):
        """Unit ids ordered parents-first over primary and remote edges."""
        return self._index["topo"]

    @property
    def tokens(self):
        return [t.text for t in self.terminals]

    def __len__(self):
        return len(self.terminals)

    def __repr__(self):
        return "Passage(%r, %d terminals, %d units, %d edges)" % (
            self.passage_id, len(self.terminals), len(self.units), len(self.edges))


def _check_acyclic(unit_ids, edges):
    """Kahn's algorithm over all edges; returns a parents-first order or raises."""
    indegree = {u: 0 for u in unit_ids}
    out = defaultdict(list)
    for e in edges:
        out[e.parent].append(e)
        indegree[e.child] += 1
    ready = sorted((u for u, d in indegree.items() if d == 0), key=id_key, reverse=True)
    order = []
    while ready:
        u = ready.pop()
        order.append(u)
        released = []
        for e in out[u]:
            indegree[e.child] -= 1
            if indegree[e.child] == 0:
                released.append(e.child)
        ready.extend(sorted(released, key=id_key, reverse=True))
    if len(order) == len(indegree):
        return order
    stuck = {u for u, d in indegree.items() if d > 0}
    cycle_edges = [e for e in edges if e.parent in stuck and e.child in stuck]
    primary_stuck = _primary_cycle(stuck, [e for e in cycle_edges if not e.remote])
    remote = not primary_stuck
    culprit = next((e for e in cycle_edges if e.remote), cycle_edges[0]) if remote else cycle_edges[0]
    raise CycleError(
        "cycle through edge %s -%s-> %s" % (culprit.parent, culprit.category, culprit.child),
        subject=culprit, remote=remote)


def _primary_cycle(nodes, primary_edges):
    indegree = {u: 0 for u in nodes}
    out = defaultdict(list)
    for e in primary_edges:
        out[e.parent].append(e.child)
        indegree[e.child] += 1
    ready = [u for u, d in indegree.items() if d == 0]
    seen = 0
    while ready:
        u = ready.pop()
        seen += 1
        for c in out[u]:
            indegree[c] -= 1
            if indegree[c] == 0:
                ready.append(c)
    return seen < len(nodes)


def build_passage(passage_id, terminals: Sequence[Terminal], units: Iterable[Unit],
                  edges: Iterable[Edge], extras=()) -> Passage:
    """Validate the parts of a passage and assemble them.

    Exact duplicate edge records are collapsed.  Raises a :class:`ModelError`
    subclass naming the offending unit or edge on any invariant violation.
    """
    terminals = tuple(sorted(terminals, key=lambda t: t.position))
    if not terminals:
        raise EmptyPassage("passage %s has no terminals" % passage_id)
    for expected, t in enumerate(terminals, start=1):
        if t.position != expected:
            raise ModelError("terminal positions must be 1..%d, found %d" % (len(terminals), t.position),
                             subject=t.node_id)
        if not t.text:
            raise ModelError("terminal %d has empty text" % t.position, subject=t.node_id)
    n = len(terminals)

    by_id = {}
    for u in units:
        if u.unit_id in by_id:
            raise ModelError("duplicate unit id %s" % u.unit_id, subject=u.unit_id)
        if u.implicit and u.terminals:
            raise InvalidUnit("implicit unit %s covers terminals" % u.unit_id, subject=u.unit_id)
        by_id[u.unit_id] = u
    if not by_id:
        raise NoRootError("passage %s has no units (unannotated input?)" % passage_id)

    attach = {}
    for u in by_id.values():
        for pos in u.terminals:
            if not 1 <= pos <= n:
                raise DanglingReference("unit %s covers missing terminal %d" % (u.unit_id, pos),
                                        subject=u.unit_id)
            if pos in attach and attach[pos] != u.unit_id:
                raise MultiplePrimaryParents(
                    "terminal %d attached to both %s and %s" % (pos, attach[pos], u.unit_id),
                    subject="0.%d" % pos)
            attach[pos] = u.unit_id
    for t in terminals:
        if t.position not in attach:
            raise UnreachableTerminal("terminal %d (%s) is not attached to any unit" % (t.position, t.text),
                                      subject=t.node_id)

    unique = {}
    for e in edges:
        if e.parent not in by_id:
            raise DanglingReference("edge from unknown unit %s" % e.parent, subject=e)
        if e.child not in by_id:
            raise DanglingReference("edge to unknown unit %s" % e.child, subject=e)
        if e.parent == e.child:
            raise CycleError("self-loop on %s" % e.parent, subject=e, remote=e.remote)
        if e.category == Category.T:
            raise ModelError("terminal attachments are not edges (%s -> %s)" % (e.parent, e.child), subject=e)
        if by_id[e.parent].implicit:
            raise InvalidUnit("implicit unit %s has children" % e.parent, subject=e.parent)
        if by_id[e.parent].terminals:
            raise InvalidUnit("pre-terminal %s has unit children" % e.parent, subject=e.parent)
        key = (e.parent, e.child, e.category, e.remote)
        if key not in unique:
            unique[key] = e
    edges = tuple(sorted(unique.values(), key=Edge.sort_key))

    primary_parent = {}
    for e in edges:
        if e.remote:
            continue
        other = primary_parent.setdefault(e.child, e.parent)
        if other != e.parent:
            raise MultiplePrimaryParents("unit %s has primary parents %s and %s" % (e.child, other, e.parent),
                                         subject=e.child)

    topo = _check_acyclic(list(by_id), edges)

    roots = [u for u in by_id if u not in primary_parent]
    if not roots:  # unreachable: a parentless-free graph has a cycle
        raise NoRootError("passage %s has no root unit" % passage_id)
    if len(roots) > 1:
        roots.sort(key=id_key)
        raise ModelError("passage %s has %d root units: %s" % (passage_id, len(roots), ", ".join(roots)),
                         subject=roots[1])
    root_id = roots[0]
    if by_id[root_id].implicit:
        raise InvalidUnit("root unit %s is implicit" % root_id, subject=root_id)

    out = defaultdict(list)
    inc = defaultdict(list)
    for e in edges:
        out[e.parent].append(e)
        inc[e.child].append(e)

    yields = {}
    for uid in reversed(topo):
        ys = set(by_id[uid].terminals)
        for e in out[uid]:
            if not e.remote:
                ys |= yields[e.child]
        yields[uid] = frozenset(ys)
    for uid, u in by_id.items():
        if not u.implicit and not yields[uid]:
            raise InvalidUnit("non-implicit unit %s has an empty yield" % uid, subject=uid)

    units = tuple(sorted(by_id.values(), key=lambda u: id_key(u.unit_id)))
    index = {
        "units": by_id,
        "out": {k: tuple(v) for k, v in out.items()},
        "in": {k: tuple(v) for k, v in inc.items()},
        "attach": attach,
        "topo": tuple(topo),
        "yields": yields,
    }
    return Passage(str(passage_id), terminals, units, edges, root_id, tuple(extras), index)


def yield_of(p: Passage, unit_id) -> frozenset:
    """Terminal positions below ``unit_id`` following primary edges only."""
    p.unit(unit_id)
    return p._index["yields"][unit_id]


def edge_partition(p: Passage):
    primary = tuple(e for e in p.edges if not e.remote)
    remote = tuple(e for e in p.edges if e.remote)
    return primary, remote


def is_discontinuous(p: Passage, unit_id) -> bool:
    ys = yield_of(p, unit_id)
    if not ys:
        return False
    return max(ys) - min(ys) + 1 != len(ys)


class PassageBuilder:
    """Incremental helper for assembling passages by hand.

    >>> b = PassageBuilder("ex", ["John", "moved"])
    >>> scene = b.unit()
    >>> b.wrap(scene, "A", 1)
    '1.2'
    >>> b.wrap(scene, "P", 2)
    '1.3'
    >>> len(b.build().edges)
    2
    """

    def __init__(self, passage_id, tokens, punct=None):
        self.passage_id = passage_id
        self.terminals = []
        for i, tok in enumerate(tokens, start=1):
            if isinstance(tok, Terminal):
                self.terminals.append(tok)
                continue
            flag = is_punctuation(tok) if punct is None else (i in punct)
            self.terminals.append(Terminal(i, tok, flag))
        self.units = []
        self.edges = []

    def unit(self, implicit=False, terminals=()):
        uid = "1.%d" % (len(self.units) + 1)
        self.units.append(Unit(uid, implicit=implicit, terminals=tuple(terminals)))
        return uid

    def add(self, parent, category, child, remote=False):
        self.edges.append(Edge(parent, child, parse_category(category), remote))
        return child

    def wrap(self, parent, category, *positions):
        """Create a pre-terminal over ``positions`` under ``parent``."""
        return self.add(parent, category, self.unit(terminals=positions))

    def node(self, parent, category):
        """Create a non-terminal child of ``parent``."""
        return self.add(parent, category, self.unit())

    def implicit(self, parent, category):
        return self.add(parent, category, self.unit(implicit=True))

    def remote(self, parent, category, child):
        return self.add(parent, category, child, remote=True)

    def build(self):
        return build_passage(self.passage_id, self.terminals, self.units, self.edges)
