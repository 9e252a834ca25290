"""Lossy tree and bilexical approximations of passages.

The upper bound of a conversion is the score of ``convert-back(convert(g))``
against ``g``: no parser working in the target formalism can do better.

Bilexical conversion picks a lexical head for every unit by walking down the
highest-priority child (:class:`HeadRules`), then emits one arc per non-head
child from the unit's head to the child's head.  The root token hangs from a
virtual head ``0`` whose arc carries the root token's own category, so flat
passages convert losslessly.
"""

import warnings
from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

from .core import (Category, Edge, Passage, Terminal, Unit, build_passage, category_key, is_discontinuous,
                   is_punctuation, parse_category)
from .errors import ModelError, NonProjectiveOverlap
from .evaluation import EvalOptions, aggregate_corpus

CONSTITUENCY = "constituency"
BILEXICAL_TREE = "bilexical_tree"
BILEXICAL_DAG = "bilexical_dag"
CONVERSIONS = (CONSTITUENCY, BILEXICAL_TREE, BILEXICAL_DAG)

#: Dependents whose presence marks a reconstructed unit as a Scene.
_SCENE_DEPENDENTS = (Category.A, Category.D)


@dataclass(frozen=True)
class HeadRules:
    """Category priority for head selection; the leftmost head token wins ties."""

    priority: tuple = (Category.C, Category.P, Category.S, Category.H, Category.A, Category.D, Category.E,
                       Category.N, Category.R, Category.L, Category.G, Category.F, Category.U, Category.T)

    def __post_init__(self):
        missing = [c for c in Category if c not in self.priority]
        if missing:
            raise ValueError("head rules must rank every category; missing %s" % "".join(map(str, missing)))

    def rank(self, category):
        try:
            return self.priority.index(category)
        except ValueError:
            return len(self.priority)

    @property
    def top(self):
        return self.priority[0]


DEFAULT_HEAD_RULES = HeadRules()


@dataclass(frozen=True)
class Arc:
    head: int
    dependent: int
    category: object
    remote: bool = False


@dataclass(frozen=True)
class BilexicalGraph:
    """Token-to-token arcs; head ``0`` marks the root arc."""

    passage_id: str
    tokens: tuple
    arcs: tuple

    @property
    def root(self) -> Optional[int]:
        for a in self.arcs:
            if a.head == 0:
                return a.dependent
        return None

    def heads(self, dependent, remote=False):
        return [a for a in self.arcs if a.dependent == dependent and a.remote == remote]

    def is_tree(self):
        roots = [a for a in self.arcs if a.head == 0]
        return (len(roots) == 1 and not any(a.remote for a in self.arcs)
                and all(len(self.heads(t.position)) == 1 for t in self.tokens))

    def check(self):
        n = len(self.tokens)
        if sum(a.head == 0 for a in self.arcs) > 1:
            raise ModelError("bilexical graph %s has several roots" % self.passage_id)
        for a in self.arcs:
            if not (0 <= a.head <= n and 1 <= a.dependent <= n) or a.head == a.dependent:
                raise ModelError("bad arc %s -> %s in %s" % (a.head, a.dependent, self.passage_id))
            if a.head == 0 and a.remote:
                raise ModelError("remote root arc in %s" % self.passage_id)
        for t in self.tokens:
            if len(self.heads(t.position)) > 1:
                raise ModelError("token %d has several primary heads" % t.position)


def to_constituency(p: Passage) -> Passage:
    """Drop every remote edge; the primary tree is kept as is."""
    return build_passage(p.passage_id, p.terminals, p.units, [e for e in p.edges if not e.remote], p.extras)


class _Heads:
    def __init__(self, p, rules):
        self.p = p
        self.rules = rules
        self.memo = {}

    def head_edge(self, uid):
        """The primary edge to the head child of a non-pre-terminal unit."""
        candidates = [e for e in self.p.outgoing(uid, remote=False) if not self.p.unit(e.child).implicit]
        if not candidates:
            return None
        # ties go to the child whose own head token is leftmost, which is what
        # from_bilexical can reproduce
        return min(candidates, key=lambda e: (self.rules.rank(e.category), self.token(e.child),
                                              category_key(e.category)))

    def token(self, uid):
        if uid not in self.memo:
            u = self.p.unit(uid)
            if u.terminals:
                self.memo[uid] = min(u.terminals)
            else:
                e = self.head_edge(uid)
                self.memo[uid] = None if e is None else self.token(e.child)
        return self.memo[uid]

    def label(self, uid):
        """Category of the lowest edge on the head path of ``uid`` (None for pre-terminals)."""
        label = None
        while not self.p.unit(uid).terminals:
            e = self.head_edge(uid)
            label = e.category
            uid = e.child
        return label


def to_bilexical(p: Passage, rules=DEFAULT_HEAD_RULES, tree_mode=True) -> BilexicalGraph:
    heads = _Heads(p, rules)
    arcs = {}

    def add(arc):
        arcs.setdefault((arc.head, arc.dependent, arc.category, arc.remote), arc)

    for u in p.units:
        if u.implicit:
            continue
        h = heads.token(u.unit_id)
        if u.terminals:
            for t in sorted(u.terminals)[1:]:
                add(Arc(h, t, Category.T))
            continue
        head_edge = heads.head_edge(u.unit_id)
        for e in p.outgoing(u.unit_id, remote=False):
            if p.unit(e.child).implicit or e.child == head_edge.child:
                continue
            add(Arc(h, heads.token(e.child), e.category))
    root_label = heads.label(p.root_id) or rules.top
    add(Arc(0, heads.token(p.root_id), root_label))
    if not tree_mode:
        for e in p.edges:
            if not e.remote or p.unit(e.child).implicit:
                continue
            h, d = heads.token(e.parent), heads.token(e.child)
            if h != d:
                add(Arc(h, d, e.category, True))
    ordered = sorted(arcs.values(), key=lambda a: (a.dependent, a.remote, a.head, category_key(a.category)))
    return BilexicalGraph(p.passage_id, p.terminals, tuple(ordered))


def _head_label(rules, proposed, dependents, position):
    """A label for the head child that keeps the same token as head on re-conversion."""
    for dep, cat in dependents:
        r = rules.rank(cat)
        if r < rules.rank(proposed) or (r == rules.rank(proposed) and dep < position):
            return rules.top
    return proposed


def from_bilexical(b: BilexicalGraph, rules=DEFAULT_HEAD_RULES) -> Passage:
    """Rebuild a passage: every token with dependents heads a unit over its projection."""
    b.check()
    n = len(b.tokens)
    root = b.root
    deps = defaultdict(list)
    merged = defaultdict(list)
    head_of = {}
    for a in b.arcs:
        if a.remote or a.head == 0:
            continue
        head_of[a.dependent] = a.head
        if a.category == Category.T:
            merged[a.head].append(a.dependent)
        else:
            deps[a.head].append((a.dependent, a.category))
    for t in range(1, n + 1):
        seen = set()
        x = t
        while x in head_of:
            if x in seen:
                raise ModelError("cycle among primary arcs at token %d in %s" % (t, b.passage_id))
            seen.add(x)
            x = head_of[x]
    remote_heads = {a.head for a in b.arcs if a.remote}

    units = []
    edges = []
    unit_of = {}  # token -> id of the unit spanning its projection
    pre_of = {}

    def new_unit(terminals=()):
        uid = "1.%d" % (len(units) + 1)
        units.append(Unit(uid, terminals=tuple(terminals)))
        return uid

    top = new_unit()
    folded = {d for ds in merged.values() for d in ds}
    for t in range(1, n + 1):
        if t not in folded:
            pre_of[t] = new_unit([t] + sorted(merged.get(t, ())))
    for t in range(1, n + 1):
        if t in folded:
            continue
        if t == root:
            unit_of[t] = top
        elif deps.get(t) or t in remote_heads:
            unit_of[t] = new_unit()

    def node(t):
        return unit_of.get(t, pre_of[t])

    for t, uid in unit_of.items():
        ds = sorted(deps.get(t, ()))
        if t == root:
            proposed = next(a.category for a in b.arcs if a.head == 0)
        elif any(c in _SCENE_DEPENDENTS for _, c in ds):
            proposed = Category.P
        else:
            proposed = rules.top
        edges.append(Edge(uid, pre_of[t], _head_label(rules, proposed, ds, t)))
        for d, cat in ds:
            edges.append(Edge(uid, node(d), cat))
    for t in range(1, n + 1):
        if t not in folded and t != root and t not in head_of:
            edges.append(Edge(top, node(t), rules.top))

    primary = build_passage(b.passage_id, b.tokens, units, edges)
    for a in b.arcs:
        if not a.remote:
            continue
        parent, child = node(a.head), node(a.dependent)
        trial = edges + [Edge(parent, child, a.category, True)]
        try:
            build_passage(b.passage_id, b.tokens, units, trial)
        except ModelError:
            continue  # would close a cycle or attach below a pre-terminal
        edges = trial
    p = build_passage(b.passage_id, b.tokens, units, edges) if len(edges) > len(primary.edges) else primary
    bad = [u.unit_id for u in p.units if is_discontinuous(p, u.unit_id)]
    if bad:
        warnings.warn(NonProjectiveOverlap("%s: non-projective arcs give discontinuous units %s"
                                           % (b.passage_id, ", ".join(bad))), stacklevel=2)
    return p


def roundtrip(p: Passage, conversion, rules=DEFAULT_HEAD_RULES) -> Passage:
    if conversion == CONSTITUENCY:
        return to_constituency(p)
    if conversion not in CONVERSIONS:
        raise ValueError("unknown conversion %r" % (conversion,))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonProjectiveOverlap)
        return from_bilexical(to_bilexical(p, rules, tree_mode=conversion == BILEXICAL_TREE), rules)


def upper_bound(gold_corpus, conversion, rules=DEFAULT_HEAD_RULES, opts=EvalOptions()):
    """Micro-averaged score of each gold passage's roundtrip against itself."""
    return aggregate_corpus(((roundtrip(g, conversion, rules), g) for g in gold_corpus), opts)


# CoNLL-style table: ID FORM HEAD DEPREL REMOTE

def write_conll(graphs) -> str:
    if isinstance(graphs, BilexicalGraph):
        graphs = [graphs]
    blocks = []
    for b in graphs:
        lines = ["# passage_id = %s" % b.passage_id]
        for t in b.tokens:
            primary = b.heads(t.position)
            head = str(primary[0].head) if primary else "_"
            rel = str(primary[0].category) if primary else "_"
            remote = "|".join("%d:%s" % (a.head, a.category) for a in b.heads(t.position, remote=True)) or "_"
            lines.append("\t".join((str(t.position), t.text, head, rel, remote)))
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)


def read_conll(text, extensions=False):
    graphs = []
    for block in text.strip("\n").split("\n\n"):
        passage_id = None
        tokens = []
        arcs = []
        for line in block.splitlines():
            if not line.strip():
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                if key.strip() == "passage_id":
                    passage_id = value.strip()
                continue
            fields = line.split("\t")
            if len(fields) != 5:
                raise ValueError("expected 5 tab-separated columns, got %d: %r" % (len(fields), line))
            pos = int(fields[0])
            tokens.append(Terminal(pos, fields[1], is_punctuation(fields[1])))
            if fields[2] != "_":
                arcs.append(Arc(int(fields[2]), pos, parse_category(fields[3], extensions)))
            if fields[4] != "_":
                for item in fields[4].split("|"):
                    h, _, cat = item.partition(":")
                    arcs.append(Arc(int(h), pos, parse_category(cat, extensions), True))
        if tokens:
            graphs.append(BilexicalGraph(passage_id or str(len(graphs) + 1), tuple(tokens), tuple(arcs)))
    return graphs
