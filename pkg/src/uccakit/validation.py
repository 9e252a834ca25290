"""Guideline checks and canonical normalization (rule registry: RULES.md).

``validate`` reports violations as data; it never raises on a structurally
valid passage.  ``validate_document`` also turns load failures into
violations so a batch run can list every problem in a directory.
"""

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .core import Category, Edge, Unit, build_passage, category_key, id_key, yield_of
from .errors import CycleError, InvalidUnit, ModelError, SchemaError, XmlSyntaxError

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class Rule:
    rule_id: str
    name: str
    severity: str
    description: str


RULES = {r.rule_id: r for r in (
    Rule("R0", "invalid-structure", ERROR,
         "The document cannot be loaded as a passage (malformed XML, schema or graph invariant)."),
    Rule("R1", "scene-missing-participant", WARNING,
         "A unit with a Process or State child has no Participant child (remote and implicit count)."),
    Rule("R2", "scene-multiple-main-relations", ERROR,
         "A unit has more than one primary Process/State child."),
    Rule("R3", "non-scene-without-center", WARNING,
         "A unit with Elaborator or Connector children has no Center child."),
    Rule("R4", "implicit-with-children", ERROR,
         "An implicit unit has outgoing edges or covers terminals."),
    Rule("R5", "remote-to-own-ancestor", ERROR,
         "A remote edge points to an ancestor of its parent (closes a cycle)."),
    Rule("R6", "punctuation-edge-to-word", ERROR,
         "A U (Punctuation) edge leads to a unit covering a non-punctuation terminal."),
)}


@dataclass(frozen=True)
class Violation:
    rule_id: str
    severity: str
    unit_id: Optional[str]
    message: str

    def __str__(self):
        where = " [%s]" % self.unit_id if self.unit_id else ""
        return "%s %s %s%s: %s" % (self.severity, self.rule_id, RULES[self.rule_id].name, where, self.message)


def _violation(rule_id, unit_id, message):
    return Violation(rule_id, RULES[rule_id].severity, unit_id, message)


def _labels(p, unit_id, remote=None):
    return [e.category for e in p.outgoing(unit_id, remote)]


def _text(p, unit_id):
    ys = sorted(yield_of(p, unit_id))
    return " ".join(p.terminal(i).text for i in ys) if ys else "IMPLICIT"


def validate(p):
    """Apply R1-R6 and return the violations ordered by rule then unit."""
    found = []
    for u in p.units:
        uid = u.unit_id
        labels = _labels(p, uid)
        primary = _labels(p, uid, remote=False)
        main = [c for c in primary if c in (Category.P, Category.S)]
        if any(c in (Category.P, Category.S) for c in labels) and Category.A not in labels:
            found.append(_violation("R1", uid, "Scene '%s' has no Participant" % _text(p, uid)))
        if len(main) > 1:
            found.append(_violation("R2", uid, "%d main relations (%s) in '%s'" % (
                len(main), "".join(map(str, main)), _text(p, uid))))
        if any(c in (Category.E, Category.N) for c in labels) and Category.C not in labels:
            found.append(_violation("R3", uid, "'%s' has Elaborators/Connectors but no Center" % _text(p, uid)))
        if u.implicit and (labels or u.terminals):
            found.append(_violation("R4", uid, "implicit unit has children"))
        for e in p.outgoing(uid, remote=True):
            if _is_ancestor(p, e.child, uid):
                found.append(_violation("R5", uid, "remote edge to ancestor %s" % e.child))
        for e in p.outgoing(uid):
            if e.category == Category.U:
                words = [i for i in yield_of(p, e.child) if not p.terminal(i).punct]
                if words:
                    found.append(_violation("R6", e.child, "U edge over non-punctuation '%s'" % _text(p, e.child)))
    found.sort(key=lambda v: (v.rule_id, id_key(v.unit_id or "")))
    return found


def _is_ancestor(p, candidate, unit_id):
    node = unit_id
    while node is not None:
        if node == candidate:
            return True
        node = p.primary_parent(node)
    return False


def load_violation(error) -> Violation:
    """Map a load failure to a registry violation."""
    subject = getattr(error, "subject", None)
    unit_id = subject if isinstance(subject, str) else getattr(subject, "parent", None)
    if isinstance(error, CycleError) and error.remote:
        return _violation("R5", unit_id, str(error))
    if isinstance(error, InvalidUnit) and "implicit" in str(error) and "root" not in str(error):
        return _violation("R4", unit_id, str(error))
    return _violation("R0", unit_id, "%s: %s" % (type(error).__name__, error))


def validate_document(data):
    """Validate a serialized passage; load errors become R0/R4/R5 violations."""
    from .xmlio import read_passage
    try:
        p = read_passage(data)
    except (ModelError, SchemaError, XmlSyntaxError) as e:
        return [load_violation(e)]
    return validate(p)


def has_errors(violations):
    return any(v.severity == ERROR for v in violations)


# normalization

def _child_order(p, e, memo):
    ys = yield_of(p, e.child)
    return (min(ys) if ys else len(p.terminals) + 1, sorted(ys), category_key(e.category),
            _remote_signature(p, e.child, memo))


def _remote_signature(p, unit_id, memo):
    if unit_id not in memo:
        memo[unit_id] = tuple(sorted((sorted(yield_of(p, e.parent)), category_key(e.category))
                                     for e in p.incoming(unit_id, remote=True)))
    return memo[unit_id]


def canonical_order(p):
    """Unit ids in breadth-first order over primary edges, siblings by position."""
    order = []
    memo = {}
    queue = deque([p.root_id])
    seen = {p.root_id}
    while queue:
        uid = queue.popleft()
        order.append(uid)
        for e in sorted(p.outgoing(uid, remote=False), key=lambda e: _child_order(p, e, memo)):
            if e.child not in seen:
                seen.add(e.child)
                queue.append(e.child)
    return order


def normalize(p):
    """Canonical copy of ``p``: ids renumbered breadth-first, duplicate edges dropped.

    No edge is added or removed apart from exact duplicates, so the scored
    edge multiset is unchanged.
    """
    mapping = {uid: "1.%d" % i for i, uid in enumerate(canonical_order(p), start=1)}
    units = [Unit(mapping[u.unit_id], u.implicit, tuple(sorted(u.terminals)), u.extras) for u in p.units]
    edges = {}
    for e in p.edges:
        ne = Edge(mapping[e.parent], mapping[e.child], e.category, e.remote, e.extras)
        edges.setdefault((ne.parent, ne.child, ne.category, ne.remote), ne)
    return build_passage(p.passage_id, p.terminals, units, edges.values(), p.extras)


def strip_extras(p):
    from .core import Terminal
    return build_passage(
        p.passage_id,
        [Terminal(t.position, t.text, t.punct) for t in p.terminals],
        [Unit(u.unit_id, u.implicit, u.terminals) for u in p.units],
        [Edge(e.parent, e.child, e.category, e.remote) for e in p.edges])


def same_structure(a, b):
    """True when ``a`` and ``b`` are the same graph up to unit ids, passage id and extras."""
    if [(t.text, t.punct) for t in a.terminals] != [(t.text, t.punct) for t in b.terminals]:
        return False
    na, nb = normalize(strip_extras(a)), normalize(strip_extras(b))
    return (na.units, na.edges, na.root_id) == (nb.units, nb.edges, nb.root_id)
