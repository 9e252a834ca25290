"""Sparse feature templates.

Every template yields exactly one feature string per state (``<none>`` when
the position is empty), so a state has exactly ``len(TEMPLATES)`` features.
The registry hash pins the template list into serialized models.

Notation: ``s0``-``s2`` stack top down, ``b0``-``b2`` buffer front on;
``w`` head word (first terminal of the yield), ``kind`` node kind, ``lab``
incoming primary label, ``first``/``last`` yield boundary words, ``np``
whether the node already has its primary parent, ``nc`` child count (capped),
``h1``/``h2`` last one/two transitions.
"""

import hashlib

NONE = "<none>"


def _word(s, node):
    if node is None:
        return NONE
    ys = s.yield_of(node)
    return s.tokens[min(ys) - 1].text.lower() if ys else "<implicit>"


def _last(s, node):
    if node is None:
        return NONE
    ys = s.yield_of(node)
    return s.tokens[max(ys) - 1].text.lower() if ys else "<implicit>"


def _kind(s, node):
    return NONE if node is None else s.kind[node]


def _label(s, node):
    if node is None:
        return NONE
    lab = s.incoming_label(node)
    return str(lab) if lab is not None else "-"


def _has_parent(s, node):
    return NONE if node is None else str(int(s.has_parent(node)))


def _nchildren(s, node):
    if node is None:
        return NONE
    return str(min(len(s.children.get(node, ())), 4))


def _child_labels(s, node):
    if node is None:
        return NONE
    return "".join(sorted(str(e.category) for e in s.edges if e.parent == node)) or "-"


def _history(s, k):
    h = s.history[-k:]
    return " ".join(map(str, h)) if h else NONE


def _gap(s):
    a, b = s.s(0), s.s(1)
    if a is None or b is None:
        return NONE
    ya, yb = s.yield_of(a), s.yield_of(b)
    if not ya or not yb:
        return "<implicit>"
    return str(max(-3, min(3, min(ya) - max(yb))))


TEMPLATES = (
    ("bias", lambda s: "1"),
    ("s0.w", lambda s: _word(s, s.s(0))),
    ("s0.last", lambda s: _last(s, s.s(0))),
    ("s0.kind", lambda s: _kind(s, s.s(0))),
    ("s0.lab", lambda s: _label(s, s.s(0))),
    ("s0.np", lambda s: _has_parent(s, s.s(0))),
    ("s0.nc", lambda s: _nchildren(s, s.s(0))),
    ("s0.cl", lambda s: _child_labels(s, s.s(0))),
    ("s1.w", lambda s: _word(s, s.s(1))),
    ("s1.last", lambda s: _last(s, s.s(1))),
    ("s1.kind", lambda s: _kind(s, s.s(1))),
    ("s1.lab", lambda s: _label(s, s.s(1))),
    ("s1.np", lambda s: _has_parent(s, s.s(1))),
    ("s1.cl", lambda s: _child_labels(s, s.s(1))),
    ("s2.w", lambda s: _word(s, s.s(2))),
    ("s2.kind", lambda s: _kind(s, s.s(2))),
    ("b0.w", lambda s: _word(s, s.b(0))),
    ("b0.kind", lambda s: _kind(s, s.b(0))),
    ("b1.w", lambda s: _word(s, s.b(1))),
    ("b2.w", lambda s: _word(s, s.b(2))),
    ("s0.w+s1.w", lambda s: _word(s, s.s(0)) + "|" + _word(s, s.s(1))),
    ("s0.w+b0.w", lambda s: _word(s, s.s(0)) + "|" + _word(s, s.b(0))),
    ("s0.kind+s1.kind", lambda s: _kind(s, s.s(0)) + "|" + _kind(s, s.s(1))),
    ("s0.lab+s1.lab", lambda s: _label(s, s.s(0)) + "|" + _label(s, s.s(1))),
    ("s0.w+s0.lab", lambda s: _word(s, s.s(0)) + "|" + _label(s, s.s(0))),
    ("s0.cl+s1.cl", lambda s: _child_labels(s, s.s(0)) + "|" + _child_labels(s, s.s(1))),
    ("s0.w+s1.last", lambda s: _word(s, s.s(0)) + "|" + _last(s, s.s(1))),
    ("s1.last+b0.w", lambda s: _last(s, s.s(1)) + "|" + _word(s, s.b(0))),
    ("s1.nc", lambda s: _nchildren(s, s.s(1))),
    ("s0.kind+s1.cl", lambda s: _kind(s, s.s(0)) + "|" + _child_labels(s, s.s(1))),
    ("s0-s1.gap", _gap),
    ("h1", lambda s: _history(s, 1)),
    ("h2", lambda s: _history(s, 2)),
    ("h1+s0.w", lambda s: _history(s, 1) + "|" + _word(s, s.s(0))),
)

TEMPLATE_NAMES = tuple(name for name, _ in TEMPLATES)
TEMPLATE_HASH = hashlib.sha256("\n".join(TEMPLATE_NAMES).encode("utf-8")).hexdigest()


def extract_features(s):
    """``name=value`` strings, one per template, in template order."""
    return ["%s=%s" % (name, fn(s)) for name, fn in TEMPLATES]
