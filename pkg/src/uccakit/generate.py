"""Random valid passages for property tests, benchmarks and demos."""

import random
from itertools import product

from .core import LABELS, Category, Edge, Terminal, Unit, build_passage, is_discontinuous

WORDS = ("the a man dog saw ran to in house big old John Mary went home and "
         "after city moved quickly she gave idea up that think rest now of with").split()
PUNCT = (",", ".", "!", "?", ";")
_NON_PUNCT = tuple(c for c in LABELS if c is not Category.U)


class _Node:
    __slots__ = ("children", "terminals", "implicit", "key")

    def __init__(self, children=(), terminals=(), implicit=False):
        self.children = list(children)  # (category, node)
        self.terminals = tuple(terminals)
        self.implicit = implicit
        self.key = None

    def positions(self):
        if self.terminals:
            return set(self.terminals)
        out = set()
        for _, c in self.children:
            out |= c.positions()
        return out


def _random_tree(rng, n, punct, max_branch=4):
    items = []
    i = 1
    while i <= n:
        if i < n and i not in punct and i + 1 not in punct and rng.random() < 0.05:
            items.append((_Node(terminals=(i, i + 1)), Category.C))
            i += 2
        else:
            cat = Category.U if i in punct else rng.choice(_NON_PUNCT)
            items.append((_Node(terminals=(i,)), cat))
            i += 1
    while len(items) > 1:
        k = rng.randint(2, min(max_branch, len(items)))
        start = rng.randint(0, len(items) - k)
        node = _Node(children=[(cat, child) for child, cat in items[start:start + k]])
        items[start:start + k] = [(node, rng.choice(_NON_PUNCT))]
    top = items[0][0]
    if top.terminals:
        top = _Node(children=[(items[0][1], top)])
    return top


def _walk(node, parent=None):
    yield node, parent
    for _, child in node.children:
        yield from _walk(child, node)


def _make_discontinuous(rng, root):
    candidates = []
    for node, parent in _walk(root):
        if parent is None or node.terminals:
            continue
        ordered = sorted(node.children, key=lambda cc: min(cc[1].positions()))
        if len(ordered) >= 3:
            candidates.append((node, parent, ordered))
    if not candidates:
        return False
    node, parent, ordered = rng.choice(candidates)
    moved = ordered[rng.randint(1, len(ordered) - 2)]
    node.children.remove(moved)
    parent.children.append(moved)
    return True


def random_passage(rng=None, min_terminals=1, max_terminals=12, remote=False, discontinuous=False,
                   implicit=False, punct_rate=0.15, passage_id="random"):
    """A random valid passage with the requested structural features.

    ``remote``/``discontinuous``/``implicit`` guarantee at least one remote
    edge, discontinuous unit or implicit unit respectively; when false, the
    feature is absent.
    """
    rng = rng or random.Random()
    lo = max(min_terminals, 3 if discontinuous else 1, 2 if remote else 1)
    for _ in range(1000):
        n = rng.randint(lo, max(lo, max_terminals))
        punct = {i for i in range(2, n + 1) if rng.random() < punct_rate}
        root = _random_tree(rng, n, punct)
        if discontinuous and not _make_discontinuous(rng, root):
            continue
        nodes = [node for node, _ in _walk(root)]
        if implicit:
            hosts = [node for node in nodes if not node.terminals]
            for _ in range(rng.randint(1, 2)):
                rng.choice(hosts).children.append((rng.choice(_NON_PUNCT), _Node(implicit=True)))
            nodes = [node for node, _ in _walk(root)]
        order = list(range(1, len(nodes) + 1))
        rng.shuffle(order)
        for node, k in zip(nodes, order):
            node.key = "1.%d" % k
        units = [Unit(node.key, node.implicit, node.terminals) for node in nodes]
        edges = [Edge(node.key, child.key, cat) for node in nodes for cat, child in node.children]
        if remote:
            extra = _remote_edges(rng, root, nodes, rng.randint(1, 2))
            if not extra:
                continue
            edges += extra
        tokens = [Terminal(i, rng.choice(PUNCT) if i in punct else rng.choice(WORDS), i in punct)
                  for i in range(1, n + 1)]
        p = build_passage(passage_id, tokens, units, edges)
        if discontinuous != any(is_discontinuous(p, u.unit_id) for u in p.units):
            continue
        return p
    raise RuntimeError("could not generate a passage with the requested features")


def _remote_edges(rng, root, nodes, count):
    def descendants(node, extra):
        out = set()
        stack = [node]
        while stack:
            x = stack.pop()
            for _, c in x.children:
                if c.key not in out:
                    out.add(c.key)
                    stack.append(c)
            for c in extra.get(x.key, ()):
                if c.key not in out:
                    out.add(c.key)
                    stack.append(c)
        return out

    added = []
    extra = {}
    hosts = [node for node in nodes if not node.terminals and not node.implicit]
    for _ in range(count * 20):
        if len(added) == count:
            break
        parent = rng.choice(hosts)
        child = rng.choice(nodes)
        if child is root or child is parent:
            continue
        if parent.key in descendants(child, extra) or parent.key == child.key:
            continue
        if any(c is child for _, c in parent.children) or any(c is child for c in extra.get(parent.key, ())):
            continue
        extra.setdefault(parent.key, []).append(child)
        added.append(Edge(parent.key, child.key, rng.choice(_NON_PUNCT), True))
    return added


STRATA = tuple(product((False, True), repeat=3))


def stratified_suite(size=1000, seed=0, **kwargs):
    """``size`` passages spread evenly over remote x discontinuous x implicit."""
    rng = random.Random(seed)
    out = []
    for i in range(size):
        remote, disc, impl = STRATA[i % len(STRATA)]
        out.append(random_passage(rng, remote=remote, discontinuous=disc, implicit=impl,
                                  passage_id="gen%04d" % i, **kwargs))
    return out


def perturb(rng, p, relabel=0.2, flatten=0.2, group=0.2, keep_remote=True):
    """A noisy copy of ``p`` over the same terminals (for metric tests).

    Edges are relabeled, units dissolved into their parents, and adjacent
    sibling pairs grouped under new units, each with the given probability.
    """
    units = {u.unit_id: u for u in p.units}
    children = {u.unit_id: [] for u in p.units}
    for e in p.edges:
        if not e.remote:
            children[e.parent].append([e.category, e.child])
    # dissolve some inner units
    for uid in list(children):
        if uid == p.root_id or units[uid].terminals or units[uid].implicit:
            continue
        if rng.random() < flatten:
            parent = next(e.parent for e in p.incoming(uid, remote=False))
            while parent not in children:
                parent = next(e.parent for e in p.incoming(parent, remote=False))
            children[parent] = [c for c in children[parent] if c[1] != uid] + children.pop(uid)
            del units[uid]
    counter = len(p.units) + 1
    for uid in list(children):
        kids = children[uid]
        solid = [c for c in kids if _yield(p, c[1])]
        if len(solid) >= 3 and rng.random() < group:
            kids.sort(key=lambda c: (not _yield(p, c[1]), min(_yield(p, c[1]) or {0})))
            i = rng.randint(0, len(solid) - 2)
            new = "1.%d" % (10000 + counter)
            counter += 1
            units[new] = Unit(new)
            children[new] = kids[i:i + 2]
            kids[i:i + 2] = [[rng.choice(_NON_PUNCT), new]]
        for c in kids:
            if rng.random() < relabel:
                c[0] = rng.choice(LABELS)
    edges = [Edge(parent, child, cat) for parent, kids in children.items() for cat, child in kids]
    if keep_remote:
        alive = set(units)
        edges += [e for e in p.edges if e.remote and e.parent in alive and e.child in alive]
    return build_passage(p.passage_id, p.terminals, units.values(), edges)


def _yield(p, uid):
    from .core import yield_of
    return set(yield_of(p, uid)) if uid in p else set()
