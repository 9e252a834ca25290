from collections import Counter
from fractions import Fraction

import pytest

from uccakit import fixtures
from uccakit.core import Edge, build_passage, yield_of
from uccakit.generate import stratified_suite


def rebuild(p, edges=None, units=None, passage_id=None):
    return build_passage(passage_id or p.passage_id, p.terminals,
                         p.units if units is None else units,
                         p.edges if edges is None else edges)


def find_edge(p, child_yield, category=None, remote=None):
    """The single edge whose child covers ``child_yield`` (and matches the filters)."""
    hits = [e for e in p.edges
            if set(yield_of(p, e.child)) == set(child_yield)
            and (category is None or str(e.category) == category)
            and (remote is None or e.remote == remote)]
    assert len(hits) == 1, hits
    return hits[0]


def relabel(p, edge, category):
    from uccakit.core import parse_category
    new = Edge(edge.parent, edge.child, parse_category(category), edge.remote)
    return rebuild(p, [new if e == edge else e for e in p.edges])


def without(p, edge):
    return rebuild(p, [e for e in p.edges if e != edge])


# independent brute-force labeled bracket scorer for trees

def brackets(p):
    kids = {}
    for e in p.edges:
        assert not e.remote
        kids.setdefault(e.parent, []).append(e)
    terms = {u.unit_id: set(u.terminals) for u in p.units}

    def leaves(uid):
        out = set(terms[uid])
        for e in kids.get(uid, ()):
            out |= leaves(e.child)
        return out

    return Counter((frozenset(leaves(e.child)), str(e.category)) for e in p.edges if leaves(e.child))


def bracket_f1(pred, gold):
    a, b = brackets(pred), brackets(gold)
    matched = sum((a & b).values())
    total = sum(a.values()) + sum(b.values())
    return matched, sum(a.values()), sum(b.values()), Fraction(2 * matched, total)


@pytest.fixture
def fig1():
    return fixtures.figure1()


@pytest.fixture
def fig2():
    return fixtures.figure2()


@pytest.fixture(scope="session")
def suite():
    return stratified_suite(200, seed=11)


# acceptance report: test_acceptance.py appends (number, description, status)

ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, text, status in sorted(ACCEPTANCE):
        terminalreporter.write_line("criterion %s: %s  %s" % (number, status, text))
