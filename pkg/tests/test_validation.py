import random

import pytest

from uccakit import fixtures
from uccakit.core import Category, Edge, PassageBuilder, Unit, build_passage
from uccakit.evaluation import score_pair
from uccakit.validation import (ERROR, RULES, WARNING, Violation, canonical_order, has_errors, load_violation,
                                normalize, same_structure, validate, validate_document)
from uccakit.xmlio import write_passage

from conftest import find_edge, rebuild, without


def rules_of(vs):
    return [v.rule_id for v in vs]


def test_registry():
    assert sorted(RULES) == ["R0", "R1", "R2", "R3", "R4", "R5", "R6"]
    assert RULES["R1"].severity == WARNING and RULES["R3"].severity == WARNING
    assert all(RULES[r].severity == ERROR for r in ("R2", "R4", "R5", "R6"))


@pytest.mark.parametrize("name", fixtures.names())
def test_fixtures_are_clean(name):
    assert validate(fixtures.load(name)) == []


def test_r1_remote_deleted(fig1):
    grad = find_edge(fig1, {2}, "H").child
    vs = validate(without(fig1, find_edge(fig1, {4}, "A", remote=True)))
    assert [(v.rule_id, v.unit_id, v.severity) for v in vs] == [("R1", grad, WARNING)]
    assert not has_errors(vs)


def test_r1_implicit_counts():
    b = PassageBuilder("imp", ["left"])
    root = b.unit()
    b.wrap(root, "P", 1)
    b.implicit(root, "A")
    assert validate(b.build()) == []  # the implicit A alone satisfies R1
    b = PassageBuilder("imp", ["left"])
    b.wrap(b.unit(), "P", 1)
    assert rules_of(validate(b.build())) == ["R1"]


def test_r2_r3_r6():
    b = PassageBuilder("bad", "he ran walked big , dog".split())
    root = b.unit()
    b.wrap(root, "A", 1)
    b.wrap(root, "P", 2)
    b.wrap(root, "P", 3)
    np_ = b.node(root, "A")
    b.wrap(np_, "E", 4)
    b.wrap(np_, "U", 5)
    b.wrap(np_, "U", 6)
    vs = validate(b.build())
    assert rules_of(vs) == ["R2", "R3", "R6"]
    assert has_errors(vs)
    assert str(vs[0]).startswith("error R2 scene-multiple-main-relations")


def test_load_violations():
    data = write_passage(fixtures.figure1())
    cyc = data.replace(b'<edge toID="1.4" type="P">', b'<edge toID="1.1" type="P">', 1)
    vs = validate_document(cyc)
    assert rules_of(vs) == ["R0"] and "CycleError" in vs[0].message
    remote_cycle = data.replace(b'<edge toID="1.7" type="A">\n        <attributes remote="True" />',
                                b'<edge toID="1.1" type="A">\n        <attributes remote="True" />')
    assert remote_cycle != data
    assert rules_of(validate_document(remote_cycle)) == ["R5"]
    assert rules_of(validate_document(b"<root")) == ["R0"]


def test_load_violation_implicit():
    from uccakit.errors import InvalidUnit
    v = load_violation(InvalidUnit("implicit unit 1.3 covers terminals", subject="1.3"))
    assert (v.rule_id, v.unit_id) == ("R4", "1.3")


def test_normalize(fig1):
    n = normalize(fig1)
    assert normalize(n) == n
    assert n.root_id == "1.1"
    assert canonical_order(n) == ["1.%d" % i for i in range(1, len(n.units) + 1)]
    s = score_pair(n, fig1)
    assert s.primary.lf == 100.0 and s.remote.lf == 100.0


def test_normalize_ignores_ids(fig1):
    ids = [u.unit_id for u in fig1.units]
    shuffled = ids[:]
    random.Random(3).shuffle(shuffled)
    m = dict(zip(ids, ("1.%d" % (100 + i) for i in range(len(ids)))))
    m = {a: m[b] for a, b in zip(ids, shuffled)}
    p = build_passage("figure1", fig1.terminals, [Unit(m[u.unit_id], u.implicit, u.terminals) for u in fig1.units],
                      [Edge(m[e.parent], m[e.child], e.category, e.remote) for e in fig1.edges])
    assert normalize(p) == normalize(fig1)
    assert same_structure(p, fig1)
    assert sorted((v.rule_id, v.unit_id) for v in validate(p)) == []


def test_normalize_dedupes(fig1):
    assert len(normalize(rebuild(fig1, list(fig1.edges) * 2)).edges) == len(fig1.edges)


def test_normalize_random(suite):
    for p in suite:
        n = normalize(p)
        assert normalize(n) == n
        assert same_structure(n, p)


def test_violation_str():
    v = Violation("R1", WARNING, "1.3", "x")
    assert str(v) == "warning R1 scene-missing-participant [1.3]: x"
