"""Acceptance criteria 1-9, one test per criterion.

Each test records a PASS/FAIL line that is printed in the pytest terminal
summary (and immediately, with ``-s``).  Criterion 9 needs the English Wiki
corpus: point ``UCCAKIT_EWIKI`` at a directory with train/dev/test
subdirectories of passage XML files, otherwise it is skipped.

    python3 -m pytest tests/test_acceptance.py
"""

import os
import random
import time
import xml.etree.ElementTree as ET
from contextlib import contextmanager
from pathlib import Path

import pytest

from uccakit import fixtures
from uccakit.cli import corpus_stats, main
from uccakit.conversion import BILEXICAL_TREE, CONSTITUENCY, upper_bound
from uccakit.core import Edge, is_discontinuous
from uccakit.evaluation import EvalOptions, aggregate_corpus, score_implicit, score_pair
from uccakit.generate import perturb, random_passage, stratified_suite
from uccakit.parser import parse, run_oracle, train
from uccakit.validation import same_structure
from uccakit.xmlio import read_file, read_passage, strip_annotation, write_file, write_passage

from conftest import ACCEPTANCE, bracket_f1, find_edge, rebuild, relabel, without


@contextmanager
def criterion(number, text):
    try:
        yield
    except pytest.skip.Exception:
        _record(number, text, "SKIP")
        raise
    except BaseException:
        _record(number, text, "FAIL")
        raise
    _record(number, text, "PASS")


def _record(number, text, status):
    ACCEPTANCE.append((number, text, status))
    print("criterion %s: %s  %s" % (number, status, text))


def test_1_identity():
    with criterion(1, "score_pair(p, p) is 100.0 LF on 1000 generated passages in < 5 s"):
        suite = stratified_suite(1000, seed=0)
        start = time.perf_counter()
        reports = [score_pair(p, p) for p in suite]
        elapsed = time.perf_counter() - start
        for p, r in zip(suite, reports):
            assert r.primary.lf == 100.0, p.passage_id
            if r.remote.gold_total:
                assert r.remote.lf == 100.0, p.passage_id
            else:  # nothing to score: both ratios undefined
                assert r.remote.lp is None and r.remote.lr is None
        assert sum(1 for r in reports if r.remote.gold_total) >= 400
        assert elapsed < 5.0, elapsed


def test_2_tree_collapse():
    with criterion(2, "remote-free DAG F1 equals brute-force labeled bracket F1 on 100 pairs"):
        rng = random.Random(20)
        for _ in range(100):
            gold = random_passage(rng, max_terminals=15)
            pred = perturb(rng, gold, relabel=0.3, flatten=0.3, group=0.3)
            r = score_pair(pred, gold).primary
            matched, n_pred, n_gold, f1 = bracket_f1(pred, gold)
            assert (r.matched, r.predicted_total, r.gold_total) == (matched, n_pred, n_gold)
            assert r.lf == float(f1 * 100)


def test_3_figure1():
    with criterion(3, "figure1 fixture: Paris C->E gives 90.0/90.0/90.0; no remote gives LR 0.0, LP undefined, LF 0.0"):
        fig1 = fixtures.figure1()
        r = score_pair(relabel(fig1, find_edge(fig1, {7}, "C"), "E"), fig1).primary
        assert (r.lp, r.lr, r.lf) == (90.0, 90.0, 90.0)
        r = score_pair(without(fig1, find_edge(fig1, {4}, "A", remote=True)), fig1).remote
        assert (r.lr, r.lp, r.lf) == (0.0, None, 0.0)


def test_4_figure2_implicit():
    with criterion(4, "figure2 fixture: implicit self-score 1/1/1; reattached and relabeled implicit match 0"):
        fig2 = fixtures.figure2()
        t = score_implicit(fig2, fig2)
        assert (t.matched, t.predicted_total, t.gold_total) == (1, 1, 1)
        imp = next(e for e in fig2.edges if fig2.unit(e.child).implicit)
        other = next(e.parent for e in fig2.edges if not e.remote and e.parent != imp.parent
                     and fig2.unit(e.parent).terminals == () and fig2.outgoing(e.parent, remote=False))
        moved = rebuild(fig2, [e for e in fig2.edges if e != imp] + [Edge(other, imp.child, imp.category)])
        assert score_implicit(moved, fig2).matched == 0
        assert score_implicit(relabel(fig2, imp, "D"), fig2).matched == 0


def test_5_constituency_bound():
    with criterion(5, "constituency upper bound is primary 100.0 with remote LP undefined on every generated corpus"):
        corpora = [fixtures.load_all()] + [stratified_suite(120, seed=s) for s in range(5)]
        for corpus in corpora:
            r = upper_bound(corpus, CONSTITUENCY)
            assert r.primary.lf == 100.0
            assert r.remote.lp is None and r.remote.predicted_total == 0
            for p in corpus:
                one = upper_bound([p], CONSTITUENCY, opts=EvalOptions())
                assert one.primary.lf == 100.0 and one.remote.lp is None


def test_6_oracle_completeness():
    with criterion(6, "oracle rebuilds 100% of a 1000-passage remote x discontinuous x implicit suite in < 30 s"):
        suite = stratified_suite(1000, seed=0)
        start = time.perf_counter()
        failures = [g.passage_id for g in suite
                    if not same_structure(run_oracle(g)[1].to_passage(g.passage_id), g)]
        elapsed = time.perf_counter() - start
        assert failures == []
        assert elapsed < 30.0, elapsed


def test_7_overfit(tmp_path):
    with criterion(7, "30-epoch model reaches >= 99.0 primary LF on its 10 training passages; outputs validate"):
        gold = fixtures.load_all()
        model = train(gold, epochs=30, seed=0)
        parsed = [parse(g.terminals, model, g.passage_id) for g in gold]
        assert aggregate_corpus(zip(parsed, gold)).primary.lf >= 99.0
        untrained = train(gold, epochs=0)
        out = tmp_path / "parsed"
        out.mkdir()
        for p in parsed + [parse(g.terminals, untrained, g.passage_id + "_untrained") for g in gold]:
            write_file(p, out / (p.passage_id + ".xml"))
        assert main(["validate", str(out)]) == 0


def test_8_xml_roundtrip():
    with criterion(8, "XML read/write identity and byte stability; strip_annotation drops only layer 1, idempotent"):
        for name in fixtures.names():
            data = fixtures.xml_bytes(name)
            p = read_passage(data)
            assert write_passage(p) == data
            assert read_passage(write_passage(p)) == p
            stripped = strip_annotation(data)
            assert strip_annotation(stripped) == stripped
            full, bare = ET.fromstring(data), ET.fromstring(stripped)
            layers = [el.get("layerID") for el in full.iter("layer")]
            assert "1" in layers and [el.get("layerID") for el in bare.iter("layer")] == [x for x in layers if x != "1"]
            for el in list(full):
                if el.tag == "layer" and el.get("layerID") == "1":
                    full.remove(el)
            assert _bare(full) == _bare(bare)
        loaded = fixtures.load_all()
        assert any(e.remote for p in loaded for e in p.edges)
        assert any(u.implicit for p in loaded for u in p.units)
        assert any(is_discontinuous(p, u.unit_id) for p in loaded for u in p.units)


def _bare(el):
    """Element tree as comparable tuples, ignoring whitespace-only text."""
    text = (el.text or "").strip()
    return el.tag, sorted(el.attrib.items()), text, [_bare(c) for c in el]


EWIKI = os.environ.get("UCCAKIT_EWIKI")


def test_9_english_wiki():
    with criterion(9, "English Wiki: 5142 sentences, 158573 tokens; bilexical-tree bound on test within 2.0 of 91"):
        if not EWIKI:
            pytest.skip("optional: set UCCAKIT_EWIKI to the English Wiki corpus directory")
        stats = corpus_stats(EWIKI)
        assert stats["total"]["sentences"] == 5142
        assert stats["total"]["tokens"] == 158573
        test = [read_file(f) for f in sorted(Path(EWIKI, "test").rglob("*.xml"))]
        r = upper_bound(test, BILEXICAL_TREE)
        assert abs(r.primary.lf - 91.0) <= 2.0, r.primary.lf


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
