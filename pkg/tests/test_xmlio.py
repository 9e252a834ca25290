import random

import pytest
from hypothesis import given, settings, strategies as st

from uccakit import fixtures
from uccakit.errors import ModelError, NoRootError, SchemaError, UnknownCategory, XmlSyntaxError
from uccakit.generate import random_passage
from uccakit.xmlio import read_file, read_passage, read_tokens, strip_annotation, write_file, write_passage

TINY = b"""<?xml version="1.0" encoding="utf-8"?>
<root passageID="tiny" annotator="x">
  <attributes lang="en" />
  <layer layerID="0">
    <node ID="0.2" type="Word"><attributes text="ran" paragraph="1" /></node>
    <node ID="0.1" type="Word"><attributes text="Dogs" paragraph="1" /></node>
  </layer>
  <layer layerID="1">
    <node ID="1.1" type="FN">
      <attributes />
      <edge toID="1.2" type="A"><attributes /></edge>
      <edge toID="1.3" type="P" confidence="0.9"><attributes /></edge>
    </node>
    <node ID="1.2" type="FN"><attributes /><edge toID="0.1" type="Terminal"><attributes /></edge></node>
    <node ID="1.3" type="FN" color="red"><attributes /><edge toID="0.2" type="Terminal"><attributes /></edge></node>
  </layer>
</root>
"""


@pytest.mark.parametrize("name", fixtures.names())
def test_fixture_roundtrip(name):
    data = fixtures.xml_bytes(name)
    p = read_passage(data)
    assert p == fixtures.BUILDERS[name]()
    assert write_passage(p) == data
    assert read_passage(write_passage(p)) == p


def test_terminal_order_from_ids():
    p = read_passage(TINY)
    assert [t.text for t in p.terminals] == ["Dogs", "ran"]


def test_extras_preserved():
    p = read_passage(TINY)
    out = write_passage(p)
    for fragment in (b'annotator="x"', b'lang="en"', b'paragraph="1"', b'confidence="0.9"', b'color="red"'):
        assert fragment in out
    assert read_passage(out) == p
    assert write_passage(read_passage(out)) == out


def test_figure1_document(fig1):
    out = write_passage(fig1).decode()
    assert out.count('<layer layerID="0">') == 1 and out.count('<layer layerID="1">') == 1
    assert out.count('type="Word"') + out.count('type="Punctuation"') == 7
    assert 'remote="True"' in out
    assert out.startswith('<?xml version="1.0" encoding="utf-8"?>\n')
    assert "\r" not in out and "\t" not in out


def test_implicit_node_written(fig2):
    root = read_passage(write_passage(fig2))
    implicit = [u for u in root.units if u.implicit]
    assert len(implicit) == 1 and implicit[0].terminals == ()
    assert b'implicit="True"' in write_passage(fig2)


def test_write_is_deterministic(fig1):
    assert write_passage(fig1) == write_passage(fig1)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32), st.booleans(), st.booleans(), st.booleans())
def test_random_roundtrip(seed, remote, disc, impl):
    p = random_passage(random.Random(seed), remote=remote, discontinuous=disc, implicit=impl)
    data = write_passage(p)
    q = read_passage(data)
    assert q == p
    assert write_passage(q) == data


def test_strip_annotation():
    data = fixtures.xml_bytes("figure1")
    stripped = strip_annotation(data)
    assert b'layerID="1"' not in stripped
    assert b'<layer layerID="0">' in stripped
    start = data.index(b'  <layer layerID="1">')
    end = data.index(b"</layer>", start) + len(b"</layer>\n")
    assert stripped == data[:start] + data[end:]
    assert strip_annotation(stripped) == stripped
    with pytest.raises(NoRootError, match="unannotated"):
        read_passage(stripped)
    pid, terminals = read_tokens(stripped)
    assert pid == "figure1" and len(terminals) == 7


def test_strip_rejects_malformed():
    with pytest.raises(XmlSyntaxError):
        strip_annotation(b"<root><layer>")


@pytest.mark.parametrize("mutate, error, needle", [
    (lambda d: d.replace(b'toID="1.3"', b'toID="1.9"'), SchemaError, "1.9"),
    (lambda d: d.replace(b'passageID="tiny"', b""), SchemaError, "passageID"),
    (lambda d: d.replace(b'layerID="1"', b'layerID="2"'), SchemaError, "layer"),
    (lambda d: d.replace(b'type="A"', b'type="Q"'), UnknownCategory, "line 11"),
    (lambda d: d.replace(b"</root>", b""), XmlSyntaxError, "malformed"),
    (lambda d: d.replace(b'<edge toID="0.2" type="Terminal">', b'<edge toID="0.1" type="Terminal">'),
     ModelError, "line"),
])
def test_read_errors(mutate, error, needle):
    with pytest.raises(error) as info:
        read_passage(mutate(TINY))
    assert needle in str(info.value)


def test_files(tmp_path, fig1):
    path = tmp_path / "f.xml"
    write_file(fig1, path)
    assert read_file(path) == fig1
    path.write_bytes(strip_annotation(path.read_bytes()))
    with pytest.raises(ModelError, match=str(path)):
        read_file(path)


def test_passage_root_tag_accepted():
    assert read_passage(TINY.replace(b"<root ", b"<passage ").replace(b"</root>", b"</passage>")).passage_id == "tiny"
