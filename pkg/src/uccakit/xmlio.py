"""Reader and writer for the layered passage XML format (see FORMAT.md).

Layout of a document::

    <root passageID="...">
      <attributes />
      <layer layerID="0">
        <node ID="0.1" type="Word"><attributes text="After" paragraph="1" paragraph_position="1" /></node>
      </layer>
      <layer layerID="1">
        <node ID="1.1" type="FN">
          <attributes />
          <edge toID="1.2" type="L"><attributes /></edge>
        </node>
        <node ID="1.2" type="FN">
          <attributes />
          <edge toID="0.1" type="Terminal"><attributes /></edge>
        </node>
      </layer>
    </root>

Terminal positions come from the ``0.<k>`` node ids.  Remote edges and implicit
units carry ``remote="True"`` / ``implicit="True"`` in their attribute block.
Attributes the model does not interpret are kept on the corresponding object's
``extras`` and written back unchanged.
"""

import re
import xml.parsers.expat
import xml.etree.ElementTree as ET

from .core import Category, Edge, Passage, Terminal, Unit, build_passage, id_key, parse_category
from .errors import ModelError, SchemaError, UnknownCategory, XmlSyntaxError

TERMINAL_EDGE = "Terminal"
_TERMINAL_TYPES = {"Word": False, "Punctuation": True}
_KNOWN_ROOT_TAGS = ("root", "passage")


class _Element:
    __slots__ = ("tag", "attrib", "children", "line")

    def __init__(self, tag, attrib, line):
        self.tag = tag
        self.attrib = attrib
        self.children = []
        self.line = line

    def find(self, tag):
        for c in self.children:
            if c.tag == tag:
                return c
        return None

    def findall(self, tag):
        return [c for c in self.children if c.tag == tag]


def _parse_tree(data):
    """Parse bytes into a light element tree that remembers source lines."""
    parser = xml.parsers.expat.ParserCreate()
    parser.ordered_attributes = True
    stack = []
    top = []

    def start(tag, attrs):
        el = _Element(tag, list(zip(attrs[::2], attrs[1::2])), parser.CurrentLineNumber)
        if stack:
            stack[-1].children.append(el)
        else:
            top.append(el)
        stack.append(el)

    def end(tag):
        stack.pop()

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    try:
        parser.Parse(data, True)
    except xml.parsers.expat.ExpatError as e:
        raise XmlSyntaxError("malformed XML: %s" % e) from None
    return top[0]


def _attrs(el):
    """Attribute list of an element's <attributes> child (empty when absent)."""
    block = el.find("attributes")
    return list(block.attrib) if block is not None else []


def _required(el, name):
    for k, v in el.attrib:
        if k == name:
            return v
    raise SchemaError("line %d: <%s> lacks required attribute %r" % (el.line, el.tag, name))


def _extras(pairs, known):
    return tuple((k, v) for k, v in pairs if k not in known)


def _flag(pairs, name):
    return any(k == name and v == "True" for k, v in pairs)


def _document(data):
    if isinstance(data, str):
        data = data.encode("utf-8")
    root = _parse_tree(data)
    if root.tag not in _KNOWN_ROOT_TAGS:
        raise SchemaError("line %d: unexpected document element <%s>" % (root.line, root.tag))
    passage_id = _required(root, "passageID")
    layers = {}
    for layer in root.findall("layer"):
        lid = _required(layer, "layerID")
        if lid not in ("0", "1"):
            raise SchemaError("line %d: unknown layer %r" % (layer.line, lid))
        if lid in layers:
            raise SchemaError("line %d: duplicate layer %r" % (layer.line, lid))
        layers[lid] = layer
    if "0" not in layers:
        raise SchemaError("document %s has no layer 0" % passage_id)
    return root, passage_id, layers


def _terminals(layer, lines):
    terminals = []
    for node in layer.findall("node"):
        nid = _required(node, "ID")
        ntype = _required(node, "type")
        if ntype not in _TERMINAL_TYPES:
            raise SchemaError("line %d: layer 0 holds non-terminal node %s (type %r)" % (node.line, nid, ntype))
        prefix, _, ordinal = nid.partition(".")
        if prefix != "0" or not ordinal.isdigit():
            raise SchemaError("line %d: terminal id %r is not of the form 0.<position>" % (node.line, nid))
        pairs = _attrs(node)
        text = next((v for k, v in pairs if k == "text"), None)
        if text is None:
            raise SchemaError("line %d: terminal %s has no text attribute" % (node.line, nid))
        lines[nid] = node.line
        extras = _extras(pairs, ("text",)) + tuple(("@" + k, v) for k, v in _extras(node.attrib, ("ID", "type")))
        terminals.append(Terminal(int(ordinal), text, _TERMINAL_TYPES[ntype], extras))
    return sorted(terminals, key=lambda t: t.position)


def read_tokens(data):
    """``(passage_id, terminals)`` from layer 0 alone; layer 1 may be absent or unusable."""
    _, passage_id, layers = _document(data)
    return passage_id, _terminals(layers["0"], {})


def read_passage(data, extensions=False) -> Passage:
    """Parse one passage document.

    ``extensions`` keeps unknown edge labels as raw strings instead of failing.
    """
    root, passage_id, layers = _document(data)
    passage_extras = (tuple(("@" + k, v) for k, v in root.attrib if k != "passageID")
                      + tuple(_attrs(root)))
    lines = {}
    terminals = _terminals(layers["0"], lines)
    terminal_ids = {t.node_id for t in terminals}

    units = []
    edges = []
    if "1" in layers:
        unit_nodes = layers["1"].findall("node")
        unit_ids = {_required(n, "ID") for n in unit_nodes}
        for node in unit_nodes:
            uid = _required(node, "ID")
            ntype = _required(node, "type")
            if uid in terminal_ids or uid.startswith("0."):
                raise SchemaError("line %d: layer 1 holds terminal node %s" % (node.line, uid))
            lines[uid] = node.line
            pairs = _attrs(node)
            covered = []
            for edge in node.findall("edge"):
                to = _required(edge, "toID")
                etype = _required(edge, "type")
                epairs = _attrs(edge)
                if to in terminal_ids:
                    if etype not in (TERMINAL_EDGE, Category.T.value):
                        raise SchemaError("line %d: edge to terminal %s must have type %r, not %r"
                                          % (edge.line, to, TERMINAL_EDGE, etype))
                    covered.append(int(to.partition(".")[2]))
                    continue
                if to not in unit_ids:
                    raise SchemaError("line %d: edge from %s points to unknown node %s" % (edge.line, uid, to))
                try:
                    category = parse_category(etype, extensions)
                except UnknownCategory as e:
                    e.context = "line %d" % edge.line
                    raise
                if category == Category.T:
                    raise SchemaError("line %d: Terminal edge from %s to non-terminal %s" % (edge.line, uid, to))
                extras = _extras(epairs, ("remote",)) + tuple(("@" + k, v) for k, v in
                                                               _extras(edge.attrib, ("toID", "type")))
                edges.append(Edge(uid, to, category, _flag(epairs, "remote"), extras))
            extras = (_extras(pairs, ("implicit",))
                      + tuple(("@" + k, v) for k, v in _extras(node.attrib, ("ID", "type"))))
            units.append(Unit(uid, _flag(pairs, "implicit"), tuple(covered), extras))
    try:
        return build_passage(passage_id, terminals, units, edges, passage_extras)
    except ModelError as e:
        subject = e.subject
        sid = getattr(subject, "parent", subject)
        if sid in lines:
            e.context = "line %d" % lines[sid]
        raise


def _attributes_block(parent, pairs):
    el = ET.SubElement(parent, "attributes")
    for k, v in pairs:
        if not k.startswith("@"):
            el.set(k, v)
    return el


def _node_attrs(el, extras):
    for k, v in extras:
        if k.startswith("@"):
            el.set(k[1:], v)


def to_element(p: Passage) -> ET.Element:
    root = ET.Element("root", passageID=p.passage_id)
    _node_attrs(root, p.extras)
    _attributes_block(root, p.extras)

    layer0 = ET.SubElement(root, "layer", layerID="0")
    for t in p.terminals:
        node = ET.SubElement(layer0, "node", ID=t.node_id, type="Punctuation" if t.punct else "Word")
        _node_attrs(node, t.extras)
        _attributes_block(node, (("text", t.text),) + t.extras)

    layer1 = ET.SubElement(root, "layer", layerID="1")
    for u in sorted(p.units, key=lambda u: id_key(u.unit_id)):
        is_punct = bool(u.terminals) and all(p.terminal(i).punct for i in u.terminals)
        node = ET.SubElement(layer1, "node", ID=u.unit_id, type="PNCT" if is_punct else "FN")
        _node_attrs(node, u.extras)
        _attributes_block(node, ((("implicit", "True"),) if u.implicit else ()) + u.extras)
        for pos in sorted(u.terminals):
            edge = ET.SubElement(node, "edge", toID="0.%d" % pos, type=TERMINAL_EDGE)
            _attributes_block(edge, ())
        for e in sorted(p.outgoing(u.unit_id), key=Edge.sort_key):
            edge = ET.SubElement(node, "edge", toID=e.child, type=str(e.category))
            _node_attrs(edge, e.extras)
            _attributes_block(edge, ((("remote", "True"),) if e.remote else ()) + e.extras)
    return root


def write_passage(p: Passage) -> bytes:
    """Canonical serialization: UTF-8, LF newlines, two-space indentation."""
    root = to_element(p)
    ET.indent(root, space="  ")
    body = ET.tostring(root, encoding="unicode", short_empty_elements=True)
    return ('<?xml version="1.0" encoding="utf-8"?>\n' + body + "\n").encode("utf-8")


_LAYER1_START = re.compile(rb"""<layer\b[^>]*\blayerID\s*=\s*(["'])1\1""")


def strip_annotation(data: bytes) -> bytes:
    """Remove the ``<layer layerID="1">`` element and its subtree, byte for byte.

    Everything else in the document, including layer 0, is left untouched.  The
    indentation and newline that carried the removed element go with it.
    """
    if isinstance(data, str):
        data = data.encode("utf-8")
    parser = xml.parsers.expat.ParserCreate()
    span = []
    depth = [0, None]

    def start(tag, attrs):
        depth[0] += 1
        if tag == "layer" and attrs.get("layerID") == "1" and depth[1] is None and not span:
            depth[1] = depth[0]
            span.append(parser.CurrentByteIndex)

    def end(tag):
        if depth[1] == depth[0]:
            span.append(parser.CurrentByteIndex)
            depth[1] = None
        depth[0] -= 1

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    try:
        parser.Parse(data, True)
    except xml.parsers.expat.ExpatError as e:
        raise XmlSyntaxError("malformed XML: %s" % e) from None
    if not span:
        return data
    begin, end_start = span
    if data[end_start:end_start + 2] == b"</":
        stop = data.index(b">", end_start) + 1
    else:  # self-closing element: expat reports the start tag position
        stop = data.index(b">", begin) + 1
    line_start = data.rfind(b"\n", 0, begin) + 1
    if not data[line_start:begin].strip():
        begin = line_start
        if data[stop:stop + 1] == b"\n":
            stop += 1
        elif data[stop:stop + 2] == b"\r\n":
            stop += 2
    return data[:begin] + data[stop:]


def read_file(path, extensions=False) -> Passage:
    with open(path, "rb") as f:
        data = f.read()
    try:
        return read_passage(data, extensions)
    except ModelError as e:
        e.message = "%s: %s" % (path, e.message)
        raise
    except (SchemaError, XmlSyntaxError) as e:
        e.args = ("%s: %s" % (path, e),)
        raise


def write_file(p: Passage, path):
    with open(path, "wb") as f:
        f.write(write_passage(p))
