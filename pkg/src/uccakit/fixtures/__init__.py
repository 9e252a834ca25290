"""Small hand-annotated passages shipped with the package.

``figure1`` and ``figure2`` are the two textbook examples: a two-Scene sentence
with one remote Participant, and a single Scene with an implicit agent.  The
remaining eight sentences add coordination, control, a discontinuous particle
verb, relative clauses and linkage, so that the fixture set exercises every
structural feature of the formalism.

The XML files next to this module are generated from the builders below
(``python -m uccakit.fixtures`` rewrites them).
"""

from importlib import resources

from ..core import PassageBuilder
from ..xmlio import read_passage, write_passage


def figure1():
    b = PassageBuilder("figure1", "After graduation , John moved to Paris".split())
    root = b.unit()
    b.wrap(root, "L", 1)
    grad = b.node(root, "H")
    b.wrap(grad, "P", 2)
    b.wrap(root, "U", 3)
    moved = b.node(root, "H")
    john = b.wrap(moved, "A", 4)
    b.wrap(moved, "P", 5)
    dest = b.node(moved, "A")
    b.wrap(dest, "R", 6)
    b.wrap(dest, "C", 7)
    b.remote(grad, "A", john)
    return b.build()


def figure2():
    tokens = ("A similar technique is almost impossible to apply to other crops , "
              "such as cotton , soybeans and rice .").split()
    b = PassageBuilder("figure2", tokens)
    scene = b.unit()
    technique = b.node(scene, "A")
    b.wrap(technique, "E", 1)
    b.wrap(technique, "E", 2)
    b.wrap(technique, "C", 3)
    b.wrap(scene, "F", 4)
    impossible = b.node(scene, "D")
    b.wrap(impossible, "E", 5)
    b.wrap(impossible, "C", 6)
    b.implicit(scene, "A")
    b.wrap(scene, "F", 7)
    b.wrap(scene, "P", 8)
    crops = b.node(scene, "A")
    b.wrap(crops, "R", 9)
    b.wrap(crops, "E", 10)
    b.wrap(crops, "C", 11)
    b.wrap(crops, "U", 12)
    examples = b.node(crops, "E")
    b.wrap(examples, "R", 13, 14)
    b.wrap(examples, "C", 15)
    b.wrap(examples, "U", 16)
    b.wrap(examples, "C", 17)
    b.wrap(examples, "N", 18)
    b.wrap(examples, "C", 19)
    b.wrap(scene, "U", 20)
    return b.build()


def coordination():
    b = PassageBuilder("coordination", "John and Mary went home .".split())
    root = b.unit()
    scene = b.node(root, "H")
    pair = b.node(scene, "A")
    b.wrap(pair, "C", 1)
    b.wrap(pair, "N", 2)
    b.wrap(pair, "C", 3)
    b.wrap(scene, "P", 4)
    b.wrap(scene, "A", 5)
    b.wrap(root, "U", 6)
    return b.build()


def control():
    b = PassageBuilder("control", "She wanted to leave early".split())
    root = b.unit()
    scene = b.node(root, "H")
    she = b.wrap(scene, "A", 1)
    b.wrap(scene, "P", 2)
    inner = b.node(scene, "A")
    b.wrap(inner, "F", 3)
    b.wrap(inner, "P", 4)
    b.wrap(inner, "D", 5)
    b.remote(inner, "A", she)
    return b.build()


def particle():
    """"gave ... up" is one discontinuous Process."""
    b = PassageBuilder("particle", "He gave the idea up .".split())
    root = b.unit()
    scene = b.node(root, "H")
    b.wrap(scene, "A", 1)
    verb = b.node(scene, "P")
    b.wrap(verb, "C", 2)
    idea = b.node(scene, "A")
    b.wrap(idea, "E", 3)
    b.wrap(idea, "C", 4)
    b.wrap(verb, "F", 5)
    b.wrap(root, "U", 6)
    return b.build()


def imperative():
    b = PassageBuilder("imperative", "Eat your vegetables !".split())
    root = b.unit()
    scene = b.node(root, "H")
    b.implicit(scene, "A")
    b.wrap(scene, "P", 1)
    veg = b.node(scene, "A")
    b.wrap(veg, "E", 2)
    b.wrap(veg, "C", 3)
    b.wrap(root, "U", 4)
    return b.build()


def relative():
    b = PassageBuilder("relative", "The cat that I saw ran away .".split())
    root = b.unit()
    scene = b.node(root, "H")
    cat = b.node(scene, "A")
    b.wrap(cat, "E", 1)
    head = b.wrap(cat, "C", 2)
    clause = b.node(cat, "E")
    b.wrap(clause, "R", 3)
    b.wrap(clause, "A", 4)
    b.wrap(clause, "P", 5)
    b.remote(clause, "A", head)
    b.wrap(scene, "P", 6)
    b.wrap(scene, "D", 7)
    b.wrap(root, "U", 8)
    return b.build()


def linkage():
    b = PassageBuilder("linkage", "After lunch , we walked to the park and talked .".split())
    root = b.unit()
    b.wrap(root, "L", 1)
    lunch = b.node(root, "H")
    b.wrap(lunch, "P", 2)
    b.wrap(root, "U", 3)
    walk = b.node(root, "H")
    we = b.wrap(walk, "A", 4)
    b.wrap(walk, "P", 5)
    park = b.node(walk, "A")
    b.wrap(park, "R", 6)
    b.wrap(park, "E", 7)
    b.wrap(park, "C", 8)
    b.wrap(root, "L", 9)
    talk = b.node(root, "H")
    b.wrap(talk, "P", 10)
    b.wrap(root, "U", 11)
    b.remote(lunch, "A", we)
    b.remote(talk, "A", we)
    return b.build()


def state():
    b = PassageBuilder("state", "The old house is big .".split())
    root = b.unit()
    scene = b.node(root, "H")
    house = b.node(scene, "A")
    b.wrap(house, "E", 1)
    b.wrap(house, "E", 2)
    b.wrap(house, "C", 3)
    b.wrap(scene, "F", 4)
    b.wrap(scene, "S", 5)
    b.wrap(root, "U", 6)
    return b.build()


def complement():
    b = PassageBuilder("complement", "I think that you should rest now .".split())
    root = b.unit()
    scene = b.node(root, "H")
    b.wrap(scene, "A", 1)
    b.wrap(scene, "P", 2)
    inner = b.node(scene, "A")
    b.wrap(inner, "R", 3)
    b.wrap(inner, "A", 4)
    b.wrap(inner, "D", 5)
    b.wrap(inner, "P", 6)
    b.wrap(inner, "D", 7)
    b.wrap(root, "U", 8)
    return b.build()


BUILDERS = {f.__name__: f for f in (figure1, figure2, coordination, control, particle, imperative,
                                    relative, linkage, state, complement)}


def names():
    return list(BUILDERS)


def xml_bytes(name) -> bytes:
    return resources.files(__name__).joinpath(name + ".xml").read_bytes()


def load(name):
    """Read a shipped fixture from its XML file."""
    return read_passage(xml_bytes(name))


def load_all():
    return [load(n) for n in names()]


def write_all(directory=None):
    from pathlib import Path
    directory = Path(directory or Path(__file__).parent)
    for name, build in BUILDERS.items():
        (directory / (name + ".xml")).write_bytes(write_passage(build()))
