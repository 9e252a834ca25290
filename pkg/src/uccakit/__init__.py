"""Tools for UCCA semantic graphs: model, XML I/O, validation, evaluation,
conversions and a transition-based baseline parser."""

from .core import (Category, Edge, Passage, PassageBuilder, Terminal, Unit, build_passage,
                   edge_partition, is_discontinuous, parse_category, yield_of)
from .xmlio import read_passage, strip_annotation, write_passage

__version__ = "0.1.0"
