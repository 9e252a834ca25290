"""Train the perceptron parser on the fixtures and parse them back.

Also shows what an untrained model produces: a valid but arbitrary graph.

    python3 demos/train_and_parse.py [epochs]
"""

import sys

from uccakit import fixtures
from uccakit.evaluation import aggregate_corpus, fmt
from uccakit.parser import decode, oracle, parse, train
from uccakit.validation import validate

epochs = int(sys.argv[1]) if len(sys.argv) > 1 else 30
gold = fixtures.load_all()

g = gold[0]
print("oracle for %s (%d transitions):" % (g.passage_id, len(oracle(g))))
print("  " + " ".join(map(str, oracle(g))))

model = train(gold, epochs=epochs, seed=0, log=lambda msg: print("  " + msg))
parsed = [parse(p.terminals, model, p.passage_id) for p in gold]
r = aggregate_corpus(zip(parsed, gold))
print("training-set primary LF %s, remote LF %s" % (fmt(r.primary.lf), fmt(r.remote.lf)))

untrained = train(gold, epochs=0)
s = decode("the old man saw it .".split(), untrained)
print("\nuntrained parse: %d transitions, %d units, violations: %s"
      % (len(s.history), len(s.to_passage().units), [str(v) for v in validate(s.to_passage())] or "none"))
