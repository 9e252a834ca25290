"""Score two hand-made variants of the figure1 fixture against the original.

    python3 demos/score_figure1.py
"""

from uccakit import fixtures
from uccakit.core import Edge, build_passage, yield_of
from uccakit.evaluation import format_report, match_edges, score_pair


def edge_to(p, positions, category, remote=False):
    return next(e for e in p.edges if set(yield_of(p, e.child)) == set(positions)
                and str(e.category) == category and e.remote == remote)


gold = fixtures.figure1()
print(" ".join(t.text for t in gold.terminals))

# 1. "Paris" labeled E instead of C: one of ten primary edges is wrong
paris = edge_to(gold, {7}, "C")
pred = build_passage("figure1", gold.terminals, gold.units,
                     [e if e != paris else Edge(e.parent, e.child, "E") for e in gold.edges])
print("\nParis as Elaborator")
print(format_report(score_pair(pred, gold)))

# 2. the remote Participant dropped: remote recall falls to 0 and precision is undefined
remote = edge_to(gold, {4}, "A", remote=True)
pred = build_passage("figure1", gold.terminals, gold.units, [e for e in gold.edges if e != remote])
print("\nwithout the remote edge")
print(format_report(score_pair(pred, gold)))

print("\nmatched primary edges of the gold passage with itself:")
for p, g in match_edges(gold, gold):
    print("  %s %s" % (g.category, " ".join(gold.terminal(i).text for i in sorted(yield_of(gold, g.child)))))
