"""How much structure survives the tree and bilexical approximations.

Prints the roundtrip upper bound of each conversion on the shipped fixtures
and on a generated corpus, then shows figure1 as a dependency table.

    python3 demos/conversion_bounds.py
"""

from uccakit import fixtures
from uccakit.conversion import BILEXICAL_DAG, BILEXICAL_TREE, CONSTITUENCY, to_bilexical, upper_bound, write_conll
from uccakit.evaluation import fmt
from uccakit.generate import stratified_suite

corpora = {"fixtures": fixtures.load_all(), "generated": stratified_suite(400, seed=1)}
print("%-10s %-15s %8s %8s" % ("corpus", "conversion", "primary", "remote"))
for name, corpus in corpora.items():
    for conversion in (CONSTITUENCY, BILEXICAL_TREE, BILEXICAL_DAG):
        r = upper_bound(corpus, conversion)
        print("%-10s %-15s %8s %8s" % (name, conversion, fmt(r.primary.lf), fmt(r.remote.lf)))

print()
print(write_conll(to_bilexical(fixtures.figure1(), tree_mode=False)))
