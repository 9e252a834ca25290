"""Labeled DAG F1 between a predicted and a gold passage.

Two edges match when their children have the same (primary) yield and the
edges carry the same label.  Precision divides the matched count by the
number of predicted edges, recall by the number of gold edges.  Primary and
remote edges are scored separately; edges into implicit units are left out of
both and scored on their own by :func:`score_implicit`.

Duplicated (yield, label) keys are matched as multisets: two identical gold
edges need two identical predicted edges to both count.
"""

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Optional

from .core import LABELS, Category, Passage, category_key, yield_of
from .errors import TokenMismatch

PRIMARY = "primary"
REMOTE = "remote"
CLASSES = (PRIMARY, REMOTE)

#: Fine-grained category sets.  Function and Relator belong to none of them;
#: Punctuation is left out as well.
CATEGORY_SETS = {
    "scene": (Category.S, Category.P, Category.A, Category.D),
    "non_scene": (Category.E, Category.N, Category.C),
    "linkage": (Category.H, Category.L, Category.G),
}


@dataclass(frozen=True)
class ScoreTriple:
    """Matched/predicted/gold counts and the ratios derived from them.

    ``precision``/``recall``/``f1`` are ratios in [0, 1]; ``lp``/``lr``/``lf``
    are the same values in percent.  A 0/0 ratio is undefined (``None``) and
    forces F1 to 0.
    """

    matched: int = 0
    predicted_total: int = 0
    gold_total: int = 0

    def __add__(self, other):
        return ScoreTriple(self.matched + other.matched,
                           self.predicted_total + other.predicted_total,
                           self.gold_total + other.gold_total)

    @property
    def precision_defined(self):
        return self.predicted_total > 0

    @property
    def recall_defined(self):
        return self.gold_total > 0

    @property
    def precision(self) -> Optional[float]:
        return self.matched / self.predicted_total if self.predicted_total else None

    @property
    def recall(self) -> Optional[float]:
        return self.matched / self.gold_total if self.gold_total else None

    @property
    def f1(self) -> float:
        if not (self.predicted_total and self.gold_total and self.matched):
            return 0.0
        return 2 * self.matched / (self.predicted_total + self.gold_total)

    @property
    def lp(self) -> Optional[float]:
        return 100 * self.matched / self.predicted_total if self.predicted_total else None

    @property
    def lr(self) -> Optional[float]:
        return 100 * self.matched / self.gold_total if self.gold_total else None

    @property
    def lf(self) -> float:
        if not (self.predicted_total and self.gold_total and self.matched):
            return 0.0
        return 200 * self.matched / (self.predicted_total + self.gold_total)

    def to_dict(self):
        return {"matched": self.matched, "predicted": self.predicted_total, "gold": self.gold_total,
                "lp": self.lp, "lr": self.lr, "lf": self.lf}


@dataclass(frozen=True)
class EvalOptions:
    include_punctuation: bool = True
    implicit_extension: bool = False


@dataclass
class EvalReport:
    primary: ScoreTriple = ScoreTriple()
    remote: ScoreTriple = ScoreTriple()
    implicit: Optional[ScoreTriple] = None
    per_category: dict = field(default_factory=dict)
    category_sets: dict = field(default_factory=dict)

    def __add__(self, other):
        implicit = None
        if self.implicit is not None or other.implicit is not None:
            implicit = (self.implicit or ScoreTriple()) + (other.implicit or ScoreTriple())
        return EvalReport(
            self.primary + other.primary,
            self.remote + other.remote,
            implicit,
            _merge(self.per_category, other.per_category),
            _merge(self.category_sets, other.category_sets),
        )

    def to_dict(self):
        d = {PRIMARY: self.primary.to_dict(), REMOTE: self.remote.to_dict()}
        if self.implicit is not None:
            d["implicit"] = self.implicit.to_dict()
        d["category_sets"] = {k: v.to_dict() for k, v in self.category_sets.items()}
        d["per_category"] = {str(k): v.to_dict() for k, v in self.per_category.items()}
        return d


def _merge(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out[k] + v if k in out else v
    return out


def check_tokens(pred: Passage, gold: Passage):
    if len(pred.terminals) != len(gold.terminals):
        raise TokenMismatch("%s has %d terminals, %s has %d" % (
            pred.passage_id, len(pred.terminals), gold.passage_id, len(gold.terminals)))
    for a, b in zip(pred.terminals, gold.terminals):
        if a.text != b.text:
            raise TokenMismatch("terminal %d differs: %r in %s vs %r in %s" % (
                a.position, a.text, pred.passage_id, b.text, gold.passage_id))


def scored_edges(p: Passage, cls, opts=EvalOptions()):
    """Edges of one class that enter the coarse metric."""
    remote = cls == REMOTE
    out = []
    for e in p.edges:
        if e.remote != remote or p.unit(e.child).implicit:
            continue
        if not opts.include_punctuation and e.category == Category.U:
            continue
        out.append(e)
    return out


def _edge_key(p, e):
    return (yield_of(p, e.child), e.category)


def _tiebreak(p, e):
    ys = yield_of(p, e.parent)
    return (min(ys), sorted(ys), category_key(e.category))


def match_edges(pred: Passage, gold: Passage, cls=PRIMARY, opts=EvalOptions()):
    """Pairs ``(pred_edge, gold_edge)`` with equal child yield and label.

    Each edge is used at most once.  Within a (yield, label) group, edges are
    paired in order of their parents' yields; the result is sorted by the
    smallest child position.
    """
    check_tokens(pred, gold)
    groups = defaultdict(lambda: ([], []))
    for e in scored_edges(pred, cls, opts):
        groups[_edge_key(pred, e)][0].append(e)
    for e in scored_edges(gold, cls, opts):
        groups[_edge_key(gold, e)][1].append(e)
    pairs = []
    for (ys, category), (ps, gs) in groups.items():
        ps.sort(key=lambda e: _tiebreak(pred, e))
        gs.sort(key=lambda e: _tiebreak(gold, e))
        for a, b in zip(ps, gs):
            pairs.append(((min(ys), sorted(ys), category_key(category), _tiebreak(gold, b)), a, b))
    pairs.sort(key=lambda t: t[0])
    return [(a, b) for _, a, b in pairs]


def _counts(p, cls, opts):
    return Counter(_edge_key(p, e) for e in scored_edges(p, cls, opts))


def _triple(pc: Counter, gc: Counter, keep=lambda key: True):
    matched = sum(min(n, gc[k]) for k, n in pc.items() if keep(k))
    return ScoreTriple(matched, sum(n for k, n in pc.items() if keep(k)),
                       sum(n for k, n in gc.items() if keep(k)))


def score_pair(pred: Passage, gold: Passage, opts=EvalOptions()) -> EvalReport:
    check_tokens(pred, gold)
    counts = {cls: (_counts(pred, cls, opts), _counts(gold, cls, opts)) for cls in CLASSES}
    report = EvalReport(_triple(*counts[PRIMARY]), _triple(*counts[REMOTE]))

    categories = set(LABELS)
    for pc, gc in counts.values():
        categories.update(k[1] for k in pc)
        categories.update(k[1] for k in gc)
    for category in sorted(categories, key=category_key):
        triple = ScoreTriple()
        for pc, gc in counts.values():
            triple = triple + _triple(pc, gc, lambda k, c=category: k[1] == c)
        report.per_category[category] = triple
    for name, members in CATEGORY_SETS.items():
        triple = ScoreTriple()
        for c in members:
            triple = triple + report.per_category[c]
        report.category_sets[name] = triple
    if opts.implicit_extension:
        report.implicit = score_implicit(pred, gold)
    return report


def _implicit_keys(p):
    keys = Counter()
    for u in p.units:
        if u.implicit:
            for e in p.incoming(u.unit_id, remote=False):
                keys[(yield_of(p, e.parent), e.category)] += 1
    return keys


def score_implicit(pred: Passage, gold: Passage) -> ScoreTriple:
    """Implicit units match when their incoming labels and their parents' yields agree."""
    check_tokens(pred, gold)
    return _triple(_implicit_keys(pred), _implicit_keys(gold))


def fine_grained(pred: Passage, gold: Passage, opts=EvalOptions()):
    return score_pair(pred, gold, opts).category_sets


def aggregate_corpus(pairs, opts=EvalOptions()) -> EvalReport:
    """Micro-average over ``(pred, gold)`` pairs: counts are summed, then divided."""
    total = EvalReport()
    if opts.implicit_extension:
        total.implicit = ScoreTriple()
    for pred, gold in pairs:
        total = total + score_pair(pred, gold, opts)
    return total


def pair_by_id(predicted, gold):
    """Align two passage collections on ``passage_id``; raise on one-sided ids."""
    from .errors import MissingPassage
    pred_ids = {p.passage_id: p for p in predicted}
    gold_ids = {g.passage_id: g for g in gold}
    missing = sorted(set(pred_ids) ^ set(gold_ids))
    if missing:
        raise MissingPassage("passages present on one side only: %s" % ", ".join(missing))
    return [(pred_ids[k], gold_ids[k]) for k in sorted(gold_ids)]


# rendering

def fmt(value):
    return "--" if value is None else "%.1f" % value


def format_table(report: EvalReport, per_category=False):
    """Plain-text table: LP/LR/LF for primary and remote, then fine-grained rows."""
    lines = ["%-12s %17s   %17s" % ("", "Primary", "Remote"),
             "%-12s %5s %5s %5s   %5s %5s %5s" % ("", "LP", "LR", "LF", "LP", "LR", "LF"),
             "%-12s %5s %5s %5s   %5s %5s %5s" % (
                 "all", fmt(report.primary.lp), fmt(report.primary.lr), fmt(report.primary.lf),
                 fmt(report.remote.lp), fmt(report.remote.lr), fmt(report.remote.lf))]
    lines.append("")
    lines.append("%-12s %5s %5s %5s" % ("", "LP", "LR", "LF"))
    rows = list(report.category_sets.items())
    if report.implicit is not None:
        rows.append(("implicit", report.implicit))
    if per_category:
        rows += [(str(k), v) for k, v in report.per_category.items()]
    for name, t in rows:
        lines.append("%-12s %5s %5s %5s" % (name, fmt(t.lp), fmt(t.lr), fmt(t.lf)))
    return "\n".join(lines)


def format_keyvalue(report: EvalReport, per_category=False):
    """``key=value`` lines (one decimal for percentages, ``--`` when undefined)."""
    items = [(PRIMARY, report.primary), (REMOTE, report.remote)]
    if report.implicit is not None:
        items.append(("implicit", report.implicit))
    items += [("set." + k, v) for k, v in report.category_sets.items()]
    if per_category:
        items += [("category." + str(k), v) for k, v in report.per_category.items()]
    lines = []
    for name, t in items:
        lines += ["%s.matched=%d" % (name, t.matched), "%s.predicted=%d" % (name, t.predicted_total),
                  "%s.gold=%d" % (name, t.gold_total), "%s.lp=%s" % (name, fmt(t.lp)),
                  "%s.lr=%s" % (name, fmt(t.lr)), "%s.lf=%s" % (name, fmt(t.lf))]
    return "\n".join(lines)


def format_report(report: EvalReport, per_category=False):
    return format_table(report, per_category) + "\n\n" + format_keyvalue(report, per_category) + "\n"
