"""Averaged perceptron over sparse features, trained with the static oracle."""

import json
import random
from collections import defaultdict

from ..errors import EmptyCorpus, ModelMismatch
from .features import TEMPLATE_HASH, TEMPLATE_NAMES, extract_features
from .oracle import oracle
from .transitions import ALL_TRANSITIONS, Transition, TransitionState, completion

FORMAT = "uccakit-sparse-perceptron"
VERSION = 1

#: Greedy decoding stops after ``BUDGET_PER_TOKEN * n + BUDGET_CONSTANT`` transitions.
BUDGET_PER_TOKEN = 10
BUDGET_CONSTANT = 50

_ORDER = {str(t): i for i, t in enumerate(ALL_TRANSITIONS)}
_NAME = {t: str(t) for t in ALL_TRANSITIONS}


def budget(n):
    return BUDGET_PER_TOKEN * n + BUDGET_CONSTANT


class SparseModel:
    """Feature -> {transition: weight}.  Ties in scoring go to the earlier transition in ALL_TRANSITIONS."""

    def __init__(self, weights=None, template_hash=TEMPLATE_HASH):
        self.weights = weights or {}
        self.template_hash = template_hash
        self.labels = tuple(str(t) for t in ALL_TRANSITIONS)

    def scores(self, features):
        out = defaultdict(float)
        for f in features:
            for t, w in self.weights.get(f, {}).items():
                out[t] += w
        return out

    def rank(self, state, candidates, features=None):
        scores = self.scores(extract_features(state) if features is None else features)
        return sorted(candidates, key=lambda t: (-scores.get(_NAME[t], 0.0), _ORDER[_NAME[t]]))

    def best(self, state, candidates, features=None):
        return self.rank(state, candidates, features)[0]

    # serialization

    def to_json(self):
        data = {
            "format": FORMAT,
            "version": VERSION,
            "templates": list(TEMPLATE_NAMES),
            "template_hash": self.template_hash,
            "transitions": list(self.labels),
            "weights": {f: {t: w for t, w in sorted(ws.items()) if w} for f, ws in sorted(self.weights.items())},
        }
        return json.dumps(data, sort_keys=True, indent=0, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        if data.get("format") != FORMAT or data.get("version") != VERSION:
            raise ModelMismatch("not a %s v%d model" % (FORMAT, VERSION))
        if data.get("template_hash") != TEMPLATE_HASH:
            raise ModelMismatch("model was trained with feature templates %s, this build has %s"
                                % (str(data.get("template_hash"))[:12], TEMPLATE_HASH[:12]))
        unknown = set(data.get("transitions", ())) - set(_ORDER)
        if unknown:
            raise ModelMismatch("model uses unknown transitions: %s" % ", ".join(sorted(unknown)))
        return cls(data["weights"], data["template_hash"])

    def save(self, path):
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.to_json())

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as f:
            return cls.from_json(f.read())


class _Averager:
    """Perceptron weights with lazily accumulated sums for averaging."""

    def __init__(self):
        self.w = defaultdict(lambda: defaultdict(float))
        self.total = defaultdict(lambda: defaultdict(float))
        self.stamp = defaultdict(lambda: defaultdict(int))
        self.tick = 0

    def update(self, features, t, delta):
        for f in features:
            w, total, stamp = self.w[f], self.total[f], self.stamp[f]
            total[t] += (self.tick - stamp[t]) * w[t]
            stamp[t] = self.tick
            w[t] += delta

    def averaged(self):
        out = {}
        for f, ws in self.w.items():
            avg = {}
            for t, w in ws.items():
                total = self.total[f][t] + (self.tick - self.stamp[f][t]) * w
                value = total / self.tick if self.tick else 0.0
                if value:
                    avg[t] = value
            if avg:
                out[f] = avg
        return out


def train(corpus, epochs=30, seed=0, log=None):
    """Averaged perceptron with the static oracle; deterministic for a given seed."""
    corpus = list(corpus)
    if not corpus:
        raise EmptyCorpus("cannot train on an empty corpus")
    sequences = [oracle(g) for g in corpus]
    rng = random.Random(seed)
    order = list(range(len(corpus)))
    avg = _Averager()
    model = SparseModel()
    for epoch in range(epochs):
        rng.shuffle(order)
        errors = steps = 0
        for i in order:
            s = TransitionState(corpus[i].terminals)
            for gold in sequences[i]:
                legal = s.allowed_transitions()
                feats = extract_features(s)
                model.weights = avg.w
                pred = model.best(s, legal, feats)
                avg.tick += 1
                if pred != gold:
                    errors += 1
                    avg.update(feats, str(gold), 1.0)
                    avg.update(feats, str(pred), -1.0)
                steps += 1
                s.apply_inplace(gold)
        if log:
            log("epoch %d: %d/%d transitions mispredicted" % (epoch + 1, errors, steps))
    return SparseModel(avg.averaged())


def decode(tokens, model):
    """Greedy decoding over allowed transitions; returns the finished state.

    A transition is taken only if the deterministic completion from the
    resulting state still fits the budget, otherwise the completion is
    followed (with the model choosing labels), so decoding always stops.
    """
    s = TransitionState(tokens)
    if not s.tokens:
        raise ValueError("cannot parse an empty token sequence")
    limit = budget(len(s.tokens))
    while not s.finished:
        t = model.best(s, s.allowed_transitions())
        nxt = s.apply(t)
        if nxt.finished or len(nxt.history) + len(completion(nxt)) <= limit:
            s = nxt
            continue
        for t in completion(s, choose=model.best):
            s.apply_inplace(t)
    assert len(s.history) <= limit, "transition budget exceeded"
    return s


def parse(tokens, model, passage_id="parsed"):
    """Greedy parse of ``tokens``, always within the transition budget."""
    return decode(tokens, model).to_passage(passage_id)
