"""Command-line interface: ``uccakit {evaluate,validate,stats,convert,train,parse}``.

Exit codes: 0 success, 1 validation errors, 2 evaluation input mismatch,
64 usage error.
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .conversion import (BILEXICAL_DAG, BILEXICAL_TREE, CONSTITUENCY, DEFAULT_HEAD_RULES, HeadRules, to_bilexical,
                         to_constituency, upper_bound, write_conll)
from .core import Category, Terminal, is_punctuation
from .errors import MissingPassage, ModelError, ModelMismatch, SchemaError, TokenMismatch, UccaError, XmlSyntaxError
from .evaluation import EvalOptions, aggregate_corpus, format_report, score_pair
from .validation import has_errors, validate_document
from .xmlio import read_file, read_tokens, write_file

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_MISMATCH = 2
EXIT_USAGE = 64

FORMATS = {"constituency": CONSTITUENCY, "bilexical-tree": BILEXICAL_TREE, "bilexical-dag": BILEXICAL_DAG}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


class UsageError(Exception):
    pass


def xml_files(paths):
    """Passage files under ``paths`` (files as given, directories searched recursively), sorted."""
    out = []
    for p in map(Path, paths):
        if p.is_dir():
            out += sorted(f for f in p.rglob("*.xml") if f.is_file())
        elif p.is_file():
            out.append(p)
        else:
            raise UsageError("no such file or directory: %s" % p)
    return out


def _map(fn, items, jobs):
    """Ordered map, in worker processes when ``jobs`` > 1."""
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _emit(text, out=None):
    (out or sys.stdout).write(text if text.endswith("\n") else text + "\n")


# evaluate

def _pair_files(pred_files, gold_files, by_id):
    if by_id:
        pred = {read_file(f).passage_id: f for f in pred_files}
        gold = {read_file(f).passage_id: f for f in gold_files}
    else:
        pred = {f.stem: f for f in pred_files}
        gold = {f.stem: f for f in gold_files}
    missing = sorted(set(pred) ^ set(gold))
    if missing:
        raise MissingPassage("passages present on one side only: %s" % ", ".join(missing))
    return [(pred[k], gold[k]) for k in sorted(gold)]


def _score_files(args):
    pred_path, gold_path, opts = args
    pred, gold = read_file(pred_path), read_file(gold_path)
    try:
        return score_pair(pred, gold, opts)
    except TokenMismatch as e:
        raise TokenMismatch("%s vs %s: %s" % (pred_path, gold_path, e)) from None


def cmd_evaluate(args):
    opts = EvalOptions(include_punctuation=not args.no_punct, implicit_extension=args.implicit)
    try:
        pairs = _pair_files(xml_files([args.pred]), xml_files([args.gold]), args.by_id)
        reports = _map(_score_files, [(p, g, opts) for p, g in pairs], args.jobs)
    except (TokenMismatch, MissingPassage, ModelError, SchemaError, XmlSyntaxError) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_MISMATCH
    total = aggregate_corpus([], opts)
    for r in reports:
        total = total + r
    if args.json:
        _emit(json.dumps(dict(total.to_dict(), passages=len(pairs)), indent=2, sort_keys=True))
    else:
        _emit("%d passage pair(s)\n\n%s" % (len(pairs), format_report(total, args.per_category)))
    return EXIT_OK


# validate

def _validate_file(path):
    with open(path, "rb") as f:
        return validate_document(f.read())


def cmd_validate(args):
    files = xml_files(args.paths)
    results = _map(_validate_file, files, args.jobs)
    rows = sorted(((str(f), v) for f, vs in zip(files, results) for v in vs),
                  key=lambda r: (r[0], r[1].rule_id))
    for name, v in rows:
        _emit("%s: %s" % (name, v))
    n_err = sum(has_errors([v]) for _, v in rows)
    _emit("%d passages, %d errors, %d warnings" % (len(files), n_err, len(rows) - n_err))
    return EXIT_INVALID if n_err else EXIT_OK


# stats

def _count(path):
    with open(path, "rb") as f:
        return len(read_tokens(f.read())[1])


def corpus_stats(root, jobs=1):
    """Passages, sentences and tokens per split (immediate subdirectory) and in total.

    Each file is one passage; the corpora are distributed sentence-split, so a
    passage counts as one sentence.
    """
    root = Path(root)
    files = xml_files([root])
    counts = _map(_count, files, jobs)
    splits = {}
    for f, n in zip(files, counts):
        rel = f.relative_to(root).parts
        split = rel[0] if len(rel) > 1 else "."
        s = splits.setdefault(split, {"passages": 0, "sentences": 0, "tokens": 0})
        s["passages"] += 1
        s["sentences"] += 1
        s["tokens"] += n
    total = {k: sum(s[k] for s in splits.values()) for k in ("passages", "sentences", "tokens")}
    return {"splits": dict(sorted(splits.items())), "total": total}


def cmd_stats(args):
    stats = corpus_stats(args.path, args.jobs)
    if args.json:
        _emit(json.dumps(stats, indent=2, sort_keys=True))
        return EXIT_OK
    _emit("%-12s %9s %9s %9s" % ("split", "passages", "sentences", "tokens"))
    for name, s in list(stats["splits"].items()) + [("total", stats["total"])]:
        _emit("%-12s %9d %9d %9d" % (name, s["passages"], s["sentences"], s["tokens"]))
    return EXIT_OK


# convert

def _head_rules(text):
    if not text:
        return DEFAULT_HEAD_RULES
    try:
        return HeadRules(tuple(Category(c) for c in text))
    except ValueError as e:
        raise UsageError("bad --head-rules %r: %s" % (text, e)) from None


def cmd_convert(args):
    conversion = FORMATS[args.format]
    rules = _head_rules(args.head_rules)
    passages = [read_file(f) for f in xml_files([args.path])]
    if args.upper_bound:
        opts = EvalOptions(include_punctuation=not args.no_punct)
        report = upper_bound(passages, conversion, rules, opts)
        if args.json:
            _emit(json.dumps(dict(report.to_dict(), passages=len(passages)), indent=2, sort_keys=True))
        else:
            _emit("%s upper bound over %d passage(s)\n\n%s" % (args.format, len(passages), format_report(report)))
        return EXIT_OK
    if not args.out:
        raise UsageError("convert needs --out DIR unless --upper-bound is given")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for p in passages:
        if conversion == CONSTITUENCY:
            write_file(to_constituency(p), out / ("%s.xml" % p.passage_id))
        else:
            b = to_bilexical(p, rules, tree_mode=conversion == BILEXICAL_TREE)
            (out / ("%s.conll" % p.passage_id)).write_text(write_conll(b), encoding="utf-8")
    _emit("wrote %d file(s) to %s" % (len(passages), out))
    return EXIT_OK


# train / parse

def cmd_train(args):
    from .parser import train
    corpus = [read_file(f) for f in xml_files(args.corpus)]
    log = (lambda msg: print(msg, file=sys.stderr)) if args.verbose else None
    model = train(corpus, epochs=args.epochs, seed=args.seed, log=log)
    model.save(args.model)
    _emit("trained on %d passage(s) for %d epoch(s); model written to %s" % (len(corpus), args.epochs, args.model))
    return EXIT_OK


def _inputs(paths):
    """``(passage_id, terminals)`` from XML (annotated or stripped) or whitespace-tokenized text lines."""
    out = []
    for p in map(Path, paths):
        if p.is_dir() or p.suffix == ".xml":
            for f in xml_files([p]):
                out.append(read_tokens(f.read_bytes()))
            continue
        if not p.is_file():
            raise UsageError("no such file or directory: %s" % p)
        for i, line in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
            words = line.split()
            if words:
                out.append(("%s_%d" % (p.stem, i),
                            [Terminal(j, w, is_punctuation(w)) for j, w in enumerate(words, start=1)]))
    return out


def _parse_one(args):
    from .parser import parse
    passage_id, terminals, model = args
    return parse(terminals, model, passage_id)


def cmd_parse(args):
    from .parser import SparseModel
    try:
        model = SparseModel.load(args.model)
    except ModelMismatch as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    inputs = _inputs(args.inputs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    parsed = _map(_parse_one, [(pid, ts, model) for pid, ts in inputs], args.jobs)
    for p in parsed:
        write_file(p, out / ("%s.xml" % p.passage_id))
    _emit("parsed %d passage(s) into %s" % (len(parsed), out))
    return EXIT_OK


def build_parser():
    ap = _Parser(prog="uccakit", description="Evaluate, validate, convert and parse UCCA passages.")
    ap.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def jobs(p):
        p.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes (default 1)")

    p = sub.add_parser("evaluate", help="score predicted passages against gold")
    p.add_argument("pred", help="predicted passage file or directory")
    p.add_argument("gold", help="gold passage file or directory")
    p.add_argument("--no-punct", action="store_true", help="ignore U (punctuation) edges")
    p.add_argument("--implicit", action="store_true", help="also score implicit units")
    p.add_argument("--per-category", action="store_true", help="add one row per category")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.add_argument("--by-id", action="store_true", help="pair passages by passageID instead of file name")
    jobs(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("validate", help="check passages against the annotation rules")
    p.add_argument("paths", nargs="+", help="passage files or directories")
    jobs(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", help="count passages, sentences and tokens")
    p.add_argument("path", help="corpus directory (subdirectories are splits)")
    p.add_argument("--json", action="store_true")
    jobs(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("convert", help="tree/bilexical approximations and their upper bounds")
    p.add_argument("path", help="passage file or directory")
    p.add_argument("--format", required=True, choices=sorted(FORMATS))
    p.add_argument("--upper-bound", action="store_true", help="print the roundtrip score instead of writing files")
    p.add_argument("--out", help="output directory for converted files")
    p.add_argument("--head-rules", metavar="ORDER",
                   help="category priority for head selection, e.g. CPSHADENRLGFUT (the default)")
    p.add_argument("--no-punct", action="store_true")
    p.add_argument("--json", action="store_true")
    jobs(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("train", help="train the sparse perceptron parser")
    p.add_argument("corpus", nargs="+", help="training passage files or directories")
    p.add_argument("--model", required=True, help="where to write the model")
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-v", "--verbose", action="store_true", help="log per-epoch error counts")
    jobs(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("parse", help="parse tokenized text or stripped passages")
    p.add_argument("inputs", nargs="+", help="XML files/directories, or text files with one sentence per line")
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True, help="output directory for parsed XML")
    jobs(p)
    p.set_defaults(func=cmd_parse)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        ap.error("--jobs must be at least 1")
    if getattr(args, "epochs", 0) < 0:
        ap.error("--epochs must not be negative")
    try:
        return args.func(args)
    except UsageError as e:
        print("%s: error: %s" % (ap.prog, e), file=sys.stderr)
        return EXIT_USAGE
    except (UccaError, OSError) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_INVALID if isinstance(e, (ModelError, SchemaError, XmlSyntaxError)) else EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
