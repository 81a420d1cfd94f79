"""Command-line interface.

Subcommands cover the whole pipeline: corpus building from JATS XML,
dataset statistics, model training/evaluation, the down-sampling and
cross-corpus harnesses, single-shot prediction, ranked audit reports and
the HTTP service.  Exit codes: 0 success, 1 usage error, 2 data error.
"""

import argparse
import glob
import json
import os
import sys

from . import corpus
from .artifact import load_artifact, save_artifact
from .errors import CiteworthError
from .evaluate import (
    cross_corpus,
    cross_corpus_csv,
    downsample_sweep,
    prf1,
    ranked_report,
    write_rows_csv,
)
from .neural.model import NeuralConfig
from .neural.training import TrainConfig
from .pipeline import SentenceScorer, train_model
from .textrep import load_embeddings


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors on stderr and exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _known_dests(parser: argparse.ArgumentParser) -> set[str]:
    dests = {a.dest for a in parser._actions}
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for sub in action.choices.values():
                dests |= {a.dest for a in sub._actions}
    return dests


def _read_config(path, parser) -> dict:
    """Simple "key = value" file; '#' starts a comment.  Keys must match a
    known option."""
    known = _known_dests(parser)
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise CiteworthError(f"{path}: bad config line {line!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in known:
                raise CiteworthError(f"{path}: unknown config key {key!r}")
            values[key] = val
    return values


def _load_dataset(path) -> list[corpus.LabeledSentence]:
    if os.path.isdir(path):
        sentences = []
        for name in ("train.jsonl", "valid.jsonl", "test.jsonl"):
            fp = os.path.join(path, name)
            if os.path.exists(fp):
                sentences.extend(corpus.read_jsonl(fp))
        return sentences
    if path.endswith(".tsv"):
        return corpus.read_tsv(path)
    if path.endswith(".jsonl") or path.endswith(".json"):
        return corpus.read_jsonl(path)
    return corpus.read_flat_labeled(path)


def _print(data, as_json: bool) -> None:
    if as_json:
        print(json.dumps(data, indent=2, sort_keys=True))
        return
    if isinstance(data, dict):
        for k, v in data.items():
            if isinstance(v, dict):
                print(f"{k}:")
                for k2, v2 in v.items():
                    print(f"  {k2}: {v2}")
            else:
                print(f"{k}: {v}")
    elif isinstance(data, list):
        for row in data:
            print("  ".join(f"{k}={v}" for k, v in row.items()))
    else:
        print(data)


def build_parser() -> _Parser:
    parser = _Parser(prog="citeworth", description=__doc__)
    parser.add_argument("--config", help="key = value file merged under explicit flags")
    parser.add_argument("--json", action="store_true", help="JSON output where applicable")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("build-corpus", parents=[], help="compile a dataset from JATS XML files")
    p.add_argument("xml_dir")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fractions", default="0.6,0.2,0.2")
    p.add_argument("--char-bounds", default="19,275")
    p.add_argument("--word-bounds", default="3,42")
    p.add_argument("--data-driven", action="store_true",
                   help="derive bounds from the 5%%/95%% quantiles instead")

    p = sub.add_parser("stats", help="dataset statistics (Table-1 style)")
    p.add_argument("dataset")

    p = sub.add_parser("train", help="train a model on a dataset directory")
    p.add_argument("--data", required=True)
    p.add_argument("--model", required=True, choices=("enlr", "rf", "neural"))
    p.add_argument("--out", required=True)
    p.add_argument("--representation", choices=("bow", "tm"), default="bow")
    p.add_argument("--attention", choices=("cos", "dp", "sdp"), default="cos")
    p.add_argument("--contextual", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-df", type=int, default=1)
    p.add_argument("--topics", type=int, default=200)
    p.add_argument("--lda-iterations", type=int, default=1000)
    p.add_argument("--alpha-grid", default="0.5")
    p.add_argument("--lambda-grid", default="0.001")
    p.add_argument("--cv-folds", type=int, default=1)
    p.add_argument("--trees", type=int, default=100)
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--learning-rate", type=float, default=0.001)
    p.add_argument("--hidden", type=int, default=128)
    p.add_argument("--word-dim", type=int, default=128)
    p.add_argument("--char-hidden", type=int, default=15)
    p.add_argument("--mlp-hidden", type=int, default=64)
    p.add_argument("--embeddings", help="pre-trained word vector file")

    p = sub.add_parser("evaluate", help="precision/recall/F1 on a labeled set")
    p.add_argument("--model-file", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--threshold", type=float, default=0.5)

    p = sub.add_parser("downsample-sweep", help="ratio sensitivity harness")
    p.add_argument("--data", required=True)
    p.add_argument("--model", default="enlr", choices=("enlr", "rf", "neural"))
    p.add_argument("--ratios", default="1,2,3,4.13")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV output path")

    p = sub.add_parser("cross-corpus", help="generalization grid over >= 2 corpora")
    p.add_argument("--data", action="append", required=True,
                   help="dataset directory (repeat)")
    p.add_argument("--model", default="enlr", choices=("enlr", "rf", "neural"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV output path")

    p = sub.add_parser("predict", help="score sentences with a trained model")
    p.add_argument("--model-file", required=True)
    p.add_argument("--in", dest="infile", help="text file to score ('-' for stdin)")
    p.add_argument("--text", help="literal text to score")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--contextual", action="store_true", default=None)
    p.add_argument("--flag-policy", choices=("zeros", "two_pass"), default="zeros")

    p = sub.add_parser("report", help="ranked high-probability sentences")
    p.add_argument("--model-file", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out", help="CSV output path")

    p = sub.add_parser("serve", help="run the HTTP prediction service")
    p.add_argument("--model-file", required=True)
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--cors-origin", default="*")
    return parser


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in str(text).split(",") if str(x).strip())


def _train_fn(args):
    """Split -> probability scorer, for the evaluation harnesses."""

    def fn(split):
        artifact = _train_from_args(args, split)
        scorer = SentenceScorer(artifact)
        return lambda sentences: scorer.score_sentences(sentences, flag_policy="labels")

    return fn


def _train_from_args(args, split):
    family = args.model
    kwargs = dict(
        representation=getattr(args, "representation", "bow"),
        contextual=getattr(args, "contextual", False) or False,
        attention=getattr(args, "attention", "cos"),
        seed=getattr(args, "seed", 0),
        min_df=getattr(args, "min_df", 1),
        n_topics=getattr(args, "topics", 200),
        lda_iterations=getattr(args, "lda_iterations", 1000),
        alpha_grid=_floats(getattr(args, "alpha_grid", "0.5")),
        lambda_grid=_floats(getattr(args, "lambda_grid", "0.001")),
        cv_folds=getattr(args, "cv_folds", 1),
        n_trees=getattr(args, "trees", 100),
    )
    if family == "neural":
        kwargs["neural_config"] = NeuralConfig(
            word_dim=getattr(args, "word_dim", 128),
            encoder_hidden=getattr(args, "hidden", 128),
            char_hidden=getattr(args, "char_hidden", 15),
            char_dim=getattr(args, "char_hidden", 15),
            mlp_hidden=getattr(args, "mlp_hidden", 64),
            attention=kwargs["attention"],
            contextual=kwargs["contextual"],
            seed=kwargs["seed"],
        )
        kwargs["train_config"] = TrainConfig(
            learning_rate=getattr(args, "learning_rate", 0.001),
            batch_size=getattr(args, "batch_size", 64),
            max_epochs=getattr(args, "epochs", 50),
            seed=kwargs["seed"],
        )
        if getattr(args, "embeddings", None):
            kwargs["pretrained"] = load_embeddings(args.embeddings)
    return train_model(family, split, **kwargs)


def _cmd_build_corpus(args) -> int:
    paths = sorted(
        glob.glob(os.path.join(args.xml_dir, "*.xml"))
        + glob.glob(os.path.join(args.xml_dir, "*.xml.gz"))
    )
    if not paths:
        raise CiteworthError(f"no .xml or .xml.gz files in {args.xml_dir}")
    articles = []
    for path in paths:
        base = os.path.basename(path).split(".")[0]
        with open(path, "rb") as fh:
            articles.append(corpus.parse_article(fh.read(), default_id=base))
    char_bounds = tuple(int(x) for x in args.char_bounds.split(","))
    word_bounds = tuple(int(x) for x in args.word_bounds.split(","))
    if args.data_driven:
        # Derive bounds from the corpus itself: 5%/95% quantiles of the
        # cleaned sentence lengths.
        import numpy as np

        unfiltered = [
            s
            for tree in articles
            for s in corpus.label_article(tree, (1, 10**9), (1, 10**9))
        ]
        chars = np.array([s.char_len for s in unfiltered])
        words = np.array([s.word_len for s in unfiltered])
        char_bounds = tuple(np.quantile(chars, (0.05, 0.95)))
        word_bounds = tuple(np.quantile(words, (0.05, 0.95)))
    split = corpus.build_dataset(
        articles,
        fractions=_floats(args.fractions),
        seed=args.seed,
        char_bounds=char_bounds,
        word_bounds=word_bounds,
    )
    corpus.write_split(split, args.out)
    _print(corpus.corpus_stats(split), args.json)
    return 0


def _cmd_stats(args) -> int:
    sentences = _load_dataset(args.dataset)
    _print(corpus.corpus_stats(sentences), args.json)
    return 0


def _cmd_train(args) -> int:
    split = corpus.read_split(args.data)
    artifact = _train_from_args(args, split)
    save_artifact(artifact, args.out)
    _print({"saved": args.out, **artifact.info()}, args.json)
    return 0


def _cmd_evaluate(args) -> int:
    artifact = load_artifact(args.model_file)
    test = _load_dataset(args.test)
    scorer = SentenceScorer(artifact)
    probs = scorer.score_sentences(test, flag_policy="labels")
    triple = prf1(probs >= args.threshold, [s.label for s in test])
    _print(triple.to_dict(), args.json)
    return 0


def _cmd_downsample_sweep(args) -> int:
    split = corpus.read_split(args.data)
    rows = downsample_sweep(split, _floats(args.ratios), _train_fn(args), seed=args.seed)
    if args.out:
        write_rows_csv(rows, args.out)
    _print(rows, args.json)
    return 0


def _cmd_cross_corpus(args) -> int:
    corpora = {os.path.basename(os.path.normpath(d)) or d: corpus.read_split(d) for d in args.data}
    rows = cross_corpus(_train_fn(args), corpora, seed=args.seed)
    if args.out:
        cross_corpus_csv(rows, args.out)
    _print(rows, args.json)
    return 0


def _cmd_predict(args) -> int:
    if (args.infile is None) == (args.text is None):
        raise SystemExit(_usage_error("predict needs exactly one of --in or --text"))
    if args.text is not None:
        raw = args.text
    elif args.infile == "-":
        raw = sys.stdin.read()
    else:
        with open(args.infile, "r", encoding="utf-8") as fh:
            raw = fh.read()
    artifact = load_artifact(args.model_file)
    results = SentenceScorer(artifact).predict(
        raw_text=raw,
        contextual=args.contextual,
        threshold=args.threshold,
        flag_policy=args.flag_policy,
    )
    rows = [r.to_dict() for r in results]
    if args.json:
        _print(rows, True)
    else:
        for r in rows:
            mark = "CITE" if r["worthy"] else "  ok"
            print(f"[{mark}] p={r['probability']:.4f}  {r['text']}")
    return 0


def _cmd_report(args) -> int:
    artifact = load_artifact(args.model_file)
    test = _load_dataset(args.test)
    scorer = SentenceScorer(artifact)
    rows = ranked_report(
        lambda sentences: scorer.score_sentences(sentences, flag_policy="labels"),
        test,
        top_k=args.top_k,
        threshold=args.threshold,
    )
    if args.out:
        write_rows_csv(rows, args.out)
    _print(rows, args.json)
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    serve(args.model_file, host=args.host, port=args.port, cors_origin=args.cors_origin)
    return 0


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


_COMMANDS = {
    "build-corpus": _cmd_build_corpus,
    "stats": _cmd_stats,
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "downsample-sweep": _cmd_downsample_sweep,
    "cross-corpus": _cmd_cross_corpus,
    "predict": _cmd_predict,
    "report": _cmd_report,
    "serve": _cmd_serve,
}


def run(argv=None) -> int:
    """Entry point; returns the process exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        # Pre-scan for --config so its values become parser defaults and
        # explicit flags override them.
        if "--config" in argv:
            cfg_path = argv[argv.index("--config") + 1]
            parser.set_defaults(**_read_config(cfg_path, parser))
        args = parser.parse_args(argv)
        if not args.command:
            parser.print_usage(sys.stderr)
            return 1
        return _COMMANDS[args.command](args)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 1
    except (CiteworthError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
