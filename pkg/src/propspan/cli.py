"""``propspan`` command-line interface.

Exit status: 0 on success, 1 when inputs fail to parse or validate, 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .checkpoint import load_params, save_params
from .codec import labels_of
from .dataio import dumps_annotation, read_dataset, read_parallel, write_dataset
from .errors import PropspanError
from .mgn import Dims, TrainConfig, predict_annotation, train
from .projection import filter_propaganda, project_dataset
from .scorer import format_report, score_task1, score_task2
from .stats import format_stats, stats

logger = logging.getLogger("propspan")


def _emit(args, text: str, payload: dict) -> None:
    if args.format == "structured":
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        print(text)
    out = getattr(args, "report", None) or (args.out if args.command in _REPORT_ONLY else None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, ensure_ascii=False, indent=2)
            fh.write("\n")


def _task1_labels(ann):
    return ann.labels if ann.labels is not None else labels_of(ann)


def cmd_score_task1(args):
    gold = read_dataset(args.gold)
    pred = read_dataset(args.pred)
    report = score_task1([(a.id, _task1_labels(a)) for a in gold], [(a.id, _task1_labels(a)) for a in pred])
    _emit(args, format_report(report, "Subtask 1 (multi-label)"), report.to_dict())


def cmd_score_task2(args):
    report = score_task2(read_dataset(args.gold), read_dataset(args.pred))
    _emit(args, format_report(report, "Subtask 2 (partial-credit spans)"), report.to_dict())


def cmd_stats(args):
    st = stats(read_dataset(args.data))
    _emit(args, format_stats(st), st.to_dict())


def cmd_train(args):
    data = read_dataset(args.data)
    initial = load_params(args.init) if args.init else None
    dims = initial.dims if initial is not None else Dims(args.vocab, args.embed_dim, args.hidden, args.window)
    config = TrainConfig(
        learning_rate=args.lr,
        epochs=args.epochs,
        batch_size=args.batch_size,
        seed=args.seed,
        threshold=args.threshold,
        dims=dims,
    )
    result = train(data, config, initial=initial)
    save_params(result.params, args.out)
    lines = ["trained on %d examples for %d epochs (%s)" % (len(data), config.epochs,
                                                           "continued from %s" % args.init if args.init else "fresh init")]
    lines += ["epoch %3d  loss %.6f" % (i + 1, v) for i, v in enumerate(result.losses)]
    lines.append("checkpoint written to %s" % args.out)
    _emit(args, "\n".join(lines), {
        "examples": len(data),
        "epochs": config.epochs,
        "learning_rate": config.learning_rate,
        "batch_size": config.batch_size,
        "seed": config.seed,
        "init": args.init,
        "dims": {"vocab": dims.vocab, "embed": dims.embed, "hidden": dims.hidden, "window": dims.window},
        "losses": result.losses,
        "checkpoint": args.out,
    })


def cmd_predict(args):
    params = load_params(args.init)
    data = read_dataset(args.data)
    preds = [predict_annotation(a, params, args.threshold) for a in data]
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        for p in preds:
            fh.write(dumps_annotation(p) + "\n")
    n_spans = sum(len(p.spans) for p in preds)
    n_empty = sum(1 for p in preds if not p.labels)
    _emit(args, "predicted %d spans over %d tweets (%d with no technique); written to %s"
          % (n_spans, len(preds), n_empty, args.out),
          {"tweets": len(preds), "spans": n_spans, "no_technique": n_empty, "predictions": args.out})


def cmd_project(args):
    examples = read_parallel(args.data, args.align)
    rep = project_dataset(examples, id_suffix=args.id_suffix, contiguous=not args.split_runs)
    write_dataset(rep.annotations, args.out)
    lines = [
        "examples       %d" % len(rep.annotations),
        "spans in       %d" % rep.spans_in,
        "spans out      %d" % rep.spans_out,
        "spans dropped  %d" % rep.spans_dropped,
    ]
    lines += ["error in %s: %s" % e for e in rep.errors]
    _emit(args, "\n".join(lines), rep.to_dict())


def cmd_filter(args):
    data = read_dataset(args.data)
    kept = filter_propaganda(data)
    write_dataset(kept, args.out)
    _emit(args, "kept %d of %d annotations" % (len(kept), len(data)), {"input": len(data), "kept": len(kept)})


_REPORT_ONLY = {"score-task1", "score-task2", "stats"}


def _threshold(s):
    v = float(s)
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError("must lie strictly between 0 and 1")
    return v


def _positive_float(s):
    v = float(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg_int(s):
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="propspan", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def command(name, func, help):
        p = sub.add_parser(name, help=help, description=help)
        p.add_argument("--format", choices=("text", "structured"), default="text",
                       help="standard-output report style")
        p.set_defaults(func=func)
        return p

    for name, func, help in (
        ("score-task1", cmd_score_task1, "multi-label micro/macro F1 (labels, or techniques of spans)"),
        ("score-task2", cmd_score_task2, "partial-credit span F1"),
    ):
        p = command(name, func, help)
        p.add_argument("--gold", required=True)
        p.add_argument("--pred", required=True)
        p.add_argument("--out", help="write the structured report here")

    p = command("stats", cmd_stats, "technique counts, span lengths and tweet lengths")
    p.add_argument("--data", required=True)
    p.add_argument("--out", help="write the structured report here")

    p = command("train", cmd_train, "train the gated tagger (or continue training with --init)")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True, help="checkpoint to write")
    p.add_argument("--init", help="checkpoint to continue training from")
    p.add_argument("--epochs", type=_nonneg_int, default=TrainConfig.epochs)
    p.add_argument("--lr", type=_positive_float, default=TrainConfig.learning_rate)
    p.add_argument("--batch-size", type=_positive_int, default=TrainConfig.batch_size)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=_threshold, default=0.5)
    p.add_argument("--vocab", type=_positive_int, default=Dims.vocab, help="hash buckets (fresh init only)")
    p.add_argument("--embed-dim", type=_positive_int, default=Dims.embed)
    p.add_argument("--hidden", type=_positive_int, default=Dims.hidden)
    p.add_argument("--window", type=_nonneg_int, default=Dims.window)
    p.add_argument("--report", help="write the structured training report here")

    p = command("predict", cmd_predict, "predict spans and label sets")
    p.add_argument("--data", required=True)
    p.add_argument("--init", "--model", dest="init", required=True, help="trained checkpoint")
    p.add_argument("--out", required=True, help="predictions (line-delimited JSON)")
    p.add_argument("--threshold", type=_threshold, default=0.5)
    p.add_argument("--seed", type=int, default=0, help="accepted for uniformity; prediction is deterministic")
    p.add_argument("--report")

    p = command("project", cmd_project, "project spans through word alignments")
    p.add_argument("--data", required=True, help="parallel records with target_text")
    p.add_argument("--align", required=True, help="Pharaoh alignments, one line per record")
    p.add_argument("--out", required=True)
    p.add_argument("--id-suffix", default="")
    p.add_argument("--split-runs", action="store_true",
                   help="one span per contiguous aligned run instead of the min..max closure")
    p.add_argument("--report")

    p = command("filter", cmd_filter, "keep only annotations with at least one span")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (PropspanError, OSError) as exc:
        print("propspan %s: error: %s" % (args.command, exc), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
