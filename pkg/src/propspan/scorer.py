"""Subtask-1 multi-label F1 and Subtask-2 partial-credit span F1.

Span credit for a predicted span ``s`` and gold span ``t`` of the same
technique is ``overlap(s, t) / h``, with ``h = len(s)`` for precision and
``h = len(t)`` for recall.  Credits are summed over all same-tweet pairs and
micro-averaged over the corpus; nothing is capped, so one predicted span
covering two same-technique gold spans collects both credits.
"""

from __future__ import annotations

import array
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple

from . import _kernels
from .core import N_TECHNIQUES, LabelSet, Span, Technique, TweetAnnotation, overlap
from .errors import DuplicateId, UnknownId


@dataclass(frozen=True)
class ClassScore:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class ScoreReport:
    precision: float
    recall: float
    f1: float
    per_technique: Dict[Technique, ClassScore] = field(default_factory=dict)
    macro_f1: float | None = None

    def to_dict(self) -> dict:
        out = {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }
        if self.macro_f1 is not None:
            out["macro_f1"] = self.macro_f1
        out["per_technique"] = {
            t.canonical_name: {
                "precision": c.precision,
                "recall": c.recall,
                "f1": c.f1,
                "support": c.support,
            }
            for t, c in sorted(self.per_technique.items())
        }
        return out


def f1_score(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def _count_f1(tp: int, fp: int, fn: int) -> float:
    # algebraically equal to 2PR/(P+R), but a single correctly-rounded division
    return _ratio(2 * tp, 2 * tp + fp + fn)


def _ratio(num, den) -> float:
    return num / den if den > 0 else 0.0


def pair_credit(s: Span, t: Span, h: int) -> float:
    """Credit of predicted ``s`` against gold ``t``, normalized by ``h``."""
    if s.technique != t.technique:
        return 0.0
    return overlap(s, t) / h


def _check_ids(gold_ids: Sequence[str], pred_ids: Sequence[str]):
    for ids, which in ((gold_ids, "gold"), (pred_ids, "pred")):
        dup = [k for k, c in Counter(ids).items() if c > 1]
        if dup:
            raise DuplicateId(sorted(dup), which)
    known = set(gold_ids)
    missing = [k for k in pred_ids if k not in known]
    if missing:
        raise UnknownId(missing)


def _flatten(anns_by_doc: Iterable[Tuple[int, Sequence[Span]]]):
    doc, start, end, tech = (array.array("q") for _ in range(4))
    for d, spans in anns_by_doc:
        for s in spans:
            doc.append(d)
            start.append(s.start)
            end.append(s.end)
            tech.append(s.technique.index)
    return doc, start, end, tech


def score_task2(gold: Sequence[TweetAnnotation], pred: Sequence[TweetAnnotation]) -> ScoreReport:
    """Partial-credit span precision/recall/F1, micro-averaged over the corpus.

    Gold tweets with no prediction record count as empty predictions.
    """
    _check_ids([g.id for g in gold], [p.id for p in pred])
    pred_by_id = {p.id: p for p in pred}
    gold_docs = [(d, g.spans) for d, g in enumerate(gold)]
    pred_docs = [(d, pred_by_id[g.id].spans if g.id in pred_by_id else ()) for d, g in enumerate(gold)]

    prec_num, rec_num = _kernels.credit_sums(*_flatten(pred_docs), *_flatten(gold_docs), N_TECHNIQUES)
    n_pred = Counter(s.technique for _, spans in pred_docs for s in spans)
    n_gold = Counter(s.technique for _, spans in gold_docs for s in spans)

    per = {}
    for t in Technique:
        p = _ratio(prec_num[t.index], n_pred[t])
        r = _ratio(rec_num[t.index], n_gold[t])
        per[t] = ClassScore(p, r, f1_score(p, r), n_gold[t])
    p = _ratio(sum(prec_num), sum(n_pred.values()))
    r = _ratio(sum(rec_num), sum(n_gold.values()))
    return ScoreReport(p, r, f1_score(p, r), per)


def score_task1(
    gold: Sequence[Tuple[str, LabelSet]], pred: Sequence[Tuple[str, LabelSet]]
) -> ScoreReport:
    """Micro P/R/F1 over (tweet, technique) decisions, plus macro-F1 over all 20 techniques."""
    _check_ids([k for k, _ in gold], [k for k, _ in pred])
    pred_by_id = dict(pred)
    tp: Counter = Counter()
    fp: Counter = Counter()
    fn: Counter = Counter()
    for k, g in gold:
        p = pred_by_id.get(k, frozenset())
        for t in g & p:
            tp[t] += 1
        for t in p - g:
            fp[t] += 1
        for t in g - p:
            fn[t] += 1

    per = {}
    for t in Technique:
        pt = _ratio(tp[t], tp[t] + fp[t])
        rt = _ratio(tp[t], tp[t] + fn[t])
        per[t] = ClassScore(pt, rt, _count_f1(tp[t], fp[t], fn[t]), tp[t] + fn[t])
    TP, FP, FN = sum(tp.values()), sum(fp.values()), sum(fn.values())
    p = _ratio(TP, TP + FP)
    r = _ratio(TP, TP + FN)
    macro = sum(c.f1 for c in per.values()) / N_TECHNIQUES
    return ScoreReport(p, r, _count_f1(TP, FP, FN), per, macro_f1=macro)


def format_report(report: ScoreReport, title: str = "") -> str:
    lines: List[str] = []
    if title:
        lines.append(title)
    lines.append("%-48s %9s %9s %9s %8s" % ("technique", "precision", "recall", "f1", "support"))
    for t, c in sorted(report.per_technique.items()):
        lines.append("%-48s %9.4f %9.4f %9.4f %8d" % (t.canonical_name, c.precision, c.recall, c.f1, c.support))
    lines.append("-" * 87)
    lines.append("%-48s %9.4f %9.4f %9.4f" % ("micro", report.precision, report.recall, report.f1))
    if report.macro_f1 is not None:
        lines.append("%-48s %9s %9s %9.4f" % ("macro", "", "", report.macro_f1))
    return "\n".join(lines)
