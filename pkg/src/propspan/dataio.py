"""Line-delimited JSON datasets.

One record per line::

    {"id": "17", "text": "...", "spans": [{"start": 0, "end": 5, "technique": "Doubt"}], "labels": ["Doubt"]}

``labels`` is optional (Subtask-1 files).  Parallel corpora add a
``target_text`` field and pair line-by-line with a Pharaoh alignment file.
"""

from __future__ import annotations

import json
from typing import Iterable, List

from .core import Span, TweetAnnotation, technique_from_name, validate_annotation
from .errors import ParseError, PropspanError, ValidationError
from .projection import ParallelExample, parse_alignment


def _record_to_annotation(rec, line_no: int) -> TweetAnnotation:
    if not isinstance(rec, dict):
        raise ParseError(line_no, "record must be a JSON object")
    for key, typ in (("id", str), ("text", str), ("spans", list)):
        if key not in rec:
            raise ParseError(line_no, "missing field %r" % key)
        if not isinstance(rec[key], typ):
            raise ParseError(line_no, "field %r must be %s" % (key, typ.__name__))
    spans = []
    for k, s in enumerate(rec["spans"]):
        if not isinstance(s, dict) or not {"start", "end", "technique"} <= s.keys():
            raise ParseError(line_no, "span %d needs start, end and technique" % k)
        if not all(type(s[f]) is int for f in ("start", "end")):
            raise ParseError(line_no, "span %d offsets must be integers" % k)
        try:
            tech = technique_from_name(s["technique"])
        except (PropspanError, AttributeError, TypeError) as exc:
            raise ParseError(line_no, str(exc)) from None
        spans.append(Span(s["start"], s["end"], tech))
    labels = None
    if "labels" in rec:
        if not isinstance(rec["labels"], list):
            raise ParseError(line_no, "field 'labels' must be a list")
        try:
            labels = frozenset(technique_from_name(n) for n in rec["labels"])
        except (PropspanError, AttributeError, TypeError) as exc:
            raise ParseError(line_no, str(exc)) from None
    ann = TweetAnnotation(rec["id"], rec["text"], tuple(spans), labels)
    violations = validate_annotation(ann)
    if violations:
        raise ValidationError(ann.id, violations)
    return ann


def _iter_records(path):
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                yield line_no, json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(line_no, "invalid JSON: %s" % exc.msg) from None


def read_dataset(path) -> List[TweetAnnotation]:
    return [_record_to_annotation(rec, n) for n, rec in _iter_records(path)]


def annotation_to_record(ann: TweetAnnotation) -> dict:
    rec = {
        "id": ann.id,
        "text": ann.text,
        "spans": [{"start": s.start, "end": s.end, "technique": s.technique.canonical_name} for s in ann.spans],
    }
    if ann.labels is not None:
        rec["labels"] = [t.canonical_name for t in sorted(ann.labels)]
    return rec


def dumps_annotation(ann: TweetAnnotation) -> str:
    return json.dumps(annotation_to_record(ann), ensure_ascii=False)


def write_dataset(anns: Iterable[TweetAnnotation], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for ann in anns:
            fh.write(dumps_annotation(ann) + "\n")


def read_parallel(corpus_path, align_path) -> List[ParallelExample]:
    """Parallel records (source annotation + ``target_text``) zipped with alignment lines."""
    records = list(_iter_records(corpus_path))
    with open(align_path, encoding="utf-8") as fh:
        align_lines = fh.read().splitlines()
    if len(align_lines) != len(records):
        raise ParseError(
            min(len(align_lines), len(records)) + 1,
            "%d corpus records but %d alignment lines" % (len(records), len(align_lines)),
        )
    out = []
    for (line_no, rec), align in zip(records, align_lines):
        ann = _record_to_annotation(rec, line_no)
        target = rec.get("target_text")
        if not isinstance(target, str):
            raise ParseError(line_no, "missing string field 'target_text'")
        try:
            links = parse_alignment(align)
        except PropspanError as exc:
            raise ParseError(line_no, "alignment: %s" % exc) from None
        out.append(ParallelExample(ann, target, links))
    return out


def write_parallel(examples: Iterable[ParallelExample], corpus_path, align_path) -> None:
    from .projection import format_alignment

    with open(corpus_path, "w", encoding="utf-8", newline="\n") as fc, open(
        align_path, "w", encoding="utf-8", newline="\n"
    ) as fa:
        for ex in examples:
            rec = annotation_to_record(ex.source)
            rec["target_text"] = ex.target_text
            fc.write(json.dumps(rec, ensure_ascii=False) + "\n")
            fa.write(format_alignment(ex.links) + "\n")


def _alias_key(name: str) -> str:
    return "".join(ch for ch in name.casefold() if ch.isalnum())


def lenient_technique(name: str):
    """Match technique names that differ from the registry in case, punctuation
    or a trailing parenthetical (e.g. ``"... Position (Straw Man)"``)."""
    from .core import TECHNIQUE_NAMES, Technique

    table = {_alias_key(n): Technique(i) for i, n in enumerate(TECHNIQUE_NAMES)}
    key = _alias_key(name)
    if key in table:
        return table[key]
    stripped = name.rsplit("(", 1)[0] if name.rstrip().endswith(")") else name
    if _alias_key(stripped) in table:
        return table[_alias_key(stripped)]
    return technique_from_name(name)


def read_shared_task_json(path) -> List[TweetAnnotation]:
    """Import adapter for a JSON array of ``{"id", "text", "labels": [...]}`` objects.

    ``labels`` may hold span objects (``start``/``end``/``technique``) or bare
    technique names.  Offsets are taken as code-point indices.
    """
    with open(path, encoding="utf-8") as fh:
        try:
            records = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.lineno, "invalid JSON: %s" % exc.msg) from None
    if not isinstance(records, list):
        raise ParseError(1, "expected a JSON array of records")
    out = []
    for k, rec in enumerate(records, 1):
        spans, names = [], set()
        for lab in rec.get("labels", []):
            if isinstance(lab, dict):
                spans.append(Span(int(lab["start"]), int(lab["end"]), lenient_technique(lab["technique"])))
            else:
                names.add(lenient_technique(lab))
        ann = TweetAnnotation(str(rec["id"]), rec["text"], tuple(spans), frozenset(names) if names else None)
        violations = validate_annotation(ann)
        if violations:
            raise ValidationError(ann.id, violations)
        out.append(ann)
    return out
