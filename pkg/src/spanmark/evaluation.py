"""Chunk-level micro precision/recall/F1 and intent accuracy.

A predicted chunk counts as a true positive only when start, end, and label
all match a gold chunk of the same sentence. Chunking is lenient, so BIO and
BIOES predictions from any decoder are scored the same way.
"""

import statistics
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

from .core import SpanmarkError, TaggedSentence, tags_to_spans
from .episodes import Episode


class LengthMismatch(SpanmarkError):
    """Gold and prediction disagree in shape.

    ``index`` is the offending sentence index, or None when the corpus-level
    list lengths differ.
    """

    def __init__(self, index: int | None, gold: int, pred: int):
        self.index = index
        where = "corpus" if index is None else f"sentence {index}"
        super().__init__(f"{where}: gold has {gold} items, prediction has {pred}")


@dataclass(frozen=True)
class LabelScore:
    tp: int
    fp: int
    fn: int
    f1: float


@dataclass(frozen=True)
class EvalReport:
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int
    per_label: dict[str, LabelScore]
    intent_accuracy: float | None
    n_sentences: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "per_label": {
                label: {"tp": s.tp, "fp": s.fp, "fn": s.fn, "f1": s.f1}
                for label, s in sorted(self.per_label.items())
            },
            "intent_accuracy": self.intent_accuracy,
            "n_sentences": self.n_sentences,
        }

    def format_table(self) -> str:
        """Aligned plain-text table, one row per label plus a totals row."""
        rows = [("label", "tp", "fp", "fn", "f1")]
        for label in sorted(self.per_label):
            s = self.per_label[label]
            rows.append((label, str(s.tp), str(s.fp), str(s.fn), f"{s.f1:.4f}"))
        rows.append(("TOTAL", str(self.tp), str(self.fp), str(self.fn), f"{self.f1:.4f}"))
        widths = [max(len(r[c]) for r in rows) for c in range(5)]
        lines = [
            "  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)).rstrip()
            for row in rows
        ]
        lines.append(f"precision {self.precision:.4f}  recall {self.recall:.4f}")
        if self.intent_accuracy is not None:
            lines.append(f"intent accuracy {self.intent_accuracy:.4f}")
        lines.append(f"sentences {self.n_sentences}")
        return "\n".join(lines)


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    # Micro F1 as one integer division: 2tp/(2tp+fp+fn) equals 2PR/(P+R)
    # exactly as rationals, so results match a brute-force rational oracle.
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * tp / (2 * tp + fp + fn) if 2 * tp + fp + fn else 0.0
    return precision, recall, f1


def score(
    gold: Sequence[TaggedSentence], pred: Sequence[TaggedSentence]
) -> EvalReport:
    """Score predictions against gold, chunk-by-chunk and class-by-class."""
    if len(gold) != len(pred):
        raise LengthMismatch(None, len(gold), len(pred))
    label_tp: Counter = Counter()
    label_fp: Counter = Counter()
    label_fn: Counter = Counter()
    class_total = 0
    class_hits = 0
    for i, (g, p) in enumerate(zip(gold, pred)):
        if len(g.tokens) != len(p.tokens):
            raise LengthMismatch(i, len(g.tokens), len(p.tokens))
        g_chunks = {(s.start, s.end, s.label) for s in tags_to_spans(g.tags, "lenient")}
        p_chunks = {(s.start, s.end, s.label) for s in tags_to_spans(p.tags, "lenient")}
        for chunk in g_chunks & p_chunks:
            label_tp[chunk[2]] += 1
        for chunk in p_chunks - g_chunks:
            label_fp[chunk[2]] += 1
        for chunk in g_chunks - p_chunks:
            label_fn[chunk[2]] += 1
        if g.sentence_class is not None:
            class_total += 1
            class_hits += int(p.sentence_class == g.sentence_class)

    labels = set(label_tp) | set(label_fp) | set(label_fn)
    per_label = {}
    for label in labels:
        tp, fp, fn = label_tp[label], label_fp[label], label_fn[label]
        per_label[label] = LabelScore(tp, fp, fn, _prf(tp, fp, fn)[2])
    tp, fp, fn = sum(label_tp.values()), sum(label_fp.values()), sum(label_fn.values())
    precision, recall, f1 = _prf(tp, fp, fn)
    return EvalReport(
        precision=precision,
        recall=recall,
        f1=f1,
        tp=tp,
        fp=fp,
        fn=fn,
        per_label=per_label,
        intent_accuracy=(class_hits / class_total) if class_total else None,
        n_sentences=len(gold),
    )


def score_episode(episode: Episode, predictions: Sequence[TaggedSentence]) -> EvalReport:
    """Score predictions for one episode's query set."""
    return score(list(episode.query), list(predictions))


def aggregate_f1(reports: Sequence[EvalReport]) -> tuple[float, float]:
    """Mean and population standard deviation of F1 across episodes."""
    if not reports:
        raise ValueError("no reports to aggregate")
    values = [r.f1 for r in reports]
    return statistics.fmean(values), statistics.pstdev(values)
