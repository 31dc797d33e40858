"""Binary confusion matrix, classification report and accuracy.

Cell naming mirrors the evaluation table layout this pipeline reports
(rows = actual, columns = predicted): fp sits in the actual-positive
row and fn in the actual-negative row. The report formulas are derived
against that layout so the printed numbers stay self-consistent.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal


@dataclass(frozen=True)
class ConfusionMatrix2:
    tp: int  # actual positive, predicted positive
    fp: int  # actual positive, predicted negative
    fn: int  # actual negative, predicted positive
    tn: int  # actual negative, predicted negative

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int
    degenerate: bool = False  # a zero denominator was clamped to 0


@dataclass(frozen=True)
class ClassReport:
    positive: ClassMetrics
    negative: ClassMetrics
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float
    total: int


def confusion(pairs) -> ConfusionMatrix2:
    """Tally (actual, predicted) label pairs; labels must be 0.0/1.0."""
    tp = fp = fn = tn = 0
    for actual, predicted in pairs:
        if actual not in (0.0, 1.0) or predicted not in (0.0, 1.0):
            raise ValueError(f"labels must be 0.0 or 1.0, got ({actual}, {predicted})")
        if actual == 1.0:
            if predicted == 1.0:
                tp += 1
            else:
                fp += 1
        else:
            if predicted == 1.0:
                fn += 1
            else:
                tn += 1
    return ConfusionMatrix2(tp=tp, fp=fp, fn=fn, tn=tn)


def _ratio(num: int, denom: int) -> tuple[float, bool]:
    if denom == 0:
        return 0.0, True
    return num / denom, False


def _class_metrics(correct: int, precision_denom: int, support: int) -> ClassMetrics:
    precision, p_deg = _ratio(correct, precision_denom)
    recall, r_deg = _ratio(correct, support)
    if precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    else:
        f1 = 0.0
    return ClassMetrics(
        precision=precision,
        recall=recall,
        f1=f1,
        support=support,
        degenerate=p_deg or r_deg,
    )


def report(cm: ConfusionMatrix2) -> ClassReport:
    """Per-class precision/recall/F1/support plus support-weighted averages."""
    positive = _class_metrics(cm.tp, cm.tp + cm.fn, cm.tp + cm.fp)
    negative = _class_metrics(cm.tn, cm.tn + cm.fp, cm.tn + cm.fn)
    total = cm.total

    def weighted(metric: str) -> float:
        if total == 0:
            return 0.0
        return (
            getattr(positive, metric) * positive.support
            + getattr(negative, metric) * negative.support
        ) / total

    return ClassReport(
        positive=positive,
        negative=negative,
        weighted_precision=weighted("precision"),
        weighted_recall=weighted("recall"),
        weighted_f1=weighted("f1"),
        total=total,
    )


def accuracy(cm: ConfusionMatrix2) -> float:
    """(tp + tn) / total."""
    if cm.total == 0:
        raise ValueError("empty confusion matrix has no accuracy")
    return (cm.tp + cm.tn) / cm.total


def round2(value: float) -> float:
    """Half-up rounding to 2 decimals, as printed in the report."""
    return float(Decimal(repr(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))
