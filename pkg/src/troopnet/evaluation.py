"""Detection and identification metrics.

Greedy score-ordered box matching, interpolated average precision, false
negative rate, top-k accuracy and confusion matrices. Matching follows the
usual convention: predictions are taken in descending score order and each
claims the unmatched ground truth of highest IoU at or above the
threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import BBox, iou
from .ingest import Detection, Roster

__all__ = [
    "MatchPair",
    "MatchResult",
    "PRCurve",
    "IdSample",
    "match_detections",
    "pr_curve",
    "average_precision",
    "false_negative_rate",
    "topk_accuracy",
    "confusion_matrix",
    "pooled_detection_metrics",
]


@dataclass
class MatchPair:
    prediction_index: int
    gt_index: int
    iou: float


@dataclass
class MatchResult:
    pairs: list[MatchPair]
    unmatched_predictions: list[int]
    unmatched_gts: list[int]


@dataclass
class PRCurve:
    """Precision/recall points in descending score-threshold order."""

    points: list[tuple[float, float, float]] = field(default_factory=list)  # (recall, precision, score)


@dataclass
class IdSample:
    """One identification sample: a score map and the true label."""

    class_scores: dict[str, float]
    true_label: str


def _check_threshold(iou_threshold: float) -> None:
    if not 0.0 < iou_threshold <= 1.0:
        raise ValueError(f"iou_threshold must be in (0, 1], got {iou_threshold}")


def _score_order(preds: list[Detection]) -> list[int]:
    return sorted(range(len(preds)), key=lambda i: (-preds[i].score, i))


def match_detections(preds: list[Detection], gts: list[BBox], iou_threshold: float) -> MatchResult:
    """Greedy one-to-one matching of predictions to ground-truth boxes.

    Predictions are processed in descending score order (ties by input
    order); each takes the unmatched ground truth of highest IoU at or
    above the threshold, IoU ties going to the lower ground-truth index.
    """
    _check_threshold(iou_threshold)
    taken = [False] * len(gts)
    pairs = []
    unmatched_preds = []
    for i in _score_order(preds):
        best_j = -1
        best_iou = 0.0
        for j, gt in enumerate(gts):
            if taken[j]:
                continue
            overlap = iou(preds[i].bbox, gt)
            if overlap >= iou_threshold and overlap > best_iou:
                best_iou = overlap
                best_j = j
        if best_j >= 0:
            taken[best_j] = True
            pairs.append(MatchPair(prediction_index=i, gt_index=best_j, iou=best_iou))
        else:
            unmatched_preds.append(i)
    return MatchResult(
        pairs=pairs,
        unmatched_predictions=sorted(unmatched_preds),
        unmatched_gts=[j for j, t in enumerate(taken) if not t],
    )


def _tp_flags(preds: list[Detection], gts: list[BBox], iou_threshold: float) -> list[bool]:
    """True-positive flag per prediction, in descending score order."""
    result = match_detections(preds, gts, iou_threshold)
    matched = {p.prediction_index for p in result.pairs}
    return [i in matched for i in _score_order(preds)]


def pr_curve(preds: list[Detection], gts: list[BBox], iou_threshold: float) -> PRCurve:
    """Cumulative precision/recall after each prediction, best score first."""
    _check_threshold(iou_threshold)
    flags = _tp_flags(preds, gts, iou_threshold)
    order = _score_order(preds)
    n_gt = len(gts)
    points = []
    tp = 0
    for k, flag in enumerate(flags, start=1):
        if flag:
            tp += 1
        recall = tp / n_gt if n_gt else 0.0
        points.append((recall, tp / k, preds[order[k - 1]].score))
    return PRCurve(points=points)


def average_precision(
    preds: list[Detection],
    gts: list[BBox],
    iou_threshold: float,
    interpolation: str = "101point",
) -> float:
    """Interpolated average precision at the given IoU threshold.

    "101point" averages the precision envelope max{P at recall >= r} over
    the grid r = 0.00, 0.01, ..., 1.00. "exact" integrates the same
    envelope over recall without gridding. Defined as 1.0 when there are
    neither ground truths nor predictions (vacuous success) and 0.0 when
    only one side is empty.
    """
    _check_threshold(iou_threshold)
    if interpolation not in ("101point", "exact"):
        raise ValueError(f"interpolation must be '101point' or 'exact', got {interpolation!r}")
    if not gts:
        return 1.0 if not preds else 0.0
    if not preds:
        return 0.0
    curve = pr_curve(preds, gts, iou_threshold).points
    recalls = [r for r, _p, _s in curve]
    envelope = [p for _r, p, _s in curve]
    for k in range(len(envelope) - 2, -1, -1):
        envelope[k] = max(envelope[k], envelope[k + 1])
    if interpolation == "101point":
        values = []
        k = 0
        for i in range(101):
            r = i / 100.0
            while k < len(recalls) and recalls[k] < r:
                k += 1
            values.append(envelope[k] if k < len(recalls) else 0.0)
        return math.fsum(values) / 101.0
    total = []
    prev_recall = 0.0
    for k in range(len(recalls)):
        if recalls[k] > prev_recall:
            total.append((recalls[k] - prev_recall) * envelope[k])
            prev_recall = recalls[k]
    return math.fsum(total)


def false_negative_rate(
    preds: list[Detection],
    gts: list[BBox],
    iou_threshold: float,
    score_threshold: float = 0.5,
) -> float:
    """FN / (FN + TP) over ground truths, after dropping low-score predictions.

    0.0 when there are no ground truths; 1.0 when nothing is detected.
    """
    _check_threshold(iou_threshold)
    if not gts:
        return 0.0
    kept = [p for p in preds if p.score >= score_threshold]
    result = match_detections(kept, gts, iou_threshold)
    return len(result.unmatched_gts) / len(gts)


def _ranked_names(class_scores: dict[str, float]) -> list[str]:
    # score descending; equal scores rank the lexicographically later name first
    return sorted(class_scores, key=lambda nm: (class_scores[nm], nm), reverse=True)


def topk_accuracy(samples: list[IdSample], k: int) -> float:
    """Fraction of samples whose true label is among the k best-scored names."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if not samples:
        raise ValueError("topk_accuracy needs at least one sample")
    hits = 0
    for i, sample in enumerate(samples):
        if not sample.class_scores:
            raise ValueError(f"sample {i}: empty class_scores")
        if sample.true_label not in sample.class_scores:
            raise ValueError(f"sample {i}: true label {sample.true_label!r} absent from class_scores")
        if sample.true_label in _ranked_names(sample.class_scores)[:k]:
            hits += 1
    return hits / len(samples)


def confusion_matrix(samples: list[IdSample], roster: Roster, normalize: bool = True) -> np.ndarray:
    """Confusion counts, rows = true identity, columns = predicted (argmax).

    With normalize, rows with at least one sample are divided by their sum;
    all-zero rows stay zero. Row and column order follow the roster.
    """
    names = roster.names
    index = {name: i for i, name in enumerate(names)}
    counts = np.zeros((len(names), len(names)))
    for i, sample in enumerate(samples):
        if not sample.class_scores:
            raise ValueError(f"sample {i}: empty class_scores")
        if sample.true_label not in index:
            raise ValueError(f"sample {i}: unknown true label {sample.true_label!r}")
        predicted = _ranked_names(sample.class_scores)[0]
        if predicted not in index:
            raise ValueError(f"sample {i}: unknown predicted name {predicted!r}")
        counts[index[sample.true_label], index[predicted]] += 1.0
    if normalize:
        for r in range(len(names)):
            row_sum = counts[r].sum()
            if row_sum > 0:
                counts[r] = counts[r] / row_sum
    return counts


def pooled_detection_metrics(
    groups: list[tuple[list[Detection], list[BBox]]],
    iou_threshold: float,
    score_threshold: float = 0.5,
) -> dict:
    """Detection metrics pooled over frames or images.

    Matching is confined to each group; the PR curve pools all predictions
    by descending score (ties by group order, then index). Returns AP
    (101-point), the false negative rate at the score threshold, and the
    underlying counts.
    """
    _check_threshold(iou_threshold)
    pooled: list[tuple[float, int, int, bool]] = []  # (-score, group, idx, is_tp)
    n_gt = 0
    fn_at_threshold = 0
    for g, (preds, gts) in enumerate(groups):
        n_gt += len(gts)
        flags = _tp_flags(preds, gts, iou_threshold)
        order = _score_order(preds)
        for pos, i in enumerate(order):
            pooled.append((-preds[i].score, g, i, flags[pos]))
        kept = [p for p in preds if p.score >= score_threshold]
        fn_at_threshold += len(match_detections(kept, gts, iou_threshold).unmatched_gts)
    pooled.sort()
    if n_gt == 0:
        ap = 1.0 if not pooled else 0.0
    elif not pooled:
        ap = 0.0
    else:
        tp = 0
        recalls = []
        envelope = []
        for k, (_s, _g, _i, flag) in enumerate(pooled, start=1):
            if flag:
                tp += 1
            recalls.append(tp / n_gt)
            envelope.append(tp / k)
        for k in range(len(envelope) - 2, -1, -1):
            envelope[k] = max(envelope[k], envelope[k + 1])
        values = []
        k = 0
        for i in range(101):
            r = i / 100.0
            while k < len(recalls) and recalls[k] < r:
                k += 1
            values.append(envelope[k] if k < len(recalls) else 0.0)
        ap = math.fsum(values) / 101.0
    return {
        "average_precision": ap,
        "false_negative_rate": (fn_at_threshold / n_gt) if n_gt else 0.0,
        "iou_threshold": iou_threshold,
        "score_threshold": score_threshold,
        "n_ground_truths": n_gt,
        "n_predictions": len(pooled),
    }
