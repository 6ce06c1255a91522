"""Tests for detection and identification metrics."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from troopnet.evaluation import (
    IdSample,
    average_precision,
    confusion_matrix,
    false_negative_rate,
    match_detections,
    pooled_detection_metrics,
    pr_curve,
    topk_accuracy,
)
from troopnet.geometry import BBox, iou
from troopnet.ingest import Detection, Individual, Roster
from troopnet.rng import Rng, derive_seed


def _det(x, y, w, h, score):
    return Detection(bbox=BBox(x, y, w, h), score=score)


G1 = BBox(0.0, 0.0, 10.0, 10.0)
G2 = BBox(100.0, 0.0, 10.0, 10.0)


# ---------------------------------------------------------------------------
# matching


def test_match_single_perfect_pair():
    result = match_detections([_det(0.0, 0.0, 10.0, 10.0, 0.9)], [G1], 0.5)
    assert len(result.pairs) == 1
    assert result.pairs[0].prediction_index == 0
    assert result.pairs[0].gt_index == 0
    assert result.pairs[0].iou == 1.0
    assert result.unmatched_predictions == []
    assert result.unmatched_gts == []


def test_match_at_threshold_counts():
    # boxes (0,0,2,2) and (1,1,2,2) overlap with IoU exactly 1/7
    pred = _det(1.0, 1.0, 2.0, 2.0, 0.9)
    gt = BBox(0.0, 0.0, 2.0, 2.0)
    assert match_detections([pred], [gt], 1.0 / 7.0).pairs
    assert not match_detections([pred], [gt], 1.0 / 7.0 + 1e-12).pairs


def test_match_higher_score_claims_first():
    overlap_low = _det(2.0, 0.0, 10.0, 10.0, 0.3)  # IoU 2/3 with G1
    overlap_high = _det(4.0, 0.0, 10.0, 10.0, 0.9)  # IoU 3/7 with G1
    result = match_detections([overlap_low, overlap_high], [G1], 0.25)
    assert [(p.prediction_index, p.gt_index) for p in result.pairs] == [(1, 0)]
    assert result.unmatched_predictions == [0]


def test_match_iou_tie_takes_lower_gt_index():
    result = match_detections([_det(0.0, 0.0, 10.0, 10.0, 0.9)], [G1, G1], 0.5)
    assert result.pairs[0].gt_index == 0
    assert result.unmatched_gts == [1]


def test_match_unmatched_lists_sorted():
    far = BBox(500.0, 500.0, 5.0, 5.0)
    result = match_detections(
        [_det(300.0, 300.0, 5.0, 5.0, 0.2), _det(400.0, 300.0, 5.0, 5.0, 0.9)],
        [far],
        0.5,
    )
    assert result.unmatched_predictions == [0, 1]
    assert result.unmatched_gts == [0]


def test_match_rejects_bad_threshold():
    with pytest.raises(ValueError):
        match_detections([], [], 0.0)
    with pytest.raises(ValueError):
        match_detections([], [], 1.5)


# ---------------------------------------------------------------------------
# PR curve and average precision


def _two_gt_instance():
    preds = [
        _det(0.0, 0.0, 10.0, 10.0, 0.9),  # hits G1
        _det(300.0, 300.0, 10.0, 10.0, 0.8),  # hits nothing
        _det(100.0, 0.0, 10.0, 10.0, 0.7),  # hits G2
    ]
    return preds, [G1, G2]


def test_pr_curve_hand_case():
    preds, gts = _two_gt_instance()
    points = pr_curve(preds, gts, 0.5).points
    assert points == [(0.5, 1.0, 0.9), (0.5, 0.5, 0.8), (1.0, 2.0 / 3.0, 0.7)]


def test_average_precision_hand_case_101point():
    preds, gts = _two_gt_instance()
    ap = average_precision(preds, gts, 0.5)
    assert ap == pytest.approx(253.0 / 303.0, abs=1e-9)


def test_average_precision_hand_case_exact():
    preds, gts = _two_gt_instance()
    ap = average_precision(preds, gts, 0.5, interpolation="exact")
    assert ap == pytest.approx(0.5 * 1.0 + 0.5 * (2.0 / 3.0), abs=1e-12)


def test_average_precision_perfect_run():
    preds = [_det(0.0, 0.0, 10.0, 10.0, 0.9), _det(100.0, 0.0, 10.0, 10.0, 0.8)]
    assert average_precision(preds, [G1, G2], 0.5) == pytest.approx(1.0, abs=1e-12)


def test_average_precision_empty_rules():
    assert average_precision([], [], 0.5) == 1.0
    assert average_precision([_det(0.0, 0.0, 5.0, 5.0, 0.9)], [], 0.5) == 0.0
    assert average_precision([], [G1], 0.5) == 0.0


def test_average_precision_rejects_unknown_interpolation():
    with pytest.raises(ValueError, match="interpolation"):
        average_precision([], [], 0.5, interpolation="11point")


def _random_instance(seed, max_boxes=12):
    """Seeded detection instance with effectively unique scores."""
    rng = Rng(seed)
    gts = [
        BBox(rng.uniform(0.0, 400.0), rng.uniform(0.0, 400.0),
             20.0 + rng.uniform(0.0, 60.0), 20.0 + rng.uniform(0.0, 60.0))
        for _ in range(rng.randrange(max_boxes + 1))
    ]
    preds = []
    for _ in range(rng.randrange(max_boxes + 1)):
        if gts and rng.random() < 0.6:
            base = gts[rng.randrange(len(gts))]
            box = BBox(
                base.x + rng.uniform(-15.0, 15.0),
                base.y + rng.uniform(-15.0, 15.0),
                base.w * (0.8 + rng.uniform(0.0, 0.4)),
                base.h * (0.8 + rng.uniform(0.0, 0.4)),
            )
        else:
            box = BBox(rng.uniform(0.0, 400.0), rng.uniform(0.0, 400.0),
                       20.0 + rng.uniform(0.0, 60.0), 20.0 + rng.uniform(0.0, 60.0))
        preds.append(Detection(bbox=box, score=rng.uniform(0.05, 1.0)))
    return preds, gts


def _oracle_ap_101(preds, gts, iou_threshold):
    """101-point AP by literally rematching at every distinct score threshold."""
    if not gts:
        return 1.0 if not preds else 0.0
    if not preds:
        return 0.0
    points = []
    for threshold in sorted({p.score for p in preds}, reverse=True):
        kept = [p for p in preds if p.score >= threshold]
        kept.sort(key=lambda p: -p.score)
        taken = [False] * len(gts)
        matched = 0
        for p in kept:
            best, best_j = 0.0, -1
            for j, gt in enumerate(gts):
                overlap = iou(p.bbox, gt)
                if not taken[j] and overlap >= iou_threshold and overlap > best:
                    best, best_j = overlap, j
            if best_j >= 0:
                taken[best_j] = True
                matched += 1
        points.append((matched / len(gts), matched / len(kept)))
    total = 0.0
    for i in range(101):
        r = i / 100.0
        best = 0.0
        for recall, precision in points:
            if recall >= r and precision > best:
                best = precision
        total += best
    return total / 101.0


@given(st.integers(0, 10_000))
@settings(max_examples=80, deadline=None)
def test_ap_equals_exhaustive_threshold_oracle(seed):
    preds, gts = _random_instance(seed)
    assert average_precision(preds, gts, 0.5) == pytest.approx(
        _oracle_ap_101(preds, gts, 0.5), abs=1e-9
    )


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_ap_and_fnr_invariant_under_permutation(seed):
    preds, gts = _random_instance(seed)
    assume(preds and gts)
    rng = Rng(derive_seed(seed, "perm"))
    preds2 = [preds[i] for i in rng.permutation(len(preds))]
    gts2 = [gts[i] for i in rng.permutation(len(gts))]
    assert average_precision(preds2, gts2, 0.5) == average_precision(preds, gts, 0.5)
    assert false_negative_rate(preds2, gts2, 0.5) == false_negative_rate(preds, gts, 0.5)


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_breaking_a_match_never_raises_ap(seed):
    preds, gts = _random_instance(seed)
    assume(preds and gts)
    result = match_detections(preds, gts, 0.5)
    assume(result.pairs)
    before = average_precision(preds, gts, 0.5)
    k = result.pairs[0].prediction_index
    moved = list(preds)
    moved[k] = Detection(bbox=BBox(10_000.0, 10_000.0, 5.0, 5.0), score=preds[k].score)
    assert average_precision(moved, gts, 0.5) <= before + 1e-12


# ---------------------------------------------------------------------------
# false negative rate


def test_fnr_zero_when_all_found():
    preds = [_det(0.0, 0.0, 10.0, 10.0, 0.9), _det(100.0, 0.0, 10.0, 10.0, 0.8)]
    assert false_negative_rate(preds, [G1, G2], 0.5) == 0.0


def test_fnr_counts_misses():
    preds = [
        _det(0.0, 0.0, 10.0, 10.0, 0.9),
        _det(100.0, 0.0, 10.0, 10.0, 0.9),
        _det(200.0, 0.0, 10.0, 10.0, 0.9),
        _det(300.0, 0.0, 10.0, 10.0, 0.9),
    ]
    gts = [G1, G2, BBox(200.0, 0.0, 10.0, 10.0), BBox(300.0, 0.0, 10.0, 10.0),
           BBox(400.0, 0.0, 10.0, 10.0)]
    assert false_negative_rate(preds, gts, 0.5) == pytest.approx(0.2)


def test_fnr_score_threshold_drops_predictions():
    preds = [_det(0.0, 0.0, 10.0, 10.0, 0.4)]
    assert false_negative_rate(preds, [G1], 0.5, score_threshold=0.5) == 1.0
    assert false_negative_rate(preds, [G1], 0.5, score_threshold=0.3) == 0.0


def test_fnr_empty_rules():
    assert false_negative_rate([], [], 0.5) == 0.0
    assert false_negative_rate([_det(0.0, 0.0, 5.0, 5.0, 0.9)], [], 0.5) == 0.0
    assert false_negative_rate([], [G1], 0.5) == 1.0


# ---------------------------------------------------------------------------
# top-k accuracy


def test_topk_hand_case_with_tie():
    samples = [IdSample({"A": 0.3, "B": 0.3, "C": 0.4}, "B")]
    # rank order is C, then B (ties rank the later name first), then A
    assert topk_accuracy(samples, 1) == 0.0
    assert topk_accuracy(samples, 2) == 1.0


def test_topk_counts_fraction():
    samples = [
        IdSample({"A": 0.9, "B": 0.1}, "A"),
        IdSample({"A": 0.9, "B": 0.1}, "B"),
    ]
    assert topk_accuracy(samples, 1) == 0.5
    assert topk_accuracy(samples, 2) == 1.0


def test_topk_monotone_in_k():
    rng = Rng(7)
    names = ["A", "B", "C", "D", "E"]
    samples = []
    for _ in range(40):
        scores = {nm: rng.random() for nm in names}
        samples.append(IdSample(scores, names[rng.randrange(len(names))]))
    values = [topk_accuracy(samples, k) for k in range(1, 6)]
    assert values == sorted(values)
    assert values[-1] == 1.0


def test_topk_errors():
    sample = IdSample({"A": 1.0}, "A")
    with pytest.raises(ValueError, match="k"):
        topk_accuracy([sample], 0)
    with pytest.raises(ValueError, match="sample"):
        topk_accuracy([], 1)
    with pytest.raises(ValueError, match="empty"):
        topk_accuracy([IdSample({}, "A")], 1)
    with pytest.raises(ValueError, match="absent"):
        topk_accuracy([IdSample({"B": 1.0}, "A")], 1)


# ---------------------------------------------------------------------------
# confusion matrix


ROSTER3 = Roster([Individual("A"), Individual("B"), Individual("C")])


def test_confusion_hand_case():
    samples = [IdSample({"A": 0.9, "B": 0.1}, "A")] * 3 + [IdSample({"A": 0.2, "B": 0.8}, "A")]
    m = confusion_matrix(samples, ROSTER3)
    assert m[0].tolist() == [0.75, 0.25, 0.0]
    assert m[1].tolist() == [0.0, 0.0, 0.0]


def test_confusion_counts_unnormalized():
    samples = [IdSample({"A": 0.9, "B": 0.1}, "A")] * 3 + [IdSample({"A": 0.2, "B": 0.8}, "A")]
    m = confusion_matrix(samples, ROSTER3, normalize=False)
    assert m[0].tolist() == [3.0, 1.0, 0.0]


def test_confusion_rows_sum_to_one():
    rng = Rng(11)
    names = ROSTER3.names
    samples = []
    for _ in range(200):
        scores = {nm: rng.random() for nm in names}
        samples.append(IdSample(scores, names[rng.randrange(3)]))
    m = confusion_matrix(samples, ROSTER3)
    for r in range(3):
        assert abs(m[r].sum() - 1.0) <= 1e-12


def test_confusion_argmax_tie_takes_later_name():
    m = confusion_matrix([IdSample({"A": 0.5, "B": 0.5}, "A")], ROSTER3)
    assert m[0].tolist() == [0.0, 1.0, 0.0]


def test_confusion_rejects_unknown_names():
    with pytest.raises(ValueError, match="true label"):
        confusion_matrix([IdSample({"A": 1.0}, "Zed")], ROSTER3)
    with pytest.raises(ValueError, match="predicted"):
        confusion_matrix([IdSample({"Zed": 1.0}, "A")], ROSTER3)


# ---------------------------------------------------------------------------
# pooled metrics


def test_pooled_single_group_matches_plain_metrics():
    preds, gts = _two_gt_instance()
    out = pooled_detection_metrics([(preds, gts)], 0.5)
    assert out["average_precision"] == pytest.approx(average_precision(preds, gts, 0.5), abs=1e-12)
    assert out["false_negative_rate"] == false_negative_rate(preds, gts, 0.5)
    assert out["n_ground_truths"] == 2
    assert out["n_predictions"] == 3
    assert out["iou_threshold"] == 0.5
    assert out["score_threshold"] == 0.5


def test_pooled_two_groups_hand_case():
    hit = ([_det(0.0, 0.0, 10.0, 10.0, 0.9)], [G1])
    miss = ([_det(300.0, 300.0, 10.0, 10.0, 0.8)], [G2])
    out = pooled_detection_metrics([hit, miss], 0.5)
    assert out["average_precision"] == pytest.approx(51.0 / 101.0, abs=1e-12)
    assert out["false_negative_rate"] == 0.5
    assert out["n_ground_truths"] == 2
    assert out["n_predictions"] == 2


def test_pooled_matching_confined_to_groups():
    # the prediction in group two sits exactly on group one's ground truth
    # but cannot match across the group boundary
    stray = ([_det(0.0, 0.0, 10.0, 10.0, 0.9)], [G2])
    out = pooled_detection_metrics([([], [G1]), stray], 0.5)
    assert out["false_negative_rate"] == 1.0


def test_pooled_empty_inputs():
    out = pooled_detection_metrics([], 0.5)
    assert out["average_precision"] == 1.0
    assert out["false_negative_rate"] == 0.0
    assert out["n_ground_truths"] == 0
    assert out["n_predictions"] == 0
