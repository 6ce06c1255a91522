"""Face tracks from detection streams, identity fusion, and ledgers.

Tracks are built by frame-to-frame association: within each frame, active
tracks and detections are matched one-to-one by minimum total cost with
cost = 1 - IoU, pairs below the IoU gate excluded. A track that goes
unmatched for more than max_gap_frames consecutive frames is closed;
unmatched detections open new tracks. The result is a deterministic
function of the stream and parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import linear_sum_assignment

from .geometry import BBox, ProximityParams, iou, is_proximal
from .ingest import DetectionStream, LedgerEntry, OccurrenceLedger, PairEntry, PairLedger, Roster

__all__ = [
    "Observation",
    "Identity",
    "Track",
    "TrackerParams",
    "IdentityConflict",
    "build_tracks",
    "fuse_identity",
    "tracks_to_ledger",
]

_FORBIDDEN = 1e9  # cost placeholder for pairs outside the IoU gate


@dataclass
class Observation:
    frame_index: int
    bbox: BBox
    score: float
    class_scores: dict[str, float] | None = None


@dataclass
class Identity:
    name: str
    confidence: float


@dataclass
class Track:
    track_id: int
    video_id: str
    observations: list[Observation]
    identity: Identity | None = None

    def __post_init__(self):
        if not self.observations:
            raise ValueError("track needs at least one observation")
        indices = [o.frame_index for o in self.observations]
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ValueError("track observations must have strictly increasing frame_index")

    def __len__(self) -> int:
        return len(self.observations)


@dataclass(frozen=True)
class TrackerParams:
    iou_gate: float = 0.3
    max_gap_frames: int = 10
    min_track_len_for_id: int = 3

    def __post_init__(self):
        if not 0.0 < self.iou_gate <= 1.0:
            raise ValueError(f"iou_gate must be in (0, 1], got {self.iou_gate}")
        if not isinstance(self.max_gap_frames, int) or self.max_gap_frames < 0:
            raise ValueError(f"max_gap_frames must be a non-negative integer, got {self.max_gap_frames}")
        if not isinstance(self.min_track_len_for_id, int) or self.min_track_len_for_id < 1:
            raise ValueError(f"min_track_len_for_id must be a positive integer, got {self.min_track_len_for_id}")


@dataclass
class IdentityConflict:
    """Two or more simultaneous tracks fused to the same identity."""

    video_id: str
    frame_index: int
    name: str
    track_ids: tuple[int, ...]


@dataclass
class _Builder:
    track_id: int
    observations: list[Observation] = field(default_factory=list)
    last_frame: int = -1

    @property
    def last_bbox(self) -> BBox:
        return self.observations[-1].bbox


def _canonical_assignment(cost: list[list[float]], rows: list[int], cols: list[int]) -> dict[int, int]:
    """Resolve cost ties toward lower detection index, then lower track index.

    Starting from one optimal assignment (detection -> track row), applies
    cost-neutral exchanges until no tie-break improvement remains: a
    matched detection moves to an equal-cost lower idle track, two matched
    pairs swap tracks when the cross costs sum equally, and a track slides
    to an equal-cost lower unmatched detection. Each step lowers the
    matching lexicographically, so the loop terminates on the canonical
    optimal matching.
    """
    track_of = {c: r for r, c in zip(rows, cols) if cost[r][c] < _FORBIDDEN}
    n_dets = len(cost[0]) if cost else 0
    changed = True
    while changed:
        changed = False
        for det in sorted(track_of):
            current = track_of[det]
            for cand in range(current):
                if cost[cand][det] >= _FORBIDDEN:
                    continue
                other_det = next((d for d, r in track_of.items() if r == cand), None)
                if other_det is None:
                    if cost[cand][det] == cost[current][det]:
                        track_of[det] = cand
                        changed = True
                        break
                elif other_det > det:
                    if (
                        cost[current][other_det] < _FORBIDDEN
                        and cost[cand][det] + cost[current][other_det]
                        == cost[current][det] + cost[cand][other_det]
                    ):
                        track_of[det] = cand
                        track_of[other_det] = current
                        changed = True
                        break
            if changed:
                break
        if changed:
            continue
        for det in range(n_dets):
            if det in track_of:
                continue
            for later in sorted(d for d in track_of if d > det):
                row = track_of[later]
                if cost[row][det] < _FORBIDDEN and cost[row][det] == cost[row][later]:
                    del track_of[later]
                    track_of[det] = row
                    changed = True
                    break
            if changed:
                break
    return track_of


def build_tracks(stream: DetectionStream, params: TrackerParams = TrackerParams()) -> list[Track]:
    """Associate a stream's detections into tracks.

    Every detection lands in exactly one track. Cost ties are broken toward
    the lower frame, then the lower detection index, then the lower
    track id, so identical input always yields identical tracks.
    """
    active: list[_Builder] = []  # in track_id order
    done: list[_Builder] = []
    next_id = 0
    for frame in stream.frames:
        fi = frame.frame_index
        still_active = []
        for builder in active:
            if fi - builder.last_frame - 1 > params.max_gap_frames:
                done.append(builder)
            else:
                still_active.append(builder)
        active = still_active

        detections = frame.detections
        assignment: dict[int, int] = {}
        if active and detections:
            cost = [[_FORBIDDEN] * len(detections) for _ in active]
            any_allowed = False
            for r, builder in enumerate(active):
                for c, det in enumerate(detections):
                    overlap = iou(builder.last_bbox, det.bbox)
                    if overlap >= params.iou_gate:
                        cost[r][c] = 1.0 - overlap
                        any_allowed = True
            if any_allowed:
                rows, cols = linear_sum_assignment(np.asarray(cost))
                assignment = _canonical_assignment(cost, list(rows), list(cols))

        for c, det in enumerate(detections):
            obs = Observation(
                frame_index=fi, bbox=det.bbox, score=det.score, class_scores=det.class_scores
            )
            if c in assignment:
                builder = active[assignment[c]]
                builder.observations.append(obs)
                builder.last_frame = fi
            else:
                active.append(_Builder(track_id=next_id, observations=[obs], last_frame=fi))
                next_id += 1
        # keep active sorted by track_id so cost-matrix rows stay canonical
        active.sort(key=lambda b: b.track_id)

    done.extend(active)
    done.sort(key=lambda b: b.track_id)
    return [
        Track(track_id=b.track_id, video_id=stream.video_id, observations=b.observations)
        for b in done
    ]


def fuse_identity(track: Track, roster: Roster, params: TrackerParams = TrackerParams()) -> Track:
    """Attach the fused identity: argmax of the mean per-frame score vector.

    Frames without class_scores contribute nothing. Mean-score ties go to
    the lexicographically later name, matching the top-k ranking rule. The
    identity is omitted when the track is shorter than
    min_track_len_for_id or no observation carries scores.
    """
    if len(track.observations) < params.min_track_len_for_id:
        return replace(track, identity=None)
    sums: dict[str, float] = {}
    scored_frames = 0
    for obs in track.observations:
        if obs.class_scores is None:
            continue
        scored_frames += 1
        for name, value in obs.class_scores.items():
            if name not in roster:
                raise ValueError(f"class_scores name {name!r} is not on the roster")
            sums[name] = sums.get(name, 0.0) + value
    if scored_frames == 0 or not sums:
        return replace(track, identity=None)
    best = max(sums, key=lambda nm: (sums[nm] / scored_frames, nm))
    return replace(track, identity=Identity(name=best, confidence=sums[best] / scored_frames))


def _conflicts_for_video(video_id: str, tracks: list[Track]) -> list[IdentityConflict]:
    by_frame_name: dict[tuple[int, str], list[int]] = {}
    for t in tracks:
        if t.identity is None:
            continue
        for obs in t.observations:
            by_frame_name.setdefault((obs.frame_index, t.identity.name), []).append(t.track_id)
    out = []
    for (fi, name), ids in sorted(by_frame_name.items()):
        if len(ids) > 1:
            out.append(
                IdentityConflict(video_id=video_id, frame_index=fi, name=name, track_ids=tuple(sorted(ids)))
            )
    return out


def tracks_to_ledger(
    tracks: list[Track],
    mode: str = "video-level",
    prox: ProximityParams = ProximityParams(),
) -> tuple[OccurrenceLedger | PairLedger, list[IdentityConflict]]:
    """Turn identified tracks into a ledger, grouping by video.

    video-level mode records an individual as present in a video when some
    identified track bears its name; proximal mode records a pair jointly
    for a video when some frame shows both boxes proximal, and returns a
    PairLedger. Tracks without an identity are excluded. Simultaneous
    same-name tracks are kept and returned as identity conflicts.
    """
    if mode not in ("video-level", "proximal"):
        raise ValueError(f"mode must be 'video-level' or 'proximal', got {mode!r}")
    order: list[str] = []
    by_video: dict[str, list[Track]] = {}
    for t in tracks:
        if t.video_id not in by_video:
            by_video[t.video_id] = []
            order.append(t.video_id)
        by_video[t.video_id].append(t)

    conflicts: list[IdentityConflict] = []
    for video_id in order:
        conflicts.extend(_conflicts_for_video(video_id, by_video[video_id]))

    if mode == "video-level":
        entries = []
        for video_id in order:
            present = frozenset(t.identity.name for t in by_video[video_id] if t.identity is not None)
            entries.append(LedgerEntry(video_id=video_id, present=present))
        return OccurrenceLedger(entries), conflicts

    pair_entries = []
    for video_id in order:
        identified = [t for t in by_video[video_id] if t.identity is not None]
        boxes_by_frame: dict[int, list[tuple[str, BBox]]] = {}
        for t in identified:
            for obs in t.observations:
                boxes_by_frame.setdefault(obs.frame_index, []).append((t.identity.name, obs.bbox))
        pairs = set()
        for fi in sorted(boxes_by_frame):
            entries_here = boxes_by_frame[fi]
            for i in range(len(entries_here)):
                for j in range(i + 1, len(entries_here)):
                    name_a, box_a = entries_here[i]
                    name_b, box_b = entries_here[j]
                    if name_a == name_b:
                        continue
                    if is_proximal(box_a, box_b, prox):
                        pairs.add(tuple(sorted((name_a, name_b))))
        pair_entries.append(PairEntry(video_id=video_id, pairs=frozenset(pairs)))
    return PairLedger(pair_entries), conflicts
