"""Wire formats.

Parsers and writers for every file the toolkit reads or emits: rosters,
COCO-style ground truth, per-frame detection streams, occurrence ledgers,
association matrices, track files and report JSON. All text is UTF-8 with
LF line endings; every parser rejects bad input with the offending record
or line named, and writers are deterministic so identical data always
produces identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .geometry import BBox

__all__ = [
    "ParseError",
    "Individual",
    "Roster",
    "GTImage",
    "GTAnnotation",
    "GroundTruthSet",
    "Detection",
    "Frame",
    "DetectionStream",
    "LedgerEntry",
    "OccurrenceLedger",
    "PairEntry",
    "PairLedger",
    "AssociationMatrix",
    "parse_roster",
    "write_roster",
    "parse_ground_truth",
    "parse_detection_stream",
    "write_detection_stream",
    "parse_occurrence_ledger",
    "write_ledger",
    "parse_pair_ledger",
    "write_pair_ledger",
    "parse_association_matrix",
    "write_matrix",
    "parse_tracks",
    "write_tracks",
    "parse_report",
    "write_report",
    "write_json",
    "atomic_write_text",
    "atomic_write_bytes",
]

SEXES = ("female", "male", "unknown")

MIRROR_TOLERANCE = 1e-9  # max allowed disagreement between mirror cells
SYMMETRY_TOLERANCE = 1e-12


class ParseError(ValueError):
    """Input file violates its format; the message names the locus."""


def _num(x) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValueError(f"expected a number, got {x!r}")
    return float(x)


# ---------------------------------------------------------------------------
# roster


@dataclass(frozen=True)
class Individual:
    name: str
    sex: str = "unknown"
    age_years: int | None = None

    def __post_init__(self):
        if not self.name:
            raise ValueError("individual name must be non-empty")
        if self.sex not in SEXES:
            raise ValueError(f"sex must be one of {SEXES}, got {self.sex!r}")
        if self.age_years is not None:
            if not isinstance(self.age_years, int) or self.age_years < 0:
                raise ValueError(f"age_years must be a non-negative integer, got {self.age_years!r}")


@dataclass
class Roster:
    individuals: list[Individual]

    def __post_init__(self):
        seen = set()
        for ind in self.individuals:
            if ind.name in seen:
                raise ValueError(f"duplicate individual name {ind.name!r}")
            seen.add(ind.name)

    @property
    def names(self) -> list[str]:
        return [ind.name for ind in self.individuals]

    def __contains__(self, name: str) -> bool:
        return any(ind.name == name for ind in self.individuals)

    def __len__(self) -> int:
        return len(self.individuals)


def parse_roster(text: str | bytes) -> Roster:
    """Parse a roster CSV with header name,sex,age_years.

    A blank age cell means the age is unknown.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["name", "sex", "age_years"]:
        raise ParseError("roster: expected header 'name,sex,age_years'")
    individuals = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(cell == "" for cell in row):
            continue
        if len(row) != 3:
            raise ParseError(f"roster line {lineno}: expected 3 columns, got {len(row)}")
        name, sex, age_cell = row
        age = None
        if age_cell != "":
            try:
                age = int(age_cell)
            except ValueError:
                raise ParseError(f"roster line {lineno}: age_years {age_cell!r} is not an integer") from None
        try:
            individuals.append(Individual(name=name, sex=sex, age_years=age))
        except ValueError as exc:
            raise ParseError(f"roster line {lineno}: {exc}") from None
    try:
        return Roster(individuals)
    except ValueError as exc:
        raise ParseError(f"roster: {exc}") from None


def write_roster(roster: Roster) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["name", "sex", "age_years"])
    for ind in roster.individuals:
        w.writerow([ind.name, ind.sex, "" if ind.age_years is None else ind.age_years])
    return out.getvalue()


# ---------------------------------------------------------------------------
# ground truth


@dataclass
class GTImage:
    image_id: int
    video_id: str
    frame_index: int
    width: float
    height: float


@dataclass
class GTAnnotation:
    image_id: int
    bbox: BBox
    label: str


@dataclass
class GroundTruthSet:
    images: list[GTImage]
    annotations: list[GTAnnotation]


def parse_ground_truth(data: str | bytes) -> GroundTruthSet:
    """Parse a COCO-style ground-truth JSON document.

    Recognized structure: top-level "images", "annotations" and optional
    "categories" lists. Image records may carry "video_id" and
    "frame_index"; absent, the video id defaults to "" and the frame index
    to the image id. Unknown fields are ignored. Boxes are [x, y, w, h],
    must be valid and must lie within the image bounds.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"ground truth: malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("ground truth: top level must be a JSON object")

    categories = {}
    for i, cat in enumerate(doc.get("categories", [])):
        try:
            categories[cat["id"]] = str(cat["name"])
        except (TypeError, KeyError):
            raise ParseError(f"ground truth: category {i}: needs 'id' and 'name'") from None

    images = []
    by_id: dict[int, GTImage] = {}
    for i, rec in enumerate(doc.get("images", [])):
        locus = f"ground truth: image {i}"
        if not isinstance(rec, dict) or "id" not in rec:
            raise ParseError(f"{locus}: missing 'id'")
        img_id = rec["id"]
        if img_id in by_id:
            raise ParseError(f"{locus}: duplicate image id {img_id}")
        try:
            width = _num(rec["width"])
            height = _num(rec["height"])
        except (KeyError, ValueError):
            raise ParseError(f"{locus} (id {img_id}): needs numeric 'width' and 'height'") from None
        if width <= 0 or height <= 0:
            raise ParseError(f"{locus} (id {img_id}): non-positive dimensions")
        frame_index = rec.get("frame_index", img_id)
        if not isinstance(frame_index, int):
            raise ParseError(f"{locus} (id {img_id}): frame_index must be an integer")
        img = GTImage(
            image_id=img_id,
            video_id=str(rec.get("video_id", "")),
            frame_index=frame_index,
            width=width,
            height=height,
        )
        images.append(img)
        by_id[img_id] = img

    annotations = []
    for i, rec in enumerate(doc.get("annotations", [])):
        locus = f"ground truth: annotation {i}"
        if not isinstance(rec, dict):
            raise ParseError(f"{locus}: not an object")
        img = by_id.get(rec.get("image_id"))
        if img is None:
            raise ParseError(f"{locus}: unknown image_id {rec.get('image_id')!r}")
        raw = rec.get("bbox")
        if not isinstance(raw, list) or len(raw) != 4:
            raise ParseError(f"{locus}: bbox must be [x, y, w, h]")
        try:
            box = BBox(_num(raw[0]), _num(raw[1]), _num(raw[2]), _num(raw[3]))
        except ValueError as exc:
            raise ParseError(f"{locus}: {exc}") from None
        if box.x < 0 or box.y < 0 or box.x + box.w > img.width or box.y + box.h > img.height:
            raise ParseError(f"{locus}: bbox exceeds image bounds ({img.width}x{img.height})")
        if "category_id" in rec:
            if rec["category_id"] not in categories:
                raise ParseError(f"{locus}: unknown category_id {rec['category_id']!r}")
            label = categories[rec["category_id"]]
        elif "label" in rec:
            label = str(rec["label"])
        else:
            raise ParseError(f"{locus}: needs 'category_id' or 'label'")
        annotations.append(GTAnnotation(image_id=img.image_id, bbox=box, label=label))

    return GroundTruthSet(images=images, annotations=annotations)


# ---------------------------------------------------------------------------
# detection streams


@dataclass
class Detection:
    bbox: BBox
    score: float
    class_scores: dict[str, float] | None = None


@dataclass
class Frame:
    frame_index: int
    detections: list[Detection] = field(default_factory=list)


@dataclass
class DetectionStream:
    video_id: str
    frames: list[Frame] = field(default_factory=list)

    @property
    def detection_count(self) -> int:
        return sum(len(f.detections) for f in self.frames)


def _parse_detection(obj, locus: str, roster: Roster | None) -> Detection:
    raw = obj.get("bbox")
    if not isinstance(raw, list) or len(raw) != 4:
        raise ParseError(f"{locus}: bbox must be [x, y, w, h]")
    try:
        box = BBox(_num(raw[0]), _num(raw[1]), _num(raw[2]), _num(raw[3]))
        score = _num(obj.get("score"))
    except ValueError as exc:
        raise ParseError(f"{locus}: {exc}") from None
    if not 0.0 <= score <= 1.0:
        raise ParseError(f"{locus}: score {score} outside [0, 1]")
    class_scores = None
    if obj.get("class_scores") is not None:
        raw_scores = obj["class_scores"]
        if not isinstance(raw_scores, dict):
            raise ParseError(f"{locus}: class_scores must be an object")
        class_scores = {}
        for name, value in raw_scores.items():
            if roster is not None and name not in roster:
                raise ParseError(f"{locus}: unknown individual {name!r} in class_scores")
            try:
                v = _num(value)
            except ValueError as exc:
                raise ParseError(f"{locus}: class_scores[{name!r}]: {exc}") from None
            if not 0.0 <= v <= 1.0:
                raise ParseError(f"{locus}: class_scores[{name!r}] = {v} outside [0, 1]")
            class_scores[name] = v
    return Detection(bbox=box, score=score, class_scores=class_scores)


def parse_detection_stream(data: str | bytes, video_id: str, roster: Roster | None = None) -> DetectionStream:
    """Parse a detection stream from JSON-lines, one frame object per line.

    Each line is {"frame_index": int, "detections": [...]} with detections
    carrying "bbox", "score" and optionally "class_scores". Frame indices
    must be strictly increasing; the file is rejected, not re-sorted, when
    they are not. When a roster is given, class-score keys are validated
    against it. Blank lines are ignored.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    frames: list[Frame] = []
    prev_index = None
    for lineno, line in enumerate(data.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {lineno}: malformed JSON: {exc}") from None
        if not isinstance(obj, dict) or not isinstance(obj.get("frame_index"), int):
            raise ParseError(f"line {lineno}: needs integer 'frame_index'")
        index = obj["frame_index"]
        if prev_index is not None and index <= prev_index:
            raise ParseError(f"line {lineno}: frame_index {index} not greater than previous {prev_index}")
        prev_index = index
        raw_dets = obj.get("detections", [])
        if not isinstance(raw_dets, list):
            raise ParseError(f"line {lineno}: detections must be a list")
        detections = [
            _parse_detection(d, f"line {lineno}: detection {k}", roster)
            for k, d in enumerate(raw_dets)
        ]
        frames.append(Frame(frame_index=index, detections=detections))
    return DetectionStream(video_id=video_id, frames=frames)


def _detection_obj(det: Detection) -> dict:
    obj = {"bbox": [det.bbox.x, det.bbox.y, det.bbox.w, det.bbox.h], "score": det.score}
    if det.class_scores is not None:
        obj["class_scores"] = {k: det.class_scores[k] for k in sorted(det.class_scores)}
    return obj


def write_detection_stream(stream: DetectionStream) -> str:
    lines = []
    for frame in stream.frames:
        obj = {
            "frame_index": frame.frame_index,
            "detections": [_detection_obj(d) for d in frame.detections],
        }
        lines.append(json.dumps(obj, separators=(",", ":"), ensure_ascii=False))
    return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------------
# occurrence ledgers


@dataclass
class LedgerEntry:
    video_id: str
    present: frozenset[str]


@dataclass
class OccurrenceLedger:
    entries: list[LedgerEntry]

    def __post_init__(self):
        seen = set()
        for e in self.entries:
            if e.video_id in seen:
                raise ValueError(f"duplicate video_id {e.video_id!r}")
            seen.add(e.video_id)


def _sorted_names(names, roster: Roster | None) -> list[str]:
    if roster is None:
        return sorted(names)
    order = {name: i for i, name in enumerate(roster.names)}
    return sorted(names, key=lambda n: (order.get(n, len(order)), n))


def parse_occurrence_ledger(text: str | bytes, roster: Roster | None = None) -> OccurrenceLedger:
    """Parse a ledger CSV: header video_id,present; one video per row.

    The present cell holds comma-joined names (the csv layer quotes it).
    When a roster is given every name must belong to it.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["video_id", "present"]:
        raise ParseError("ledger: expected header 'video_id,present'")
    entries = []
    seen = set()
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(cell == "" for cell in row):
            continue
        if len(row) != 2:
            raise ParseError(f"ledger line {lineno}: expected 2 columns, got {len(row)}")
        video_id, cell = row
        if video_id in seen:
            raise ParseError(f"ledger line {lineno}: duplicate video_id {video_id!r}")
        seen.add(video_id)
        names = [p for p in cell.split(",") if p != ""]
        if roster is not None:
            for name in names:
                if name not in roster:
                    raise ParseError(f"ledger line {lineno}: unknown individual {name!r}")
        entries.append(LedgerEntry(video_id=video_id, present=frozenset(names)))
    return OccurrenceLedger(entries)


def write_ledger(ledger: OccurrenceLedger, roster: Roster | None = None) -> str:
    """Write a ledger CSV; names within a row follow roster order when a
    roster is given, lexicographic order otherwise."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["video_id", "present"])
    for entry in ledger.entries:
        w.writerow([entry.video_id, ",".join(_sorted_names(entry.present, roster))])
    return out.getvalue()


@dataclass
class PairEntry:
    video_id: str
    pairs: frozenset[tuple[str, str]]  # each pair tuple sorted


@dataclass
class PairLedger:
    """Per-video joint records of name pairs (the proximal ledger variant)."""

    entries: list[PairEntry]

    def __post_init__(self):
        seen = set()
        for e in self.entries:
            if e.video_id in seen:
                raise ValueError(f"duplicate video_id {e.video_id!r}")
            seen.add(e.video_id)
            for pair in e.pairs:
                if len(pair) != 2 or pair[0] >= pair[1]:
                    raise ValueError(f"pair {pair!r} must be two distinct sorted names")


def parse_pair_ledger(text: str | bytes, roster: Roster | None = None) -> PairLedger:
    """Parse a pair ledger CSV: header video_id,pair; one joint record per row."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["video_id", "pair"]:
        raise ParseError("pair ledger: expected header 'video_id,pair'")
    order: list[str] = []
    pairs_by_video: dict[str, set] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(cell == "" for cell in row):
            continue
        if len(row) != 2:
            raise ParseError(f"pair ledger line {lineno}: expected 2 columns, got {len(row)}")
        video_id, cell = row
        names = cell.split(",")
        if len(names) != 2 or not all(names) or names[0] == names[1]:
            raise ParseError(f"pair ledger line {lineno}: pair cell must join two distinct names")
        if roster is not None:
            for name in names:
                if name not in roster:
                    raise ParseError(f"pair ledger line {lineno}: unknown individual {name!r}")
        if video_id not in pairs_by_video:
            pairs_by_video[video_id] = set()
            order.append(video_id)
        pairs_by_video[video_id].add(tuple(sorted(names)))
    return PairLedger([PairEntry(v, frozenset(pairs_by_video[v])) for v in order])


def write_pair_ledger(ledger: PairLedger) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["video_id", "pair"])
    for entry in ledger.entries:
        for pair in sorted(entry.pairs):
            w.writerow([entry.video_id, ",".join(pair)])
    return out.getvalue()


# ---------------------------------------------------------------------------
# association matrices


@dataclass(eq=False)
class AssociationMatrix:
    """Symmetric matrix of dyadic association indices in [0, 1].

    names fixes the row/column order; values is an (n, n) float array with
    a zero diagonal, symmetric within 1e-12.
    """

    names: list[str]
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        n = len(self.names)
        if len(set(self.names)) != n or any(not name for name in self.names):
            raise ValueError("matrix names must be unique and non-empty")
        if self.values.shape != (n, n):
            raise ValueError(f"matrix shape {self.values.shape} does not match {n} names")
        if n and not np.isfinite(self.values).all():
            raise ValueError("matrix values must be finite")
        if n and (self.values.min() < 0.0 or self.values.max() > 1.0):
            raise ValueError("matrix values must lie in [0, 1]")
        if any(self.values[i, i] != 0.0 for i in range(n)):
            raise ValueError("matrix diagonal must be exactly zero")
        if n and np.abs(self.values - self.values.T).max() > SYMMETRY_TOLERANCE:
            raise ValueError("matrix is not symmetric within 1e-12")
        self._index = {name: i for i, name in enumerate(self.names)}

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self._index[name]

    def value(self, a: str, b: str) -> float:
        return float(self.values[self._index[a], self._index[b]])


def parse_association_matrix(text: str | bytes) -> AssociationMatrix:
    """Parse an association matrix CSV.

    First row: empty corner cell then the names; following rows: name then
    values in header order. Blank cells mean zero. Triangular input is
    permitted; mirror cells are merged by max, and two nonzero mirror cells
    that disagree by more than 1e-9 are an error. Rows may be shorter than
    the header (missing trailing cells are blank).
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    rows = [row for row in csv.reader(io.StringIO(text)) if any(cell != "" for cell in row)]
    if not rows:
        raise ParseError("matrix: empty input")
    header = rows[0]
    names = list(header[1:])
    while names and names[-1] == "":
        names.pop()
    if not names:
        raise ParseError("matrix: header row has no names")
    if any(name == "" for name in names):
        raise ParseError("matrix: header contains an empty name")
    if len(set(names)) != len(names):
        raise ParseError("matrix: duplicate names in header")
    n = len(names)
    if len(rows) - 1 != n:
        raise ParseError(f"matrix: expected {n} data rows, got {len(rows) - 1}")

    raw = np.zeros((n, n))
    for i, row in enumerate(rows[1:]):
        if row[0] != names[i]:
            raise ParseError(f"matrix row {i + 2}: expected name {names[i]!r} (header order), got {row[0]!r}")
        cells = row[1:]
        if len(cells) > n and any(cell != "" for cell in cells[n:]):
            raise ParseError(f"matrix row {i + 2}: more cells than names")
        for j, cell in enumerate(cells[:n]):
            if cell.strip() == "":
                continue
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"matrix row {i + 2}, column {names[j]!r}: {cell!r} is not a number") from None
            if not math.isfinite(v) or not 0.0 <= v <= 1.0:
                raise ParseError(f"matrix row {i + 2}, column {names[j]!r}: value {v} outside [0, 1]")
            if i == j and v != 0.0:
                raise ParseError(f"matrix row {i + 2}: nonzero diagonal value {v}")
            raw[i, j] = v

    values = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            a, b = raw[i, j], raw[j, i]
            if a > 0.0 and b > 0.0 and abs(a - b) > MIRROR_TOLERANCE:
                raise ParseError(
                    f"matrix: mirror cells ({names[i]!r}, {names[j]!r}) conflict: {a} vs {b}"
                )
            values[i, j] = values[j, i] = max(a, b)
    try:
        return AssociationMatrix(names=names, values=values)
    except ValueError as exc:
        raise ParseError(f"matrix: {exc}") from None


def write_matrix(m: AssociationMatrix) -> str:
    """Write the full symmetric matrix; zeros become blank cells."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow([""] + list(m.names))
    for i, name in enumerate(m.names):
        row = [name]
        for j in range(m.n):
            v = m.values[i, j].item()
            row.append("" if v == 0.0 else repr(v))
        w.writerow(row)
    return out.getvalue()


# ---------------------------------------------------------------------------
# tracks (JSON-lines, one track per line)


def write_tracks(tracks) -> str:
    lines = []
    for t in tracks:
        obj = {
            "track_id": t.track_id,
            "video_id": t.video_id,
            "observations": [
                {"frame_index": o.frame_index, **_detection_obj(Detection(o.bbox, o.score, o.class_scores))}
                for o in t.observations
            ],
            "identity": None
            if t.identity is None
            else {"name": t.identity.name, "confidence": t.identity.confidence},
        }
        lines.append(json.dumps(obj, separators=(",", ":"), ensure_ascii=False))
    return "".join(line + "\n" for line in lines)


def parse_tracks(data: str | bytes, roster: Roster | None = None) -> list:
    from .tracking import Identity, Observation, Track

    if isinstance(data, bytes):
        data = data.decode("utf-8")
    tracks = []
    for lineno, line in enumerate(data.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"tracks line {lineno}: malformed JSON: {exc}") from None
        try:
            observations = []
            for k, o in enumerate(obj["observations"]):
                det = _parse_detection(o, f"tracks line {lineno}: observation {k}", roster)
                if not isinstance(o.get("frame_index"), int):
                    raise ParseError(f"tracks line {lineno}: observation {k}: needs integer frame_index")
                observations.append(
                    Observation(
                        frame_index=o["frame_index"],
                        bbox=det.bbox,
                        score=det.score,
                        class_scores=det.class_scores,
                    )
                )
            identity = None
            if obj.get("identity") is not None:
                ident = obj["identity"]
                identity = Identity(name=str(ident["name"]), confidence=_num(ident["confidence"]))
            tracks.append(
                Track(
                    track_id=int(obj["track_id"]),
                    video_id=str(obj["video_id"]),
                    observations=observations,
                    identity=identity,
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"tracks line {lineno}: {exc}") from None
    return tracks


# ---------------------------------------------------------------------------
# reports and generic JSON


def write_json(obj) -> str:
    """Deterministic, human-readable JSON document text."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def write_report(report) -> str:
    """Serialize a NetworkReport to JSON."""
    obj = {
        "density": report.density,
        "global_efficiency_binary": report.global_efficiency_binary,
        "global_efficiency_weighted": report.global_efficiency_weighted,
        "individuals": [
            {
                "name": ind.name,
                "degree": ind.degree,
                "strength": ind.strength,
                "eigenvector": ind.eigenvector,
            }
            for ind in report.individuals
        ],
        "warnings": list(report.warnings),
    }
    return write_json(obj)


def parse_report(data: str | bytes):
    from .network import IndividualMeasures, NetworkReport

    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"report: malformed JSON: {exc}") from None
    try:
        return NetworkReport(
            density=_num(obj["density"]),
            global_efficiency_binary=_num(obj["global_efficiency_binary"]),
            global_efficiency_weighted=_num(obj["global_efficiency_weighted"]),
            individuals=[
                IndividualMeasures(
                    name=str(ind["name"]),
                    degree=int(ind["degree"]),
                    strength=_num(ind["strength"]),
                    eigenvector=_num(ind["eigenvector"]),
                )
                for ind in obj["individuals"]
            ],
            warnings=[str(wt) for wt in obj.get("warnings", [])],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"report: {exc}") from None


# ---------------------------------------------------------------------------
# atomic file output


def atomic_write_bytes(path: str | os.PathLike, data: bytes) -> None:
    """Write a file atomically: temp file in the same directory, then rename."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))
