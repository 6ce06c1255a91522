"""Command-line interface.

One executable exposes each stage (track, eval-det, eval-id, cooccur,
network, layout, synth) and the full pipeline from per-video detection
streams to association matrix, network report and rendered graph.

Exit codes: 0 success, 1 usage error, 2 data or validation error,
3 convergence failure. Errors print a human-readable message on stderr,
or a JSON object when --error-json is set. All output files are written
atomically (temp file in the target directory, then rename).

Configuration: a flat key = value file (--config) supplies defaults that
command-line flags override. Keys, with their types:

    tracker.iou_gate              float   IoU gate for track association
    tracker.max_gap_frames        int     frames a track may coast unmatched
    tracker.min_track_len_for_id  int     shortest track given an identity
    proximity.max_gap             float   center distance gate, face heights
    proximity.max_depth_disparity float   absolute log height-ratio gate
    association.mode              str     video-level or proximal
    network.efficiency_mode       str     both, binary or weighted
    network.tol                   float   eigenvector convergence tolerance
    network.max_iter              int     eigenvector iteration cap
    gem.desired_edge_length       float
    gem.max_rounds_factor         int
    gem.initial_temperature       float
    gem.max_temperature           float
    gem.gravity                   float
    gem.stop_temperature_fraction float
    seed                          int     layout and synthesis seed
    paths.detections_dir          str
    paths.roster                  str
    paths.out_dir                 str

Blank lines and lines starting with # are ignored. Unknown keys and
values of the wrong type are rejected (exit 2) naming the key.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import association, evaluation, ingest, layout, network, synth, tracking
from .geometry import ProximityParams
from .ingest import ParseError, atomic_write_bytes, atomic_write_text
from .layout import GemParams
from .tracking import TrackerParams

__all__ = ["PipelineConfig", "load_config", "main"]


class UsageError(Exception):
    pass


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D102 - argparse hook
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


_CONFIG_SPEC: dict[str, type] = {
    "tracker.iou_gate": float,
    "tracker.max_gap_frames": int,
    "tracker.min_track_len_for_id": int,
    "proximity.max_gap": float,
    "proximity.max_depth_disparity": float,
    "association.mode": str,
    "network.efficiency_mode": str,
    "network.tol": float,
    "network.max_iter": int,
    "gem.desired_edge_length": float,
    "gem.max_rounds_factor": int,
    "gem.initial_temperature": float,
    "gem.max_temperature": float,
    "gem.gravity": float,
    "gem.stop_temperature_fraction": float,
    "seed": int,
    "paths.detections_dir": str,
    "paths.roster": str,
    "paths.out_dir": str,
}

# argparse dest -> config key, for flags that mirror config entries
_FLAG_KEYS = {
    "iou_gate": "tracker.iou_gate",
    "max_gap_frames": "tracker.max_gap_frames",
    "min_track_len": "tracker.min_track_len_for_id",
    "prox_max_gap": "proximity.max_gap",
    "prox_max_depth_disparity": "proximity.max_depth_disparity",
    "mode": "association.mode",
    "efficiency_mode": "network.efficiency_mode",
    "tol": "network.tol",
    "max_iter": "network.max_iter",
    "edge_length": "gem.desired_edge_length",
    "max_rounds_factor": "gem.max_rounds_factor",
    "initial_temperature": "gem.initial_temperature",
    "max_temperature": "gem.max_temperature",
    "gravity": "gem.gravity",
    "stop_fraction": "gem.stop_temperature_fraction",
    "seed": "seed",
    "detections_dir": "paths.detections_dir",
    "roster": "paths.roster",
    "out_dir": "paths.out_dir",
}


@dataclass
class PipelineConfig:
    tracker: TrackerParams = field(default_factory=TrackerParams)
    proximity: ProximityParams = field(default_factory=ProximityParams)
    association_mode: str = "video-level"
    efficiency_mode: str = "both"
    tol: float = 1e-10
    max_iter: int = 10000
    gem: GemParams = field(default_factory=GemParams)
    seed: int | None = None
    detections_dir: str | None = None
    roster_path: str | None = None
    out_dir: str | None = None


def _parse_config_text(text: str, origin: str) -> dict:
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, raw_value = line.partition("=")
        if not sep:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value'")
        key = key.strip()
        raw_value = raw_value.strip()
        if key not in _CONFIG_SPEC:
            raise ConfigError(f"{origin}:{lineno}: unknown config key {key!r}")
        typ = _CONFIG_SPEC[key]
        try:
            values[key] = typ(raw_value) if typ is not str else raw_value
        except ValueError:
            raise ConfigError(
                f"{origin}:{lineno}: {key}: expected {typ.__name__}, got {raw_value!r}"
            ) from None
    return values


def _build_config(values: dict) -> PipelineConfig:
    def take(key, default):
        return values.get(key, default)

    try:
        tracker = TrackerParams(
            iou_gate=take("tracker.iou_gate", 0.3),
            max_gap_frames=take("tracker.max_gap_frames", 10),
            min_track_len_for_id=take("tracker.min_track_len_for_id", 3),
        )
    except ValueError as exc:
        raise ConfigError(f"tracker: {exc}") from None
    try:
        prox_defaults = ProximityParams()
        proximity = ProximityParams(
            max_gap=take("proximity.max_gap", prox_defaults.max_gap),
            max_depth_disparity=take(
                "proximity.max_depth_disparity", prox_defaults.max_depth_disparity
            ),
        )
    except ValueError as exc:
        raise ConfigError(f"proximity: {exc}") from None
    mode = take("association.mode", "video-level")
    if mode not in ("video-level", "proximal"):
        raise ConfigError(f"association.mode: must be 'video-level' or 'proximal', got {mode!r}")
    efficiency_mode = take("network.efficiency_mode", "both")
    if efficiency_mode not in ("both", "binary", "weighted"):
        raise ConfigError(
            f"network.efficiency_mode: must be 'both', 'binary' or 'weighted', got {efficiency_mode!r}"
        )
    tol = take("network.tol", 1e-10)
    if not tol > 0:
        raise ConfigError(f"network.tol: must be positive, got {tol}")
    max_iter = take("network.max_iter", 10000)
    if max_iter < 1:
        raise ConfigError(f"network.max_iter: must be at least 1, got {max_iter}")
    try:
        gem = GemParams(
            desired_edge_length=take("gem.desired_edge_length", 128.0),
            max_rounds_factor=take("gem.max_rounds_factor", 40),
            initial_temperature=take("gem.initial_temperature", None),
            max_temperature=take("gem.max_temperature", 256.0),
            gravity=take("gem.gravity", 1.0 / 16.0),
            stop_temperature_fraction=take("gem.stop_temperature_fraction", 1.0 / 50.0),
        )
    except ValueError as exc:
        raise ConfigError(f"gem: {exc}") from None
    return PipelineConfig(
        tracker=tracker,
        proximity=proximity,
        association_mode=mode,
        efficiency_mode=efficiency_mode,
        tol=tol,
        max_iter=max_iter,
        gem=gem,
        seed=take("seed", None),
        detections_dir=take("paths.detections_dir", None),
        roster_path=take("paths.roster", None),
        out_dir=take("paths.out_dir", None),
    )


def load_config(path: str | os.PathLike) -> PipelineConfig:
    """Load a config file; absent keys take their defaults."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return _build_config(_parse_config_text(text, os.fspath(path)))


def _resolve_config(args: argparse.Namespace) -> PipelineConfig:
    """Merge config-file values with command-line overrides."""
    values: dict[str, object] = {}
    config_path = getattr(args, "config", None)
    if config_path:
        with open(config_path, encoding="utf-8") as fh:
            values.update(_parse_config_text(fh.read(), os.fspath(config_path)))
    for dest, key in _FLAG_KEYS.items():
        flag_value = getattr(args, dest, None)
        if flag_value is not None:
            values[key] = flag_value
    return _build_config(values)


def _read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _read_roster(path: str | None):
    if path is None:
        return None
    return ingest.parse_roster(_read_text(path))


def _require_seed(config: PipelineConfig) -> int:
    if config.seed is None:
        raise UsageError("a seed is required: pass --seed or set the 'seed' config key")
    return config.seed


# ---------------------------------------------------------------------------
# subcommands


def _cmd_track(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    roster = _read_roster(config.roster_path)
    stream = ingest.parse_detection_stream(_read_text(args.detections), args.video_id, roster)
    tracks = tracking.build_tracks(stream, config.tracker)
    if roster is not None:
        tracks = [tracking.fuse_identity(t, roster, config.tracker) for t in tracks]
    atomic_write_text(args.out, ingest.write_tracks(tracks))
    return 0


def _cmd_eval_det(args: argparse.Namespace) -> int:
    stream = ingest.parse_detection_stream(_read_text(args.predictions), args.video_id)
    gt = ingest.parse_ground_truth(_read_text(args.ground_truth))
    frames: dict[int, tuple[list, list]] = {}
    for frame in stream.frames:
        frames.setdefault(frame.frame_index, ([], []))[0].extend(frame.detections)
    image_frame = {img.image_id: img.frame_index for img in gt.images if img.video_id == args.video_id}
    for ann in gt.annotations:
        if ann.image_id in image_frame:
            frames.setdefault(image_frame[ann.image_id], ([], []))[1].append(ann.bbox)
    groups = [frames[fi] for fi in sorted(frames)]
    metrics = evaluation.pooled_detection_metrics(
        groups, iou_threshold=args.iou_threshold, score_threshold=args.score_threshold
    )
    atomic_write_text(args.out, ingest.write_json(metrics))
    return 0


def _parse_id_samples(text: str) -> list[evaluation.IdSample]:
    samples = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"samples line {lineno}: malformed JSON: {exc}") from None
        if not isinstance(rec, dict) or "class_scores" not in rec or "true_label" not in rec:
            raise ParseError(f"samples line {lineno}: needs 'class_scores' and 'true_label'")
        scores = rec["class_scores"]
        if not isinstance(scores, dict) or not scores:
            raise ParseError(f"samples line {lineno}: class_scores must be a non-empty object")
        try:
            scores = {str(k): float(v) for k, v in scores.items()}
        except (TypeError, ValueError):
            raise ParseError(f"samples line {lineno}: class_scores values must be numbers") from None
        samples.append(evaluation.IdSample(class_scores=scores, true_label=str(rec["true_label"])))
    if not samples:
        raise ParseError("samples file contains no samples")
    return samples


def _cmd_eval_id(args: argparse.Namespace) -> int:
    roster = _read_roster(args.roster)
    samples = _parse_id_samples(_read_text(args.samples))
    ks = sorted(set(args.k or [1, 5]))
    confusion = evaluation.confusion_matrix(samples, roster)
    report = {
        "n_samples": len(samples),
        "top_k": {str(k): evaluation.topk_accuracy(samples, k) for k in ks},
        "names": roster.names,
        "confusion": [[float(v) for v in row] for row in confusion],
    }
    atomic_write_text(args.out, ingest.write_json(report))
    return 0


def _cmd_cooccur(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    chosen = [opt for opt in ("tracks", "ledger", "pair_ledger") if getattr(args, opt)]
    if len(chosen) != 1:
        raise UsageError("exactly one of --tracks, --ledger or --pair-ledger is required")
    roster = _read_roster(config.roster_path)
    conflicts = []
    if args.tracks:
        tracks = []
        for path in args.tracks:
            tracks.extend(ingest.parse_tracks(_read_text(path), roster))
        ledger, conflicts = tracking.tracks_to_ledger(
            tracks, mode=config.association_mode, prox=config.proximity
        )
    elif args.ledger:
        ledger = ingest.parse_occurrence_ledger(_read_text(args.ledger), roster)
    else:
        ledger = ingest.parse_pair_ledger(_read_text(args.pair_ledger), roster)
    counts = association.count_occurrences(ledger)
    if roster is not None:
        names = roster.names
    else:
        names = sorted(counts.per_individual)
    matrix = association.simple_ratio_matrix(counts, names)
    atomic_write_text(args.out, ingest.write_matrix(matrix))
    if args.ledger_out:
        if isinstance(ledger, ingest.PairLedger):
            atomic_write_text(args.ledger_out, ingest.write_pair_ledger(ledger))
        else:
            atomic_write_text(args.ledger_out, ingest.write_ledger(ledger, roster))
    if args.conflicts_out:
        atomic_write_text(args.conflicts_out, ingest.write_json(_conflict_records(conflicts)))
    return 0


def _conflict_records(conflicts) -> list[dict]:
    return [
        {
            "video_id": c.video_id,
            "frame_index": c.frame_index,
            "name": c.name,
            "track_ids": list(c.track_ids),
        }
        for c in conflicts
    ]


def _cmd_network(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    matrix = ingest.parse_association_matrix(_read_text(args.matrix))
    report = network.network_report(
        matrix, tol=config.tol, max_iter=config.max_iter, efficiency_mode=config.efficiency_mode
    )
    atomic_write_text(args.out, ingest.write_report(report))
    return 0


def _cmd_layout(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    if not args.svg_out and not args.dot_out:
        raise UsageError("at least one of --svg-out or --dot-out is required")
    seed = _require_seed(config)
    matrix = ingest.parse_association_matrix(_read_text(args.matrix))
    if args.report:
        report = ingest.parse_report(_read_text(args.report))
    else:
        report = network.network_report(
            matrix, tol=config.tol, max_iter=config.max_iter, efficiency_mode=config.efficiency_mode
        )
    if args.svg_out:
        placed = layout.gem_layout(matrix, config.gem, seed)
        atomic_write_bytes(args.svg_out, layout.render_svg(matrix, placed, report))
    if args.dot_out:
        atomic_write_text(args.dot_out, layout.render_dot(matrix, report))
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    seed = _require_seed(config)
    out_dir = config.out_dir
    if not out_dir:
        raise UsageError("an output directory is required: pass --out-dir")
    try:
        noise = synth.NoiseParams(
            fp_rate=args.fp_rate,
            fn_rate=args.fn_rate,
            jitter_px=args.jitter_px,
            id_confusion_rate=args.id_confusion_rate,
        )
        scenario, streams = synth.build_scenario(
            seed, args.individuals, args.matrilines, args.videos, args.frames, noise
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    os.makedirs(os.path.join(out_dir, "detections"), exist_ok=True)
    os.makedirs(os.path.join(out_dir, "tracks"), exist_ok=True)
    atomic_write_text(os.path.join(out_dir, "roster.csv"), ingest.write_roster(scenario.roster))
    latent = ingest.AssociationMatrix(scenario.roster.names, scenario.latent_weights)
    atomic_write_text(os.path.join(out_dir, "latent.csv"), ingest.write_matrix(latent))
    atomic_write_text(
        os.path.join(out_dir, "ledger.csv"),
        ingest.write_ledger(scenario.ground_truth_ledger, scenario.roster),
    )
    for video_id, stream in streams.items():
        atomic_write_text(
            os.path.join(out_dir, "detections", f"{video_id}.jsonl"),
            ingest.write_detection_stream(stream),
        )
        atomic_write_text(
            os.path.join(out_dir, "tracks", f"{video_id}.jsonl"),
            ingest.write_tracks(scenario.ground_truth_tracks[video_id]),
        )
    return 0


def _cmd_pipeline(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    seed = _require_seed(config)
    if not config.detections_dir:
        raise UsageError("a detections directory is required: pass --detections-dir")
    if not config.roster_path:
        raise UsageError("a roster is required: pass --roster")
    if not config.out_dir:
        raise UsageError("an output directory is required: pass --out-dir")
    roster = _read_roster(config.roster_path)
    names = sorted(os.listdir(config.detections_dir))
    files = [n for n in names if n.endswith(".jsonl")]
    if not files:
        raise ParseError(f"no .jsonl detection streams in {config.detections_dir}")

    def stage(filename: str):
        video_id = filename[: -len(".jsonl")]
        path = os.path.join(config.detections_dir, filename)
        stream = ingest.parse_detection_stream(_read_text(path), video_id, roster)
        tracks = tracking.build_tracks(stream, config.tracker)
        return [tracking.fuse_identity(t, roster, config.tracker) for t in tracks]

    jobs = max(1, args.jobs)
    if jobs == 1:
        per_video = [stage(name) for name in files]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_video = list(pool.map(stage, files))
    all_tracks = [t for tracks in per_video for t in tracks]
    ledger, conflicts = tracking.tracks_to_ledger(
        all_tracks, mode=config.association_mode, prox=config.proximity
    )
    counts = association.count_occurrences(ledger)
    matrix = association.simple_ratio_matrix(counts, roster.names)
    report = network.network_report(
        matrix, tol=config.tol, max_iter=config.max_iter, efficiency_mode=config.efficiency_mode
    )
    placed = layout.gem_layout(matrix, config.gem, seed)

    out_dir = config.out_dir
    os.makedirs(out_dir, exist_ok=True)
    if isinstance(ledger, ingest.PairLedger):
        atomic_write_text(os.path.join(out_dir, "ledger.csv"), ingest.write_pair_ledger(ledger))
    else:
        atomic_write_text(os.path.join(out_dir, "ledger.csv"), ingest.write_ledger(ledger, roster))
    atomic_write_text(os.path.join(out_dir, "matrix.csv"), ingest.write_matrix(matrix))
    atomic_write_text(os.path.join(out_dir, "report.json"), ingest.write_report(report))
    atomic_write_bytes(os.path.join(out_dir, "network.svg"), layout.render_svg(matrix, placed, report))
    atomic_write_text(os.path.join(out_dir, "network.dot"), layout.render_dot(matrix, report))
    atomic_write_text(
        os.path.join(out_dir, "conflicts.json"), ingest.write_json(_conflict_records(conflicts))
    )
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _positive_int(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {raw}")
    return value


def _add_common(sub: argparse.ArgumentParser, config: bool = True) -> None:
    sub.add_argument("--error-json", action="store_true", help="emit errors as JSON on stderr")
    if config:
        sub.add_argument("--config", help="key = value configuration file")


def _add_tracker_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--iou-gate", type=float, dest="iou_gate")
    sub.add_argument("--max-gap-frames", type=int, dest="max_gap_frames")
    sub.add_argument("--min-track-len", type=int, dest="min_track_len")


def _add_gem_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--edge-length", type=float, dest="edge_length")
    sub.add_argument("--max-rounds-factor", type=int, dest="max_rounds_factor")
    sub.add_argument("--initial-temperature", type=float, dest="initial_temperature")
    sub.add_argument("--max-temperature", type=float, dest="max_temperature")
    sub.add_argument("--gravity", type=float, dest="gravity")
    sub.add_argument("--stop-fraction", type=float, dest="stop_fraction")


def _add_network_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--efficiency-mode", dest="efficiency_mode", choices=["both", "binary", "weighted"])
    sub.add_argument("--tol", type=float, dest="tol")
    sub.add_argument("--max-iter", type=int, dest="max_iter")


def _build_parser() -> _Parser:
    parser = _Parser(prog="troopnet", description="Co-occurrence network toolkit")
    subs = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = subs.add_parser("track", help="turn a detection stream into tracks")
    _add_common(p)
    p.add_argument("--detections", required=True)
    p.add_argument("--video-id", required=True)
    p.add_argument("--roster", dest="roster")
    p.add_argument("--out", required=True)
    _add_tracker_flags(p)
    p.set_defaults(func=_cmd_track)

    p = subs.add_parser("eval-det", help="detection AP and FNR against ground truth")
    _add_common(p, config=False)
    p.add_argument("--predictions", required=True)
    p.add_argument("--ground-truth", required=True)
    p.add_argument("--video-id", required=True)
    p.add_argument("--iou-threshold", type=float, default=0.5)
    p.add_argument("--score-threshold", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_eval_det)

    p = subs.add_parser("eval-id", help="top-k accuracy and confusion matrix")
    _add_common(p, config=False)
    p.add_argument("--samples", required=True)
    p.add_argument("--roster", required=True)
    p.add_argument("--k", type=_positive_int, action="append")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_eval_id)

    p = subs.add_parser("cooccur", help="aggregate tracks or a ledger into an association matrix")
    _add_common(p)
    p.add_argument("--tracks", action="append")
    p.add_argument("--ledger")
    p.add_argument("--pair-ledger", dest="pair_ledger")
    p.add_argument("--roster", dest="roster")
    p.add_argument("--mode", choices=["video-level", "proximal"])
    p.add_argument("--out", required=True)
    p.add_argument("--ledger-out", dest="ledger_out")
    p.add_argument("--conflicts-out", dest="conflicts_out")
    _add_tracker_flags(p)
    p.add_argument("--prox-max-gap", type=float, dest="prox_max_gap")
    p.add_argument("--prox-max-depth-disparity", type=float, dest="prox_max_depth_disparity")
    p.set_defaults(func=_cmd_cooccur)

    p = subs.add_parser("network", help="network measures from an association matrix")
    _add_common(p)
    p.add_argument("--matrix", required=True)
    p.add_argument("--out", required=True)
    _add_network_flags(p)
    p.set_defaults(func=_cmd_network)

    p = subs.add_parser("layout", help="GEM layout rendered to SVG and DOT")
    _add_common(p)
    p.add_argument("--matrix", required=True)
    p.add_argument("--report")
    p.add_argument("--seed", type=int, dest="seed")
    p.add_argument("--svg-out", dest="svg_out")
    p.add_argument("--dot-out", dest="dot_out")
    _add_gem_flags(p)
    _add_network_flags(p)
    p.set_defaults(func=_cmd_layout)

    p = subs.add_parser("synth", help="generate a synthetic scenario with ground truth")
    _add_common(p)
    p.add_argument("--seed", type=int, dest="seed")
    p.add_argument("--individuals", type=_positive_int, default=12)
    p.add_argument("--matrilines", type=_positive_int, default=3)
    p.add_argument("--videos", type=_positive_int, default=200)
    p.add_argument("--frames", type=_positive_int, default=30)
    p.add_argument("--fp-rate", type=float, default=0.0, dest="fp_rate")
    p.add_argument("--fn-rate", type=float, default=0.0, dest="fn_rate")
    p.add_argument("--jitter-px", type=float, default=0.0, dest="jitter_px")
    p.add_argument("--id-confusion-rate", type=float, default=0.0, dest="id_confusion_rate")
    p.add_argument("--out-dir", dest="out_dir")
    p.set_defaults(func=_cmd_synth)

    p = subs.add_parser("pipeline", help="detections per video to matrix, report and SVG")
    _add_common(p)
    p.add_argument("--detections-dir", dest="detections_dir")
    p.add_argument("--roster", dest="roster")
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--seed", type=int, dest="seed")
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--mode", choices=["video-level", "proximal"])
    _add_tracker_flags(p)
    p.add_argument("--prox-max-gap", type=float, dest="prox_max_gap")
    p.add_argument("--prox-max-depth-disparity", type=float, dest="prox_max_depth_disparity")
    _add_gem_flags(p)
    _add_network_flags(p)
    p.set_defaults(func=_cmd_pipeline)

    return parser


def _emit_error(message: str, code: int, as_json: bool) -> None:
    if as_json:
        sys.stderr.write(json.dumps({"error": message, "exit_code": code}) + "\n")
    else:
        sys.stderr.write(message.rstrip("\n") + "\n")


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    as_json = "--error-json" in argv
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        _emit_error(str(exc), 1, as_json)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if getattr(args, "command", None) is None:
        _emit_error(parser.format_usage() + "troopnet: error: a subcommand is required", 1, as_json)
        return 1
    as_json = bool(getattr(args, "error_json", False)) or as_json
    try:
        return args.func(args)
    except UsageError as exc:
        _emit_error(str(exc), 1, as_json)
        return 1
    except network.ConvergenceError as exc:
        _emit_error(str(exc), 3, as_json)
        return 3
    except (ParseError, ConfigError, ValueError, OSError) as exc:
        _emit_error(str(exc), 2, as_json)
        return 2


if __name__ == "__main__":
    sys.exit(main())
