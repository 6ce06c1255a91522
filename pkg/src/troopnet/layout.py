"""Force-directed graph layout and SVG/DOT rendering.

The placement algorithm is GEM (graph embedder): each round visits the
vertices in random order, computes an impulse from gravity, pairwise
repulsion, attraction along weighted edges and a random disturbance, then
moves the vertex by its own temperature along that impulse. Temperatures
adapt per vertex by comparing successive impulse directions (alignment
warms, oscillation cools, sustained rotation cools) under a slowly
falling global envelope, so the run provably reaches its stop condition:
mean temperature below a fraction of the desired edge length, with a
round cap as backstop.

Determinism: all randomness comes from the seeded generator in
:mod:`troopnet.rng`, and the arithmetic uses only IEEE 754 operations with
exact semantics (+, -, *, /, sqrt), so the same inputs produce bitwise
identical coordinates on any conforming platform. Rendering formats every
number with six significant digits for byte-stable output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from .ingest import AssociationMatrix
from .network import NetworkReport
from .rng import Rng

__all__ = [
    "GemParams",
    "LayoutResult",
    "gem_layout",
    "render_svg",
    "render_dot",
]

# Temperature adaptation constants. A vertex's temperature is scaled by
# 1 + cos(beta)/2 for the angle beta between successive impulses, so
# steady motion warms and oscillation cools. An angle whose sine exceeds
# sin(60 degrees) feeds a signed rotation gauge that halves the
# temperature when it saturates. A linear envelope from the start
# temperature to a small floor over the first 5/8 of the round budget
# bounds every temperature from above, which forces the mean below the
# stop threshold well before the round cap.
_OSCILLATION_GAIN = 0.5
_ROTATION_COOL = 0.5
_SIN_ROTATION = math.sqrt(3.0) / 2.0
_RAMP_SHARE = 5.0 / 8.0
_FLOOR_FRACTION = 1.0 / 128.0


@dataclass(frozen=True)
class GemParams:
    desired_edge_length: float = 128.0
    max_rounds_factor: int = 40
    initial_temperature: float | None = None
    max_temperature: float = 256.0
    gravity: float = 1.0 / 16.0
    stop_temperature_fraction: float = 1.0 / 50.0

    def __post_init__(self) -> None:
        for name in (
            "desired_edge_length",
            "max_rounds_factor",
            "max_temperature",
            "gravity",
            "stop_temperature_fraction",
        ):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")
        if self.initial_temperature is not None and not self.initial_temperature > 0:
            raise ValueError(
                f"initial_temperature must be positive, got {self.initial_temperature}"
            )

    @property
    def start_temperature(self) -> float:
        if self.initial_temperature is None:
            return self.desired_edge_length
        return self.initial_temperature


@dataclass
class LayoutResult:
    positions: dict[str, tuple[float, float]]
    seed: int
    rounds_used: int
    params: GemParams = field(default_factory=GemParams)


def gem_layout(m: AssociationMatrix, params: GemParams | None = None, seed: int = 0) -> LayoutResult:
    """Place the matrix's vertices in the plane with the GEM algorithm.

    Per vertex and round the impulse is

        gravity:    (barycenter - pos) * gravity * phi
        repulsion:  sum over other vertices of delta * E^2 / |delta|^2
        attraction: sum over positive edges of -delta * |delta|^2 * w / (E^2 * phi)
        jitter:     uniform in [-t/8, t/8] per component

    with E the desired edge length, phi = 1 + degree/2 and t the vertex
    temperature. The vertex then moves by t along the impulse direction,
    and t adapts by the angle between successive impulses (see the module
    constants). Random draws happen in a fixed order (initial x, y per
    vertex in matrix order; per round a vertex permutation, then jitter
    x, y per visit), so a seed pins the exact result.
    """
    if params is None:
        params = GemParams()
    n = m.n
    names = m.names
    if n == 1:
        return LayoutResult(positions={names[0]: (0.0, 0.0)}, seed=seed, rounds_used=0, params=params)

    edge_len = params.desired_edge_length
    edge_sq = edge_len * edge_len
    values = m.values
    rng = Rng(seed)

    degrees = [sum(1 for j in range(n) if values[i, j] > 0.0) for i in range(n)]
    phi = [1.0 + degrees[i] / 2.0 for i in range(n)]
    neighbors = [
        [(j, float(values[i, j])) for j in range(n) if values[i, j] > 0.0] for i in range(n)
    ]

    spread = edge_len * math.sqrt(float(n))
    xs: list[float] = []
    ys: list[float] = []
    for _ in range(n):
        xs.append((rng.random() - 0.5) * spread)
        ys.append((rng.random() - 0.5) * spread)

    temps = [params.start_temperature] * n
    skew = [0.0] * n
    last_x = [0.0] * n
    last_y = [0.0] * n
    sum_x = 0.0
    sum_y = 0.0
    for i in range(n):
        sum_x += xs[i]
        sum_y += ys[i]

    stop_mean = edge_len * params.stop_temperature_fraction
    floor = edge_len * _FLOOR_FRACTION
    max_rounds = params.max_rounds_factor * n
    ramp_rounds = max_rounds * _RAMP_SHARE
    start_temp = params.start_temperature
    rounds = 0
    while rounds < max_rounds:
        rounds += 1
        for v in rng.permutation(n):
            t = temps[v]
            # gravity toward the barycenter (running coordinate sums)
            g = params.gravity * phi[v]
            px = (sum_x / n - xs[v]) * g
            py = (sum_y / n - ys[v]) * g
            # random disturbance scaled by the vertex temperature
            px += (rng.random() - 0.5) * (t / 4.0)
            py += (rng.random() - 0.5) * (t / 4.0)
            # repulsion from every other vertex
            for u in range(n):
                if u == v:
                    continue
                dx = xs[v] - xs[u]
                dy = ys[v] - ys[u]
                dist_sq = dx * dx + dy * dy
                if dist_sq > 0.0:
                    f = edge_sq / dist_sq
                    px += dx * f
                    py += dy * f
            # attraction along weighted edges
            for u, w in neighbors[v]:
                dx = xs[v] - xs[u]
                dy = ys[v] - ys[u]
                dist_sq = dx * dx + dy * dy
                f = dist_sq * w / (edge_sq * phi[v])
                px -= dx * f
                py -= dy * f

            mag_sq = px * px + py * py
            if mag_sq > 0.0 and math.isfinite(mag_sq):
                mag = math.sqrt(mag_sq)
                move_x = (px / mag) * t
                move_y = (py / mag) * t
                xs[v] += move_x
                ys[v] += move_y
                sum_x += move_x
                sum_y += move_y
                lx = last_x[v]
                ly = last_y[v]
                last_mag_sq = lx * lx + ly * ly
                if last_mag_sq > 0.0 and math.isfinite(last_mag_sq):
                    denom = mag * math.sqrt(last_mag_sq)
                    cos_b = (px * lx + py * ly) / denom
                    sin_b = (px * ly - py * lx) / denom
                    t = t * (1.0 + _OSCILLATION_GAIN * cos_b)
                    if t > params.max_temperature:
                        t = params.max_temperature
                    if sin_b > _SIN_ROTATION or sin_b < -_SIN_ROTATION:
                        step = 1.0 / (2.0 * n)
                        skew[v] += step if sin_b > 0.0 else -step
                        if skew[v] > 1.0 or skew[v] < -1.0:
                            t = t * _ROTATION_COOL
                            skew[v] = 0.0
                    temps[v] = t
                last_x[v] = px
                last_y[v] = py
        envelope = start_temp * (1.0 - rounds / ramp_rounds)
        if envelope < floor:
            envelope = floor
        mean_temp = 0.0
        for i in range(n):
            if temps[i] > envelope:
                temps[i] = envelope
            elif temps[i] < floor:
                temps[i] = floor
            mean_temp += temps[i]
        if mean_temp / n < stop_mean:
            break

    positions = {names[i]: (xs[i], ys[i]) for i in range(n)}
    return LayoutResult(positions=positions, seed=seed, rounds_used=rounds, params=params)


def _fmt(value: float) -> str:
    return format(value, ".6g")


_RADIUS_MIN = 4.0
_RADIUS_MAX = 24.0
_STROKE_MIN = 0.5
_STROKE_MAX = 8.0


def _radius_map(report: NetworkReport) -> dict[str, float]:
    degrees = {ind.name: ind.degree for ind in report.individuals}
    if not degrees:
        return {}
    lo = min(degrees.values())
    hi = max(degrees.values())
    if hi == lo:
        mid = (_RADIUS_MIN + _RADIUS_MAX) / 2.0
        return {name: mid for name in degrees}
    span = _RADIUS_MAX - _RADIUS_MIN
    return {
        name: _RADIUS_MIN + span * (deg - lo) / (hi - lo) for name, deg in degrees.items()
    }


def _positive_dyads(m: AssociationMatrix) -> list[tuple[int, int, float]]:
    out = []
    for i in range(m.n):
        for j in range(i + 1, m.n):
            w = float(m.values[i, j])
            if w > 0.0:
                out.append((i, j, w))
    return out


def render_svg(m: AssociationMatrix, layout: LayoutResult, report: NetworkReport) -> bytes:
    """Render the network as an SVG document.

    Node radius is affine in degree over the observed range (4 to 24
    units; a flat range pins every node to the midpoint), edge stroke
    width is affine in the association index (0.5 up to 8 at the maximum
    index). The viewBox covers all circles and lines with a 5% margin.
    """
    names = m.names
    missing = [name for name in names if name not in layout.positions]
    if missing:
        raise ValueError(f"layout is missing positions for: {', '.join(missing)}")
    radii = _radius_map(report)
    missing = [name for name in names if name not in radii]
    if missing:
        raise ValueError(f"report is missing measures for: {', '.join(missing)}")

    dyads = _positive_dyads(m)
    max_w = max((w for _i, _j, w in dyads), default=0.0)

    min_x = math.inf
    max_x = -math.inf
    min_y = math.inf
    max_y = -math.inf
    for name in names:
        x, y = layout.positions[name]
        r = radii[name]
        min_x = min(min_x, x - r)
        max_x = max(max_x, x + r)
        min_y = min(min_y, y - r)
        max_y = max(max_y, y + r)
    width = max_x - min_x
    height = max_y - min_y
    margin_x = width * 0.05 if width > 0 else 1.0
    margin_y = height * 0.05 if height > 0 else 1.0

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{_fmt(min_x - margin_x)} {_fmt(min_y - margin_y)} '
        f'{_fmt(width + 2.0 * margin_x)} {_fmt(height + 2.0 * margin_y)}">',
    ]
    for i, j, w in dyads:
        x1, y1 = layout.positions[names[i]]
        x2, y2 = layout.positions[names[j]]
        stroke = _STROKE_MIN + (_STROKE_MAX - _STROKE_MIN) * (w / max_w)
        lines.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="#555555" stroke-width="{_fmt(stroke)}"/>'
        )
    for name in names:
        x, y = layout.positions[name]
        lines.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(radii[name])}" '
            'fill="#7fb2d9" stroke="#2f4858" stroke-width="1"/>'
        )
    for name in names:
        x, y = layout.positions[name]
        lines.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y + radii[name] + 11.0)}" '
            f'font-family="sans-serif" font-size="11" text-anchor="middle">{escape(name)}</text>'
        )
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _dot_quote(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(m: AssociationMatrix, report: NetworkReport) -> str:
    """Render the network in DOT form, one edge per positive dyad.

    Nodes appear in matrix order annotated with degree, strength and
    eigenvector centrality; edges follow ascending (i, j) index order and
    carry the association index as their weight.
    """
    measures = {ind.name: ind for ind in report.individuals}
    missing = [name for name in m.names if name not in measures]
    if missing:
        raise ValueError(f"report is missing measures for: {', '.join(missing)}")
    out = ["graph association {"]
    for name in m.names:
        ind = measures[name]
        out.append(
            f"  {_dot_quote(name)} [degree={ind.degree}, "
            f'strength="{_fmt(ind.strength)}", eigenvector="{_fmt(ind.eigenvector)}"];'
        )
    for i, j, w in _positive_dyads(m):
        out.append(
            f"  {_dot_quote(m.names[i])} -- {_dot_quote(m.names[j])} [weight={_fmt(w)}];"
        )
    out.append("}")
    return "\n".join(out) + "\n"
