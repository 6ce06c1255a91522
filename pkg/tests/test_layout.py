"""Tests for the force-directed layout and the SVG/DOT renderers."""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET

import pytest
from hypothesis import given, settings, strategies as st

from troopnet.layout import GemParams, gem_layout, render_dot, render_svg
from troopnet.network import network_report
from troopnet.rng import Rng

from conftest import matrix_from_dyads


def _dist(layout, a, b):
    (x1, y1), (x2, y2) = layout.positions[a], layout.positions[b]
    return math.hypot(x2 - x1, y2 - y1)


def _tags(svg_bytes):
    root = ET.fromstring(svg_bytes)
    return [el.tag.split("}")[-1] for el in root.iter()]


def _elements(svg_bytes, tag):
    root = ET.fromstring(svg_bytes)
    return [el for el in root.iter() if el.tag.split("}")[-1] == tag]


SQUARE = matrix_from_dyads(
    ["P", "Q", "R", "S"],
    {("P", "Q"): 0.5, ("Q", "R"): 0.5, ("R", "S"): 0.5, ("P", "S"): 0.5},
)


# ---------------------------------------------------------------------------
# parameters


def test_gem_params_defaults():
    params = GemParams()
    assert params.desired_edge_length == 128.0
    assert params.start_temperature == 128.0
    assert GemParams(initial_temperature=50.0).start_temperature == 50.0


def test_gem_params_validation():
    for bad in (
        dict(desired_edge_length=0.0),
        dict(max_rounds_factor=0),
        dict(initial_temperature=-1.0),
        dict(max_temperature=0.0),
        dict(gravity=0.0),
        dict(stop_temperature_fraction=0.0),
    ):
        with pytest.raises(ValueError):
            GemParams(**bad)


# ---------------------------------------------------------------------------
# layout behaviour


def test_layout_single_node_at_origin():
    m = matrix_from_dyads(["Solo"], {})
    result = gem_layout(m)
    assert result.positions == {"Solo": (0.0, 0.0)}
    assert result.rounds_used == 0


def test_layout_pair_lands_near_desired_length():
    m = matrix_from_dyads(["A", "B"], {("A", "B"): 0.8})
    result = gem_layout(m, seed=0)
    assert 0.75 * 128.0 <= _dist(result, "A", "B") <= 1.25 * 128.0


@pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
def test_layout_square_cycle_is_square(seed):
    result = gem_layout(SQUARE, seed=seed)
    sides = [
        _dist(result, a, b) for a, b in (("P", "Q"), ("Q", "R"), ("R", "S"), ("P", "S"))
    ]
    assert max(sides) / min(sides) <= 1.15
    mean_side = sum(sides) / 4.0
    for a, b in (("P", "R"), ("Q", "S")):
        assert _dist(result, a, b) == pytest.approx(mean_side * math.sqrt(2.0), rel=0.15)


def test_layout_star_leaves_equidistant():
    dyads = {("Hub", f"L{k}"): 0.5 for k in range(6)}
    m = matrix_from_dyads(["Hub"] + [f"L{k}" for k in range(6)], dyads)
    result = gem_layout(m, seed=0)
    spokes = [_dist(result, "Hub", f"L{k}") for k in range(6)]
    assert max(spokes) / min(spokes) <= 1.15
    assert result.rounds_used < GemParams().max_rounds_factor * 7


def test_layout_is_deterministic():
    first = gem_layout(SQUARE, seed=42)
    second = gem_layout(SQUARE, seed=42)
    assert first.positions == second.positions
    assert first.rounds_used == second.rounds_used


def test_layout_seed_changes_result():
    a = gem_layout(SQUARE, seed=1)
    b = gem_layout(SQUARE, seed=2)
    assert a.positions != b.positions


def test_layout_echoes_inputs():
    params = GemParams(desired_edge_length=64.0)
    result = gem_layout(SQUARE, params=params, seed=9)
    assert result.seed == 9
    assert result.params == params


def test_layout_terminates_on_fixture(troop_matrix):
    params = GemParams()
    result = gem_layout(troop_matrix, params=params, seed=42)
    assert result.rounds_used < params.max_rounds_factor * troop_matrix.n
    assert all(
        math.isfinite(x) and math.isfinite(y) for x, y in result.positions.values()
    )


@given(st.integers(0, 1000), st.integers(2, 8))
@settings(max_examples=20, deadline=None)
def test_layout_finite_on_random_graphs(seed, n):
    rng = Rng(seed)
    names = [f"n{k}" for k in range(n)]
    dyads = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.5:
                dyads[(names[i], names[j])] = 0.1 + 0.8 * rng.random()
    m = matrix_from_dyads(names, dyads)
    result = gem_layout(m, seed=seed)
    assert set(result.positions) == set(names)
    for x, y in result.positions.values():
        assert math.isfinite(x) and math.isfinite(y)


def test_zero_edge_graph_spreads_out():
    m = matrix_from_dyads(["A", "B", "C"], {})
    result = gem_layout(m, seed=0)
    assert _dist(result, "A", "B") > 1.0
    assert _dist(result, "A", "C") > 1.0


# ---------------------------------------------------------------------------
# SVG rendering


def _rendered(m, seed=0):
    report = network_report(m)
    layout = gem_layout(m, seed=seed)
    return render_svg(m, layout, report), layout, report


def test_svg_is_wellformed_with_matching_counts(troop_matrix, troop_report):
    layout = gem_layout(troop_matrix, seed=42)
    svg = render_svg(troop_matrix, layout, troop_report)
    tags = _tags(svg)
    n = troop_matrix.n
    edges = int((troop_matrix.values > 0).sum() // 2)
    assert tags.count("circle") == n
    assert tags.count("text") == n
    assert tags.count("line") == edges
    assert svg.startswith(b'<?xml version="1.0" encoding="UTF-8"?>')


def test_svg_bytes_deterministic(troop_matrix, troop_report):
    layout = gem_layout(troop_matrix, seed=42)
    assert render_svg(troop_matrix, layout, troop_report) == render_svg(
        troop_matrix, layout, troop_report
    )


def test_svg_two_nodes_one_edge():
    m = matrix_from_dyads(["A", "B"], {("A", "B"): 0.5})
    svg, _layout, _report = _rendered(m)
    tags = _tags(svg)
    assert tags.count("circle") == 2
    assert tags.count("line") == 1
    assert tags.count("text") == 2


def test_svg_equal_degrees_get_midpoint_radius():
    m = matrix_from_dyads(["A", "B"], {("A", "B"): 0.5})
    svg, _layout, _report = _rendered(m)
    radii = {c.get("r") for c in _elements(svg, "circle")}
    assert radii == {"14"}


def test_svg_radius_scales_with_degree():
    m = matrix_from_dyads(
        ["Hub", "L1", "L2", "L3"],
        {("Hub", "L1"): 0.5, ("Hub", "L2"): 0.5, ("Hub", "L3"): 0.5},
    )
    svg, layout, _report = _rendered(m)
    circles = {}
    for c in _elements(svg, "circle"):
        cx, cy = float(c.get("cx")), float(c.get("cy"))
        for name, (x, y) in layout.positions.items():
            if abs(cx - x) < 1e-3 and abs(cy - y) < 1e-3:
                circles[name] = float(c.get("r"))
    assert circles["Hub"] == 24.0
    assert circles["L1"] == 4.0


def test_svg_stroke_widths_follow_weights():
    m = matrix_from_dyads(["A", "B", "C"], {("A", "B"): 0.8, ("B", "C"): 0.4})
    svg, _layout, _report = _rendered(m)
    widths = sorted(float(l.get("stroke-width")) for l in _elements(svg, "line"))
    assert widths == [0.5 + 7.5 * 0.5, 8.0]


def test_svg_zero_edges_has_no_lines():
    m = matrix_from_dyads(["A", "B"], {})
    svg, _layout, _report = _rendered(m)
    assert _tags(svg).count("line") == 0


def test_svg_escapes_names():
    m = matrix_from_dyads(["A<1>", "B&Co"], {("A<1>", "B&Co"): 0.5})
    svg, _layout, _report = _rendered(m)
    texts = {t.text for t in _elements(svg, "text")}
    assert texts == {"A<1>", "B&Co"}
    assert b"A&lt;1&gt;" in svg


def test_svg_missing_position_rejected():
    m = matrix_from_dyads(["A", "B"], {("A", "B"): 0.5})
    report = network_report(m)
    smaller = matrix_from_dyads(["A"], {})
    layout = gem_layout(smaller, seed=0)
    with pytest.raises(ValueError, match="missing positions.*B"):
        render_svg(m, layout, report)


def test_svg_missing_measures_rejected():
    m = matrix_from_dyads(["A", "B"], {("A", "B"): 0.5})
    layout = gem_layout(m, seed=0)
    smaller = matrix_from_dyads(["A", "C"], {})
    with pytest.raises(ValueError, match="missing measures.*B"):
        render_svg(m, layout, network_report(smaller))


# ---------------------------------------------------------------------------
# DOT rendering


def test_dot_single_edge():
    m = matrix_from_dyads(["A", "B"], {("A", "B"): 0.37})
    dot = render_dot(m, network_report(m))
    lines = dot.splitlines()
    assert lines[0] == "graph association {"
    assert lines[-1] == "}"
    assert '  "A" -- "B" [weight=0.37];' in lines
    node_lines = [l for l in lines if " [degree=" in l]
    assert len(node_lines) == 2
    assert node_lines[0].startswith('  "A" [degree=1, strength="0.37", ')


def test_dot_counts_match_graph(troop_matrix, troop_report):
    dot = render_dot(troop_matrix, troop_report)
    lines = dot.splitlines()
    n = troop_matrix.n
    edges = int((troop_matrix.values > 0).sum() // 2)
    assert len([l for l in lines if " [degree=" in l]) == n
    assert len([l for l in lines if " -- " in l]) == edges


def test_dot_quotes_awkward_names():
    name = 'Fa"ce\\Off'
    m = matrix_from_dyads([name, "B"], {(name, "B"): 0.5})
    dot = render_dot(m, network_report(m))
    assert '"Fa\\"ce\\\\Off"' in dot


def test_dot_deterministic(troop_matrix, troop_report):
    assert render_dot(troop_matrix, troop_report) == render_dot(troop_matrix, troop_report)


def test_dot_missing_measures_rejected():
    m = matrix_from_dyads(["A", "B"], {("A", "B"): 0.5})
    smaller = matrix_from_dyads(["A", "C"], {})
    with pytest.raises(ValueError, match="missing measures.*B"):
        render_dot(m, network_report(smaller))
