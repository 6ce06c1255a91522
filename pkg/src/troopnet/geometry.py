"""Axis-aligned bounding boxes: IoU, center distance, proximity predicate.

Boxes use a top-left origin and (x, y, w, h) layout so annotation exports
load without any coordinate conversion. Degenerate boxes (non-positive
width or height) are rejected on construction rather than clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["BBox", "ProximityParams", "iou", "center_distance", "is_proximal"]


@dataclass(frozen=True)
class BBox:
    """Axis-aligned pixel rectangle; (x, y) is the top-left corner."""

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        for name in ("x", "y", "w", "h"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
                raise ValueError(f"bbox field {name!r} must be a finite number, got {v!r}")
        if self.w <= 0 or self.h <= 0:
            raise ValueError(f"bbox sides must be positive, got w={self.w}, h={self.h}")

    @property
    def area(self) -> float:
        return self.w * self.h

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)


@dataclass(frozen=True)
class ProximityParams:
    """Thresholds for the proximity predicate.

    max_gap bounds the center distance in units of the mean box height;
    max_depth_disparity bounds the absolute log of the height ratio, using
    apparent face size as a stand-in for distance from the camera. The
    defaults (2.0 face-heights, ln 1.5) are configurable stand-ins; no
    calibrated pixel threshold exists for the field protocol.
    """

    max_gap: float = 2.0
    max_depth_disparity: float = math.log(1.5)

    def __post_init__(self):
        if not (self.max_gap > 0 and math.isfinite(self.max_gap)):
            raise ValueError(f"max_gap must be positive, got {self.max_gap}")
        if not (self.max_depth_disparity >= 0 and math.isfinite(self.max_depth_disparity)):
            raise ValueError(
                f"max_depth_disparity must be non-negative, got {self.max_depth_disparity}"
            )


def iou(a: BBox, b: BBox) -> float:
    """Intersection over union of two boxes, in [0, 1].

    Returns exactly 1.0 for identical boxes and 0.0 when the interiors are
    disjoint (touching edges count as disjoint). All widths derive from the
    same corner differences, which keeps the ratio at or below 1 even when
    x + w - x does not round back to w.
    """
    ax2 = a.x + a.w
    ay2 = a.y + a.h
    bx2 = b.x + b.w
    by2 = b.y + b.h
    iw = min(ax2, bx2) - max(a.x, b.x)
    ih = min(ay2, by2) - max(a.y, b.y)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    area_a = (ax2 - a.x) * (ay2 - a.y)
    area_b = (bx2 - b.x) * (by2 - b.y)
    union = area_a + area_b - inter
    return inter / union


def center_distance(a: BBox, b: BBox) -> float:
    """Euclidean distance between box centers, in pixels."""
    ax, ay = a.center
    bx, by = b.center
    return math.hypot(ax - bx, ay - by)


def is_proximal(a: BBox, b: BBox, params: ProximityParams = ProximityParams()) -> bool:
    """Whether two boxes plausibly show individuals near each other.

    True iff the center distance normalized by the mean box height is at
    most max_gap and the absolute log height ratio is at most
    max_depth_disparity. Both tests are invariant under common translation
    and common uniform scaling of the two boxes.
    """
    mean_h = (a.h + b.h) / 2.0
    if center_distance(a, b) / mean_h > params.max_gap:
        return False
    return abs(math.log(a.h / b.h)) <= params.max_depth_disparity
