"""Region geometry: the discriminating properties used to reject non-text blobs.

A Region is a 4-connected set of pixels pulled out of the component tree.
For each region we compute area, bounding box, aspect ratio, extent,
eccentricity (moments ellipse), solidity (area over convex hull area) and
the Euler number (1 minus the hole count), then threshold those values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy import ndimage as ndi

POLARITY_DARK = "dark_on_light"
POLARITY_LIGHT = "light_on_dark"

# 4-connectivity structuring element shared by hole labelling and oracles.
CROSS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


class BoundingBox(NamedTuple):
    """Axis-aligned pixel box; (x, y) is the top-left pixel, sizes >= 1."""

    x: int
    y: int
    width: int
    height: int

    @property
    def area(self) -> int:
        return self.width * self.height

    @property
    def right(self) -> int:
        """One past the rightmost column."""
        return self.x + self.width

    @property
    def bottom(self) -> int:
        """One past the bottom row."""
        return self.y + self.height

    def intersection_area(self, other: "BoundingBox") -> int:
        iw = min(self.right, other.right) - max(self.x, other.x)
        ih = min(self.bottom, other.bottom) - max(self.y, other.y)
        if iw <= 0 or ih <= 0:
            return 0
        return iw * ih

    def union(self, other: "BoundingBox") -> "BoundingBox":
        x0 = min(self.x, other.x)
        y0 = min(self.y, other.y)
        x1 = max(self.right, other.right)
        y1 = max(self.bottom, other.bottom)
        return BoundingBox(x0, y0, x1 - x0, y1 - y0)

    def iou(self, other: "BoundingBox") -> float:
        inter = self.intersection_area(other)
        if inter == 0:
            return 0.0
        return inter / (self.area + other.area - inter)


@dataclass
class Region:
    """A connected pixel set with lazily computed geometry and stroke stats.

    ``xs``/``ys`` are parallel int arrays of pixel coordinates.  Instances
    are treated as immutable once built; the caches only memoize derived
    values.
    """

    xs: np.ndarray
    ys: np.ndarray
    polarity: str = POLARITY_DARK
    source_level: int = 0
    _props: Optional["GeometricProps"] = field(default=None, repr=False, compare=False)
    _stroke_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=np.int64)
        self.ys = np.asarray(self.ys, dtype=np.int64)
        if self.xs.size == 0 or self.xs.shape != self.ys.shape:
            raise ValueError("region needs nonempty, equal-length coordinate arrays")

    @property
    def area(self) -> int:
        return int(self.xs.size)

    @property
    def bbox(self) -> BoundingBox:
        x0 = int(self.xs.min())
        y0 = int(self.ys.min())
        return BoundingBox(x0, y0, int(self.xs.max()) - x0 + 1, int(self.ys.max()) - y0 + 1)

    def pixel_set(self) -> frozenset:
        return frozenset(zip(self.xs.tolist(), self.ys.tolist()))

    def to_mask(self) -> tuple[np.ndarray, tuple[int, int]]:
        """Rasterize into the bbox frame; returns (bool mask, (x0, y0) origin)."""
        box = self.bbox
        mask = np.zeros((box.height, box.width), dtype=bool)
        mask[self.ys - box.y, self.xs - box.x] = True
        return mask, (box.x, box.y)

    @classmethod
    def from_mask(cls, mask: np.ndarray, origin=(0, 0), polarity: str = POLARITY_DARK,
                  source_level: int = 0) -> "Region":
        ys, xs = np.nonzero(np.asarray(mask, dtype=bool))
        return cls(xs + origin[0], ys + origin[1], polarity=polarity, source_level=source_level)


@dataclass(frozen=True)
class GeometricProps:
    area: int
    bbox: BoundingBox
    aspect_ratio: float
    eccentricity: float
    solidity: float
    extent: float
    euler_number: int
    centroid: tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "area": self.area,
            "bbox": {"x": self.bbox.x, "y": self.bbox.y,
                     "width": self.bbox.width, "height": self.bbox.height},
            "aspect_ratio": self.aspect_ratio,
            "eccentricity": self.eccentricity,
            "solidity": self.solidity,
            "extent": self.extent,
            "euler_number": self.euler_number,
            "centroid": list(self.centroid),
        }


@dataclass
class GeometryThresholds:
    """Bounds on the geometric properties; ``None`` disables a check.

    ``max_euler_holes`` rejects regions with euler_number < 1 - max_euler_holes,
    i.e. regions with more than that many holes.
    """

    min_aspect_ratio: Optional[float] = None
    max_aspect_ratio: Optional[float] = None
    max_eccentricity: Optional[float] = None
    min_solidity: Optional[float] = None
    min_extent: Optional[float] = None
    max_extent: Optional[float] = None
    max_euler_holes: Optional[int] = None

    def validate(self) -> None:
        pairs = [("min_aspect_ratio", "max_aspect_ratio"), ("min_extent", "max_extent")]
        for lo_name, hi_name in pairs:
            lo, hi = getattr(self, lo_name), getattr(self, hi_name)
            if lo is not None and hi is not None and lo > hi:
                raise ValueError(f"{lo_name} ({lo}) exceeds {hi_name} ({hi})")
        for name in ("min_aspect_ratio", "max_aspect_ratio", "max_eccentricity",
                     "min_solidity", "min_extent", "max_extent"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be >= 0, got {v}")
        if self.max_euler_holes is not None and self.max_euler_holes < 0:
            raise ValueError(f"max_euler_holes must be >= 0, got {self.max_euler_holes}")


@dataclass
class FilterOutcome:
    """Result of a filtering stage: kept regions plus (region, reason) rejects."""

    kept: list
    rejected: list  # list of (Region, reason code)


def convex_hull_coverage(region: Region) -> float:
    """Exact area of the convex hull of the region's pixel corner points.

    The hull is taken over the four corners of every pixel, so a single
    pixel covers 1.0 and the denominator of solidity is never zero.
    """
    corners = pixel_corner_points(region.xs, region.ys)
    hull = convex_hull(corners)
    return polygon_area(hull)


def pixel_corner_points(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    pts = np.concatenate([
        np.stack([xs, ys], axis=1),
        np.stack([xs + 1, ys], axis=1),
        np.stack([xs, ys + 1], axis=1),
        np.stack([xs + 1, ys + 1], axis=1),
    ])
    return np.unique(pts, axis=0)


def convex_hull(points: np.ndarray) -> np.ndarray:
    """Convex hull (counter-clockwise) by Andrew's monotone chain."""
    pts = np.unique(np.asarray(points, dtype=np.int64), axis=0)  # lexicographic sort
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def polygon_area(vertices: np.ndarray) -> float:
    """Shoelace area of a simple polygon (vertices in order)."""
    if len(vertices) < 3:
        # Degenerate hull of collinear corner points cannot arise (every pixel
        # contributes a unit square) but keep the formula total.
        return 0.0
    x = vertices[:, 0].astype(np.float64)
    y = vertices[:, 1].astype(np.float64)
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def euler_number(region: Region) -> int:
    """1 minus the number of holes (4-connected enclosed background components)."""
    mask, _ = region.to_mask()
    padded = np.pad(mask, 1, constant_values=False)
    labels, count = ndi.label(~padded, structure=CROSS)
    if count == 0:
        return 1
    border = np.unique(np.concatenate([
        labels[0, :], labels[-1, :], labels[:, 0], labels[:, -1]
    ]))
    border = border[border != 0]
    holes = count - border.size
    return 1 - holes


def compute_props(region: Region) -> GeometricProps:
    """Compute (and cache on the region) all geometric properties."""
    if region._props is not None:
        return region._props
    area = region.area
    box = region.bbox
    xs = region.xs.astype(np.float64)
    ys = region.ys.astype(np.float64)
    cx = xs.mean()
    cy = ys.mean()

    # Second central moments of pixel centers, plus the 1/12 per-pixel unit
    # square term so a single pixel is a tiny disc rather than a point.
    dx = xs - cx
    dy = ys - cy
    mxx = np.dot(dx, dx) / area + 1.0 / 12.0
    myy = np.dot(dy, dy) / area + 1.0 / 12.0
    mxy = np.dot(dx, dy) / area
    common = np.sqrt(((mxx - myy) / 2.0) ** 2 + mxy**2)
    lam1 = (mxx + myy) / 2.0 + common
    lam2 = (mxx + myy) / 2.0 - common
    eccentricity = float(np.sqrt(max(0.0, 1.0 - lam2 / lam1)))

    props = GeometricProps(
        area=area,
        bbox=box,
        aspect_ratio=box.width / box.height,
        eccentricity=eccentricity,
        solidity=area / convex_hull_coverage(region),
        extent=area / box.area,
        euler_number=euler_number(region),
        centroid=(float(cx), float(cy)),
    )
    region._props = props
    return props


def geometry_failure(props: GeometricProps, thresholds: GeometryThresholds) -> Optional[str]:
    """First failing property name in fixed order, or None if all pass.

    Order: aspect, eccentricity, solidity, extent, euler.
    """
    t = thresholds
    if t.min_aspect_ratio is not None and props.aspect_ratio < t.min_aspect_ratio:
        return "aspect"
    if t.max_aspect_ratio is not None and props.aspect_ratio > t.max_aspect_ratio:
        return "aspect"
    if t.max_eccentricity is not None and props.eccentricity > t.max_eccentricity:
        return "eccentricity"
    if t.min_solidity is not None and props.solidity < t.min_solidity:
        return "solidity"
    if t.min_extent is not None and props.extent < t.min_extent:
        return "extent"
    if t.max_extent is not None and props.extent > t.max_extent:
        return "extent"
    if t.max_euler_holes is not None and props.euler_number < 1 - t.max_euler_holes:
        return "euler"
    return None


def filter_by_geometry(regions, thresholds: GeometryThresholds) -> FilterOutcome:
    """Keep regions passing every enabled threshold; order preserved."""
    thresholds.validate()
    kept = []
    rejected = []
    for region in regions:
        reason = geometry_failure(compute_props(region), thresholds)
        if reason is None:
            kept.append(region)
        else:
            rejected.append((region, reason))
    return FilterOutcome(kept=kept, rejected=rejected)
