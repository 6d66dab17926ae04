"""End-to-end detection: preprocess, detect, filter, expand, merge, select.

The stages run in a fixed order and every region-valued stage is recorded
in a DetectionTrace, so the CLI and the tuning UI can show exactly which
region was dropped where and why.  Identical image and config always give
an identical result (timing aside).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, fields
from typing import Optional

import numpy as np

from .component_tree import MserParams, build_tree, extract_msers
from .raster import contrast_stretch, validate_gray_image
from .regionprops import (
    POLARITY_DARK,
    POLARITY_LIGHT,
    BoundingBox,
    GeometryThresholds,
    Region,
    compute_props,
    geometry_failure,
)
from .strokewidth import STROKE_REASON, StrokeParams, stroke_stats

STAGE_DETECT = "detect_regions"
STAGE_GEOMETRY = "filter_by_geometry"
STAGE_STROKE = "filter_by_stroke"
STAGE_BOXES = "to_boxes"
STAGE_EXPAND = "expand_boxes"
STAGE_MERGE = "merge_overlapping"
STAGE_STRETCH = "contrast_stretch"

RESULT_SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Invalid or unknown configuration; the message names the offending key."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


@dataclass
class PipelineConfig:
    stretch_enabled: bool = True
    stretch_k: float = 2.0
    detect_dark: bool = True
    detect_light: bool = True
    mser: MserParams = field(default_factory=MserParams)
    geometry: GeometryThresholds = field(default_factory=lambda: GeometryThresholds(
        min_aspect_ratio=0.1,
        max_aspect_ratio=10.0,
        max_eccentricity=0.995,
        min_solidity=0.3,
        min_extent=0.1,
        max_extent=0.9,
        max_euler_holes=2,
    ))
    stroke: StrokeParams = field(default_factory=StrokeParams)
    expansion_amount: float = 0.15
    merge_overlap_min: float = 0.0

    def validate(self) -> None:
        if self.stretch_k <= 0:
            raise ConfigError(f"stretch_k must be > 0, got {self.stretch_k}", "stretch_k")
        if self.expansion_amount < 0:
            raise ConfigError(
                f"expansion_amount must be >= 0, got {self.expansion_amount}",
                "expansion_amount")
        if not 0.0 <= self.merge_overlap_min <= 1.0:
            raise ConfigError(
                f"merge_overlap_min must be in [0, 1], got {self.merge_overlap_min}",
                "merge_overlap_min")
        for group, name in ((self.mser, "mser"), (self.geometry, "geometry"),
                            (self.stroke, "stroke")):
            try:
                group.validate()
            except ValueError as exc:
                raise ConfigError(f"{name}: {exc}", name) from exc

    def to_dict(self) -> dict:
        return {
            "stretch_enabled": self.stretch_enabled,
            "stretch_k": self.stretch_k,
            "detect_dark": self.detect_dark,
            "detect_light": self.detect_light,
            "mser": {f.name: getattr(self.mser, f.name) for f in fields(self.mser)},
            "geometry": {f.name: getattr(self.geometry, f.name)
                         for f in fields(self.geometry)},
            "stroke": {f.name: getattr(self.stroke, f.name) for f in fields(self.stroke)},
            "expansion_amount": self.expansion_amount,
            "merge_overlap_min": self.merge_overlap_min,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        """Build a config from a (possibly partial) nested dict.

        Unknown keys are rejected at every level to catch threshold-name
        typos; missing keys take the documented defaults.
        """
        if not isinstance(data, dict):
            raise ConfigError(f"config must be an object, got {type(data).__name__}")
        config = cls()
        groups = {"mser": config.mser, "geometry": config.geometry,
                  "stroke": config.stroke}
        scalars = {"stretch_enabled", "stretch_k", "detect_dark", "detect_light",
                   "expansion_amount", "merge_overlap_min"}
        for key, value in data.items():
            if key in groups:
                target = groups[key]
                if not isinstance(value, dict):
                    raise ConfigError(f"config key {key!r} must be an object", key)
                known = {f.name for f in fields(target)}
                for sub_key, sub_value in value.items():
                    if sub_key not in known:
                        raise ConfigError(
                            f"unknown config key {key + '.' + sub_key!r}", sub_key)
                    setattr(target, sub_key, sub_value)
            elif key in scalars:
                setattr(config, key, value)
            else:
                raise ConfigError(f"unknown config key {key!r}", key)
        config.validate()
        return config

    def canonical_json(self) -> str:
        """Stable serialization used as a cache key."""
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


@dataclass
class StageRecord:
    """One stage of the trace; input_count == len(kept) + len(rejected)."""

    name: str
    input_count: int
    kept: list
    rejected: list  # (item, reason) or (item, reason, value) tuples


@dataclass
class DetectionTrace:
    stages: list[StageRecord]
    final_boxes: list[BoundingBox]
    primary_box: Optional[BoundingBox]


@dataclass
class DetectionResult:
    final_boxes: list[BoundingBox]
    primary_box: Optional[BoundingBox]
    trace: DetectionTrace
    timing_ms: dict[str, float]


def expand_boxes(boxes, expansion_amount: float, frame: tuple[int, int]) -> list[BoundingBox]:
    """Grow each box by the given fraction of its own size per side, clamped.

    ``frame`` is (width, height) of the image.
    """
    frame_w, frame_h = int(frame[0]), int(frame[1])
    out = []
    for box in boxes:
        dx = int(np.floor(expansion_amount * box.width + 0.5))
        dy = int(np.floor(expansion_amount * box.height + 0.5))
        x0 = max(0, box.x - dx)
        y0 = max(0, box.y - dy)
        x1 = min(frame_w, box.right + dx)
        y1 = min(frame_h, box.bottom + dy)
        out.append(BoundingBox(x0, y0, x1 - x0, y1 - y0))
    return out


def _overlap_partition(boxes, merge_overlap_min: float) -> list[list[int]]:
    """Connected components of the overlap graph, as sorted index lists.

    Two boxes connect when intersection / min(area) >= merge_overlap_min;
    a threshold of 0 means any positive-area intersection connects.
    """
    n = len(boxes)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            inter = boxes[i].intersection_area(boxes[j])
            if inter == 0:
                continue
            ratio = inter / min(boxes[i].area, boxes[j].area)
            if ratio >= merge_overlap_min:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: min(g))


def _group_union(boxes, group) -> BoundingBox:
    box = boxes[group[0]]
    for idx in group[1:]:
        box = box.union(boxes[idx])
    return box


def _merge_groups(boxes, merge_overlap_min: float) -> list[list[int]]:
    """Partition box indices so that no two group-union boxes still overlap.

    A merged union box can spill over boxes its members never touched, so a
    single pass over the overlap graph is not enough; rounds repeat until the
    partition is stable, which makes merging idempotent.
    """
    groups = [[i] for i in range(len(boxes))]
    while len(groups) > 1:
        unions = [_group_union(boxes, g) for g in groups]
        coarser = _overlap_partition(unions, merge_overlap_min)
        if len(coarser) == len(groups):
            break
        groups = [sorted(x for gi in g for x in groups[gi]) for g in coarser]
        groups.sort(key=lambda g: g[0])
    return groups


def merge_overlapping(boxes, merge_overlap_min: float = 0.0) -> list[BoundingBox]:
    """Replace every connected group of overlapping boxes by its union box.

    Groups are closed under overlap of the unions themselves, so applying
    this twice gives the same boxes. Output sorted by (y, x, width, height).
    """
    boxes = list(boxes)
    merged = [_group_union(boxes, g) for g in _merge_groups(boxes, merge_overlap_min)]
    return sorted(merged, key=lambda b: (b.y, b.x, b.width, b.height))


def select_primary(boxes) -> Optional[BoundingBox]:
    """Largest-area box; ties broken by topmost, then leftmost, then size."""
    if not boxes:
        return None
    return min(boxes, key=lambda b: (-b.area, b.y, b.x, b.width, b.height))


def detect(img: np.ndarray, config: Optional[PipelineConfig] = None) -> DetectionResult:
    """Run the full pipeline on one grayscale image."""
    img = validate_gray_image(img)
    if config is None:
        config = PipelineConfig()
    config.validate()
    height, width = img.shape
    timing: dict[str, float] = {}
    stages: list[StageRecord] = []

    t0 = time.perf_counter()
    work = contrast_stretch(img, config.stretch_k) if config.stretch_enabled else img
    timing[STAGE_STRETCH] = (time.perf_counter() - t0) * 1000.0

    t0 = time.perf_counter()
    polarities = []
    if config.detect_dark:
        polarities.append(POLARITY_DARK)
    if config.detect_light:
        polarities.append(POLARITY_LIGHT)
    regions: list[Region] = []
    for polarity in polarities:
        tree = build_tree(work, polarity)
        regions.extend(extract_msers(tree, config.mser))
    timing[STAGE_DETECT] = (time.perf_counter() - t0) * 1000.0
    stages.append(StageRecord(STAGE_DETECT, len(regions), list(regions), []))

    t0 = time.perf_counter()
    geo_kept: list[Region] = []
    geo_rejected = []
    for region in regions:
        reason = geometry_failure(compute_props(region), config.geometry)
        if reason is None:
            geo_kept.append(region)
        else:
            geo_rejected.append((region, reason))
    timing[STAGE_GEOMETRY] = (time.perf_counter() - t0) * 1000.0
    stages.append(StageRecord(STAGE_GEOMETRY, len(regions), geo_kept, geo_rejected))

    t0 = time.perf_counter()
    stroke_kept: list[Region] = []
    stroke_rejected = []
    for region in geo_kept:
        stats = stroke_stats(region, config.stroke.end_trim)
        if stats.variation <= config.stroke.max_variation:
            stroke_kept.append(region)
        else:
            stroke_rejected.append((region, STROKE_REASON, stats.variation))
    timing[STAGE_STROKE] = (time.perf_counter() - t0) * 1000.0
    stages.append(StageRecord(STAGE_STROKE, len(geo_kept), stroke_kept, stroke_rejected))

    t0 = time.perf_counter()
    boxes = [region.bbox for region in stroke_kept]
    timing[STAGE_BOXES] = (time.perf_counter() - t0) * 1000.0
    stages.append(StageRecord(STAGE_BOXES, len(boxes), list(boxes), []))

    t0 = time.perf_counter()
    expanded = expand_boxes(boxes, config.expansion_amount, (width, height))
    timing[STAGE_EXPAND] = (time.perf_counter() - t0) * 1000.0
    stages.append(StageRecord(STAGE_EXPAND, len(expanded), list(expanded), []))

    t0 = time.perf_counter()
    groups = _merge_groups(expanded, config.merge_overlap_min)
    merged = []
    absorbed = []
    for group in groups:
        box = expanded[group[0]]
        for idx in group[1:]:
            box = box.union(expanded[idx])
        merged.append(box)
        # Trace bookkeeping: a k-box group keeps its union and accounts the
        # other k-1 members as merged away, so stage cardinalities chain.
        for idx in group[1:]:
            absorbed.append((expanded[idx], "merged"))
    merged.sort(key=lambda b: (b.y, b.x, b.width, b.height))
    timing[STAGE_MERGE] = (time.perf_counter() - t0) * 1000.0
    stages.append(StageRecord(STAGE_MERGE, len(expanded), merged, absorbed))

    primary = select_primary(merged)
    trace = DetectionTrace(stages=stages, final_boxes=merged, primary_box=primary)
    return DetectionResult(final_boxes=merged, primary_box=primary, trace=trace,
                           timing_ms=timing)


def _box_dict(box: BoundingBox) -> dict:
    return {"x": box.x, "y": box.y, "width": box.width, "height": box.height}


def _entry_dict(item, reason: Optional[str] = None, value: Optional[float] = None,
                with_props: bool = False, with_stroke: bool = False,
                end_trim: int = 2) -> dict:
    if isinstance(item, Region):
        entry = {
            "bbox": _box_dict(item.bbox),
            "area": item.area,
            "polarity": item.polarity,
            "source_level": item.source_level,
        }
        if with_props:
            entry["props"] = compute_props(item).to_dict()
        if with_stroke:
            entry["stroke_variation"] = stroke_stats(item, end_trim).variation
    else:
        entry = {"bbox": _box_dict(item), "area": item.area}
    if reason is not None:
        entry["reason"] = reason
    if value is not None:
        entry["stroke_variation"] = value
    return entry


def result_to_dict(result: DetectionResult, config: PipelineConfig,
                   image_shape: tuple[int, int]) -> dict:
    """Detection result as the versioned JSON-ready schema (schema field 1)."""
    height, width = image_shape
    end_trim = config.stroke.end_trim
    stages_json = []
    for stage in result.trace.stages:
        with_props = stage.name in (STAGE_GEOMETRY, STAGE_STROKE)
        with_stroke = stage.name == STAGE_STROKE
        kept = [_entry_dict(item, with_props=with_props, with_stroke=with_stroke,
                            end_trim=end_trim) for item in stage.kept]
        rejected = []
        for entry in stage.rejected:
            item, reason = entry[0], entry[1]
            value = entry[2] if len(entry) > 2 else None
            rejected.append(_entry_dict(item, reason=reason, value=value,
                                        with_props=with_props, end_trim=end_trim))
        stages_json.append({
            "name": stage.name,
            "input_count": stage.input_count,
            "kept": kept,
            "rejected": rejected,
        })
    return {
        "schema": RESULT_SCHEMA_VERSION,
        "image": {"width": width, "height": height},
        "config_echo": config.to_dict(),
        "stages": stages_json,
        "final_boxes": [_box_dict(b) for b in result.final_boxes],
        "primary_box": _box_dict(result.primary_box) if result.primary_box else None,
        "timing_ms": {name: round(ms, 3) for name, ms in result.timing_ms.items()},
    }


def result_json(result: DetectionResult, config: PipelineConfig,
                image_shape: tuple[int, int]) -> str:
    return json.dumps(result_to_dict(result, config, image_shape),
                      sort_keys=True, indent=2)
