"""Estimator-style front end over the detection pipeline.

TextRegionDetector exposes every tuning knob as a flat constructor
parameter so it plugs into grid search and get_params/set_params
tooling; internally the knobs map onto a PipelineConfig.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator

from .component_tree import MserParams
from .pipeline import DetectionResult, PipelineConfig, detect
from .regionprops import BoundingBox, GeometryThresholds
from .strokewidth import StrokeParams


class TextRegionDetector(BaseEstimator):
    """Detects text-like regions in grayscale images.

    The detector is stateless: ``fit`` only validates parameters. Use
    ``detect`` for a full result with per-stage trace, or ``predict``
    for bounding boxes alone.

    Parameters
    ----------
    stretch_enabled : bool, default=True
        Apply contrast stretching before region extraction.
    stretch_k : float, default=2.0
        Half-width of the stretch window in standard deviations.
    detect_dark : bool, default=True
        Extract dark-on-light regions.
    detect_light : bool, default=True
        Extract light-on-dark regions.
    delta : int, default=5
        Intensity step used by the stability measure.
    min_area, max_area : int, optional
        Region area bounds in pixels; ``max_area=None`` means a quarter
        of the image area.
    max_variation : float, default=0.25
        Maximum stability score for a region to be kept.
    min_diversity : float, default=0.2
        Minimum relative area gap between nested kept regions.
    min_aspect_ratio, max_aspect_ratio : float
        Bounding-box width/height bounds.
    max_eccentricity : float
        Upper bound on region eccentricity.
    min_solidity : float
        Lower bound on area / convex hull area.
    min_extent, max_extent : float
        Bounds on area / bounding-box area.
    max_euler_holes : int
        Maximum number of holes in a region.
    stroke_max_variation : float, default=0.35
        Maximum coefficient of variation of stroke widths.
    stroke_end_trim : int, default=2
        Skeleton endpoint pruning iterations before width sampling.
    expansion_amount : float, default=0.15
        Per-side box growth as a fraction of box size.
    merge_overlap_min : float, default=0.0
        Minimum intersection-over-smaller-area for boxes to merge;
        0 merges any overlapping pair.
    """

    def __init__(self, stretch_enabled: bool = True, stretch_k: float = 2.0,
                 detect_dark: bool = True, detect_light: bool = True,
                 delta: int = 5, min_area: int = 10, max_area: Optional[int] = None,
                 max_variation: float = 0.25, min_diversity: float = 0.2,
                 min_aspect_ratio: float = 0.1, max_aspect_ratio: float = 10.0,
                 max_eccentricity: float = 0.995, min_solidity: float = 0.3,
                 min_extent: float = 0.1, max_extent: float = 0.9,
                 max_euler_holes: int = 2, stroke_max_variation: float = 0.35,
                 stroke_end_trim: int = 2, expansion_amount: float = 0.15,
                 merge_overlap_min: float = 0.0):
        self.stretch_enabled = stretch_enabled
        self.stretch_k = stretch_k
        self.detect_dark = detect_dark
        self.detect_light = detect_light
        self.delta = delta
        self.min_area = min_area
        self.max_area = max_area
        self.max_variation = max_variation
        self.min_diversity = min_diversity
        self.min_aspect_ratio = min_aspect_ratio
        self.max_aspect_ratio = max_aspect_ratio
        self.max_eccentricity = max_eccentricity
        self.min_solidity = min_solidity
        self.min_extent = min_extent
        self.max_extent = max_extent
        self.max_euler_holes = max_euler_holes
        self.stroke_max_variation = stroke_max_variation
        self.stroke_end_trim = stroke_end_trim
        self.expansion_amount = expansion_amount
        self.merge_overlap_min = merge_overlap_min

    def config(self) -> PipelineConfig:
        """Current parameters as a pipeline configuration."""
        return PipelineConfig(
            stretch_enabled=self.stretch_enabled,
            stretch_k=self.stretch_k,
            detect_dark=self.detect_dark,
            detect_light=self.detect_light,
            mser=MserParams(delta=self.delta, min_area=self.min_area,
                            max_area=self.max_area,
                            max_variation=self.max_variation,
                            min_diversity=self.min_diversity),
            geometry=GeometryThresholds(
                min_aspect_ratio=self.min_aspect_ratio,
                max_aspect_ratio=self.max_aspect_ratio,
                max_eccentricity=self.max_eccentricity,
                min_solidity=self.min_solidity,
                min_extent=self.min_extent,
                max_extent=self.max_extent,
                max_euler_holes=self.max_euler_holes),
            stroke=StrokeParams(max_variation=self.stroke_max_variation,
                                end_trim=self.stroke_end_trim),
            expansion_amount=self.expansion_amount,
            merge_overlap_min=self.merge_overlap_min,
        )

    @classmethod
    def from_config(cls, config: PipelineConfig) -> "TextRegionDetector":
        return cls(
            stretch_enabled=config.stretch_enabled,
            stretch_k=config.stretch_k,
            detect_dark=config.detect_dark,
            detect_light=config.detect_light,
            delta=config.mser.delta,
            min_area=config.mser.min_area,
            max_area=config.mser.max_area,
            max_variation=config.mser.max_variation,
            min_diversity=config.mser.min_diversity,
            min_aspect_ratio=config.geometry.min_aspect_ratio,
            max_aspect_ratio=config.geometry.max_aspect_ratio,
            max_eccentricity=config.geometry.max_eccentricity,
            min_solidity=config.geometry.min_solidity,
            min_extent=config.geometry.min_extent,
            max_extent=config.geometry.max_extent,
            max_euler_holes=config.geometry.max_euler_holes,
            stroke_max_variation=config.stroke.max_variation,
            stroke_end_trim=config.stroke.end_trim,
            expansion_amount=config.expansion_amount,
            merge_overlap_min=config.merge_overlap_min,
        )

    def fit(self, X=None, y=None) -> "TextRegionDetector":
        """Validate parameters; the detector learns nothing from data."""
        self.config().validate()
        return self

    def detect(self, image: np.ndarray) -> DetectionResult:
        """Full detection result (boxes, primary box, trace, timings)."""
        return detect(image, self.config())

    def predict(self, X) -> list:
        """Bounding boxes for one image or a list of images.

        A single 2-D array yields ``list[BoundingBox]``; a list of
        arrays yields one such list per image.
        """
        if isinstance(X, np.ndarray) and X.ndim == 2:
            return self.detect(X).final_boxes
        return [self.detect(img).final_boxes for img in X]

    def primary_box(self, image: np.ndarray) -> Optional[BoundingBox]:
        """Largest detected region's box, or None when nothing is found."""
        return self.detect(image).primary_box
