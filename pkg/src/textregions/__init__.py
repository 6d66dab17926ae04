"""Text-region detection: stable extremal regions filtered by shape and stroke."""

from .component_tree import ComponentTree, MserParams, build_tree, detect_regions, extract_msers
from .detector import TextRegionDetector
from .fixtures import render_text_fixture
from .pipeline import (
    ConfigError,
    DetectionResult,
    PipelineConfig,
    detect,
    expand_boxes,
    merge_overlapping,
    result_to_dict,
    select_primary,
)
from .raster import (
    BoxBoundsError,
    DecodeError,
    UnsupportedFormatError,
    contrast_stretch,
    decode_image,
    encode_annotated,
    encode_pgm,
    encode_png,
    invert,
    rgb_to_gray,
)
from .regionprops import (
    POLARITY_DARK,
    POLARITY_LIGHT,
    BoundingBox,
    GeometricProps,
    GeometryThresholds,
    Region,
    compute_props,
    filter_by_geometry,
)
from .strokewidth import StrokeParams, StrokeWidthStats, filter_by_stroke, skeletonize, stroke_stats

__version__ = "0.1.0"

__all__ = [
    "BoundingBox",
    "BoxBoundsError",
    "ComponentTree",
    "ConfigError",
    "DecodeError",
    "DetectionResult",
    "GeometricProps",
    "GeometryThresholds",
    "MserParams",
    "PipelineConfig",
    "POLARITY_DARK",
    "POLARITY_LIGHT",
    "Region",
    "StrokeParams",
    "StrokeWidthStats",
    "TextRegionDetector",
    "UnsupportedFormatError",
    "build_tree",
    "compute_props",
    "contrast_stretch",
    "decode_image",
    "detect",
    "detect_regions",
    "encode_annotated",
    "encode_pgm",
    "encode_png",
    "expand_boxes",
    "extract_msers",
    "filter_by_geometry",
    "filter_by_stroke",
    "invert",
    "merge_overlapping",
    "render_text_fixture",
    "result_to_dict",
    "rgb_to_gray",
    "select_primary",
    "skeletonize",
    "stroke_stats",
]
