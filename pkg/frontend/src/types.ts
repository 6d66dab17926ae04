/** Wire types mirroring the detection service's JSON bodies. */

export interface BoxJson {
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface RegionPropsJson {
  area: number;
  bbox: BoxJson;
  aspect_ratio: number;
  eccentricity: number;
  solidity: number;
  extent: number;
  euler_number: number;
  centroid: [number, number];
}

/**
 * One entry of a stage's kept/rejected lists. Region-carrying stages include
 * polarity and props; box stages only bbox and area. Rejected entries carry
 * the service's reason code, and stroke-stage entries a stroke_variation.
 */
export interface RegionSummaryJson {
  bbox: BoxJson;
  area: number;
  polarity?: string;
  source_level?: number;
  props?: RegionPropsJson;
  reason?: string;
  stroke_variation?: number;
}

export interface StageSummaryJson {
  name: string;
  input_count: number;
  kept: RegionSummaryJson[];
  rejected: RegionSummaryJson[];
}

export interface MserConfigJson {
  delta: number;
  min_area: number;
  max_area: number | null;
  max_variation: number;
  min_diversity: number;
}

export interface GeometryConfigJson {
  min_aspect_ratio: number;
  max_aspect_ratio: number;
  max_eccentricity: number;
  min_solidity: number;
  min_extent: number;
  max_extent: number;
  max_euler_holes: number;
}

export interface StrokeConfigJson {
  max_variation: number;
  end_trim: number;
}

export interface ConfigJson {
  stretch_enabled: boolean;
  stretch_k: number;
  detect_dark: boolean;
  detect_light: boolean;
  mser: MserConfigJson;
  geometry: GeometryConfigJson;
  stroke: StrokeConfigJson;
  expansion_amount: number;
  merge_overlap_min: number;
}

export interface DetectionResponseJson {
  schema: number;
  image: { width: number; height: number };
  config_echo: ConfigJson;
  stages: StageSummaryJson[];
  final_boxes: BoxJson[];
  primary_box: BoxJson | null;
  timing_ms: Record<string, number>;
}

export interface ImageEntryJson {
  id: string;
  name: string;
  width: number;
  height: number;
}
