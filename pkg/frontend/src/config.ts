/** Threshold knob definitions, default values, and range clamping. */

import type { ConfigJson } from "./types.js";

export interface SliderSpec {
  /** Dot path into ConfigJson, e.g. "stroke.max_variation". */
  path: string;
  label: string;
  min: number;
  max: number;
  step: number;
  /** The slider's minimum position means "no limit" (sent as null). */
  nullAtMin?: boolean;
}

/** Every knob the tuning loop adjusts, in display order. */
export const SLIDERS: SliderSpec[] = [
  { path: "stretch_k", label: "contrast stretch k", min: 0, max: 8, step: 0.1 },
  { path: "mser.delta", label: "stability margin delta", min: 1, max: 40, step: 1 },
  { path: "mser.min_area", label: "min region area", min: 1, max: 2000, step: 1 },
  { path: "mser.max_area", label: "max region area (0 = auto)", min: 0, max: 50000, step: 100, nullAtMin: true },
  { path: "mser.max_variation", label: "max stability q", min: 0.01, max: 2, step: 0.01 },
  { path: "geometry.min_aspect_ratio", label: "min aspect ratio", min: 0, max: 4, step: 0.05 },
  { path: "geometry.max_aspect_ratio", label: "max aspect ratio", min: 0.1, max: 50, step: 0.1 },
  { path: "geometry.max_eccentricity", label: "max eccentricity", min: 0, max: 1, step: 0.005 },
  { path: "geometry.min_solidity", label: "min solidity", min: 0, max: 1, step: 0.01 },
  { path: "geometry.min_extent", label: "min extent", min: 0, max: 1, step: 0.01 },
  { path: "geometry.max_extent", label: "max extent", min: 0, max: 1, step: 0.01 },
  { path: "geometry.max_euler_holes", label: "max holes", min: 0, max: 10, step: 1 },
  { path: "stroke.max_variation", label: "stroke width variation", min: 0.01, max: 2, step: 0.01 },
  { path: "expansion_amount", label: "box expansion", min: 0, max: 1, step: 0.01 },
  { path: "merge_overlap_min", label: "merge overlap min", min: 0, max: 1, step: 0.01 },
];

/** min/max knob pairs that must stay ordered after any single change. */
const ORDERED_PAIRS: Array<[string, string]> = [
  ["geometry.min_aspect_ratio", "geometry.max_aspect_ratio"],
  ["geometry.min_extent", "geometry.max_extent"],
  ["mser.min_area", "mser.max_area"],
];

export function defaultConfig(): ConfigJson {
  return {
    stretch_enabled: true,
    stretch_k: 2.0,
    detect_dark: true,
    detect_light: true,
    mser: {
      delta: 5,
      min_area: 10,
      max_area: null,
      max_variation: 0.25,
      min_diversity: 0.2,
    },
    geometry: {
      min_aspect_ratio: 0.1,
      max_aspect_ratio: 10.0,
      max_eccentricity: 0.995,
      min_solidity: 0.3,
      min_extent: 0.1,
      max_extent: 0.9,
      max_euler_holes: 2,
    },
    stroke: { max_variation: 0.35, end_trim: 2 },
    expansion_amount: 0.15,
    merge_overlap_min: 0.0,
  };
}

export function sliderFor(path: string): SliderSpec {
  const spec = SLIDERS.find((s) => s.path === path);
  if (!spec) throw new Error(`no slider for ${path}`);
  return spec;
}

export function getValue(config: ConfigJson, path: string): number | null {
  let node: unknown = config;
  for (const part of path.split(".")) {
    node = (node as Record<string, unknown>)[part];
  }
  return node as number | null;
}

function assign(config: ConfigJson, path: string, value: number | null): ConfigJson {
  const copy = structuredClone(config);
  const parts = path.split(".");
  let node: Record<string, unknown> = copy as unknown as Record<string, unknown>;
  for (const part of parts.slice(0, -1)) {
    node = node[part] as Record<string, unknown>;
  }
  node[parts[parts.length - 1]] = value;
  return copy;
}

function clampToSpec(spec: SliderSpec, value: number): number {
  const bounded = Math.min(spec.max, Math.max(spec.min, value));
  const steps = Math.round((bounded - spec.min) / spec.step);
  const snapped = spec.min + steps * spec.step;
  // Snap to the step grid, guarding float drift at the edges.
  return Math.min(spec.max, Math.max(spec.min, Number(snapped.toFixed(6))));
}

/**
 * Set one knob, clamped to its documented range; a min/max partner knob is
 * dragged along so ordered pairs never invert.
 */
export function setValue(config: ConfigJson, path: string, raw: number): ConfigJson {
  const spec = sliderFor(path);
  const value = clampToSpec(spec, raw);
  let next = assign(config, path, spec.nullAtMin && value === spec.min ? null : value);
  for (const [minPath, maxPath] of ORDERED_PAIRS) {
    const lo = getValue(next, minPath);
    const hi = getValue(next, maxPath);
    if (lo === null || hi === null || lo <= hi) continue;
    if (path === minPath) {
      next = assign(next, maxPath, clampToSpec(sliderFor(maxPath), lo));
    } else {
      next = assign(next, minPath, clampToSpec(sliderFor(minPath), hi));
    }
  }
  return next;
}

/** True when every knob sits inside its slider range and pairs are ordered. */
export function configInRange(config: ConfigJson): boolean {
  for (const spec of SLIDERS) {
    const value = getValue(config, spec.path);
    if (value === null) {
      if (!spec.nullAtMin) return false;
      continue;
    }
    if (value < spec.min || value > spec.max) return false;
  }
  for (const [minPath, maxPath] of ORDERED_PAIRS) {
    const lo = getValue(config, minPath);
    const hi = getValue(config, maxPath);
    if (lo !== null && hi !== null && lo > hi) return false;
  }
  return true;
}
