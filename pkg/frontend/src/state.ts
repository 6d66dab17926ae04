/** Tuner state and its pure transitions. */

import { configInRange, defaultConfig, setValue } from "./config.js";
import type { ConfigJson, DetectionResponseJson } from "./types.js";

export interface RegionSelection {
  stage: string;
  kind: "kept" | "rejected";
  index: number;
}

export interface TunerState {
  imageId: string | null;
  /** Desired knob values; always inside the documented slider ranges. */
  config: ConfigJson;
  /** Last applied detection, kept on screen even through service trouble. */
  result: DetectionResponseJson | null;
  /** Config that produced `result`; differs from `config` while pending. */
  resultConfig: ConfigJson | null;
  pending: boolean;
  banner: string | null;
  visibleStages: Record<string, boolean>;
  selected: RegionSelection | null;
}

export function initialState(): TunerState {
  return {
    imageId: null,
    config: defaultConfig(),
    result: null,
    resultConfig: null,
    pending: false,
    banner: null,
    visibleStages: {},
    selected: null,
  };
}

export function withImage(state: TunerState, imageId: string): TunerState {
  return {
    ...state,
    imageId,
    result: null,
    resultConfig: null,
    pending: true,
    selected: null,
  };
}

export function withConfigChange(state: TunerState, path: string, raw: number): TunerState {
  const config = setValue(state.config, path, raw);
  if (!configInRange(config)) throw new Error(`clamping failed for ${path}`);
  return { ...state, config, pending: true };
}

export function withResult(
  state: TunerState,
  result: DetectionResponseJson,
  config: ConfigJson,
): TunerState {
  const visibleStages = { ...state.visibleStages };
  for (const stage of result.stages) {
    if (!(stage.name in visibleStages)) visibleStages[stage.name] = true;
  }
  return {
    ...state,
    result,
    resultConfig: config,
    pending: false,
    banner: null,
    visibleStages,
    selected: null,
  };
}

/** Service trouble: show a banner but keep the last overlay untouched. */
export function withFailure(state: TunerState, message: string): TunerState {
  return { ...state, banner: message, pending: false };
}

export function withStageToggle(state: TunerState, stage: string): TunerState {
  const visibleStages = {
    ...state.visibleStages,
    [stage]: state.visibleStages[stage] === false,
  };
  const selected = state.selected?.stage === stage && visibleStages[stage] === false
    ? null
    : state.selected;
  return { ...state, visibleStages, selected };
}

export function withSelection(state: TunerState, selected: RegionSelection | null): TunerState {
  return { ...state, selected };
}
