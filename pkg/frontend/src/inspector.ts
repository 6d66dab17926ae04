/** Region inspector: turn a selected trace entry into display lines. */

import type { DetectionResponseJson, RegionSummaryJson } from "./types.js";
import type { RegionSelection } from "./state.js";

export interface InspectorLine {
  label: string;
  value: string;
}

export function lookupRegion(
  result: DetectionResponseJson,
  selection: RegionSelection,
): RegionSummaryJson | null {
  const stage = result.stages.find((s) => s.name === selection.stage);
  if (!stage) return null;
  const list = selection.kind === "kept" ? stage.kept : stage.rejected;
  return list[selection.index] ?? null;
}

const fmt = (value: number) => Number(value.toFixed(4)).toString();

/**
 * Lines for the inspector panel: verdict first, the service's reason code
 * verbatim for rejected entries, then geometry and stroke measurements.
 */
export function describeRegion(
  result: DetectionResponseJson,
  selection: RegionSelection,
): InspectorLine[] {
  const entry = lookupRegion(result, selection);
  if (!entry) return [{ label: "region", value: "not found" }];
  const lines: InspectorLine[] = [
    { label: "stage", value: selection.stage },
    { label: "verdict", value: selection.kind },
  ];
  if (entry.reason !== undefined) {
    lines.push({ label: "reason", value: entry.reason });
  }
  const b = entry.bbox;
  lines.push({ label: "box", value: `${b.x},${b.y} ${b.width}x${b.height}` });
  lines.push({ label: "area", value: String(entry.area) });
  if (entry.polarity !== undefined) {
    lines.push({ label: "polarity", value: entry.polarity });
  }
  if (entry.props) {
    lines.push({ label: "aspect ratio", value: fmt(entry.props.aspect_ratio) });
    lines.push({ label: "eccentricity", value: fmt(entry.props.eccentricity) });
    lines.push({ label: "solidity", value: fmt(entry.props.solidity) });
    lines.push({ label: "extent", value: fmt(entry.props.extent) });
    lines.push({ label: "euler number", value: String(entry.props.euler_number) });
  }
  if (entry.stroke_variation !== undefined) {
    lines.push({ label: "stroke variation", value: fmt(entry.stroke_variation) });
  }
  return lines;
}
