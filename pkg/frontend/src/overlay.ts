/** Pure overlay geometry: which boxes to draw, in what style, and hit testing. */

import type { BoxJson, DetectionResponseJson } from "./types.js";

export type DrawStyle = "kept" | "rejected" | "primary";

export interface DrawItem {
  box: BoxJson;
  style: DrawStyle;
  stage: string;
  kind: "kept" | "rejected";
  /** Index into that stage's kept or rejected list, for the inspector. */
  index: number;
  color: string;
}

export const STAGE_COLORS: Record<string, string> = {
  detect_regions: "#4f8fd0",
  filter_by_geometry: "#3bb273",
  filter_by_stroke: "#b5179e",
  to_boxes: "#f4a259",
  expand_boxes: "#bc6c25",
  merge_overlapping: "#e63946",
};

export const REJECTED_COLOR = "#9a9a9a";
export const PRIMARY_COLOR = "#ffd60a";

export function stageNames(result: DetectionResponseJson): string[] {
  return result.stages.map((s) => s.name);
}

/**
 * Flatten the trace into drawable boxes. Rejected entries of a visible stage
 * are drawn grayed; the primary box is always appended last in its highlight
 * style so it paints on top.
 */
export function buildDrawList(
  result: DetectionResponseJson | null,
  visible: Record<string, boolean>,
): DrawItem[] {
  if (!result) return [];
  const items: DrawItem[] = [];
  for (const stage of result.stages) {
    if (visible[stage.name] === false) continue;
    stage.rejected.forEach((entry, index) => {
      items.push({
        box: entry.bbox, style: "rejected", stage: stage.name,
        kind: "rejected", index, color: REJECTED_COLOR,
      });
    });
    stage.kept.forEach((entry, index) => {
      items.push({
        box: entry.bbox, style: "kept", stage: stage.name,
        kind: "kept", index, color: STAGE_COLORS[stage.name] ?? "#cccccc",
      });
    });
  }
  if (result.primary_box) {
    items.push({
      box: result.primary_box, style: "primary", stage: "primary",
      kind: "kept", index: 0, color: PRIMARY_COLOR,
    });
  }
  return items;
}

/** Notice text shown over the bare image when detection found nothing. */
export function noticeFor(result: DetectionResponseJson | null): string | null {
  if (result && result.final_boxes.length === 0) return "no regions";
  return null;
}

export function countByStyle(items: DrawItem[]): Record<DrawStyle, number> {
  const counts: Record<DrawStyle, number> = { kept: 0, rejected: 0, primary: 0 };
  for (const item of items) counts[item.style] += 1;
  return counts;
}

function contains(box: BoxJson, x: number, y: number): boolean {
  return x >= box.x && x < box.x + box.width && y >= box.y && y < box.y + box.height;
}

/**
 * Topmost clickable item under an image-space point. The primary highlight is
 * skipped: it duplicates a merge-stage box and carries no inspectable data.
 */
export function hitTest(items: DrawItem[], x: number, y: number): DrawItem | null {
  for (let i = items.length - 1; i >= 0; i--) {
    const item = items[i];
    if (item.style === "primary") continue;
    if (contains(item.box, x, y)) return item;
  }
  return null;
}

/** Paint the draw list onto a canvas already holding the image. */
export function paintOverlay(
  ctx: CanvasRenderingContext2D,
  items: DrawItem[],
  notice: string | null,
  scale: number,
): void {
  for (const item of items) {
    ctx.lineWidth = item.style === "primary" ? 3 : 1;
    ctx.setLineDash(item.style === "rejected" ? [4, 3] : []);
    ctx.strokeStyle = item.color;
    ctx.strokeRect(
      item.box.x * scale + 0.5, item.box.y * scale + 0.5,
      item.box.width * scale - 1, item.box.height * scale - 1,
    );
  }
  ctx.setLineDash([]);
  if (notice) {
    ctx.font = "16px system-ui, sans-serif";
    ctx.fillStyle = "#ffffffcc";
    ctx.fillRect(8, 8, ctx.measureText(notice).width + 16, 28);
    ctx.fillStyle = "#333";
    ctx.fillText(notice, 16, 27);
  }
}
