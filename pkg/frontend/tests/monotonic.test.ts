import { describe, expect, it } from "vitest";

import { buildDrawList } from "../src/overlay.js";
import type { DetectionResponseJson } from "../src/types.js";

import stroke2 from "./fixtures/detect_stroke_2.json";
import stroke5 from "./fixtures/detect_stroke_5.json";
import stroke15 from "./fixtures/detect_stroke_15.json";
import stroke35 from "./fixtures/detect_stroke_35.json";
import stroke60 from "./fixtures/detect_stroke_60.json";

// Real service responses for the same image at five stops of the stroke
// variation slider, strict to loose.
const sweep = [stroke2, stroke5, stroke15, stroke35, stroke60].map(
  (f) => f as unknown as DetectionResponseJson,
);

const strokeOnly = {
  detect_regions: false,
  filter_by_geometry: false,
  to_boxes: false,
  expand_boxes: false,
  merge_overlapping: false,
};

describe("stroke threshold sweep", () => {
  it("walks the slider from strict to loose", () => {
    const values = sweep.map((r) => r.config_echo.stroke.max_variation);
    expect(values).toEqual([0.02, 0.05, 0.15, 0.35, 0.6]);
  });

  it("strictly grows the kept-region overlay count at every stop", () => {
    const counts = sweep.map(
      (result) =>
        buildDrawList(result, strokeOnly).filter((i) => i.style === "kept").length,
    );
    for (let i = 1; i < counts.length; i++) {
      expect(counts[i]).toBeGreaterThan(counts[i - 1]);
    }
  });

  it("never drops a region that a stricter setting kept", () => {
    const keptBoxes = sweep.map((result) =>
      new Set(
        result.stages
          .find((s) => s.name === "filter_by_stroke")!
          .kept.map((e) => JSON.stringify(e.bbox)),
      ),
    );
    for (let i = 1; i < keptBoxes.length; i++) {
      for (const box of keptBoxes[i - 1]) {
        expect(keptBoxes[i].has(box)).toBe(true);
      }
    }
  });
});
