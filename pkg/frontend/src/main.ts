/** DOM wiring for the threshold tuner page. */

import { ServiceClient, ServiceError } from "./api.js";
import { SLIDERS, getValue } from "./config.js";
import { describeRegion } from "./inspector.js";
import { buildDrawList, hitTest, noticeFor, paintOverlay, STAGE_COLORS } from "./overlay.js";
import {
  initialState,
  withConfigChange,
  withFailure,
  withImage,
  withResult,
  withSelection,
  withStageToggle,
  type TunerState,
} from "./state.js";
import { DetectScheduler } from "./scheduler.js";
import type { ConfigJson, DetectionResponseJson } from "./types.js";

const params = new URLSearchParams(window.location.search);
const client = new ServiceClient(params.get("service") ?? "");

let state: TunerState = initialState();

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
};

const imageSelect = $<HTMLSelectElement>("image-select");
const canvas = $<HTMLCanvasElement>("view");
const ctx = canvas.getContext("2d")!;
const slidersDiv = $<HTMLDivElement>("sliders");
const togglesDiv = $<HTMLDivElement>("stage-toggles");
const bannerDiv = $<HTMLDivElement>("banner");
const pendingBadge = $<HTMLSpanElement>("pending");
const inspectorDl = $<HTMLDListElement>("inspector");
const timingDiv = $<HTMLDivElement>("timing");

let bitmap: HTMLImageElement | null = null;

const scheduler = new DetectScheduler(
  (config: ConfigJson) => {
    if (!state.imageId) return Promise.reject(new ServiceError("no image selected", null));
    return client.detect(state.imageId, config);
  },
  (result: DetectionResponseJson, config: ConfigJson) => {
    state = withResult(state, result, config);
    render();
  },
  (error: unknown) => {
    const message = error instanceof Error ? error.message : String(error);
    state = withFailure(state, message);
    render();
  },
);

function render(): void {
  bannerDiv.textContent = state.banner ?? "";
  bannerDiv.style.display = state.banner ? "block" : "none";
  pendingBadge.style.visibility = state.pending ? "visible" : "hidden";

  const items = buildDrawList(state.result, state.visibleStages);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (bitmap) ctx.drawImage(bitmap, 0, 0);
  paintOverlay(ctx, items, noticeFor(state.result), 1);

  renderToggles();
  renderInspector();
  renderTiming();
}

function renderToggles(): void {
  togglesDiv.replaceChildren();
  if (!state.result) return;
  for (const stage of state.result.stages) {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = state.visibleStages[stage.name] !== false;
    box.addEventListener("change", () => {
      state = withStageToggle(state, stage.name);
      render();
    });
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = STAGE_COLORS[stage.name] ?? "#ccc";
    label.append(box, swatch,
      ` ${stage.name} (${stage.kept.length} kept / ${stage.rejected.length} rejected)`);
    togglesDiv.append(label);
  }
}

function renderInspector(): void {
  inspectorDl.replaceChildren();
  if (!state.result || !state.selected) return;
  for (const line of describeRegion(state.result, state.selected)) {
    const dt = document.createElement("dt");
    dt.textContent = line.label;
    const dd = document.createElement("dd");
    dd.textContent = line.value;
    inspectorDl.append(dt, dd);
  }
}

function renderTiming(): void {
  if (!state.result) {
    timingDiv.textContent = "";
    return;
  }
  const total = Object.values(state.result.timing_ms).reduce((a, b) => a + b, 0);
  timingDiv.textContent = `detect ${total.toFixed(1)} ms`;
}

function buildSliders(): void {
  for (const spec of SLIDERS) {
    const row = document.createElement("div");
    row.className = "slider-row";
    const name = document.createElement("span");
    name.textContent = spec.label;
    const value = document.createElement("code");
    const input = document.createElement("input");
    input.type = "range";
    input.min = String(spec.min);
    input.max = String(spec.max);
    input.step = String(spec.step);
    const current = getValue(state.config, spec.path);
    input.value = String(current ?? spec.min);
    value.textContent = current === null ? "auto" : String(current);
    input.addEventListener("input", () => {
      state = withConfigChange(state, spec.path, Number(input.value));
      const now = getValue(state.config, spec.path);
      value.textContent = now === null ? "auto" : String(now);
      scheduler.request(state.config);
      render();
    });
    row.append(name, input, value);
    slidersDiv.append(row);
  }
}

function selectImage(imageId: string): void {
  state = withImage(state, imageId);
  scheduler.reset();
  bitmap = new Image();
  bitmap.onload = () => render();
  bitmap.src = client.rawUrl(imageId);
  scheduler.request(state.config);
  render();
}

canvas.addEventListener("click", (event) => {
  const rect = canvas.getBoundingClientRect();
  const x = (event.clientX - rect.left) * (canvas.width / rect.width);
  const y = (event.clientY - rect.top) * (canvas.height / rect.height);
  const items = buildDrawList(state.result, state.visibleStages);
  const hit = hitTest(items, x, y);
  state = withSelection(state, hit
    ? { stage: hit.stage, kind: hit.kind, index: hit.index }
    : null);
  render();
});

imageSelect.addEventListener("change", () => {
  if (imageSelect.value) selectImage(imageSelect.value);
});

$<HTMLInputElement>("upload").addEventListener("change", async (event) => {
  const file = (event.target as HTMLInputElement).files?.[0];
  if (!file) return;
  try {
    const entry = await client.upload(file.name, file);
    await refreshImages(entry.id);
  } catch (error) {
    state = withFailure(state, error instanceof Error ? error.message : String(error));
    render();
  }
});

async function refreshImages(selectId?: string): Promise<void> {
  const entries = await client.listImages();
  imageSelect.replaceChildren();
  for (const entry of entries) {
    const option = document.createElement("option");
    option.value = entry.id;
    option.textContent = `${entry.name} (${entry.width}x${entry.height})`;
    imageSelect.append(option);
  }
  const target = selectId ?? entries[0]?.id;
  if (target) {
    imageSelect.value = target;
    selectImage(target);
  }
}

buildSliders();
refreshImages().catch((error) => {
  state = withFailure(state, error instanceof Error ? error.message : String(error));
  render();
});
