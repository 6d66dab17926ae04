/** Thin typed wrapper over the detection service's HTTP endpoints. */

import type { ConfigJson, DetectionResponseJson, ImageEntryJson } from "./types.js";

export class ServiceError extends Error {
  constructor(message: string, readonly status: number | null) {
    super(message);
  }
}

async function parseFailure(response: Response): Promise<never> {
  let detail = `${response.status} ${response.statusText}`;
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ServiceError(detail, response.status);
}

export class ServiceClient {
  constructor(readonly baseUrl: string = "") {}

  rawUrl(imageId: string): string {
    return `${this.baseUrl}/images/${imageId}/raw`;
  }

  async listImages(): Promise<ImageEntryJson[]> {
    const response = await this.fetch("/images");
    if (!response.ok) await parseFailure(response);
    return (await response.json()) as ImageEntryJson[];
  }

  async upload(name: string, data: Blob): Promise<ImageEntryJson> {
    const response = await this.fetch(`/images?name=${encodeURIComponent(name)}`, {
      method: "POST",
      body: data,
      headers: { "Content-Type": "application/octet-stream" },
    });
    if (!response.ok) await parseFailure(response);
    return (await response.json()) as ImageEntryJson;
  }

  async detect(imageId: string, config: ConfigJson): Promise<DetectionResponseJson> {
    const response = await this.fetch("/detect", {
      method: "POST",
      body: JSON.stringify({ image_id: imageId, config }),
      headers: { "Content-Type": "application/json" },
    });
    if (!response.ok) await parseFailure(response);
    return (await response.json()) as DetectionResponseJson;
  }

  private async fetch(path: string, init?: RequestInit): Promise<Response> {
    try {
      return await fetch(`${this.baseUrl}${path}`, init);
    } catch (error) {
      throw new ServiceError(`service unreachable: ${String(error)}`, null);
    }
  }
}
