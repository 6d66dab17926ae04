"""HTTP API for the interactive threshold-tuning loop.

Images live in an in-memory store keyed by content hash, so re-uploads
deduplicate and detection results can be cached per (image, config)
pair. All endpoints speak the same JSON schemas as the CLI.
"""

from __future__ import annotations

import hashlib
import sys
import threading
from pathlib import Path
from typing import Optional

import numpy as np
from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse, Response
from pydantic import BaseModel

from .pipeline import ConfigError, PipelineConfig, detect, result_to_dict
from .raster import DecodeError, decode_image, encode_png


class StoredImage:
    def __init__(self, image_id: str, name: str, pixels: np.ndarray):
        self.id = image_id
        self.name = name
        self.pixels = pixels
        self.png = encode_png(pixels)

    def entry(self) -> dict:
        height, width = self.pixels.shape
        return {"id": self.id, "name": self.name, "width": width, "height": height}


class DetectRequest(BaseModel):
    image_id: str
    config: dict = {}


def _image_id(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def create_app(images_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="textregions tuning service")
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])

    store: dict[str, StoredImage] = {}
    result_cache: dict[tuple[str, str], dict] = {}
    lock = threading.Lock()

    def add_image(data: bytes, name: str) -> StoredImage:
        image_id = _image_id(data)
        with lock:
            existing = store.get(image_id)
            if existing is not None:
                return existing
        pixels = decode_image(data)
        image = StoredImage(image_id, name, pixels)
        with lock:
            return store.setdefault(image_id, image)

    if images_dir is not None:
        for path in sorted(Path(images_dir).iterdir()):
            if not path.is_file():
                continue
            try:
                add_image(path.read_bytes(), path.name)
            except DecodeError as exc:
                print(f"skipping {path.name}: {exc}", file=sys.stderr)

    @app.get("/healthz", response_class=PlainTextResponse)
    def healthz() -> str:
        return "ok"

    @app.get("/images")
    def list_images() -> list[dict]:
        with lock:
            images = list(store.values())
        return [img.entry() for img in sorted(images, key=lambda i: (i.name, i.id))]

    @app.post("/images")
    async def upload_image(request: Request) -> JSONResponse:
        data = await request.body()
        image_id = _image_id(data)
        with lock:
            existing = store.get(image_id)
        if existing is not None:
            return JSONResponse(existing.entry(), status_code=200)
        try:
            pixels = decode_image(data)
        except DecodeError as exc:
            raise HTTPException(status_code=415, detail=str(exc))
        name = request.query_params.get("name") or f"upload-{image_id[:12]}"
        with lock:
            image = store.setdefault(image_id, StoredImage(image_id, name, pixels))
        return JSONResponse(image.entry(), status_code=201)

    @app.get("/images/{image_id}/raw")
    def raw_image(image_id: str) -> Response:
        with lock:
            image = store.get(image_id)
        if image is None:
            raise HTTPException(status_code=404, detail=f"unknown image id {image_id!r}")
        return Response(content=image.png, media_type="image/png")

    @app.post("/detect")
    def run_detect(req: DetectRequest) -> dict:
        with lock:
            image = store.get(req.image_id)
        if image is None:
            raise HTTPException(status_code=404,
                                detail=f"unknown image id {req.image_id!r}")
        try:
            config = PipelineConfig.from_dict(req.config)
        except ConfigError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        key = (req.image_id, config.canonical_json())
        with lock:
            cached = result_cache.get(key)
        if cached is not None:
            return cached
        result = detect(image.pixels, config)
        payload = result_to_dict(result, config, image.pixels.shape)
        with lock:
            # First writer wins so repeat calls return one stable body.
            return result_cache.setdefault(key, payload)

    return app
