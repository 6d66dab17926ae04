"""Command-line interface: detect, fixture generation, and the tuning server.

Exit codes: 0 success, 2 unreadable or undecodable image input (or busy
port for serve), 3 invalid configuration or fixture request.
"""

from __future__ import annotations

import argparse
import json
import socket
import sys
from typing import Optional

from .fixtures import UnsupportedCharError, render_text_fixture
from .pipeline import ConfigError, PipelineConfig, detect, result_to_dict
from .raster import DecodeError, decode_image, encode_annotated, encode_pgm

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONFIG = 3


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_config(path: Optional[str]) -> PipelineConfig:
    """Read a JSON config file; any problem raises ConfigError."""
    if path is None:
        return PipelineConfig()
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path!r} is not valid JSON: {exc}") from exc
    return PipelineConfig.from_dict(data)


def cmd_detect(args: argparse.Namespace) -> int:
    try:
        config = _load_config(args.config)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, str(exc))
    try:
        with open(args.image, "rb") as fh:
            img = decode_image(fh.read())
    except (OSError, DecodeError) as exc:
        return _fail(EXIT_INPUT, f"cannot read image {args.image!r}: {exc}")

    result = detect(img, config)
    payload = json.dumps(result_to_dict(result, config, img.shape),
                         sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    if args.annotate:
        with open(args.annotate, "wb") as fh:
            fh.write(encode_annotated(img, result.final_boxes))
    return EXIT_OK


def cmd_fixture(args: argparse.Namespace) -> int:
    try:
        img, box = render_text_fixture(args.text, args.height)
    except (UnsupportedCharError, ValueError) as exc:
        return _fail(EXIT_CONFIG, str(exc))
    with open(args.out, "wb") as fh:
        fh.write(encode_pgm(img))
    truth = json.dumps({"box": {"x": box.x, "y": box.y, "width": box.width,
                                "height": box.height}}, sort_keys=True) + "\n"
    if args.truth:
        with open(args.truth, "w", encoding="utf-8") as fh:
            fh.write(truth)
    else:
        sys.stdout.write(truth)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    # Probe the port up front so a busy port is a clean exit 2 instead of
    # a server stack trace.
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((args.host, args.port))
    except OSError as exc:
        probe.close()
        return _fail(EXIT_INPUT, f"cannot bind {args.host}:{args.port}: {exc}")
    probe.close()

    import uvicorn

    from .service import create_app

    app = create_app(images_dir=args.images)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="textregions",
        description="Detect text-like regions in images.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_detect = sub.add_parser("detect", help="run detection on one image")
    p_detect.add_argument("image", help="input image path (PGM or PNG)")
    p_detect.add_argument("--config", help="JSON config file path")
    p_detect.add_argument("--out", help="write result JSON here instead of stdout")
    p_detect.add_argument("--annotate",
                          help="write a PNG with detected boxes outlined")
    p_detect.set_defaults(func=cmd_detect)

    p_fixture = sub.add_parser("fixture", help="render a synthetic text image")
    p_fixture.add_argument("--text", required=True, help="text to render")
    p_fixture.add_argument("--height", type=int, required=True,
                           help="glyph height in pixels (multiple of 7)")
    p_fixture.add_argument("--out", required=True, help="output PGM path")
    p_fixture.add_argument("--truth",
                           help="write ground-truth box JSON here instead of stdout")
    p_fixture.set_defaults(func=cmd_fixture)

    p_serve = sub.add_parser("serve", help="run the HTTP tuning service")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--images", help="directory of images to serve")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
