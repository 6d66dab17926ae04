"""Synthetic text fixtures: rendered words with known ground-truth boxes.

A built-in 5x7 bitmap font (A-Z, 0-9, space) is scaled by integer factors
and drawn black-on-white, one blank glyph column between cells.  The
returned ground truth is the tight bounding box of all ink, which makes
end-to-end detection checks self-contained.
"""

from __future__ import annotations

import numpy as np

from .regionprops import BoundingBox

GLYPH_WIDTH = 5
GLYPH_HEIGHT = 7
INK = 0
PAGE = 255


class UnsupportedCharError(ValueError):
    """Raised for characters outside the built-in font."""


# Deliberately blocky: each glyph must form a single 4-connected ink
# component (no diagonal-only joins), so it renders as one region.
FONT_5X7 = {
    "A": ("#####", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"),
    "B": ("####.", "#...#", "#...#", "#####", "#...#", "#...#", "####."),
    "C": ("#####", "#....", "#....", "#....", "#....", "#....", "#####"),
    "D": ("#####", "#...#", "#...#", "#...#", "#...#", "#...#", "#####"),
    "E": ("#####", "#....", "#....", "####.", "#....", "#....", "#####"),
    "F": ("#####", "#....", "#....", "####.", "#....", "#....", "#...."),
    "G": ("#####", "#....", "#....", "#..##", "#...#", "#...#", "#####"),
    "H": ("#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"),
    "I": ("#####", "..#..", "..#..", "..#..", "..#..", "..#..", "#####"),
    "J": ("#####", "...#.", "...#.", "...#.", "...#.", "...#.", "####."),
    "K": ("#...#", "#..##", "#.##.", "###..", "#.##.", "#..##", "#...#"),
    "L": ("#....", "#....", "#....", "#....", "#....", "#....", "#####"),
    "M": ("#...#", "#####", "#.#.#", "#...#", "#...#", "#...#", "#...#"),
    "N": ("#...#", "##..#", "###.#", "#.###", "#..##", "#...#", "#...#"),
    "O": ("#####", "#...#", "#...#", "#...#", "#...#", "#...#", "#####"),
    "P": ("#####", "#...#", "#...#", "#####", "#....", "#....", "#...."),
    "Q": ("#####", "#...#", "#...#", "#...#", "#..##", "#..##", "#####"),
    "R": ("#####", "#...#", "#...#", "#####", "#.##.", "#..##", "#...#"),
    "S": ("#####", "#....", "#....", "#####", "....#", "....#", "#####"),
    "T": ("#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."),
    "U": ("#...#", "#...#", "#...#", "#...#", "#...#", "#...#", "#####"),
    "V": ("#...#", "#...#", "#...#", "#...#", "#...#", "##.##", ".###."),
    "W": ("#...#", "#...#", "#...#", "#...#", "#.#.#", "#.#.#", "#####"),
    "X": ("#...#", "##.##", ".###.", "..#..", ".###.", "##.##", "#...#"),
    "Y": ("#...#", "#...#", "##.##", ".###.", "..#..", "..#..", "..#.."),
    "Z": ("#####", "....#", "...##", "..##.", ".##..", "##...", "#####"),
    "0": ("#####", "#...#", "#...#", "#...#", "#...#", "#...#", "#####"),
    "1": ("..#..", ".##..", "..#..", "..#..", "..#..", "..#..", "#####"),
    "2": ("#####", "....#", "....#", "#####", "#....", "#....", "#####"),
    "3": ("#####", "....#", "....#", ".####", "....#", "....#", "#####"),
    "4": ("#...#", "#...#", "#...#", "#####", "....#", "....#", "....#"),
    "5": ("#####", "#....", "#....", "#####", "....#", "....#", "#####"),
    "6": ("#####", "#....", "#....", "#####", "#...#", "#...#", "#####"),
    "7": ("#####", "....#", "....#", "...##", "...#.", "...#.", "...#."),
    "8": ("#####", "#...#", "#...#", "#####", "#...#", "#...#", "#####"),
    "9": ("#####", "#...#", "#...#", "#####", "....#", "....#", "#####"),
    " ": (".....", ".....", ".....", ".....", ".....", ".....", "....."),
}


def glyph_mask(char: str, scale: int = 1) -> np.ndarray:
    """Boolean ink mask of one glyph at the given integer scale."""
    try:
        rows = FONT_5X7[char]
    except KeyError:
        raise UnsupportedCharError(
            f"character {char!r} not in the built-in 5x7 font"
        ) from None
    base = np.array([[c == "#" for c in row] for row in rows], dtype=bool)
    return np.repeat(np.repeat(base, scale, axis=0), scale, axis=1)


def render_text_fixture(text: str, glyph_height: int, position=None,
                        canvas=(640, 480)) -> tuple[np.ndarray, BoundingBox]:
    """Render ``text`` black-on-white; returns (image, tight ink box).

    ``glyph_height`` must be a positive multiple of 7 (integer scaling).
    ``position`` is the top-left of the first glyph cell; None centers the
    text on the canvas.  Raises for unsupported characters, empty or
    ink-free text, and renderings that do not fit the canvas.
    """
    if not text:
        raise ValueError("text must be nonempty")
    if glyph_height < GLYPH_HEIGHT or glyph_height % GLYPH_HEIGHT != 0:
        raise ValueError(
            f"glyph_height must be a positive multiple of {GLYPH_HEIGHT}, got {glyph_height}"
        )
    scale = glyph_height // GLYPH_HEIGHT
    canvas_w, canvas_h = int(canvas[0]), int(canvas[1])

    cells = len(text)
    text_w = (cells * GLYPH_WIDTH + (cells - 1)) * scale
    text_h = GLYPH_HEIGHT * scale
    if position is None:
        position = ((canvas_w - text_w) // 2, (canvas_h - text_h) // 2)
    x0, y0 = int(position[0]), int(position[1])
    if x0 < 0 or y0 < 0 or x0 + text_w > canvas_w or y0 + text_h > canvas_h:
        raise ValueError(
            f"text {text!r} at {(x0, y0)} (size {text_w}x{text_h}) "
            f"does not fit canvas {canvas_w}x{canvas_h}"
        )

    img = np.full((canvas_h, canvas_w), PAGE, dtype=np.uint8)
    for i, char in enumerate(text):
        mask = glyph_mask(char, scale)
        gx = x0 + i * (GLYPH_WIDTH + 1) * scale
        cell = img[y0:y0 + text_h, gx:gx + GLYPH_WIDTH * scale]
        cell[mask] = INK

    ys, xs = np.nonzero(img == INK)
    if xs.size == 0:
        raise ValueError(f"text {text!r} renders no ink")
    bx, by = int(xs.min()), int(ys.min())
    truth = BoundingBox(bx, by, int(xs.max()) - bx + 1, int(ys.max()) - by + 1)
    return img, truth
