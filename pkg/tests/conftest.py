import numpy as np
import pytest

from textregions import detect, invert, render_text_fixture

# 20 rendered-word cases spanning glyph heights 7-28, assorted canvas
# positions, and both contrast polarities (invert=True means bright text
# on a dark background). Positions are chosen so every word fits 640x480.
WORD_CORPUS = [
    ("STOP", 14, None, False),
    ("EXIT", 7, (20, 20), False),
    ("OPEN", 21, (400, 300), False),
    ("SALE", 28, (60, 380), False),
    ("CAFE", 7, (560, 440), False),
    ("TAXI", 14, (10, 400), False),
    ("NO", 28, (500, 40), False),
    ("YES", 21, None, False),
    ("GO", 7, (300, 10), False),
    ("HELLO", 14, (100, 100), False),
    ("STOP", 21, (30, 30), True),
    ("EXIT", 28, None, True),
    ("BUS", 7, (200, 240), True),
    ("WAIT", 14, (450, 200), True),
    ("OPEN", 7, None, True),
    ("SHOP", 21, (350, 420), True),
    ("EAST", 28, (16, 128), True),
    ("WEST", 14, (520, 300), True),
    ("ZONE", 21, (240, 60), True),
    ("K9", 28, (320, 360), True),
]


def render_case(text, height, position, inverted):
    img, truth = render_text_fixture(text, height, position=position)
    if inverted:
        img = invert(img)
    return img, truth


@pytest.fixture(scope="session")
def warm_pipeline():
    """Run one tiny detection so jit compilation never lands in a timed test."""
    img, _ = render_text_fixture("A", 7, canvas=(64, 32))
    detect(img)
    return True
