import numpy as np
import pytest
from scipy import ndimage

from textregions.fixtures import (
    FONT_5X7,
    GLYPH_HEIGHT,
    GLYPH_WIDTH,
    INK,
    PAGE,
    UnsupportedCharError,
    glyph_mask,
    render_text_fixture,
)

CROSS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


class TestFont:
    def test_every_glyph_is_one_connected_component(self):
        for char, rows in FONT_5X7.items():
            if char == " ":
                continue
            _, count = ndimage.label(glyph_mask(char), structure=CROSS)
            assert count == 1, f"glyph {char!r} splits into {count} pieces"

    def test_glyph_cell_shape(self):
        for char in FONT_5X7:
            assert glyph_mask(char).shape == (GLYPH_HEIGHT, GLYPH_WIDTH)

    def test_scaling_multiplies_ink_area(self):
        base = glyph_mask("E")
        scaled = glyph_mask("E", scale=3)
        assert scaled.shape == (21, 15)
        assert scaled.sum() == 9 * base.sum()

    def test_unknown_character(self):
        with pytest.raises(UnsupportedCharError, match="'a'"):
            glyph_mask("a")


class TestRenderArithmetic:
    @pytest.mark.parametrize("height, scale", [(7, 1), (14, 2), (28, 4)])
    def test_four_letter_word_width(self, height, scale):
        # 4 glyph cells of 5 plus 3 separator columns = 23 base columns.
        _, box = render_text_fixture("STOP", height)
        assert box.width == 23 * scale
        assert box.height == height

    def test_centered_by_default(self):
        img, box = render_text_fixture("STOP", 14)
        assert img.shape == (480, 640)
        assert box.x == (640 - 46) // 2
        assert box.y == (480 - 14) // 2

    def test_explicit_position(self):
        img, box = render_text_fixture("L", 7, position=(12, 34))
        assert (box.x, box.y) == (12, 34)
        assert img[34, 12] == INK
        assert img[0, 0] == PAGE

    def test_truth_box_is_ink_tight(self):
        img, box = render_text_fixture("TAXI", 14, position=(50, 60))
        ys, xs = np.nonzero(img == INK)
        assert box.x == xs.min() and box.y == ys.min()
        assert box.width == xs.max() - xs.min() + 1
        assert box.height == ys.max() - ys.min() + 1

    def test_custom_canvas(self):
        img, _ = render_text_fixture("HI", 7, canvas=(64, 32))
        assert img.shape == (32, 64)

    def test_only_two_intensities(self):
        img, _ = render_text_fixture("GO", 14)
        assert set(np.unique(img).tolist()) == {INK, PAGE}


class TestRenderValidation:
    def test_empty_text(self):
        with pytest.raises(ValueError, match="nonempty"):
            render_text_fixture("", 14)

    def test_unsupported_character(self):
        with pytest.raises(UnsupportedCharError, match="'@'"):
            render_text_fixture("N@", 7)

    def test_height_must_be_multiple_of_seven(self):
        with pytest.raises(ValueError, match="multiple of 7"):
            render_text_fixture("GO", 10)

    def test_height_must_be_positive(self):
        with pytest.raises(ValueError, match="multiple of 7"):
            render_text_fixture("GO", 0)

    def test_text_must_fit_canvas(self):
        with pytest.raises(ValueError, match="does not fit"):
            render_text_fixture("HELLO", 7, position=(620, 0))

    def test_space_only_text_has_no_ink(self):
        with pytest.raises(ValueError, match="no ink"):
            render_text_fixture("  ", 7)
