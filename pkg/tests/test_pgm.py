import pytest

from hfsac import GrayImage, PgmError, parse_pgm, pgm_bytes, read_pgm, write_pgm
from conftest import synthetic_image


class TestParse:
    def test_roundtrip_bytes(self):
        img = synthetic_image(32, 24)
        assert parse_pgm(pgm_bytes(img)) == img

    def test_roundtrip_file(self, tmp_path):
        img = synthetic_image(17, 9)
        path = tmp_path / "img.pgm"
        write_pgm(img, path)
        assert read_pgm(path) == img

    def test_comments_and_whitespace(self):
        img = parse_pgm(b"P5 # binary pgm\n# a comment\n 3\t2 #c\n255\n" + bytes(6))
        assert (img.width, img.height) == (3, 2)

    def test_raster_may_contain_newlines(self):
        raster = bytes([10, 13, 32, 35])
        img = parse_pgm(b"P5\n2 2\n255\n" + raster)
        assert img.pixels == raster

    @pytest.mark.parametrize(
        "blob,match",
        [
            (b"P2\n2 2\n255\n" + bytes(4), "magic"),
            (b"P5\n2 2\n65535\n" + bytes(8), "maxval"),
            (b"P5\n2 x\n255\n" + bytes(4), "numeric"),
            (b"P5\n2 2\n255\n" + bytes(3), "raster"),
            (b"P5\n2 2\n255\n" + bytes(5), "raster"),
            (b"P5\n0 2\n255\n", "dimensions"),
            (b"P5\n2 2", "truncated"),
        ],
    )
    def test_malformed(self, blob, match):
        with pytest.raises(PgmError, match=match):
            parse_pgm(blob)

    def test_arbitrary_pixel_values_roundtrip(self):
        img = GrayImage(16, 16, bytes(range(256)))
        assert parse_pgm(pgm_bytes(img)) == img
