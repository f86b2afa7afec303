from pathlib import Path

import numpy as np
import pytest

from volren.errors import MediumParseError
from volren.medium import MediumCSVDriver, read_medium_csv, write_medium_csv
from volren.medium.io import MEDIUM_CSV_HEADER


def read(text: str):
    return MediumCSVDriver().read(text.splitlines())


class TestMediumCSV:
    def test_demo_medium(self, demo_medium_path, two_segments):
        medium = read_medium_csv(demo_medium_path)
        assert np.array_equal(medium.boundaries, two_segments.boundaries)
        assert np.array_equal(medium.sigmas, two_segments.sigmas)
        assert np.array_equal(medium.colors, two_segments.colors)

    def test_write_then_read_is_exact(self, tmpdir, medium_factory):
        rng = np.random.default_rng(3)
        for i in range(5):
            medium = medium_factory(rng)
            path = Path(tmpdir) / f"medium-{i}.csv"
            write_medium_csv(medium, path)
            back = read_medium_csv(path)
            assert np.array_equal(back.boundaries, medium.boundaries)
            assert np.array_equal(back.sigmas, medium.sigmas)
            assert np.array_equal(back.colors, medium.colors)

    def test_dumps_layout(self, two_segments):
        lines = MediumCSVDriver().dumps(two_segments).splitlines()
        assert lines[0] == MEDIUM_CSV_HEADER
        assert lines[1] == "0.0,1.0,0.6931471805599453,1.0,0.0,0.0"
        assert len(lines) == 3

    def test_blank_lines_and_crlf_are_tolerated(self):
        medium = read("t0,t1,sigma,r,g,b\r\n0,1,1,1,1,1\r\n\r\n1,2,0,0,0,0\r\n")
        assert medium.n_segments == 2

    @pytest.mark.parametrize(
        "text, row, message",
        [
            ("", None, "empty medium file"),
            ("t0,t1,sigma,r,g,b\n", None, "no segments"),
            ("t0,t1,density,r,g,b\n0,1,1,1,1,1\n", None, "bad header"),
            ("t0,t1,sigma,r,g,b\n0,1,1,1,1\n", 1, "expected 6 columns"),
            ("t0,t1,sigma,r,g,b\n0,1,1,1,1,1\n1.5,2,1,1,1,1\n", 2, "gap between rows 1 and 2"),
            ("t0,t1,sigma,r,g,b\n0,1,1,1,1,1\n0.5,2,1,1,1,1\n", 2, "overlap between rows 1 and 2"),
            ("t0,t1,sigma,r,g,b\n0,1,1,1,1,1\n1,1,1,1,1,1\n", 2, "t1 must be greater than t0"),
            ("t0,t1,sigma,r,g,b\n0,1,abc,1,1,1\n", 1, "column 'sigma'"),
            ("t0,t1,sigma,r,g,b\n0,1,nan,1,1,1\n", 1, "column 'sigma'"),
            ("t0,t1,sigma,r,g,b\n0,1,1e400,1,1,1\n", 1, "column 'sigma' is not finite"),
            ("t0,t1,sigma,r,g,b\n0,1,1,1,1,1\n1,1e400,1,1,1,1\n", 2, "column 't1' is not finite"),
            ("t0,t1,sigma,r,g,b\n0,1,1,1,1,1\n1,2,1,1,1,-1e400\n", 2, "column 'b' is not finite"),
            ("t0,t1,sigma,r,g,b\n0,1,1,1,1,1\n1,2,-3,1,1,1\n", 2, "negative density at n=2"),
            ("t0,t1,sigma,r,g,b\n0,1,1,1,1,1\n1,2,1,1,2,1\n", 2, "color outside [0, 1] at n=2"),
        ],
    )
    def test_parse_errors_carry_row_numbers(self, text, row, message):
        with pytest.raises(MediumParseError) as excinfo:
            read(text)
        assert excinfo.value.row == row
        assert message in str(excinfo.value)
        if row is not None:
            assert str(excinfo.value).startswith(f"row {row}: ")
