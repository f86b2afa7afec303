"""
Medium CSV format: a `t0,t1,sigma,r,g,b` header, then one row per segment. Rows must be contiguous, i.e. `t1` of a
row is bit-identical to `t0` of the next one. Row numbers in error messages count data rows from 1.
"""
import math
import re
from pathlib import Path
from typing import Iterator, List, Union

from volren.errors import MediumError, MediumParseError
from volren.medium.piecewise import PiecewiseMedium, make_piecewise
from volren.utils.log import get_project_logger

logger = get_project_logger(__name__)

MEDIUM_CSV_HEADER = "t0,t1,sigma,r,g,b"

# plain decimal ASCII floats: no inf/nan, no hex, no digit separators
_DECIMAL_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def _parse_float(text: str, row: int, column: str) -> float:
    text = text.strip()
    if not _DECIMAL_RE.match(text):
        raise MediumParseError(f"column '{column}' is not a decimal number: {text!r}", row)
    value = float(text)
    if not math.isfinite(value):
        raise MediumParseError(f"column '{column}' is not finite: {text!r}", row)
    return value


def format_float(value: float) -> str:
    return repr(float(value))


class MediumCSVDriver:
    def read_from_path(self, path: Union[str, Path]) -> PiecewiseMedium:
        def r():
            with open(path) as f:
                for line in f:
                    yield line.rstrip("\r\n")

        return self.read(r())

    def read(self, lines: Iterator[str]) -> PiecewiseMedium:
        lines = iter(lines)
        header = next(lines, None)
        if header is None or header.strip() == "":
            raise MediumParseError("empty medium file, expected header " + MEDIUM_CSV_HEADER)
        if header.strip() != MEDIUM_CSV_HEADER:
            raise MediumParseError(
                f"bad header {header.strip()!r}, expected {MEDIUM_CSV_HEADER!r}"
            )

        boundaries: List[float] = []
        sigmas: List[float] = []
        colors: List[List[float]] = []
        columns = MEDIUM_CSV_HEADER.split(",")

        row = 0
        for line in lines:
            if line.strip() == "":
                continue
            row += 1
            parts = line.split(",")
            if len(parts) != len(columns):
                raise MediumParseError(
                    f"expected {len(columns)} columns, found {len(parts)}", row
                )
            t0, t1, sigma, r, g, b = (
                _parse_float(part, row, column) for part, column in zip(parts, columns)
            )
            if boundaries:
                if t0 > boundaries[-1]:
                    raise MediumParseError(f"gap between rows {row - 1} and {row}", row)
                if t0 < boundaries[-1]:
                    raise MediumParseError(
                        f"overlap between rows {row - 1} and {row}", row
                    )
            else:
                boundaries.append(t0)
            if not t1 > t0:
                raise MediumParseError(f"t1 must be greater than t0, got [{t0}, {t1}]", row)
            boundaries.append(t1)
            sigmas.append(sigma)
            colors.append([r, g, b])

        if row == 0:
            raise MediumParseError("medium file has a header but no segments")

        try:
            return make_piecewise(boundaries, sigmas, colors)
        except MediumError as e:
            # segment numbers coincide with data row numbers
            raise MediumParseError(str(e), e.index) from e

    def dumps(self, medium: PiecewiseMedium) -> str:
        lines = [MEDIUM_CSV_HEADER]
        for n in range(medium.n_segments):
            values = (
                medium.boundaries[n],
                medium.boundaries[n + 1],
                medium.sigmas[n],
                *medium.colors[n],
            )
            lines.append(",".join(format_float(v) for v in values))
        return "\n".join(lines) + "\n"

    def save(self, medium: PiecewiseMedium, path: Union[str, Path]):
        with open(path, "w") as f:
            f.write(self.dumps(medium))


def read_medium_csv(path: Union[str, Path]) -> PiecewiseMedium:
    return MediumCSVDriver().read_from_path(path)


def write_medium_csv(medium: PiecewiseMedium, path: Union[str, Path]):
    MediumCSVDriver().save(medium, path)
    logger.info(f"Wrote {medium.n_segments} segments to {path}")
