"""Embedded reference corpora and CSV input/output.

Three uncensored lifetime samples ship with the package:

``leukemia``
    Survival times in weeks of 33 acute myelogenous leukemia patients
    (Feigl and Zelen, 1965).
``aircon``
    188 successive air-conditioning failure intervals for 13 Boeing 720
    aircraft (Proschan, 1963).
``components``
    Failure times of 50 components, in thousands of hours
    (Murthy, Xie and Jiang, 2004).

Each carries a reference summary (n, mean, median, sd, min, max) that the
loader checks on every load.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .sample import LifetimeSample

__all__ = [
    "CorpusId",
    "EmbeddedCorpus",
    "load_embedded",
    "embedded_corpus",
    "load_csv",
    "write_csv",
    "DataFormatError",
]


class DataFormatError(ValueError):
    """A data file could not be parsed; the message names the line."""


class CorpusId(enum.Enum):
    LEUKEMIA = "leukemia"
    AIRCON = "aircon"
    COMPONENTS = "components"


_LEUKEMIA = (
    65, 156, 100, 134, 16, 108, 121, 4, 39, 143, 56, 26, 22, 1, 1, 5, 65,
    56, 65, 17, 7, 16, 22, 3, 4, 2, 3, 8, 4, 3, 30, 4, 43,
)

_AIRCON = (
    194, 413, 90, 74, 55, 23, 97, 50, 359, 50, 130, 487, 57, 102, 15, 14, 10, 57, 320,
    261, 51, 44, 9, 254, 493, 33, 18, 209, 41, 58, 60, 48, 56, 87, 11, 102, 12, 5, 14, 14,
    29, 37, 186, 29, 104, 7, 4, 72, 270, 283, 7, 61, 100, 61, 502, 220, 120, 141, 22,
    603, 35, 98, 54, 100, 11, 181, 65, 49, 12, 239, 14, 18, 39, 3, 12, 5, 32, 9, 438, 43,
    134, 184, 20, 386, 182, 71, 80, 188, 230, 152, 5, 36, 79, 59, 33, 246, 1, 79, 3, 27,
    201, 84, 27, 156, 21, 16, 88, 130, 14, 118, 44, 15, 42, 106, 46, 230, 26, 59, 153,
    104, 20, 206, 5, 66, 34, 29, 26, 35, 5, 82, 31, 118, 326, 12, 54, 36, 34, 18, 25, 120,
    31, 22, 18, 216, 139, 67, 310, 3, 46, 210, 57, 76, 14, 111, 97, 62, 39, 30, 7, 44, 11,
    63, 23, 22, 23, 14, 18, 13, 34, 16, 18, 130, 90, 163, 208, 1, 24, 70, 16, 101, 52,
    # the source table fuses these two values into a single cell
    208, 95,
    62, 11, 191, 14, 71,
)

_COMPONENTS = (
    0.036, 0.058, 0.061, 0.074, 0.078, 0.086, 0.102, 0.103, 0.114, 0.116,
    0.148, 0.183, 0.192, 0.254, 0.262, 0.379, 0.381, 0.538, 0.570, 0.574,
    0.590, 0.618, 0.645, 0.961, 1.228, 1.600, 2.006, 2.054, 2.804, 3.058,
    3.076, 3.147, 3.625, 3.704, 3.931, 4.073, 4.393, 4.534, 4.893,
    6.274, 6.816, 7.896, 7.904, 8.022, 9.337, 10.940, 11.020, 13.880,
    14.730, 15.080,
)


@dataclass(frozen=True)
class EmbeddedCorpus:
    """A shipped sample together with its published summary.

    ``tolerances`` gives the allowed absolute difference per summary field;
    it reflects the rounding of the published figures.
    """

    id: CorpusId
    sample: LifetimeSample
    expected_summary: dict
    tolerances: dict

    def check_summary(self) -> dict:
        """Map of summary field -> (computed, expected, ok)."""
        got = self.sample.summary()
        return {
            k: (got[k], v, abs(got[k] - v) <= self.tolerances.get(k, 0.0))
            for k, v in self.expected_summary.items()
        }


_EXPECTED = {
    CorpusId.LEUKEMIA: (
        _LEUKEMIA,
        dict(n=33, mean=40.88, median=22.0, sd=46.70, min=1.0, max=156.0),
        dict(mean=0.005, median=0.005, sd=0.005),
    ),
    CorpusId.AIRCON: (
        _AIRCON,
        dict(n=188, mean=92.07, median=54.0, sd=107.92, min=1.0, max=603.0),
        dict(mean=0.005, median=0.005, sd=0.005),
    ),
    CorpusId.COMPONENTS: (
        _COMPONENTS,
        # published max is 15.04 against a largest listed value of 15.08
        dict(n=50, mean=3.34, median=1.41, sd=4.181, min=0.04, max=15.04),
        dict(mean=0.005, median=0.005, sd=0.0005, min=0.005, max=0.045),
    ),
}


def embedded_corpus(corpus) -> EmbeddedCorpus:
    """The corpus object with its reference summary."""
    cid = CorpusId(corpus) if not isinstance(corpus, CorpusId) else corpus
    values, expected, tol = _EXPECTED[cid]
    sample = LifetimeSample(np.array(values, dtype=float), label=cid.value)
    return EmbeddedCorpus(cid, sample, expected, tol)


def load_embedded(corpus) -> LifetimeSample:
    """Load a shipped corpus by id or name (``"leukemia"``, ``"aircon"``, ``"components"``).

    Raises
    ------
    RuntimeError
        If the recomputed summary disagrees with the reference one; this
        would mean the embedded values were altered.
    """
    c = embedded_corpus(corpus)
    bad = [k for k, (_, _, ok) in c.check_summary().items() if not ok]
    if bad:
        raise RuntimeError(f"corpus {c.id.value} fails its summary check on {', '.join(bad)}")
    return c.sample


def _parse_float(text: str, line: int, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise DataFormatError(f"line {line}: cannot parse {what} {text!r} as a number") from None


def load_csv(path, value_col=0, censor_col=None, label: str | None = None) -> LifetimeSample:
    """Read lifetimes from a comma-separated file.

    Parameters
    ----------
    path : str or Path
    value_col : int or str
        Column index, or header name when the file has a header row.
    censor_col : int or str, optional
        Column of 0/1 flags; 1 marks a right-censored observation.
    label : str, optional
        Defaults to the file stem.

    A first row whose value cell is not numeric is taken as a header.
    Blank lines and lines starting with ``#`` are skipped.

    Raises
    ------
    FileNotFoundError
    DataFormatError
        On unparseable, missing or nonpositive values, naming the line.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [(i, r) for i, r in enumerate(csv.reader(fh), start=1)
                if r and any(c.strip() for c in r) and not r[0].lstrip().startswith("#")]
    if not rows:
        raise DataFormatError(f"{path}: no data rows")

    header = None
    first_line, first = rows[0]
    vi = value_col if isinstance(value_col, int) else None
    try:
        float(first[vi if vi is not None else 0])
    except (ValueError, IndexError):
        header = [c.strip() for c in first]
        rows = rows[1:]

    def resolve(col, what):
        if col is None or isinstance(col, int):
            return col
        if header is None or col not in header:
            raise DataFormatError(f"{path}: no header column named {col!r} for {what}")
        return header.index(col)

    vi = resolve(value_col, "values")
    ci = resolve(censor_col, "censor flags")

    values, flags = [], []
    for line, row in rows:
        if vi >= len(row):
            raise DataFormatError(f"line {line}: missing value column {vi}")
        v = _parse_float(row[vi].strip(), line, "value")
        if not (np.isfinite(v) and v > 0):
            raise DataFormatError(f"line {line}: value {row[vi].strip()!r} is not positive")
        values.append(v)
        if ci is not None:
            if ci >= len(row):
                raise DataFormatError(f"line {line}: missing censor column {ci}")
            flag = row[ci].strip()
            if flag not in ("0", "1"):
                raise DataFormatError(f"line {line}: censor flag must be 0 or 1, got {flag!r}")
            flags.append(flag == "1")
    if not values:
        raise DataFormatError(f"{path}: no data rows")
    return LifetimeSample(values, flags if ci is not None else None,
                          label=label if label is not None else path.stem)


def write_csv(sample: LifetimeSample, path=None) -> str:
    """Write ``value[,censored]`` with a header; returns the text.

    Values use ``repr`` so a reload reproduces them exactly.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if sample.censored is None:
        w.writerow(["value"])
        w.writerows([repr(float(v))] for v in sample.values)
    else:
        w.writerow(["value", "censored"])
        w.writerows([repr(float(v)), int(c)] for v, c in zip(sample.values, sample.censored))
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
