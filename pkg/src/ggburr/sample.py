"""Container for lifetime observations."""

from __future__ import annotations

import numpy as np

__all__ = ["LifetimeSample"]


class LifetimeSample:
    """Positive lifetimes with optional right-censoring flags.

    Parameters
    ----------
    values : array_like
        Observed times, all strictly positive.
    censored : array_like of bool, optional
        ``True`` marks a right-censored observation. Must match ``values``
        in length.
    label : str
        Free-text provenance label.

    The arrays are stored read-only; order is preserved as given.
    """

    __slots__ = ("values", "censored", "label")

    def __init__(self, values, censored=None, label: str = ""):
        values = np.array(values, dtype=float).ravel()
        if values.size == 0:
            raise ValueError("a lifetime sample needs at least one observation")
        if not np.all(np.isfinite(values) & (values > 0)):
            bad = np.flatnonzero(~(np.isfinite(values) & (values > 0)))[0]
            raise ValueError(f"observation {bad} is not a positive finite number: {values[bad]!r}")
        values.setflags(write=False)
        if censored is not None:
            censored = np.array(censored, dtype=bool).ravel()
            if censored.shape != values.shape:
                raise ValueError("censored flags must have the same length as values")
            censored.setflags(write=False)
        self.values = values
        self.censored = censored
        self.label = label

    def __len__(self) -> int:
        return self.values.size

    def __repr__(self) -> str:
        n_cens = 0 if self.censored is None else int(self.censored.sum())
        return f"LifetimeSample(n={len(self)}, censored={n_cens}, label={self.label!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, LifetimeSample):
            return NotImplemented
        if self.label != other.label or not np.array_equal(self.values, other.values):
            return False
        if (self.censored is None) != (other.censored is None):
            return False
        return self.censored is None or np.array_equal(self.censored, other.censored)

    __hash__ = None

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def has_censoring(self) -> bool:
        return self.censored is not None and bool(self.censored.any())

    def event_mask(self) -> np.ndarray:
        """Boolean mask of fully observed (uncensored) values."""
        if self.censored is None:
            return np.ones(self.n, dtype=bool)
        return ~self.censored

    def sorted(self) -> LifetimeSample:
        order = np.argsort(self.values, kind="stable")
        cens = None if self.censored is None else self.censored[order]
        return LifetimeSample(self.values[order], cens, self.label)

    def summary(self) -> dict:
        """n, mean, median, sample sd (ddof=1), min and max of the values."""
        v = self.values
        return {
            "n": int(v.size),
            "mean": float(v.mean()),
            "median": float(np.median(v)),
            "sd": float(v.std(ddof=1)) if v.size > 1 else 0.0,
            "min": float(v.min()),
            "max": float(v.max()),
        }
