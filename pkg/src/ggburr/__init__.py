"""Generalized gamma-generated Burr III distributions and their relatives.

The main entry points are :class:`GGModel` for evaluating distributions,
:func:`fit_mle` for maximum likelihood, :func:`gof_report` for
goodness-of-fit statistics and :func:`load_embedded` for the bundled
lifetime corpora.
"""

__version__ = "0.1.0"

from .baselines import BaselineKind, BurrParams, MomentNotFiniteError  # noqa: E402
from .datasets import load_csv, load_embedded, write_csv  # noqa: E402
from .gammag import GammaGParams, GGModel, Variant, model_from_code  # noqa: E402
from .gof import GofReport, gof_report  # noqa: E402
from .inference import (  # noqa: E402
    FitOptions,
    FitResult,
    LrTestResult,
    confidence_intervals,
    fit_mle,
    log_likelihood,
    lr_test,
    observed_information,
    score,
)
from .sample import LifetimeSample  # noqa: E402
from .specfun import ConvergenceError, DomainError  # noqa: E402

__all__ = [
    "BaselineKind",
    "BurrParams",
    "ConvergenceError",
    "DomainError",
    "FitOptions",
    "FitResult",
    "GGModel",
    "GammaGParams",
    "GofReport",
    "LifetimeSample",
    "LrTestResult",
    "MomentNotFiniteError",
    "Variant",
    "confidence_intervals",
    "fit_mle",
    "gof_report",
    "load_csv",
    "load_embedded",
    "log_likelihood",
    "lr_test",
    "model_from_code",
    "observed_information",
    "score",
    "write_csv",
]
