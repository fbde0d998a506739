"""Python bindings for MBUR parametric quantile regression."""

import json

from ._mburqr import (
    DataError,
    DomainError,
    NumericalError,
    __version__,
    c_factor,
    cdf,
    fit_alpha,
    fixture_csv,
    inv_link,
    kendall_tau,
    link,
    pdf,
    quantile,
    sample,
)
from . import _mburqr


def fit(response, predictors=(), link="logit", tau=0.5, data=None, transform=True):
    """Fit one model; returns the report as a dict."""
    return json.loads(_mburqr.fit_json(response, list(predictors), link, tau, data, transform))


def ladder(response, predictors, link="logit", data=None, transform=True):
    return json.loads(_mburqr.ladder_json(response, list(predictors), link, data, transform))


def corr(columns, response="", listwise=True, data=None, transform=True):
    return json.loads(_mburqr.corr_json(list(columns), response, listwise, data, transform))


def describe(columns=(), data=None):
    return json.loads(_mburqr.describe_json(list(columns), data))


__all__ = [
    "DataError",
    "DomainError",
    "NumericalError",
    "__version__",
    "c_factor",
    "cdf",
    "corr",
    "describe",
    "fit",
    "fit_alpha",
    "fixture_csv",
    "inv_link",
    "kendall_tau",
    "ladder",
    "link",
    "pdf",
    "quantile",
    "sample",
]
