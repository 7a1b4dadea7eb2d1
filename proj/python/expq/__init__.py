"""Decision procedures for Presburger arithmetic with the function x -> 2^|x|."""

import json

from ._expq import (
    ContractError,
    Formula,
    ParseError,
    ResourceExceeded,
    decide,
    evaluate,
    lambda_,
    linearise,
    normalize,
    parse,
    qe,
    render,
    sample_equivalent,
    solve_pow_congruence,
)
from ._expq import metrics_json as _metrics_json


def metrics(formula):
    """Syntactic measures of a formula as a dict."""
    return json.loads(_metrics_json(formula))


__all__ = [
    "ContractError",
    "Formula",
    "ParseError",
    "ResourceExceeded",
    "decide",
    "evaluate",
    "lambda_",
    "linearise",
    "metrics",
    "normalize",
    "parse",
    "qe",
    "render",
    "sample_equivalent",
    "solve_pow_congruence",
]
