"""Isometry groups of bilinear forms over GF(p)."""

import json

from ._core import (
    BilformError,
    adapted_basis,
    canonical_block,
    count_isometries,
    parse,
    predicted_order,
    reduce,
    report_json,
    signature,
)


def analyze(gram, p, verify=False, budget=1_000_000_000, threads=1):
    """Full report as a dict; `verify` adds the oracle count and per-layer checks."""
    return json.loads(report_json(gram, p, verify, budget, threads))


__all__ = [
    "BilformError",
    "adapted_basis",
    "analyze",
    "canonical_block",
    "count_isometries",
    "parse",
    "predicted_order",
    "reduce",
    "signature",
]
