"""Python front-end for the ncid native core."""

import json
from fractions import Fraction

from . import _core

__version__ = _core.version
ParseError = _core.ParseError


def _fractions(values):
    return [Fraction(v) for v in values]


def char_series(expr, order):
    return _fractions(_core.char_series(expr, order))


def necklace_product(expr, order):
    return _fractions(_core.necklace_product(expr, order))


def walk_traces(expr, k):
    return _fractions(_core.walk_traces(expr, k))


def normalize_expr(text):
    return _core.normalize_expr(text)


def charpoly(expr="", family="", n=1, order=12, max_deg_t=4, max_deg_s=4, guess=True):
    return json.loads(_core.charpoly_report(expr, family, n, order, max_deg_t, max_deg_s, guess))


def guess(series, max_deg_t=4, max_deg_s=4, margin=15):
    return json.loads(_core.guess_report([str(Fraction(c)) for c in series], max_deg_t, max_deg_s, margin))


def zero(expr, dims=(1, 2, 3), trials=5, seed=42, fields=()):
    return json.loads(_core.zero_report(expr, list(dims), trials, seed, [str(f) for f in fields]))


def dyn(kind, map="S1", steps=3, d=1, trials=20, seed=1, fields=()):
    return json.loads(_core.dyn_report(kind, map, steps, d, trials, seed, [str(f) for f in fields]))


def run_criteria(ids, seed=42):
    return json.loads(_core.run_criteria(list(ids), seed))
