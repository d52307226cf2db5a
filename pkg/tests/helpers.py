"""Shared fixtures-by-function for the test modules."""

from functools import lru_cache

from fdk.catalog import lookup
from fdk.logfields import analyze
from fdk.bernstein import bernstein_selfdual


@lru_cache(maxsize=None)
def analysis_of(ident):
    return analyze(lookup(ident).divisor.polynomial())


@lru_cache(maxsize=None)
def bfunction_of(ident):
    return bernstein_selfdual(lookup(ident).divisor.polynomial())


def as_dict(p):
    """Plain dict view of a Polynomial, for the oracles."""
    return dict(p.terms)
