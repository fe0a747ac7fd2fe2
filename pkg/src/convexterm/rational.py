"""Exact rational helpers: parsing, formatting and the certification grid."""

from __future__ import annotations

import itertools
import os
import random
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

FIXED_GRID = tuple(
    Fraction(n, d) for n, d in [(1, 5), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (4, 5)]
)
PGRID_ENV = "CONVEXTERM_PGRID"


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and "num/den" strings to a Fraction.

    Floats are refused: every coefficient in this package is exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def complement(p: Fraction) -> Fraction:
    return 1 - p


def check_open_unit(p: Fraction) -> Fraction:
    p = as_rational(p)
    if not 0 < p < 1:
        raise ValueError(f"coefficient {p} is not in the open interval (0, 1)")
    return p


def random_rational(rng: random.Random, max_den: int = 64) -> Fraction:
    den = rng.randint(2, max_den)
    return Fraction(rng.randint(1, den - 1), den)


def certification_grid(seed: int = 0, extra: int = 20, max_den: int = 64) -> tuple[Fraction, ...]:
    """The fixed grid plus ``extra`` seeded random rationals in (0, 1)."""
    rng = random.Random(seed)
    grid = list(FIXED_GRID)
    seen = set(grid)
    while len(grid) < len(FIXED_GRID) + extra:
        q = random_rational(rng, max_den)
        if q not in seen:
            seen.add(q)
            grid.append(q)
    return tuple(grid)


def reduced_pq_pairs(grid: Sequence[Fraction]) -> list[tuple[Fraction, Fraction]]:
    """Coefficient pairs for associativity on expensive carriers.

    The first seven grid values are paired exhaustively; the remaining ones
    are zipped against their reversal.
    """
    head, tail = list(grid[:7]), list(grid[7:])
    return list(itertools.product(head, head)) + list(zip(tail, reversed(tail)))


def parse_grid(text: str) -> tuple[Fraction, ...]:
    values = tuple(check_open_unit(as_rational(tok)) for tok in text.split(",") if tok.strip())
    if not values:
        raise ValueError("empty p-grid")
    return values


def resolve_grid(override: str | None = None, seed: int = 0) -> tuple[Fraction, ...]:
    """Explicit override, else the environment variable, else the default grid."""
    if override:
        return parse_grid(override)
    env = os.environ.get(PGRID_ENV)
    if env:
        return parse_grid(env)
    return certification_grid(seed)


def common_denominator(values: Iterable[Fraction]) -> int:
    return lcm(*(v.denominator for v in values)) if values else 1


def scale_to_integers(points: Sequence[Sequence[Fraction]]) -> tuple[list[tuple[int, ...]], int]:
    """Multiply every coordinate by the common denominator."""
    den = 1
    for pt in points:
        for c in pt:
            if den % c.denominator:
                den = lcm(den, c.denominator)
    ints = [tuple(c.numerator * (den // c.denominator) for c in pt) for pt in points]
    return ints, den
