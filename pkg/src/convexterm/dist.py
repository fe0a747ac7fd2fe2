"""Finitely supported distributions: the free convex algebra over a label set."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .rational import as_rational, format_rational


class Dist:
    """A probability distribution with finite support and exact weights.

    Only positive weights are stored, so two distributions are equal exactly
    when their supports and weights agree.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, weights: Mapping):
        items = []
        total = Fraction(0)
        for label, w in weights.items():
            w = as_rational(w)
            if w < 0:
                raise ValueError(f"negative weight {w} on {label!r}")
            total += w
            if w:
                items.append((label, w))
        if total != 1:
            raise ValueError(f"weights sum to {total}, not 1")
        items.sort(key=lambda kv: _label_key(kv[0]))
        object.__setattr__(self, "_items", tuple(items))
        object.__setattr__(self, "_hash", hash(self._items))

    @classmethod
    def _trusted(cls, items: tuple) -> "Dist":
        obj = object.__new__(cls)
        object.__setattr__(obj, "_items", items)
        object.__setattr__(obj, "_hash", hash(items))
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Dist is immutable")

    def __reduce__(self):
        return (Dist._trusted, (self._items,))

    def __eq__(self, other):
        if not isinstance(other, Dist):
            return NotImplemented
        return self._items == other._items

    def __hash__(self):
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"{k!r}: {format_rational(v)}" for k, v in self._items)
        return f"Dist({{{inner}}})"

    def items(self):
        return self._items

    @property
    def support(self) -> tuple:
        return tuple(k for k, _ in self._items)

    def __getitem__(self, label) -> Fraction:
        for k, v in self._items:
            if k == label:
                return v
        return Fraction(0)

    def is_dirac(self) -> bool:
        return len(self._items) == 1

    def vector(self, labels) -> tuple[Fraction, ...]:
        weights = dict(self._items)
        return tuple(weights.get(lab, Fraction(0)) for lab in labels)

    def to_json(self) -> dict:
        return {str(k): format_rational(v) for k, v in self._items}


def _label_key(label):
    return (type(label).__name__, label)


def dirac(label) -> Dist:
    return Dist._trusted(((label, Fraction(1)),))


def uniform(labels: Iterable) -> Dist:
    labels = list(labels)
    return Dist({lab: Fraction(1, len(labels)) for lab in labels})


def from_vector(labels, vec) -> Dist:
    return Dist({lab: w for lab, w in zip(labels, vec) if w})


def mix(p: Fraction, a: Dist, b: Dist) -> Dist:
    """``p*a + (1-p)*b``, merging the two sorted supports."""
    if a == b:
        return a
    q = 1 - p
    xs, ys = a._items, b._items
    out = []
    i = j = 0
    while i < len(xs) and j < len(ys):
        kx, ky = _label_key(xs[i][0]), _label_key(ys[j][0])
        if kx == ky:
            out.append((xs[i][0], p * xs[i][1] + q * ys[j][1]))
            i += 1
            j += 1
        elif kx < ky:
            out.append((xs[i][0], p * xs[i][1]))
            i += 1
        else:
            out.append((ys[j][0], q * ys[j][1]))
            j += 1
    out.extend((k, p * v) for k, v in xs[i:])
    out.extend((k, q * v) for k, v in ys[j:])
    return Dist._trusted(tuple(out))


def parse_dist(doc) -> Dist:
    """Accepts a ``{"label": "num/den"}`` map or the shorthand ``"dirac:label"``."""
    if isinstance(doc, str):
        if doc.startswith("dirac:"):
            return dirac(doc[len("dirac:"):])
        raise ValueError(f"unrecognised distribution {doc!r}")
    if not isinstance(doc, Mapping):
        raise ValueError("a distribution must be a label -> weight map")
    return Dist(doc)
