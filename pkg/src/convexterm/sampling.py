"""Seeded generators for sample families: distributions, bodies, automata."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .dist import Dist, dirac
from .geometry.polytope import Polytope, canonical_hull


def random_point_in_simplex(rng: random.Random, n: int, max_den: int = 12) -> tuple[Fraction, ...]:
    den = rng.randint(1, max_den)
    cuts = sorted(rng.randint(0, den) for _ in range(n - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    return tuple(Fraction(c, den) for c in parts)


def random_dist(rng: random.Random, labels: Sequence, max_den: int = 12) -> Dist:
    pt = random_point_in_simplex(rng, len(labels), max_den)
    return Dist({lab: c for lab, c in zip(labels, pt) if c})


def dist_samples(labels: Sequence, count: int, seed: int = 0, max_den: int = 12) -> list[Dist]:
    """Every Dirac and the uniform distribution, topped up to ``count`` with random ones."""
    rng = random.Random(seed)
    out = [dirac(lab) for lab in labels]
    out.append(Dist({lab: Fraction(1, len(labels)) for lab in labels}))
    seen = set(out)
    tries = 0
    while len(out) < count and tries < 50 * count:
        tries += 1
        d = random_dist(rng, labels, max_den)
        if d not in seen:
            seen.add(d)
            out.append(d)
    return out


def random_body_in_simplex(rng: random.Random, n: int, max_vertices: int = 5, max_den: int = 12) -> Polytope:
    k = rng.randint(1, max_vertices)
    return canonical_hull(random_point_in_simplex(rng, n, max_den) for _ in range(k))


def random_polytope(rng: random.Random, dim: int, max_vertices: int = 6, span: int = 4, max_den: int = 4) -> Polytope:
    k = rng.randint(1, max_vertices)
    pts = [
        tuple(Fraction(rng.randint(-span * max_den, span * max_den), max_den) for _ in range(dim))
        for _ in range(k)
    ]
    return canonical_hull(pts)


def body_samples(n: int, count: int, seed: int = 0) -> list[Polytope]:
    """Corners, edges and the simplex itself, topped up to ``count`` with random bodies."""
    rng = random.Random(seed)
    corners = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    out = [canonical_hull([c]) for c in corners]
    out += [canonical_hull([corners[i], corners[j]]) for i in range(n) for j in range(i + 1, n)]
    out = list(dict.fromkeys(out + [canonical_hull(corners)]))
    seen = set(out)
    tries = 0
    while len(out) < count and tries < 50 * count:
        tries += 1
        b = random_body_in_simplex(rng, n)
        if b not in seen:
            seen.add(b)
            out.append(b)
    return out


def random_pa_document(rng: random.Random, n_states: int = 3, actions=("a", "b"), disable: float = 0.2, max_succ: int = 2) -> dict:
    states = [f"s{i}" for i in range(n_states)]
    transitions = []
    for s in states:
        for a in actions:
            if rng.random() < disable:
                continue
            for _ in range(rng.randint(1, max_succ)):
                d = random_dist(rng, states, 6)
                transitions.append({"from": s, "action": a, "to": {k: f"{v.numerator}/{v.denominator}" for k, v in d.items()}})
    return {"states": states, "actions": list(actions), "transitions": transitions}
