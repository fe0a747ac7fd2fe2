"""Probabilistic automata as transformers of belief states.

A state's successors under an action are convexified; a belief
``sum p_i s_i`` is sent to the combination of the per-state successor hulls
in the extended convex powerset algebra, with ``STAR`` standing for a
disabled state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import derive_nary
from .dist import Dist, mix, parse_dist
from .extensions import (
    STAR,
    BlackHole,
    Case4,
    ExtensionAlgebra,
    Imitate,
    Mixed,
    build_extension,
    dist_to_point,
    simplex_css,
)
from .geometry.polytope import canonical_hull
from .rational import format_rational


@dataclass(frozen=True)
class PASpec:
    states: tuple
    actions: tuple
    transitions: Mapping  # (state, action) -> tuple of Dist, deduplicated

    @property
    def disabled(self) -> list[tuple]:
        return [(s, a) for s in self.states for a in self.actions if not self.transitions.get((s, a))]

    def successors(self, s, a) -> tuple:
        return self.transitions.get((s, a), ())

    def is_input_enabled(self) -> bool:
        return not self.disabled


def parse_pa(doc) -> PASpec:
    """Validate ``{"states", "actions", "transitions": [{"from", "action", "to"}]}``."""
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    try:
        states = tuple(str(s) for s in doc["states"])
        actions = tuple(str(a) for a in doc["actions"])
        entries = doc.get("transitions", [])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed automaton document: {exc}") from exc
    if len(set(states)) != len(states) or not states:
        raise ValueError("states must be a nonempty list of distinct labels")
    if len(set(actions)) != len(actions):
        raise ValueError("actions must be distinct")
    known = set(states)
    trans: dict = {}
    for entry in entries:
        try:
            src, act, target = str(entry["from"]), str(entry["action"]), entry["to"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed transition {entry!r}") from exc
        if src not in known:
            raise ValueError(f"transition from unknown state {src!r}")
        if act not in actions:
            raise ValueError(f"transition with unknown action {act!r}")
        try:
            dist = parse_dist({str(k): v for k, v in target.items()} if isinstance(target, Mapping) else target)
        except ValueError as exc:
            raise ValueError(f"transition {src!r} --{act}-->: {exc}") from exc
        unknown = set(dist.support) - known
        if unknown:
            raise ValueError(f"target distribution mentions unknown state(s) {sorted(unknown)}")
        bucket = trans.setdefault((src, act), [])
        if dist not in bucket:
            bucket.append(dist)
    return PASpec(states, actions, {k: tuple(v) for k, v in trans.items()})


def pa_to_json(pa: PASpec) -> dict:
    return {
        "states": list(pa.states),
        "actions": list(pa.actions),
        "transitions": [
            {"from": s, "action": a, "to": d.to_json()}
            for (s, a), ds in sorted(pa.transitions.items())
            for d in ds
        ],
    }


def _as_css_spec(pa: PASpec, ext):
    """Express a belief-level spec over the powerset algebra of the state simplex."""
    if isinstance(ext, str):
        ext = {"blackhole": BlackHole(), "black_hole": BlackHole()}.get(ext, ext)
    if isinstance(ext, BlackHole):
        return ext
    if isinstance(ext, (Imitate, Mixed)):
        w = ext.w
        if isinstance(w, Dist):
            w = dist_to_point(w, pa.states)
        return type(ext)(w)
    if isinstance(ext, Case4):
        raise ValueError("case 4 extensions act on bodies, not on belief states")
    raise ValueError(f"unsupported termination behaviour {ext!r}")


class BeliefTransformer:
    """Cached successor hulls and the extension oracle for one automaton."""

    def __init__(self, pa: PASpec, ext):
        self.pa = pa
        self.algebra = simplex_css(pa.states)
        self.spec = _as_css_spec(pa, ext)
        self.oracle: ExtensionAlgebra = build_extension(self.algebra, self.spec)
        self._hulls: dict = {}

    def hull(self, s, a):
        key = (s, a)
        if key not in self._hulls:
            succ = self.pa.successors(s, a)
            self._hulls[key] = canonical_hull(d.vector(self.pa.states) for d in succ) if succ else STAR
        return self._hulls[key]

    def lift(self, a, xi: Dist):
        if a not in self.pa.actions:
            raise ValueError(f"unknown action {a!r}")
        unknown = set(xi.support) - set(self.pa.states)
        if unknown:
            raise ValueError(f"belief mentions unknown state(s) {sorted(unknown)}")
        items = xi.items()
        return derive_nary(self.oracle, [w for _, w in items], [self.hull(s, a) for s, _ in items])

    def imitated(self):
        if isinstance(self.spec, (Imitate, Mixed)):
            return self.spec.w
        return None

    def step(self, a, current):
        """Advance a belief, a set of beliefs, or ``STAR``."""
        if current is STAR:
            return STAR
        if isinstance(current, Dist):
            return self.lift(a, current)
        verts = [self.to_dist(v) for v in current.vertices]
        if self.lift(a, _barycenter(verts)) is STAR:
            return STAR
        pts = []
        for v in verts:
            img = self.lift(a, v)
            if img is STAR:
                img = self.imitated()
            pts.extend(img.vertices)
        return canonical_hull(pts)

    def to_dist(self, point) -> Dist:
        return Dist({s: c for s, c in zip(self.pa.states, point) if c})


def _barycenter(verts: Sequence[Dist]) -> Dist:
    acc = verts[0]
    for k, v in enumerate(verts[1:], start=2):
        acc = mix(Fraction(k - 1, k), acc, v)
    return acc


def lift(pa: PASpec, a, xi: Dist, ext):
    return BeliefTransformer(pa, ext).lift(a, xi)


@dataclass(frozen=True)
class Trajectory:
    initial: Dist
    word: tuple
    steps: tuple

    def json_lines(self, states: Sequence) -> list[str]:
        lines = [json.dumps({"initial": self.initial.to_json()}, sort_keys=True)]
        for i, (a, res) in enumerate(zip(self.word, self.steps), start=1):
            lines.append(json.dumps({"step": i, "action": a, **step_to_json(res, states)}, sort_keys=True))
        return lines


def step_to_json(res, states: Sequence) -> dict:
    if res is STAR:
        return {"star": True}
    verts = []
    for v in res.vertices:
        verts.append({s: format_rational(c) for s, c in zip(states, v) if c})
    return {"set": verts}


def run_word(pa: PASpec, ext, xi0: Dist, word: Sequence) -> Trajectory:
    """Iterate the lifting along ``word``; ``STAR`` is absorbing."""
    bt = BeliefTransformer(pa, ext)
    unknown = set(xi0.support) - set(pa.states)
    if unknown:
        raise ValueError(f"initial belief mentions unknown state(s) {sorted(unknown)}")
    current = xi0
    steps = []
    for a in word:
        current = bt.step(a, current)
        steps.append(current)
    return Trajectory(xi0, tuple(word), tuple(steps))


def as_belief(pa: PASpec, point_or_dist) -> Dist:
    if isinstance(point_or_dist, Dist):
        return point_or_dist
    return Dist({s: c for s, c in zip(pa.states, point_or_dist) if c})


__all__ = [
    "BeliefTransformer",
    "PASpec",
    "Trajectory",
    "lift",
    "pa_to_json",
    "parse_pa",
    "run_word",
    "step_to_json",
]
