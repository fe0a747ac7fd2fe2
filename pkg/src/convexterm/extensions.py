"""Convex powersets and one-point extensions.

``CssAlgebra(D)`` is the algebra of nonempty convex subsets of a polytope
``D`` under Minkowski combination, restricted to closed polytopes. Its
carrier is never enumerated; every check runs on sample families.

An extension adds a new element ``STAR`` to a base algebra. The supported
behaviours are: absorb everything (black hole), act like a fixed element
(imitate), act like an extremal element except on that element itself
(mixed), and act like a body ``C`` on a prime ideal while absorbing its
complement (case 4, built with ``glue``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Iterable, Mapping, Sequence

from .algebra import ConvexAlgebra, adheres, check_open_unit, classify_subset, free_algebra
from .dist import Dist, dirac, from_vector, mix, parse_dist
from .geometry.decompose import decompose_2d
from .geometry.polytope import (
    Polytope,
    canonical_hull,
    member,
    minkowski_combine,
    point_polytope,
    polytope_from_json,
    polytope_to_json,
)
from .geometry.simplex import corner, in_simplex, phi, simplex, touches_all_faces
from .rational import format_rational


class _Star:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "*"

    def __reduce__(self):
        return (_Star, ())


STAR = _Star()


def is_star(x) -> bool:
    return x is STAR


# --- the convex powerset algebra -------------------------------------------


@lru_cache(maxsize=1 << 18)
def _css_op(p: Fraction, a: Polytope, b: Polytope) -> Polytope:
    return minkowski_combine(p, a, b)


class CssAlgebra(ConvexAlgebra):
    """Closed convex polytopes inside ``D`` with ``pA + (1-p)B`` pointwise."""

    def __init__(self, domain: Polytope, labels: Sequence | None = None):
        self.domain = domain
        self.labels = tuple(labels) if labels is not None else None
        self._simplex = domain == simplex(domain.dim)
        super().__init__(_css_op, self._inside, name="css")

    def _inside(self, a) -> bool:
        if not isinstance(a, Polytope) or a.dim != self.domain.dim:
            return False
        if self._simplex:
            return in_simplex(a)
        return all(member(self.domain, v) for v in a.vertices)

    def __eq__(self, other):
        return isinstance(other, CssAlgebra) and other.domain == self.domain

    def __hash__(self):
        return hash(("css", self.domain))

    def singleton(self, x) -> Polytope:
        return point_polytope(x)

    def extremal_point_bodies(self) -> list[Polytope]:
        return [point_polytope(v) for v in self.domain.vertices]


def simplex_css(labels: Sequence) -> CssAlgebra:
    labels = tuple(labels)
    return CssAlgebra(simplex(len(labels)), labels)


def css_combine(p, a: Polytope, b: Polytope, domain: Polytope | None = None) -> Polytope:
    p = check_open_unit(p)
    out = _css_op(p, a, b)
    if domain is not None:
        if domain == simplex(domain.dim):
            ok = in_simplex(out)
        else:
            ok = all(member(domain, v) for v in out.vertices)
        if not ok:
            raise AssertionError("combination escaped the carrier; the carrier is not convex")
    return out


def css_adheres(a: Polytope, c: Polytope) -> bool:
    """For closed bodies, ``A adh C`` holds exactly when ``A == C``."""
    return a == c


def dist_to_point(w: Dist, labels: Sequence) -> Polytope:
    return point_polytope(w.vector(labels))


# --- extension specifications ----------------------------------------------


@dataclass(frozen=True)
class BlackHole:
    kind = "black_hole"


@dataclass(frozen=True)
class Imitate:
    w: Any
    kind = "imitate"


@dataclass(frozen=True)
class ImitateOuter:
    c: Any
    kind = "imitate_outer"


@dataclass(frozen=True)
class Mixed:
    w: Any
    kind = "mixed"


@dataclass(frozen=True)
class Case4:
    c: Polytope
    prime: Callable[[Any], bool] | None = None
    kind = "case4"


ExtensionSpec = BlackHole | Imitate | ImitateOuter | Mixed | Case4


class ExtensionAlgebra(ConvexAlgebra):
    """The base algebra with ``STAR`` adjoined; ``spec`` records the construction."""

    def __init__(self, base: ConvexAlgebra, spec, op, name: str):
        self.base = base
        self.spec = spec
        super().__init__(op, lambda x: x is STAR or base.contains(x), name=name)


def _is_extremal_element(base: ConvexAlgebra, w) -> bool:
    if isinstance(base, CssAlgebra):
        return isinstance(w, Polytope) and w.is_singleton() and w.vertices[0] in base.domain.vertices
    if isinstance(w, Dist):
        return w.is_dirac()
    raise ValueError("extremality of this element cannot be decided for this algebra")


def normalise_spec(base: ConvexAlgebra, spec):
    """Resolve outer imitation: a closed polytope carrier has no outer candidates."""
    if isinstance(spec, ImitateOuter):
        if base.contains(spec.c):
            return Imitate(spec.c)
        raise ValueError("the outer body is not inside the visibility hull of the (closed) carrier")
    return spec


def _imitate_op(base_op, w):
    def op(p, x, y):
        if x is STAR:
            if y is STAR:
                return STAR
            x = w
        elif y is STAR:
            y = w
        return base_op(p, x, y)

    return op


def _mixed_op(base_op, w):
    def op(p, x, y):
        if x is STAR:
            if y is STAR or y == w:
                return STAR
            x = w
        elif y is STAR:
            if x == w:
                return STAR
            y = w
        return base_op(p, x, y)

    return op


def _black_hole_op(base_op):
    def op(p, x, y):
        if x is STAR or y is STAR:
            return STAR
        return base_op(p, x, y)

    return op


def build_extension(base: ConvexAlgebra, spec, *, validate: bool = True) -> ExtensionAlgebra:
    """Adjoin ``STAR`` to ``base`` following ``spec``.

    ``validate=False`` skips the precondition checks (mixed needs an
    extremal element, case 4 an eligible body), which is only useful to
    exhibit what goes wrong without them.
    """
    spec = normalise_spec(base, spec)
    if isinstance(spec, BlackHole):
        return ExtensionAlgebra(base, spec, _black_hole_op(base.op), "black_hole")
    if isinstance(spec, Imitate):
        if not base.contains(spec.w):
            raise ValueError(f"imitated element is not in the carrier: {spec.w!r}")
        return ExtensionAlgebra(base, spec, _imitate_op(base.op, spec.w), "imitate")
    if isinstance(spec, Mixed):
        if not base.contains(spec.w):
            raise ValueError(f"mixed element is not in the carrier: {spec.w!r}")
        if validate and not _is_extremal_element(base, spec.w):
            raise ValueError(f"mixed behaviour needs an extremal element; {spec.w!r} is not extremal")
        return ExtensionAlgebra(base, spec, _mixed_op(base.op, spec.w), "mixed")
    if isinstance(spec, Case4):
        if not isinstance(base, CssAlgebra):
            raise ValueError("case 4 extensions exist only for convex powerset algebras")
        c = spec.c
        if validate:
            report = eligible_case4(c, base.domain)
            if not report["eligible"]:
                raise ValueError("the body is not eligible: it is not extremal in the closed-body algebra")
        prime = spec.prime if spec.prime is not None else (lambda a: a != c)
        inner = ExtensionAlgebra(base, Imitate(c), _imitate_op(base.op, c), "imitate")
        glued = _glue_op(base.op, prime, inner.op)
        return ExtensionAlgebra(base, Case4(c, spec.prime), glued, "case4")
    raise TypeError(f"unknown extension spec {spec!r}")


# --- gluing ------------------------------------------------------------------


def _glue_op(base_op, prime, inner_op):
    def op(p, x, y):
        if x is STAR:
            if y is not STAR and prime(y):
                return inner_op(p, x, y)
            return STAR
        if y is STAR:
            if prime(x):
                return inner_op(p, x, y)
            return STAR
        return base_op(p, x, y)

    return op


def glue(
    base: ConvexAlgebra,
    prime: Callable[[Any], bool] | Iterable,
    inner_ext: ConvexAlgebra,
    samples: Sequence,
    p_grid: Sequence,
) -> ExtensionAlgebra:
    """Extend ``base`` by ``inner_ext`` on the prime ideal and by absorption off it.

    Checked on ``samples``: the prime-ideal property, that nothing in the
    ideal adheres to ``STAR`` in ``inner_ext``, and the compatibility
    condition ``p x + (1-p) y adh p x [+] (1-p) STAR`` for ``x`` in the ideal
    and ``y`` outside it. Each failure names its witness.
    """
    if not callable(prime):
        members = frozenset(prime)
        prime = members.__contains__
    samples = [s for s in samples if s is not STAR]
    grid = [check_open_unit(p) for p in p_grid]
    report = classify_subset(base, prime, grid, elements=samples)
    if not report.prime:
        raise ValueError("the given set is not a prime ideal on the samples")
    inside = [x for x in samples if prime(x)]
    outside = [y for y in samples if not prime(y)]
    for x in inside:
        if adheres(inner_ext, x, STAR):
            raise ValueError(f"inner extension has nonempty adherence: {x!r} adheres to the new point")
    for p in grid:
        for x in inside:
            for y in outside:
                lhs = base.op(p, x, y)
                rhs = inner_ext.op(p, x, STAR)
                if not adheres(base, lhs, rhs):
                    raise ValueError(
                        f"compatibility fails at p={format_rational(p)}, x={x!r}, y={y!r}"
                    )
    return ExtensionAlgebra(base, ("glued", getattr(inner_ext, "spec", None)), _glue_op(base.op, prime, inner_ext.op), "glued")


# --- extremality in the closed-body algebra of a simplex ------------------------


def is_extremal_in_KD_simplex(c: Polytope, n: int) -> bool:
    """Extremality of a closed body inside the standard simplex on ``n <= 3`` labels.

    Corner singletons are extremal; other singletons are not. A larger body
    is extremal exactly when it touches every facet and is indecomposable,
    which in the plane means point, segment or triangle.
    """
    if n not in (2, 3):
        raise ValueError("extremality is only decided for 2 or 3 labels")
    if c.dim != n:
        raise ValueError(f"body lives in dimension {c.dim}, expected {n}")
    if not in_simplex(c):
        raise ValueError("body is not contained in the simplex")
    if c.is_singleton():
        return c.vertices[0] in simplex(n).vertices
    return touches_all_faces(c) and decompose_2d(phi(c)) is None


def _barycentric(domain: Polytope, c: Polytope) -> Polytope:
    """Coordinates of ``c`` with respect to the vertices of a simplex ``domain``."""
    from .geometry.lp import convex_weights

    verts = domain.vertices
    rows = []
    for v in c.vertices:
        w = convex_weights(verts, v)
        if w is None:
            raise ValueError("body is not contained in the carrier")
        rows.append(w)
    return canonical_hull(rows)


def eligible_case4(c: Polytope, domain: Polytope) -> dict:
    """Whether ``C`` can be imitated on ``X minus {C}`` while adhering only ``C``."""
    if c.is_singleton():
        raise ValueError("case 4 needs a body with at least two points")
    k = domain.affine_dim()
    if len(domain) != k + 1 or k + 1 not in (2, 3):
        raise ValueError("eligibility is only decided for carriers that are segments or triangles")
    bary = c if domain == simplex(domain.dim) else _barycentric(domain, c)
    if domain == simplex(domain.dim) and not in_simplex(c):
        raise ValueError("body is not contained in the carrier")
    ok = is_extremal_in_KD_simplex(bary, k + 1)
    return {"eligible": ok, "canonical_P": "X minus {C}" if ok else None}


# --- classification of extensions of free algebras -----------------------------


@dataclass(frozen=True)
class ExtensionReport:
    case: int
    w: Dist | None
    adherence: tuple

    def to_json(self) -> dict:
        doc: dict = {"case": self.case}
        if self.w is not None:
            doc["w"] = self.w.to_json()
        doc["adherence"] = [d.to_json() for d in self.adherence]
        doc["description"] = {
            1: "every element adheres to the new point",
            2: "the new point imitates w everywhere",
            3: "the new point imitates w off w and adheres w",
        }[self.case]
        return doc


def probe_extension(ext: ConvexAlgebra, samples: Sequence[Dist], p_grid: Sequence = (Fraction(1, 2),)) -> ExtensionReport:
    """Recover the case and parameter of an extension of a free algebra.

    For ``z`` outside the adherence set, ``w = (r - q z) / (1 - q)`` with
    ``r = q z (+) (1 - q) STAR`` and ``q = 1/2``; the imitation is then
    verified on every sample and grid coefficient.
    """
    grid = [check_open_unit(p) for p in p_grid]
    samples = list(dict.fromkeys(s for s in samples if s is not STAR))
    adh = tuple(z for z in samples if adheres(ext, z, STAR))
    pri = [z for z in samples if z not in adh]
    if not pri:
        return ExtensionReport(1, None, adh)
    q = Fraction(1, 2)
    z = pri[0]
    r = ext.op(q, z, STAR)
    if not isinstance(r, Dist):
        raise ValueError(f"combination with the new point is not a distribution: {r!r}")
    labels = set(z.support) | set(r.support)
    vec = {lab: (r[lab] - q * z[lab]) / (1 - q) for lab in labels}
    if any(v < 0 for v in vec.values()) or sum(vec.values()) != 1:
        raise ValueError("recovered parameter is not a distribution; the oracle is not an extension")
    w = Dist(vec)
    for x in pri:
        for p in grid:
            if ext.op(p, x, STAR) != mix(p, x, w):
                raise ValueError(f"new point does not imitate {w!r} at {x!r}")
    if adheres(ext, w, STAR):
        if not w.is_dirac() or any(a != w for a in adh):
            raise ValueError("adherence set is inconsistent with the mixed construction")
        return ExtensionReport(3, w, adh)
    if adh:
        raise ValueError("adherence set is inconsistent with the imitating construction")
    return ExtensionReport(2, w, adh)


def spec_of_report(report: ExtensionReport):
    return {1: BlackHole(), 2: Imitate(report.w), 3: Mixed(report.w)}[report.case]


# --- naturality ------------------------------------------------------------------


def affine_map(images: Mapping) -> Callable[[Dist], Dist]:
    """The convex map of free algebras sending each label to the given distribution."""
    images = {k: (v if isinstance(v, Dist) else dirac(v)) for k, v in images.items()}

    def f(x: Dist) -> Dist:
        acc: dict = {}
        for label, weight in x.items():
            for t, v in images[label].items():
                acc[t] = acc.get(t, 0) + weight * v
        return Dist(acc)

    return f


def naturality_counterexample(spec_family, f, samples: Sequence, p_grid: Sequence, labels: Sequence):
    """First ``(p, x, y)`` where the star-preserving extension of ``f`` fails to be a homomorphism."""
    grid = [check_open_unit(p) for p in p_grid]
    if callable(f) and not isinstance(f, Mapping):
        fmap = f
    else:
        fmap = affine_map(f)
    base = free_algebra(labels)
    inner = [s for s in samples if s is not STAR]
    for p in grid:
        for x in inner:
            for y in inner:
                if fmap(mix(p, x, y)) != mix(p, fmap(x), fmap(y)):
                    raise ValueError(f"map is not a homomorphism at p={format_rational(p)}")
    dom_spec, cod_spec = spec_family if isinstance(spec_family, tuple) else (spec_family, spec_family)
    dom = build_extension(base, dom_spec)
    cod = build_extension(base, cod_spec)

    def lifted(x):
        return STAR if x is STAR else fmap(x)

    elems = inner + [STAR]
    for p in grid:
        for x in elems:
            for y in elems:
                lhs = lifted(dom.op(p, x, y))
                rhs = cod.op(p, lifted(x), lifted(y))
                if lhs != rhs:
                    return {"p": p, "x": x, "y": y, "lhs": lhs, "rhs": rhs}
    return None


def check_naturality(spec_family, f, samples: Sequence, p_grid: Sequence, labels: Sequence) -> bool:
    return naturality_counterexample(spec_family, f, samples, p_grid, labels) is None


# --- serialisation -----------------------------------------------------------------


def spec_to_json(spec, labels: Sequence | None = None) -> dict:
    doc: dict = {"kind": spec.kind}
    if labels is not None:
        doc["labels"] = [str(x) for x in labels]
    for key in ("w", "c"):
        val = getattr(spec, key, None)
        if val is None:
            continue
        name = "w" if key == "w" else "C"
        doc[name] = val.to_json() if isinstance(val, Dist) else polytope_to_json(val)
    return doc


def spec_from_json(doc) -> tuple[ConvexAlgebra, Any]:
    """Parse ``{"kind", "algebra"?, "labels"?, "w"?, "C"?}`` into ``(base, spec)``."""
    if not isinstance(doc, Mapping) or "kind" not in doc:
        raise ValueError("an extension document needs a 'kind'")
    kind = doc["kind"]
    algebra = doc.get("algebra", "free")
    w = parse_dist(doc["w"]) if "w" in doc else None
    labels = doc.get("labels")
    if labels is None:
        labels = sorted(w.support) if w is not None else None
    if labels is None:
        raise ValueError("the label set must be given ('labels')")
    labels = [str(x) for x in labels]
    if w is not None and not set(w.support) <= set(labels):
        raise ValueError("w is supported outside the label set")
    if algebra == "free":
        base = free_algebra(labels)
        elem = w
    elif algebra == "css":
        base = simplex_css(labels)
        elem = dist_to_point(w, labels) if w is not None else None
    else:
        raise ValueError(f"unknown algebra {algebra!r}")
    c = polytope_from_json(doc["C"]) if "C" in doc else None
    if kind == "black_hole":
        return base, BlackHole()
    if kind in ("imitate", "imitate_outer"):
        target = c if c is not None else elem
        if target is None:
            raise ValueError("imitation needs 'w' or 'C'")
        return base, (ImitateOuter(target) if kind == "imitate_outer" else Imitate(target))
    if kind == "mixed":
        if elem is None:
            raise ValueError("mixed behaviour needs 'w'")
        return base, Mixed(elem)
    if kind == "case4":
        if c is None or algebra != "css":
            raise ValueError("case 4 needs 'C' over a convex powerset algebra")
        return base, Case4(c)
    raise ValueError(f"unknown extension kind {kind!r}")


def element_to_json(x):
    if x is STAR:
        return {"star": True}
    if isinstance(x, Dist):
        return x.to_json()
    if isinstance(x, Polytope):
        return polytope_to_json(x)
    if isinstance(x, Fraction):
        return format_rational(x)
    return x


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True)


__all__ = [
    "STAR",
    "BlackHole",
    "Case4",
    "CssAlgebra",
    "ExtensionAlgebra",
    "ExtensionReport",
    "Imitate",
    "ImitateOuter",
    "Mixed",
    "affine_map",
    "build_extension",
    "check_naturality",
    "corner",
    "css_adheres",
    "css_combine",
    "dist_to_point",
    "eligible_case4",
    "element_to_json",
    "from_vector",
    "glue",
    "is_extremal_in_KD_simplex",
    "is_star",
    "naturality_counterexample",
    "normalise_spec",
    "probe_extension",
    "simplex_css",
    "spec_from_json",
    "spec_of_report",
    "spec_to_json",
]
