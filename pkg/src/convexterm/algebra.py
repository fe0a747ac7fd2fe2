"""Convex algebras as binary-operation oracles.

An algebra is given by ``binop(p, x, y)``, read as ``p x + (1-p) y`` for
``p`` in the open unit interval. Everything else (n-ary operations, axiom
certification, adherence, ideals and extremal sets) is derived from it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from .dist import Dist, mix
from .rational import as_rational, check_open_unit, format_rational

Binop = Callable[[Fraction, Any, Any], Any]


class ConvexAlgebra:
    """Carrier given by a membership predicate (or nothing) plus a binop."""

    def __init__(self, binop: Binop, contains: Callable[[Any], bool] | None = None, name: str = ""):
        self.op = binop
        self._contains = contains
        self.name = name

    def binop(self, p, x, y):
        return self.op(check_open_unit(p), x, y)

    def contains(self, x) -> bool:
        return True if self._contains is None else bool(self._contains(x))

    def combine(self, coeffs: Sequence, elems: Sequence):
        return derive_nary(self, coeffs, elems)

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"


class FiniteConvexAlgebra(ConvexAlgebra):
    """An algebra whose carrier is an explicit, duplicate-free element list."""

    def __init__(self, elements: Iterable, binop: Binop, name: str = "", order=None):
        elements = tuple(elements)
        if len(set(elements)) != len(elements):
            raise ValueError("elements must be distinct")
        self.elements = elements
        self._set = frozenset(elements)
        self.order = order
        super().__init__(binop, self._set.__contains__, name)

    def __len__(self):
        return len(self.elements)


def derive_nary(alg: ConvexAlgebra, coeffs: Sequence, elems: Sequence):
    """``sum_i coeffs[i] elems[i]`` built from the binary operation.

    Zero coefficients are dropped first; a remaining coefficient of 1 is the
    projection case. Otherwise the last term is split off:
    ``sum p_i x_i = (1-p_n) (sum p_j/(1-p_n) x_j) + p_n x_n``.
    """
    coeffs = [as_rational(c) for c in coeffs]
    elems = list(elems)
    if len(coeffs) != len(elems) or not coeffs:
        raise ValueError("need equally many (and at least one) coefficients and elements")
    if any(c < 0 or c > 1 for c in coeffs):
        raise ValueError("coefficients must lie in [0, 1]")
    if sum(coeffs) != 1:
        raise ValueError(f"coefficients sum to {sum(coeffs)}, not 1")
    for x in elems:
        if not alg.contains(x):
            raise ValueError(f"element outside the carrier: {x!r}")
    terms = [(c, x) for c, x in zip(coeffs, elems) if c]
    return _nary(alg.op, terms)


def _nary(op, terms):
    if len(terms) == 1:
        return terms[0][1]
    pn, xn = terms[-1]
    rest = 1 - pn
    inner = _nary(op, [(c / rest, x) for c, x in terms[:-1]])
    return op(rest, inner, xn)


@dataclass(frozen=True)
class AxiomReport:
    passed: bool
    counterexample: dict | None = None
    checks: int = 0

    def __bool__(self):
        return self.passed


def _pq_table(pq_pairs):
    """Coefficients for parametric associativity, computed once per (p, q)."""
    table = []
    for p, q in pq_pairs:
        pq = p * q
        r = p * (1 - q) / (1 - pq)
        table.append((p, q, pq, r))
    return table


def check_axioms(
    alg: ConvexAlgebra,
    p_grid: Sequence,
    samples: Sequence,
    *,
    pairs: Iterable[tuple] | None = None,
    triples: Iterable[tuple] | None = None,
    pq_pairs: Iterable[tuple] | None = None,
) -> AxiomReport:
    """Certify idempotence, parametric commutativity and associativity.

    Associativity is checked in the form
    ``p(q x + (1-q) y) + (1-p) z = pq x + (1-pq)(r y + (1-r) z)`` with
    ``r = p(1-q)/(1-pq)``. Closure is checked whenever the algebra has a
    carrier predicate. Returns the first counterexample met.

    ``pairs``, ``triples`` and ``pq_pairs`` restrict the tuples checked; by
    default every pair and triple of samples and every grid pair is used.
    """
    grid = [check_open_unit(p) for p in p_grid]
    samples = list(samples)
    op = alg.op
    checks = 0
    for x in samples:
        if not alg.contains(x):
            return AxiomReport(False, {"law": "carrier", "x": x}, checks)
    for p in grid:
        for x in samples:
            checks += 1
            got = op(p, x, x)
            if got != x:
                return AxiomReport(False, {"law": "idempotence", "p": p, "x": x, "lhs": got, "rhs": x}, checks)
    pairs = list(itertools.product(samples, repeat=2) if pairs is None else pairs)
    for p in grid:
        for x, y in pairs:
            checks += 1
            lhs = op(p, x, y)
            if alg._contains is not None and not alg.contains(lhs):
                return AxiomReport(False, {"law": "closure", "p": p, "x": x, "y": y, "lhs": lhs}, checks)
            rhs = op(1 - p, y, x)
            if lhs != rhs:
                return AxiomReport(
                    False,
                    {"law": "commutativity", "p": p, "x": x, "y": y, "lhs": lhs, "rhs": rhs},
                    checks,
                )
    table = _pq_table(itertools.product(grid, grid) if pq_pairs is None else pq_pairs)
    if triples is None:
        triples = itertools.product(samples, repeat=3)
    # inner combinations repeat across the third element; compute each once
    inner: dict = {}
    for x, y, z in triples:
        for i, (p, q, pq, r) in enumerate(table):
            checks += 1
            xy = inner.get((i, 0, x, y))
            if xy is None:
                xy = inner[i, 0, x, y] = op(q, x, y)
            yz = inner.get((i, 1, y, z))
            if yz is None:
                yz = inner[i, 1, y, z] = op(r, y, z)
            lhs = op(p, xy, z)
            rhs = op(pq, x, yz)
            if lhs != rhs:
                return AxiomReport(
                    False,
                    {"law": "associativity", "p": p, "q": q, "x": x, "y": y, "z": z, "lhs": lhs, "rhs": rhs},
                    checks,
                )
    return AxiomReport(True, None, checks)


def adheres(alg: ConvexAlgebra, x, y, p_witness=Fraction(1, 2)) -> bool:
    """``x adh y``: one witness suffices since adherence does not depend on p."""
    return alg.op(check_open_unit(p_witness), x, y) == y


def is_cancellable(alg: FiniteConvexAlgebra, z, p_grid, elements: Sequence | None = None) -> bool:
    elems = alg.elements if elements is None else elements
    for p in p_grid:
        seen = {}
        for x in elems:
            v = alg.op(p, x, z)
            if v in seen and seen[v] != x:
                return False
            seen[v] = x
    return True


@dataclass(frozen=True)
class SubsetReport:
    ideal: bool
    prime: bool
    extremal: bool

    def as_dict(self):
        return {"ideal": self.ideal, "prime": self.prime, "extremal": self.extremal}


def _membership(P):
    if callable(P):
        return P
    return frozenset(P).__contains__


def _is_ideal(op, inside, elems, grid):
    for p in grid:
        for x in elems:
            if not inside(x):
                continue
            for y in elems:
                if not inside(op(p, x, y)) or not inside(op(p, y, x)):
                    return False
    return True


def _is_convex(op, inside, elems, grid):
    members = [x for x in elems if inside(x)]
    for p in grid:
        for x in members:
            for y in members:
                if not inside(op(p, x, y)):
                    return False
    return True


def _is_extremal(op, inside, elems, grid):
    for p in grid:
        for x in elems:
            for y in elems:
                if inside(op(p, x, y)) and not (inside(x) and inside(y)):
                    return False
    return True


def classify_subset(alg: FiniteConvexAlgebra, P, p_grid, elements: Sequence | None = None) -> SubsetReport:
    """Ideal / prime ideal / extremal-set status of ``P`` (a set or a predicate).

    ``elements`` overrides the carrier, which turns the check into a sampled
    one for infinite algebras.
    """
    elems = alg.elements if elements is None else list(elements)
    inside = _membership(P)
    outside = lambda x: not inside(x)  # noqa: E731
    ideal = _is_ideal(alg.op, inside, elems, p_grid)
    prime = ideal and _is_convex(alg.op, outside, elems, p_grid)
    extremal = _is_extremal(alg.op, inside, elems, p_grid)
    return SubsetReport(ideal, prime, extremal)


def extremal_points(alg: FiniteConvexAlgebra, p_grid, elements: Sequence | None = None) -> set:
    elems = alg.elements if elements is None else list(elements)
    hit = set()
    for p in p_grid:
        for x in elems:
            for y in elems:
                z = alg.op(p, x, y)
                if x != z or y != z:
                    hit.add(z)
    return {z for z in elems if z not in hit}


# --- semilattices ---------------------------------------------------------


class Semilattice:
    """A finite meet-semilattice; ``order`` lists pairs ``(a, b)`` with ``a <= b``."""

    def __init__(self, elements: Iterable[Hashable], order: Iterable[tuple] = ()):
        elements = tuple(elements)
        if not elements:
            raise ValueError("a semilattice needs at least one element")
        if len(set(elements)) != len(elements):
            raise ValueError("elements must be distinct")
        index = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        leq = [[i == j for j in range(n)] for i in range(n)]
        for a, b in order:
            if a not in index or b not in index:
                raise ValueError(f"order pair mentions unknown element: {(a, b)!r}")
            leq[index[a]][index[b]] = True
        for k in range(n):
            for i in range(n):
                if leq[i][k]:
                    row_k = leq[k]
                    row_i = leq[i]
                    for j in range(n):
                        if row_k[j]:
                            row_i[j] = True
        for i in range(n):
            for j in range(i + 1, n):
                if leq[i][j] and leq[j][i]:
                    raise ValueError(f"order is not antisymmetric: {elements[i]!r}, {elements[j]!r}")
        meet = {}
        for i in range(n):
            for j in range(n):
                lower = [k for k in range(n) if leq[k][i] and leq[k][j]]
                top = [k for k in lower if all(leq[m][k] for m in lower)]
                if not top:
                    raise ValueError(f"missing meet of {elements[i]!r} and {elements[j]!r}")
                meet[elements[i], elements[j]] = elements[top[0]]
        self.elements = elements
        self._leq = leq
        self._index = index
        self.meet_table = meet

    def leq(self, a, b) -> bool:
        return self._leq[self._index[a]][self._index[b]]

    def meet(self, a, b):
        return self.meet_table[a, b]

    def cover_pairs(self) -> list[tuple]:
        """Pairs ``(a, b)`` with ``a < b``, i.e. the strict order."""
        return [(a, b) for a in self.elements for b in self.elements if a != b and self.leq(a, b)]

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "order": [list(pair) for pair in self.cover_pairs()]}

    @classmethod
    def from_json(cls, doc) -> "Semilattice":
        try:
            return cls(doc["elements"], [tuple(pair) for pair in doc.get("order", [])])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed semilattice document: {exc}") from exc

    @classmethod
    def chain(cls, n: int) -> "Semilattice":
        return cls(range(n), [(i, i + 1) for i in range(n - 1)])


def semilattice_algebra(order: Semilattice) -> FiniteConvexAlgebra:
    """``p x + (1-p) y = x meet y``; the coefficient is ignored."""
    table = order.meet_table
    return FiniteConvexAlgebra(order.elements, lambda p, x, y: table[x, y], name="semilattice", order=order)


@dataclass(frozen=True)
class Tagged:
    """An element ``value`` of the fiber over ``index`` in a glued algebra."""

    index: Hashable
    value: Any


def semilattice_glue(
    order: Semilattice,
    fibers: Mapping[Hashable, ConvexAlgebra],
    homs: Mapping[tuple, Callable[[Any], Any]],
    p_grid: Sequence,
    samples: Mapping[Hashable, Sequence] | None = None,
) -> ConvexAlgebra:
    """Disjoint union of the fibers with ``p x + (1-p) y`` computed in the fiber over ``s meet t``.

    ``homs[(s, t)]`` maps the fiber over ``t`` to the fiber over ``s`` for
    ``s <= t``; missing identities are filled in. The composition law and
    the homomorphism property are checked on the fiber samples.
    """
    grid = [check_open_unit(p) for p in p_grid]
    if set(fibers) != set(order.elements):
        raise ValueError("need exactly one fiber per semilattice element")
    maps = dict(homs)
    for s in order.elements:
        maps.setdefault((s, s), lambda x: x)
    for s in order.elements:
        for t in order.elements:
            if order.leq(s, t) and (s, t) not in maps:
                raise ValueError(f"missing homomorphism for {s!r} <= {t!r}")

    def fiber_samples(s):
        if samples is not None and s in samples:
            return list(samples[s])
        fib = fibers[s]
        if isinstance(fib, FiniteConvexAlgebra):
            return list(fib.elements)
        raise ValueError(f"fiber {s!r} is infinite; pass samples for it")

    for (s, t), f in maps.items():
        for x in fiber_samples(t):
            if not fibers[s].contains(f(x)):
                raise ValueError(f"map for {s!r} <= {t!r} leaves the target fiber at {x!r}")
        if s == t:
            for x in fiber_samples(t):
                if f(x) != x:
                    raise ValueError(f"map for {s!r} <= {s!r} is not the identity at {x!r}")
        xs = fiber_samples(t)
        for p in grid:
            for x in xs:
                for y in xs:
                    if f(fibers[t].op(p, x, y)) != fibers[s].op(p, f(x), f(y)):
                        raise ValueError(
                            f"map for {s!r} <= {t!r} is not a homomorphism at p={format_rational(p)}, x={x!r}, y={y!r}"
                        )
    for s, t, u in itertools.product(order.elements, repeat=3):
        if order.leq(s, t) and order.leq(t, u):
            for x in fiber_samples(u):
                if maps[s, t](maps[t, u](x)) != maps[s, u](x):
                    raise ValueError(f"composition law fails for {s!r} <= {t!r} <= {u!r} at {x!r}")

    def op(p, a, b):
        m = order.meet(a.index, b.index)
        fa = maps[m, a.index](a.value)
        fb = maps[m, b.index](b.value)
        return Tagged(m, fibers[m].op(p, fa, fb))

    def contains(a):
        return isinstance(a, Tagged) and a.index in fibers and fibers[a.index].contains(a.value)

    if all(isinstance(fibers[s], FiniteConvexAlgebra) for s in order.elements):
        elems = [Tagged(s, x) for s in order.elements for x in fibers[s].elements]
        return FiniteConvexAlgebra(elems, op, name="glued")
    return ConvexAlgebra(op, contains, name="glued")


# --- concrete algebras ----------------------------------------------------


def interval_algebra(lo, hi) -> ConvexAlgebra:
    """The rational interval ``[lo, hi]`` with the affine operations."""
    lo, hi = as_rational(lo), as_rational(hi)
    if lo > hi:
        raise ValueError("empty interval")

    def contains(x):
        return isinstance(x, (int, Fraction)) and not isinstance(x, bool) and lo <= x <= hi

    return ConvexAlgebra(lambda p, x, y: p * x + (1 - p) * y, contains, name=f"[{lo}, {hi}]")


def finite_interval_algebra(points: Iterable) -> FiniteConvexAlgebra:
    """Finite sample of the rational line; not closed, use for sampled checks only."""
    pts = [as_rational(x) for x in points]
    return FiniteConvexAlgebra(pts, lambda p, x, y: p * x + (1 - p) * y, name="interval-sample")


def free_algebra(labels: Iterable) -> ConvexAlgebra:
    """Distributions over ``labels`` with the pointwise mixture."""
    labels = frozenset(labels)

    def contains(x):
        return isinstance(x, Dist) and set(x.support) <= labels

    alg = ConvexAlgebra(mix, contains, name="free")
    alg.labels = tuple(sorted(labels, key=str))
    return alg


def trivial_algebra(element="o") -> FiniteConvexAlgebra:
    return FiniteConvexAlgebra([element], lambda p, x, y: x, name="trivial")


def meet_semilattices(n: int) -> list[Semilattice]:
    """Every meet-semilattice on ``range(n)``, one per isomorphism class."""
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    seen = set()
    out = []
    for bits in range(1 << len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if bits >> k & 1}
        if any((b, a) in rel for a, b in rel):
            continue
        if any((a, c) not in rel for a, b in rel for b2, c in rel if b == b2 and a != c):
            continue
        key = min(
            tuple(sorted((perm[a], perm[b]) for a, b in rel)) for perm in itertools.permutations(range(n))
        )
        if key in seen:
            continue
        seen.add(key)
        try:
            out.append(Semilattice(range(n), sorted(rel)))
        except ValueError:
            continue
    return out


__all__ = [
    "AxiomReport",
    "ConvexAlgebra",
    "FiniteConvexAlgebra",
    "Semilattice",
    "SubsetReport",
    "Tagged",
    "adheres",
    "check_axioms",
    "classify_subset",
    "derive_nary",
    "extremal_points",
    "finite_interval_algebra",
    "free_algebra",
    "interval_algebra",
    "is_cancellable",
    "meet_semilattices",
    "semilattice_algebra",
    "semilattice_glue",
    "trivial_algebra",
]
