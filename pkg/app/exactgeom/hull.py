"""
Exact polyhedral kernels: double description for extreme rays, vertex and facet
enumeration on top of it, and convex-hull membership with verified certificates.

Vertices are not found by walking bases: the H-representation is homogenised into a
cone in the equality-reduced space, its extreme rays come from double description,
and its rays with t > 0, scaled to t = 1, are the vertices. The vertex budget caps
the intermediate rays kept per step.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from app.logger import logger

from app.config import Settings
from app.exactgeom.linalg import Vector, affine_hull, dot, independent_rows, inverse, primitive, rref
from app.exactgeom.simplex import feasibility

ZERO = Fraction(0)


class DimensionMismatchError(ValueError):
    """Raised when vectors or representations of different dimensions are combined."""


class UnboundedPolyhedronError(ValueError):
    """Raised when an H-representation describes an unbounded polyhedron."""


class EmptyPolyhedronError(ValueError):
    """Raised when an H-representation has no feasible point."""


class BudgetExceededError(RuntimeError):
    """Raised when an enumeration outgrows its work budget."""

    def __init__(self, message: str, partial: int):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class AffineFunctional:
    """The inequality coefficients . x <= bound."""
    coefficients: Vector
    bound: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(Fraction(v) for v in self.coefficients))
        object.__setattr__(self, "bound", Fraction(self.bound))
        if not any(self.coefficients):
            raise ValueError("An affine functional needs a nonzero coefficient")

    @property
    def dimension(self) -> int:
        return len(self.coefficients)

    def value(self, point: Sequence[Fraction]) -> Fraction:
        if len(point) != self.dimension:
            raise DimensionMismatchError(f"Functional has dimension {self.dimension}, point {len(point)}")
        return dot(self.coefficients, point)

    def holds(self, point: Sequence[Fraction]) -> bool:
        return self.value(point) <= self.bound

    def is_tight(self, point: Sequence[Fraction]) -> bool:
        return self.value(point) == self.bound


@dataclass(frozen=True)
class AffineEquality:
    coefficients: Vector
    value: Fraction

    def holds(self, point: Sequence[Fraction]) -> bool:
        return dot(self.coefficients, point) == self.value


@dataclass(frozen=True)
class HRep:
    dimension: int
    inequalities: tuple[AffineFunctional, ...]
    equalities: tuple[AffineEquality, ...] = ()

    def __post_init__(self):
        for row in (*self.inequalities, *self.equalities):
            if len(row.coefficients) != self.dimension:
                raise DimensionMismatchError("Row length does not match the H-representation dimension")

    def contains(self, point: Sequence[Fraction]) -> bool:
        return all(e.holds(point) for e in self.equalities) and all(f.holds(point) for f in self.inequalities)


@dataclass(frozen=True)
class VRep:
    dimension: int
    points: tuple[Vector, ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError("A V-representation needs at least one point")
        if any(len(p) != self.dimension for p in self.points):
            raise DimensionMismatchError("Point length does not match the V-representation dimension")

    @classmethod
    def of(cls, points: Sequence[Sequence[Fraction]]) -> VRep:
        vectors = tuple(tuple(Fraction(v) for v in p) for p in points)
        return cls(len(vectors[0]) if vectors else 0, vectors)


@dataclass(frozen=True)
class Inside:
    """Convex weights over the vertices reproducing the point."""
    weights: tuple[Fraction, ...]
    inside: bool = field(default=True, init=False)


@dataclass(frozen=True)
class Outside:
    """A functional valid on every vertex and violated by the point."""
    separator: AffineFunctional
    inside: bool = field(default=False, init=False)


MembershipCertificate = Inside | Outside


@dataclass
class _Ray:
    vector: tuple[int, ...]
    zeros: int


def _is_adjacent(p: _Ray, q: _Ray, rays: list[_Ray], n: int) -> bool:
    common = p.zeros & q.zeros
    if common.bit_count() < n - 2:
        return False
    for r in rays:
        if r is not p and r is not q and r.zeros & common == common:
            return False
    return True


def extreme_rays(rows: Sequence[Sequence[int]], n: int, limit: int | None = None) -> list[tuple[int, ...]]:
    """
    Extreme rays of the pointed cone {x in Q^n : row . x >= 0 for every row}.

    Double description: start from the simplicial cone of n independent rows, then add
    the remaining rows one at a time, keeping rays on the feasible side and combining
    adjacent pairs that straddle the new hyperplane.

    Args:
        rows: Integer constraint rows.
        n: Ambient dimension of the cone.
        limit: Cap on intermediate rays; defaults to Settings.VERTEX_BUDGET.

    Returns:
        Primitive integer rays, sorted.

    Raises:
        UnboundedPolyhedronError: If the rows have rank below n (the cone has a lineality space).
        BudgetExceededError: If the ray list or one step's candidate pairs outgrow the budget.
    """
    limit = Settings.VERTEX_BUDGET if limit is None else limit
    basis = independent_rows(rows, n)
    if len(basis) < n:
        raise UnboundedPolyhedronError(f"Constraint rows have rank {len(basis)} < {n}")

    columns = inverse([rows[i] for i in basis])
    rays = []
    basis_mask = sum(1 << i for i in basis)
    for j, row_index in enumerate(basis):
        vector = primitive([columns[r][j] for r in range(n)])
        rays.append(_Ray(vector, basis_mask & ~(1 << row_index)))

    remaining = [i for i in range(len(rows)) if i not in set(basis)]
    for step, index in enumerate(remaining):
        row = rows[index]
        bit = 1 << index
        positive, negative, kept = [], [], []
        values = {}
        for ray in rays:
            s = sum(a * x for a, x in zip(row, ray.vector) if a and x)
            values[id(ray)] = s
            if s > 0:
                positive.append(ray)
                kept.append(ray)
            elif s < 0:
                negative.append(ray)
            else:
                ray.zeros |= bit
                kept.append(ray)
        if len(positive) * len(negative) > limit * 64:
            raise BudgetExceededError(
                f"Hull step {step} would test {len(positive) * len(negative)} ray pairs", len(rays)
            )
        created = []
        for p in positive:
            sp = values[id(p)]
            for q in negative:
                if not _is_adjacent(p, q, rays, n):
                    continue
                sq = values[id(q)]
                vector = primitive([sp * b - sq * a for a, b in zip(p.vector, q.vector)])
                created.append(_Ray(vector, (p.zeros & q.zeros) | bit))
        rays = kept + created
        if len(rays) > limit:
            logger.warning(f"Double description aborted with {len(rays)} rays (budget {limit})")
            raise BudgetExceededError(f"Intermediate ray count {len(rays)} exceeds budget {limit}", len(rays))
        logger.debug(f"Hull step {step + 1}/{len(remaining)}: {len(rays)} rays")
    return sorted({r.vector for r in rays})


def vertices_from_hrep(hrep: HRep, limit: int | None = None) -> VRep:
    """
    Enumerate the vertices of a bounded polyhedron given by inequalities and equalities.

    The equalities are eliminated first, leaving a parametrisation x = x0 + T y over
    the free coordinates y. The inequalities are homogenised to a cone in (y, t) whose
    extreme rays with t > 0 are the vertices.

    Args:
        hrep (HRep): The H-representation.
        limit (int | None): Ray budget for the double description.

    Returns:
        VRep: Distinct vertices in lexicographic order.

    Raises:
        EmptyPolyhedronError: If the system is infeasible.
        UnboundedPolyhedronError: If the polyhedron is unbounded.
        BudgetExceededError: If the enumeration outgrows the budget.
    """
    d = hrep.dimension
    augmented = [list(e.coefficients) + [e.value] for e in hrep.equalities]
    reduced, pivots = rref(augmented, d) if augmented else ([], [])
    if any(not any(row[:d]) and row[d] != 0 for row in reduced):
        raise EmptyPolyhedronError("Equalities are inconsistent")
    pivot_set = set(pivots)
    free = [c for c in range(d) if c not in pivot_set]
    k = len(free)

    x0 = [ZERO] * d
    for row, p in zip(reduced, pivots):
        x0[p] = row[d]
    # T[c][j]: coefficient of free parameter j in coordinate c
    T = [[ZERO] * k for _ in range(d)]
    for j, f in enumerate(free):
        T[f][j] = Fraction(1)
    for row, p in zip(reduced, pivots):
        for j, f in enumerate(free):
            T[p][j] = -row[f]

    cone_rows: list[tuple[int, ...]] = []
    for ineq in hrep.inequalities:
        g = [dot(ineq.coefficients, [T[c][j] for c in range(d)]) for j in range(k)]
        h = ineq.bound - dot(ineq.coefficients, x0)
        if not any(g):
            if h < 0:
                raise EmptyPolyhedronError(f"Inequality {ineq} contradicts the equalities")
            continue
        cone_rows.append(primitive([-v for v in g] + [h]))
    cone_rows = sorted(set(cone_rows))

    def lift(y: Sequence[Fraction]) -> Vector:
        return tuple(x0[c] + dot(T[c], y) for c in range(d))

    if k == 0:
        if not hrep.contains(x0):
            raise EmptyPolyhedronError("The unique solution of the equalities violates an inequality")
        return VRep(d, (tuple(x0),))

    cone_rows.append(tuple([0] * k + [1]))
    rays = extreme_rays(cone_rows, k + 1, limit)
    bounded = [r for r in rays if r[k] > 0]
    if not bounded:
        raise EmptyPolyhedronError("No feasible point")
    if len(bounded) != len(rays):
        raise UnboundedPolyhedronError("Polyhedron has a recession direction")
    vertices = sorted({lift([Fraction(v, r[k]) for v in r[:k]]) for r in bounded})
    logger.debug(f"Enumerated {len(vertices)} vertices in {k} free coordinates")
    return VRep(d, tuple(vertices))


def facets_from_vrep(vrep: VRep, limit: int | None = None) -> HRep:
    """
    Facet-defining inequalities of conv(points) within its affine hull.

    Every facet is written with integer coefficients supported on the hull's projection
    coordinates, scaled so that coefficients and bound have gcd 1. The returned HRep
    also carries the equalities of the affine hull.

    Raises:
        BudgetExceededError: If the enumeration outgrows the budget.
    """
    hull = affine_hull(vrep.points)
    d, J, k = vrep.dimension, hull.coordinates, hull.rank
    equalities = tuple(AffineEquality(*primitive_equality(e, v)) for e, v in hull.equalities)
    if k == 0:
        return HRep(d, (), equalities)

    rows = sorted({primitive([-p[j] for j in J] + [Fraction(1)]) for p in vrep.points})
    facets = []
    for ray in extreme_rays(rows, k + 1, limit):
        if not any(ray[:k]):
            continue
        coefficients = [ZERO] * d
        for j, c in zip(J, ray[:k]):
            coefficients[j] = Fraction(c)
        facets.append(AffineFunctional(tuple(coefficients), Fraction(ray[k])))
    facets.sort(key=lambda f: (f.coefficients, f.bound))
    logger.debug(f"Found {len(facets)} facets in affine dimension {k}")
    return HRep(d, tuple(facets), equalities)


def primitive_equality(coefficients: Sequence[Fraction], value: Fraction) -> tuple[Vector, Fraction]:
    scaled = primitive(list(coefficients) + [value])
    return tuple(Fraction(v) for v in scaled[:-1]), Fraction(scaled[-1])


def _scaled_separator(coefficients: Sequence[Fraction], bound: Fraction) -> AffineFunctional:
    scaled = primitive(list(coefficients) + [bound])
    return AffineFunctional(tuple(Fraction(v) for v in scaled[:-1]), Fraction(scaled[-1]))


def verify_certificate(point: Sequence[Fraction], vrep: VRep, certificate: MembershipCertificate) -> bool:
    """Exact check of an Inside or Outside certificate against the vertex list."""
    if isinstance(certificate, Inside):
        weights = certificate.weights
        if len(weights) != len(vrep.points) or any(w < 0 for w in weights) or sum(weights) != 1:
            return False
        combination = [ZERO] * vrep.dimension
        for w, v in zip(weights, vrep.points):
            if w:
                for c, x in enumerate(v):
                    combination[c] += w * x
        return tuple(combination) == tuple(point)
    separator = certificate.separator
    return separator.value(point) > separator.bound and all(separator.holds(v) for v in vrep.points)


def lp_membership(point: Sequence[Fraction], vrep: VRep) -> MembershipCertificate:
    """
    Decide whether a point lies in the convex hull of a vertex list.

    Points off the affine hull are separated by one of its equalities. Otherwise a
    Phase-I simplex on the hull's projection coordinates either finds convex weights or
    a Farkas vector, which becomes the separating functional.

    Args:
        point: Rational coordinates, same dimension as the vertices.
        vrep (VRep): The vertex list.

    Returns:
        Inside(weights) or Outside(separator), verified exactly.

    Raises:
        DimensionMismatchError: If the point has the wrong dimension.
    """
    point = tuple(Fraction(v) for v in point)
    if len(point) != vrep.dimension:
        raise DimensionMismatchError(f"Point has dimension {len(point)}, vertices {vrep.dimension}")
    hull = affine_hull(vrep.points)
    certificate: MembershipCertificate | None = None
    for e, value in hull.equalities:
        lhs = dot(e, point)
        if lhs > value:
            certificate = Outside(_scaled_separator(e, value))
        elif lhs < value:
            certificate = Outside(_scaled_separator([-c for c in e], -value))
        if certificate is not None:
            break

    if certificate is None:
        J = hull.coordinates
        columns = [[v[j] for j in J] + [Fraction(1)] for v in vrep.points]
        rhs = [point[j] for j in J] + [Fraction(1)]
        weights, farkas = feasibility(columns, rhs)
        if weights is not None:
            certificate = Inside(tuple(weights))
        else:
            coefficients = [ZERO] * vrep.dimension
            for j, y in zip(J, farkas):
                coefficients[j] = y
            certificate = Outside(_scaled_separator(coefficients, -farkas[-1]))

    if not verify_certificate(point, vrep, certificate):
        raise ArithmeticError("Membership certificate failed exact verification")
    return certificate
