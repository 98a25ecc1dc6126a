from fractions import Fraction

import pytest

from app.exactgeom import (
    AffineFunctional,
    BudgetExceededError,
    DimensionMismatchError,
    EmptyPolyhedronError,
    HRep,
    Inside,
    Outside,
    UnboundedPolyhedronError,
    VRep,
    affine_hull,
    affine_rank,
    facets_from_vrep,
    lp_membership,
    primitive,
    rank,
    verify_certificate,
    vertices_from_hrep,
)
from app.exactgeom.linalg import dot
from app.exactgeom.simplex import feasibility

F = Fraction


def _box(n: int) -> HRep:
    rows = []
    for i in range(n):
        unit = [F(0)] * n
        unit[i] = F(1)
        rows.append(AffineFunctional(tuple(unit), F(1)))
        rows.append(AffineFunctional(tuple(-v for v in unit), F(0)))
    return HRep(n, tuple(rows))


SQUARE = VRep.of([(0, 0), (0, 1), (1, 0), (1, 1)])
TRIANGLE_3D = VRep.of([(0, 0, 0), (1, 0, 0), (0, 1, 0)])


def test_primitive_and_rank():
    assert primitive([F(1, 2), F(-3, 4)]) == (2, -3)
    assert primitive([0, 0]) == (0, 0)
    assert rank([[F(1), F(2)], [F(2), F(4)]]) == 1


def test_affine_hull_of_a_simplex():
    points = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    hull = affine_hull([[F(v) for v in p] for p in points])
    assert hull.rank == 2
    assert len(hull.equalities) == 1
    e, value = hull.equalities[0]
    assert all(dot(e, [F(v) for v in p]) == value for p in points)
    assert affine_rank([[F(2), F(2)]]) == 0


def test_vertices_of_a_square():
    vrep = vertices_from_hrep(_box(2))
    assert vrep.points == ((0, 0), (0, 1), (1, 0), (1, 1))


def test_vertices_with_equalities():
    # the unit simplex in R^3
    from app.exactgeom import AffineEquality

    hrep = HRep(
        3,
        tuple(AffineFunctional(tuple(F(-1) if j == i else F(0) for j in range(3)), F(0)) for i in range(3)),
        (AffineEquality((F(1), F(1), F(1)), F(1)),),
    )
    assert set(vertices_from_hrep(hrep).points) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}


def test_unbounded_and_empty_polyhedra():
    quadrant = HRep(2, (AffineFunctional((F(-1), F(0)), F(0)), AffineFunctional((F(0), F(-1)), F(0))))
    with pytest.raises(UnboundedPolyhedronError):
        vertices_from_hrep(quadrant)
    empty = HRep(1, (AffineFunctional((F(1),), F(-1)), AffineFunctional((F(-1),), F(0))))
    with pytest.raises(EmptyPolyhedronError):
        vertices_from_hrep(empty)


def test_vertex_budget():
    with pytest.raises(BudgetExceededError) as info:
        vertices_from_hrep(_box(3), limit=2)
    assert info.value.partial > 2


def test_facets_of_a_square():
    hrep = facets_from_vrep(SQUARE)
    facets = {(f.coefficients, f.bound) for f in hrep.inequalities}
    assert facets == {((-1, 0), 0), ((0, -1), 0), ((0, 1), 1), ((1, 0), 1)}
    assert hrep.equalities == ()


def test_facets_of_a_lower_dimensional_polytope():
    hrep = facets_from_vrep(TRIANGLE_3D)
    assert len(hrep.inequalities) == 3
    assert len(hrep.equalities) == 1
    assert all(hrep.contains(p) for p in TRIANGLE_3D.points)
    assert not hrep.contains((F(1), F(1), F(0)))


def test_membership_inside():
    point = (F(1, 2), F(1, 3))
    certificate = lp_membership(point, SQUARE)
    assert isinstance(certificate, Inside)
    assert certificate.inside
    assert sum(certificate.weights) == 1
    assert verify_certificate(point, SQUARE, certificate)


def test_membership_outside():
    point = (F(2), F(0))
    certificate = lp_membership(point, SQUARE)
    assert isinstance(certificate, Outside)
    separator = certificate.separator
    assert separator.value(point) > separator.bound
    assert all(separator.holds(v) for v in SQUARE.points)
    assert all(c.denominator == 1 for c in separator.coefficients)


def test_membership_off_the_affine_hull():
    point = (F(0), F(0), F(1))
    certificate = lp_membership(point, TRIANGLE_3D)
    assert not certificate.inside
    assert certificate.separator.value(point) > certificate.separator.bound


def test_membership_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        lp_membership((F(0),), SQUARE)


def test_tampered_certificate_fails_verification():
    assert not verify_certificate((F(1, 2), F(1, 2)), SQUARE, Inside((F(1), F(0), F(0), F(0))))


def test_feasibility_returns_a_farkas_vector():
    weights, _ = feasibility([[F(1), F(0)], [F(0), F(1)]], [F(1), F(1)])
    assert weights == [1, 1]
    columns, rhs = [[F(1)]], [F(-1)]
    weights, y = feasibility(columns, rhs)
    assert weights is None
    assert all(dot(y, c) <= 0 for c in columns)
    assert dot(y, rhs) > 0


def test_functional_needs_a_nonzero_coefficient():
    with pytest.raises(ValueError):
        AffineFunctional((F(0), F(0)), F(1))
