import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plateau.cochain import (
    CellIndexing,
    CochainComplexData,
    boundary_incidences,
    boundary_matrix,
    cohomology,
    component_count,
    restriction_image,
)
from plateau.lattice import Cell, CubicalComplex, GridSpec, build_skeleton
from plateau.linalg import GF2, RATIONAL, Coeffs

GF5 = Coeffs("gfp", 5)


def ring_complex(grid, lo=(0, 0), hi=(2, 2), fixed=()):
    from plateau.scenarios import _rectangle_ring

    return CubicalComplex(
        grid, _rectangle_ring(grid, (0, 1), lo, hi, dict(fixed))
    )


def test_boundary_incidences_signs():
    c = Cell((0, 0), 0b11)
    inc = dict(boundary_incidences(c))
    assert len(inc) == 4
    # boundary of the boundary vanishes with integer signs
    total = {}
    for f, s in inc.items():
        for v, t in boundary_incidences(f):
            total[v] = total.get(v, 0) + s * t
    assert all(v == 0 for v in total.values())


@given(
    n=st.integers(2, 4),
    data=st.data(),
)
@settings(max_examples=50, deadline=None)
def test_boundary_squared_zero(n, data):
    mask = data.draw(st.integers(3, (1 << n) - 1))
    c = Cell(tuple(data.draw(st.integers(0, 3)) for _ in range(n)), mask)
    if c.dim < 2:
        return
    total = {}
    for f, s in boundary_incidences(c):
        for v, t in boundary_incidences(f):
            total[v] = total.get(v, 0) + s * t
    assert all(v == 0 for v in total.values())


@pytest.mark.parametrize("F", [GF2, GF5, RATIONAL])
def test_delta_squared_zero(F):
    grid = GridSpec(3, 0, ((0, 2), (0, 2), (0, 2)))
    data = CochainComplexData(build_skeleton(grid, 3), F)
    d0, d1 = data.delta(0), data.delta(1)
    for j in range(d0.cols):
        col = [d0[i, j] for i in range(d0.rows)]
        assert all(v == F.zero for v in d1.apply(col))


def test_boundary_matrix_shape():
    grid = GridSpec(2, 0, ((0, 2), (0, 2)))
    skel = build_skeleton(grid, 2)
    idx = CellIndexing(skel)
    M = boundary_matrix(skel, 2, GF2, idx)
    assert (M.rows, M.cols) == (12, 4)


@pytest.mark.parametrize("F", [GF2, GF5, RATIONAL])
def test_box_cohomology_trivial(F):
    grid = GridSpec(2, 0, ((0, 3), (0, 3)))
    skel = build_skeleton(grid, 2)
    assert cohomology(skel, 0, F).dim == 1
    assert cohomology(skel, 0, F, reduced=True).dim == 0
    assert cohomology(skel, 1, F).dim == 0


@pytest.mark.parametrize("F", [GF2, GF5, RATIONAL])
def test_circle_cohomology(F):
    grid = GridSpec(2, 0, ((0, 3), (0, 3)))
    ring = ring_complex(grid, (0, 0), (3, 3))
    assert cohomology(ring, 0, F).dim == 1
    assert cohomology(ring, 1, F).dim == 1


def test_torus_cohomology_gf2(torus_problem):
    A = torus_problem.A
    assert cohomology(A, 0, GF2).dim == 1
    assert cohomology(A, 1, GF2).dim == 2
    assert cohomology(A, 2, GF2).dim == 1
    assert A.euler_characteristic() == 0


def test_restriction_image_full_vs_ring():
    grid = GridSpec(2, 0, ((0, 3), (0, 3)))
    skel = build_skeleton(grid, 2)
    ring = ring_complex(grid, (0, 0), (3, 3))
    img = restriction_image(skel, ring, 1, GF2)
    # the ring class does not extend over the filled box
    assert img.quotient_dim() == 0
    img_self = restriction_image(ring, ring, 1, GF2)
    assert img_self.quotient_dim() == 1
    with pytest.raises(ValueError):
        restriction_image(ring, skel, 1, GF2)


def test_component_count():
    grid = GridSpec(2, 0, ((0, 6), (0, 6)))
    two = CubicalComplex(
        grid, [Cell((0, 0), 0b11), Cell((4, 4), 0b11)]
    )
    assert component_count(two) == 2
