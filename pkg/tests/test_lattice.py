from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plateau.lattice import (
    BallQuery,
    Cell,
    CubicalComplex,
    GridSpec,
    build_skeleton,
    cell_measure,
    cofaces,
    complex_from_text,
    complex_to_text,
    connected_components,
    restrict_to_ball,
)


def test_gridspec_validation():
    with pytest.raises(ValueError):
        GridSpec(0, 0, ())
    with pytest.raises(ValueError):
        GridSpec(7, 0, tuple((0, 1) for _ in range(7)))
    with pytest.raises(ValueError):
        GridSpec(2, 0, ((0, 1),))
    with pytest.raises(ValueError):
        GridSpec(2, 0, ((0, 0), (0, 1)))
    g = GridSpec(3, 2, ((0, 2), (0, 2), (0, 2)))
    assert g.side == Fraction(1, 4)


def test_cell_basics():
    c = Cell((1, 2, 3), 0b101)
    assert c.dim == 2
    assert c.axes() == [0, 2]
    assert len(c.faces()) == 4
    assert len(c.corners()) == 4
    assert c.barycenter() == (Fraction(3, 2), Fraction(2), Fraction(7, 2))


@given(
    n=st.integers(1, 4),
    data=st.data(),
)
@settings(max_examples=60, deadline=None)
def test_faces_of_faces_pair_up(n, data):
    """Every (d-2)-face of a cell is shared by exactly two (d-1)-faces."""
    mask = data.draw(st.integers(1, (1 << n) - 1))
    anchor = tuple(data.draw(st.integers(-3, 3)) for _ in range(n))
    c = Cell(anchor, mask)
    if c.dim < 2:
        return
    counts = {}
    for f in c.faces():
        for g in f.faces():
            counts[g] = counts.get(g, 0) + 1
    assert set(counts.values()) == {2}


def test_cofaces_inverse_of_faces():
    grid = GridSpec(3, 0, ((0, 2), (0, 2), (0, 2)))
    c = Cell((1, 1, 1), 0)
    for up in cofaces(c, grid):
        assert c in up.faces()
        assert grid.contains_cell(up)


def test_complex_closure_and_dims():
    grid = GridSpec(2, 0, ((0, 2), (0, 2)))
    square = Cell((0, 0), 0b11)
    X = CubicalComplex(grid, [square])
    assert len(X.cells_of_dim(2)) == 1
    assert len(X.cells_of_dim(1)) == 4
    assert len(X.cells_of_dim(0)) == 4
    assert X.euler_characteristic() == 1


def test_skeleton_counts():
    grid = GridSpec(2, 0, ((0, 2), (0, 2)))
    skel = build_skeleton(grid, 2)
    assert len(skel.cells_of_dim(0)) == 9
    assert len(skel.cells_of_dim(1)) == 12
    assert len(skel.cells_of_dim(2)) == 4
    with pytest.raises(ValueError):
        build_skeleton(grid, 3)


def test_cell_measure_dyadic():
    grid = GridSpec(2, 1, ((0, 2), (0, 2)))
    assert cell_measure(Cell((0, 0), 0b11), grid) == Fraction(1, 4)
    assert cell_measure(Cell((0, 0), 0b1), grid) == Fraction(1, 2)
    assert cell_measure(Cell((0, 0), 0), grid) == 1


def test_restrict_to_ball_modes():
    grid = GridSpec(2, 0, ((0, 4), (0, 4)))
    skel = build_skeleton(grid, 2)
    q = BallQuery((Fraction(2), Fraction(2)), Fraction(1))
    ball = restrict_to_ball(skel, q)
    # picked cells obey the bound; the face closure may add nearby faces
    assert all(
        sum((x - y) ** 2 for x, y in zip(c.barycenter(), q.center)) <= 1
        for c in ball.cells_of_dim(2)
    )
    shell = restrict_to_ball(skel, q, mode="sphere-shell")
    assert shell.cells_of_dim(2) <= ball.cells_of_dim(2)
    with pytest.raises(ValueError):
        restrict_to_ball(skel, q, mode="nope")
    with pytest.raises(ValueError):
        BallQuery((Fraction(0),), Fraction(0))


def test_connected_components():
    grid = GridSpec(2, 0, ((0, 5), (0, 5)))
    X = CubicalComplex(grid, [Cell((0, 0), 0b11), Cell((3, 3), 0b11)])
    comps = connected_components(X)
    assert len(comps) == 2
    assert sum(len(c.cells_of_dim(2)) for c in comps) == 2


def test_text_roundtrip():
    grid = GridSpec(3, 1, ((0, 2), (-1, 3), (0, 1)))
    X = CubicalComplex(grid, [Cell((0, 0, 0), 0b011), Cell((1, 2, 0), 0b001)])
    Y = complex_from_text(complex_to_text(X))
    assert X == Y
    with pytest.raises(ValueError):
        complex_from_text("")
    with pytest.raises(ValueError):
        complex_from_text("2 0 0 1\n")  # malformed header


def test_cell_outside_box_rejected():
    grid = GridSpec(2, 0, ((0, 1), (0, 1)))
    with pytest.raises(ValueError):
        CubicalComplex(grid, [Cell((2, 0), 0b11)])


def test_export_off(tmp_path):
    from plateau.lattice import export_off

    grid = GridSpec(3, 0, ((0, 2), (0, 2), (0, 2)))
    X = CubicalComplex(grid, [Cell((0, 0, 0), 0b011), Cell((0, 1, 1), 0b110)])
    path = tmp_path / "out.off"
    export_off(X, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "OFF"
    nverts, nfaces, _ = map(int, lines[1].split())
    assert nfaces == 2
    assert len(lines) == 2 + nverts + nfaces
