import random

import pytest

from plateau.lattice import Cell, CubicalComplex
from plateau.linalg import GF2
from plateau.spanning import (
    CohomologyClass,
    SpanningProblem,
    Surface,
    canonical_L,
    fundamental_cycle,
    spanning_lemma_suite,
    spans,
)


def test_canonical_L_three_rings(tiny_problem):
    assert len(tiny_problem.L) == 3
    comps_hit = set()
    for cls in tiny_problem.L:
        # each class pairs to 1 with exactly one ring's fundamental cycle
        lower = sorted(tiny_problem.A.cells_of_dim(1))
        pos = {c: i for i, c in enumerate(lower)}
        zs = {c.anchor[2] for c, i in pos.items() if cls.rep[i]}
        assert len(zs) == 1
        comps_hit.add(zs.pop())
    assert comps_hit == {1, 2, 3}


def test_zero_class_rejected(disk_problem):
    A = disk_problem.A
    rep = [GF2.zero] * len(A.cells_of_dim(1))
    cls = CohomologyClass(A, 1, rep, "zero")
    with pytest.raises(ValueError, match="zero class"):
        SpanningProblem(A, disk_problem.grid, 2, [cls], GF2)


def test_non_cocycle_rejected(disk_problem):
    A = disk_problem.A
    lower = sorted(A.cells_of_dim(1))
    rep = [GF2.zero] * len(lower)
    rep[0] = GF2.one  # a single edge of a ring is not a cocycle in degree 1?
    cls = CohomologyClass(A, 1, rep, "edge")
    # on a closed curve every 1-cochain is a cocycle; use degree mismatch
    with pytest.raises(ValueError, match="degree"):
        SpanningProblem(A, disk_problem.grid, 3, [cls], GF2)


def test_non_cocycle_rejected_torus(torus_problem):
    A = torus_problem.A
    lower = sorted(A.cells_of_dim(1))
    rep = [GF2.zero] * len(lower)
    rep[0] = GF2.one  # single edge on a 2-complex: coboundary is nonzero
    cls = CohomologyClass(A, 1, rep, "edge")
    with pytest.raises(ValueError, match="cocycle"):
        SpanningProblem(A, torus_problem.grid, 2, [cls], GF2)


def test_boundary_dim_invariant(disk_problem):
    grid = disk_problem.grid
    square = CubicalComplex(grid, [Cell((1, 1), 0b11)])
    with pytest.raises(ValueError, match="dimension"):
        SpanningProblem(square, grid, 1, [], GF2)


def test_disk_spans_iff_complete(disk_problem):
    region = [
        Cell((x, y), 0b11) for x in range(1, 4) for y in range(1, 4)
    ]
    full = Surface(disk_problem, frozenset(region))
    assert spans(full)
    for drop in region:
        assert not spans(full.without(drop))
    # cells outside the ring do not help
    outside = Surface(
        disk_problem,
        frozenset(region[:-1]) | {Cell((0, 0), 0b11)},
    )
    assert not spans(outside)


def test_spans_matches_witness_system(tiny_problem, tiny_system):
    rng = random.Random(7)
    box = tiny_problem.box_mcells()
    for _ in range(25):
        mcells = frozenset(c for c in box if rng.random() < 0.8)
        X = Surface(tiny_problem, mcells)
        assert spans(X) == tiny_system.spans_surface(X)


def test_fundamental_cycle_is_cycle(tiny_problem):
    from plateau.lattice import connected_components
    from plateau.linking import chain_boundary

    for comp in connected_components(tiny_problem.A):
        cyc = fundamental_cycle(comp, 2)
        assert chain_boundary(cyc) == {}
        assert all(v in (1, -1) for v in cyc.values())


def test_surface_free_mcells(tiny_problem):
    X = Surface(tiny_problem, frozenset(tiny_problem.box_mcells()))
    a2 = tiny_problem.A.cells_of_dim(2)
    assert all(c not in a2 for c in X.free_mcells())
    Y = X.with_added([])
    assert Y.mcells == X.mcells


def test_spanning_lemma_suite(disk_problem, tiny_problem):
    for problem in (disk_problem, tiny_problem):
        report = spanning_lemma_suite(problem, trials=20, seed=3)
        assert report.all_passed, report
