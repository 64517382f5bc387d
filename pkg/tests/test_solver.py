import random
from fractions import Fraction

import pytest

from plateau.lattice import Cell
from plateau.solver import (
    SolverConfig,
    assert_one_minimal,
    contract_to_witnesses,
    greedy_minimize,
    initial_fill,
    local_replace,
    skeleton_push,
    solve,
    surface_weight,
)
from plateau.spanning import Surface, spans


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(removal_order="nope")
    with pytest.raises(ValueError):
        SolverConfig(local_box_side=3)
    with pytest.raises(ValueError):
        SolverConfig(max_passes=0)


def test_initial_fill_spans(disk_problem, disk_system):
    X = initial_fill(disk_problem, disk_system)
    assert disk_system.spans_surface(X)
    assert spans(X)


def test_greedy_minimize_disk(disk_problem, disk_system):
    X = initial_fill(disk_problem, disk_system)
    Y, report = greedy_minimize(X, SolverConfig(), disk_system)
    assert report.spans_verified
    assert surface_weight(Y) == 9
    assert_one_minimal(Y, disk_system)


def test_greedy_random_orders_span(disk_problem, disk_system):
    X = initial_fill(disk_problem, disk_system)
    for seed in range(5):
        cfg = SolverConfig(removal_order="random", seed=seed)
        Y, report = greedy_minimize(X, cfg, disk_system)
        assert report.spans_verified
        assert_one_minimal(Y, disk_system)
        assert surface_weight(Y) >= 9


def test_greedy_requires_spanning_start(disk_problem, disk_system):
    empty = Surface(disk_problem, frozenset())
    with pytest.raises(ValueError):
        greedy_minimize(empty, SolverConfig(), disk_system)


def test_contract_to_witnesses_spans(tiny_problem, tiny_system):
    X = contract_to_witnesses(None, tiny_system, tiny_problem)
    assert tiny_system.spans_surface(X)
    # restricted contraction of a spanning surface also spans
    Y = contract_to_witnesses(X, tiny_system)
    assert tiny_system.spans_surface(Y)
    assert Y.mcells <= X.mcells


def test_local_replace_flattens_bump(disk_problem, disk_system):
    """A surface with a dent is repaired to the flat filling in one region."""
    region = {
        Cell((x, y), 0b11) for x in range(1, 4) for y in range(1, 4)
    }
    # replace the center cell by a bump around it in a fictitious spanning
    # surface: here we simply test that the flat disk is already optimal
    X = Surface(disk_problem, frozenset(region))
    Y = local_replace(X, (1, 1), (3, 3), disk_system)
    assert Y.mcells == X.mcells  # already minimal inside the region


def test_local_replace_removes_extra_cell(disk_problem, disk_system):
    region = {Cell((x, y), 0b11) for x in range(1, 4) for y in range(1, 4)}
    extra = Cell((0, 0), 0b11)
    X = Surface(disk_problem, frozenset(region | {extra}))
    Y = local_replace(X, (0, 0), (1, 2), disk_system)
    assert surface_weight(Y) == surface_weight(X) - 1
    assert extra not in Y.mcells
    assert disk_system.spans_surface(Y)


def test_local_replace_is_conservative_on_closed_traces(disk_problem, disk_system):
    """Cells that fill their region's frontier circle are kept: dropping
    them would change the relative coboundary data even though the global
    verdict would survive."""
    region = {Cell((x, y), 0b11) for x in range(1, 4) for y in range(1, 4)}
    extra = {Cell((0, 0), 0b11), Cell((0, 1), 0b11)}
    X = Surface(disk_problem, frozenset(region | extra))
    Y = local_replace(X, (0, 0), (1, 2), disk_system)
    assert Y.mcells == X.mcells


def test_local_replace_rejects_bad_region(disk_problem):
    X = Surface(
        disk_problem,
        frozenset(Cell((x, y), 0b11) for x in range(1, 4) for y in range(1, 4)),
    )
    with pytest.raises(ValueError, match="outside the grid box"):
        local_replace(X, (0, 0), (9, 9))
    with pytest.raises(ValueError, match="touches the boundary"):
        local_replace(X, (0, 0), (3, 3))  # interior contains part of the ring


def test_local_replace_random_soundness(tiny_problem, tiny_system):
    """Seeded random spanning surfaces stay spanning under local_replace."""
    from plateau.solver import _admissible_regions

    X0 = initial_fill(tiny_problem, tiny_system)
    regions = list(_admissible_regions(tiny_problem, 2))
    rng = random.Random(5)
    failures = 0
    for seed in range(6):
        cfg = SolverConfig(removal_order="random", seed=seed)
        X, _ = greedy_minimize(X0, cfg, tiny_system)
        for lows, highs in rng.sample(regions, 8):
            X = local_replace(X, lows, highs, tiny_system)
            if not tiny_system.spans_surface(X):
                failures += 1
    assert failures == 0


def test_skeleton_push_bound_and_domination(tiny_problem, tiny_system):
    X = initial_fill(tiny_problem, tiny_system)
    X, _ = greedy_minimize(X, SolverConfig(), tiny_system)
    bound = Fraction(4 * 3) ** 2
    outcomes = []
    from plateau.solver import _admissible_regions

    for lows, highs in list(_admissible_regions(tiny_problem, 2))[::3]:
        out = skeleton_push(X, lows, tiny_system)
        outcomes.append(out)
        assert out.shadow_measure <= bound * out.interior_measure
        assert out.ratio_ok
        if out.accepted:
            assert tiny_system.spans_surface(out.surface)
    assert any(o.accepted for o in outcomes)


def test_skeleton_push_rejects_bad_block(tiny_problem):
    X = Surface(tiny_problem, frozenset(tiny_problem.box_mcells()))
    with pytest.raises(ValueError, match="outside the grid box"):
        skeleton_push(X, (3, 3, 5))
    with pytest.raises(ValueError, match="touches A"):
        skeleton_push(X, (2, 2, 0))


def test_solve_disk(disk_problem):
    X, report = solve(disk_problem, SolverConfig())
    assert report.spans_verified
    assert surface_weight(X) == 9
    assert report.final_weight == 9
    d = report.to_dict()
    assert d["final_weight"] == "9"
    assert d["spans_verified"] is True


def test_solve_is_deterministic(disk_problem):
    X1, r1 = solve(disk_problem, SolverConfig())
    X2, r2 = solve(disk_problem, SolverConfig())
    assert X1.mcells == X2.mcells
    assert r1.to_dict()["moves"] == r2.to_dict()["moves"]
