"""Minimization of weighted area over spanning surfaces.

Pipeline: fill the full m-skeleton (contractible box, so it spans), greedily
remove cells while the spanning verdict survives, then sweep exhaustive local
replacements over small subboxes.  Every accepted move preserves spanning by
construction and the final surface is 1-minimal.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .lattice import Cell, CubicalComplex, GridSpec, cell_measure
from .spanning import (
    SpanningProblem,
    Surface,
    relative_coboundary_dominates,
)
from .witness import WitnessSystem, build_witness_system


@dataclass(frozen=True)
class SolverConfig:
    removal_order: str = "heaviest-first"
    local_box_side: int = 2
    max_passes: int = 4
    seed: int = 0

    def __post_init__(self) -> None:
        if self.removal_order not in ("heaviest-first", "random"):
            raise ValueError(f"unknown removal order {self.removal_order!r}")
        if not 1 <= self.local_box_side <= 2:
            raise ValueError("local_box_side must be 1 or 2")
        if self.max_passes < 1:
            raise ValueError("max_passes must be positive")


@dataclass
class SolveReport:
    initial_weight: Fraction
    final_weight: Fraction
    moves: list[tuple[str, Fraction]] = field(default_factory=list)
    spans_verified: bool = False
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        return {
            "initial_weight": _frac_str(self.initial_weight),
            "final_weight": _frac_str(self.final_weight),
            "moves": [[kind, _frac_str(delta)] for kind, delta in self.moves],
            "spans_verified": self.spans_verified,
            "wall_time_seconds": round(self.wall_time, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def cell_weight(cell: Cell, problem: SpanningProblem) -> Fraction:
    return problem.density.at_cell(cell, problem.grid) * cell_measure(
        cell, problem.grid
    )


def surface_weight(X: Surface) -> Fraction:
    """Weighted m-measure of X minus A, exactly."""
    return sum(
        (cell_weight(c, X.problem) for c in X.free_mcells()), Fraction(0)
    )


def initial_fill(problem: SpanningProblem,
                 system: Optional[WitnessSystem] = None) -> Surface:
    """A u all m-cells of the box; spans because the box is contractible."""
    X = problem.surface(problem.box_mcells())
    system = system or build_witness_system(problem)
    if not system.spans_surface(X):
        raise AssertionError("full skeleton fill does not span; inconsistent L")
    return X


def greedy_minimize(
    X0: Surface, cfg: SolverConfig, system: Optional[WitnessSystem] = None
) -> tuple[Surface, SolveReport]:
    """Remove cells one at a time while every class keeps a witness chain.

    The result is 1-minimal: no single remaining cell can be removed without
    breaking the spanning verdict.
    """
    problem = X0.problem
    t0 = time.monotonic()
    system = system or build_witness_system(problem)
    if not system.spans_surface(X0):
        raise ValueError("greedy_minimize requires a spanning start surface")
    spaces = system.copy_spaces()
    a_cells = problem.A.cells_of_dim(problem.m)
    present = set(X0.mcells)
    for cell in system.mcells:
        if cell not in present and cell not in a_cells:
            ok = all(s.constrain_zero(system.column[cell]) for s in spaces)
            if not ok:
                raise ValueError("start surface lost a witness (internal error)")

    free = sorted(c for c in present if c not in a_cells)
    if cfg.removal_order == "heaviest-first":
        free.sort(key=lambda c: (-cell_weight(c, problem), c.anchor, c.free_axes))
    else:
        rng = random.Random(cfg.seed)
        rng.shuffle(free)

    report = SolveReport(
        initial_weight=surface_weight(X0), final_weight=surface_weight(X0)
    )
    removed: set[Cell] = set()
    changed = True
    while changed:
        changed = False
        for cell in free:
            if cell in removed:
                continue
            col = system.column[cell]
            if all(s.can_zero(col) for s in spaces):
                for s in spaces:
                    s.constrain_zero(col)
                removed.add(cell)
                delta = cell_weight(cell, problem)
                report.final_weight -= delta
                report.moves.append(("remove", -delta))
                changed = True
    result = Surface(problem, frozenset(present - removed))
    report.spans_verified = system.spans_surface(result)
    report.wall_time = time.monotonic() - t0
    if not report.spans_verified:
        raise AssertionError("greedy result lost the spanning property")
    return result, report


def contract_to_witnesses(
    X: Optional[Surface] = None,
    system: Optional[WitnessSystem] = None,
    problem: Optional[SpanningProblem] = None,
) -> Surface:
    """Union of one low-weight witness chain per class.

    Within each class's witness space (restricted to X when one is given,
    otherwise over the whole box), coordinates are zeroed greedily
    heaviest-first; the surviving particular member is a witness chain
    supported on the kept cells, so the union spans by construction.  The
    unrestricted form escapes poor 1-minimal surfaces that greedy removal
    gets stuck on.
    """
    if problem is None:
        if X is None:
            raise ValueError("need a surface or a problem")
        problem = X.problem
    system = system or build_witness_system(problem)
    a_mask = system.mask_of(problem.A.cells_of_dim(problem.m))
    allowed = system.full_mask() if X is None else (
        system.mask_of(X.mcells) | a_mask
    )
    # several deterministic zeroing orders; per class the lightest survivor
    # wins (which cells a greedy zeroing leaves is highly order-sensitive)
    n = problem.grid.n
    orders = []
    for axis in range(n):
        for sign in (1, -1):
            orders.append(
                sorted(
                    system.mcells,
                    key=lambda c, a=axis, s=sign: (
                        -cell_weight(c, problem), s * c.anchor[a],
                        c.anchor, c.free_axes,
                    ),
                )
            )
    def mask_weight(mask: int) -> Fraction:
        return sum(
            (
                cell_weight(system.mcells[b.bit_length() - 1], problem)
                for b in _mask_bits(mask)
            ),
            Fraction(0),
        )

    candidates: list[list[int]] = []
    for s in system.spaces:
        supports: list[int] = []
        for order in orders:
            sp = s.copy()
            v = system.full_mask() & ~allowed
            while v:
                bit = v & -v
                if not sp.constrain_zero(bit.bit_length() - 1):
                    raise ValueError(
                        "contract_to_witnesses requires a spanning surface"
                    )
                v ^= bit
            for c in order:
                col = system.column[c]
                if allowed >> col & 1 and not a_mask >> col & 1:
                    sp.constrain_zero(col)
            support = sp.support_mask() & ~a_mask
            if support not in supports:
                supports.append(support)
        candidates.append(supports)

    # the union weight rewards sharing cells across classes, so pick one
    # candidate witness per class jointly when that is enumerable
    keep = 0
    total = 1
    for supports in candidates:
        total *= len(supports)
    if total <= 4096:
        best_w: Optional[Fraction] = None
        for combo in itertools.product(*candidates):
            union = 0
            for s_mask in combo:
                union |= s_mask
            w = mask_weight(union)
            if best_w is None or w < best_w:
                best_w, keep = w, union
    else:
        for supports in candidates:
            new = min(
                supports, key=lambda s_mask: (mask_weight(s_mask & ~keep), s_mask)
            )
            keep |= new
    keep &= ~a_mask
    cells = frozenset(
        system.mcells[b.bit_length() - 1] for b in _mask_bits(keep)
    )
    return Surface(problem, cells)


def _mask_bits(mask: int):
    while mask:
        bit = mask & -mask
        yield bit
        mask ^= bit


# ---------------------------------------------------------------------------
# local replacement (exhaustive on small subboxes)


def _region_cells(grid: GridSpec, lows: Sequence[int], highs: Sequence[int],
                  skeleton: CubicalComplex, dim: int) -> tuple[list[Cell], list[Cell]]:
    """(interior, frontier) d-cells of the grid inside the closed region."""
    interior, frontier = [], []
    for c in skeleton.sorted_cells(dim):
        inside = True
        on_boundary = False
        for a in range(grid.n):
            lo = c.anchor[a]
            hi = lo + (1 if c.has_axis(a) else 0)
            if lo < lows[a] or hi > highs[a]:
                inside = False
                break
            if not c.has_axis(a) and (lo == lows[a] or lo == highs[a]):
                on_boundary = True
        if not inside:
            continue
        (frontier if on_boundary else interior).append(c)
    return interior, frontier


def _cells_in_region(cells: Iterable[Cell], lows, highs, n: int,
                     boundary_only: bool = False) -> list[Cell]:
    out = []
    for c in cells:
        inside = True
        on_boundary = False
        for a in range(n):
            lo = c.anchor[a]
            hi = lo + (1 if c.has_axis(a) else 0)
            if lo < lows[a] or hi > highs[a]:
                inside = False
                break
            if not c.has_axis(a) and (lo == lows[a] or lo == highs[a]):
                on_boundary = True
        if inside and (on_boundary or not boundary_only):
            out.append((c, on_boundary))
    if boundary_only:
        return [c for c, ob in out if ob]
    return [c for c, _ in out]


def local_replace(
    X: Surface, lows: Sequence[int], highs: Sequence[int],
    system: Optional[WitnessSystem] = None,
) -> Surface:
    """Exhaustive minimum-weight refilling of X inside one small region.

    The interior must avoid A.  A candidate refill is accepted iff its
    restriction image on the frontier trace is dominated by the current one,
    which preserves the global spanning verdict.
    """
    problem = X.problem
    grid = problem.grid
    n = grid.n
    m = problem.m
    for a in range(n):
        if not grid.box[a][0] <= lows[a] < highs[a] <= grid.box[a][1]:
            raise ValueError("region outside the grid box")
    # interior must be disjoint from A
    interior_A = _cells_in_region(problem.A.cells, lows, highs, n)
    frontier_A = set(_cells_in_region(problem.A.cells, lows, highs, n, True))
    if any(c not in frontier_A for c in interior_A):
        raise ValueError("region interior touches the boundary complex A")

    from .lattice import build_skeleton

    skel = build_skeleton(
        GridSpec(n, grid.k, tuple((lows[a], highs[a]) for a in range(n))), m
    )
    region_grid = skel.grid
    candidates, _ = _region_cells(region_grid, lows, highs, skel, m)
    current_inside = [c for c in X.mcells if c in set(candidates)]
    current_set = frozenset(current_inside)
    Xcells_region = _cells_in_region(X.complex.cells, lows, highs, n)
    T_cells = _cells_in_region(X.complex.cells, lows, highs, n, True)
    T = CubicalComplex(region_grid, T_cells, closed=True)
    Xin = CubicalComplex(region_grid, Xcells_region, closed=True)
    current_weight = sum(
        (cell_weight(c, problem) for c in current_inside), Fraction(0)
    )

    subsets = []
    for r in range(len(candidates) + 1):
        for combo in itertools.combinations(candidates, r):
            w = sum((cell_weight(c, problem) for c in combo), Fraction(0))
            if w < current_weight:
                subsets.append((w, combo))
    subsets.sort(key=lambda t: (t[0], t[1]))

    best: Optional[frozenset[Cell]] = None
    for w, combo in subsets:
        Y = CubicalComplex(
            region_grid, set(T.cells) | set(combo)
        )
        if relative_coboundary_dominates(Y, Xin, T, m - 1, problem.coeffs):
            best = frozenset(combo)
            break
    if best is None or best == current_set:
        return X
    new_mcells = (X.mcells - current_set) | best
    result = Surface(problem, frozenset(new_mcells))
    system = system or build_witness_system(problem)
    if not system.spans_surface(result):
        raise AssertionError("local replacement broke the spanning verdict")
    return result


# ---------------------------------------------------------------------------
# skeleton push (central projection of a coarse block onto its frontier)


@dataclass
class PushOutcome:
    surface: Surface
    accepted: bool
    shadow_measure: Fraction
    interior_measure: Fraction

    @property
    def ratio_ok(self) -> bool:
        n = self.surface.problem.grid.n
        m = self.surface.problem.m
        bound = Fraction(4 * n) ** m
        return self.shadow_measure <= bound * self.interior_measure


def _project_point(p: tuple[Fraction, ...], v: tuple[Fraction, ...]):
    """Radial projection of v from center p onto the frontier of the 2-block."""
    d = tuple(x - y for x, y in zip(v, p))
    mx = max(abs(x) for x in d)
    if mx == 0:
        return None
    t = 1 / mx
    landing = tuple(y + t * x for x, y in zip(d, p))
    facets = [
        (a, 1 if d[a] > 0 else -1) for a in range(len(d)) if abs(d[a]) == mx
    ]
    return landing, facets


def skeleton_push(X: Surface, lows: Sequence[int],
                  system: Optional[WitnessSystem] = None) -> PushOutcome:
    """Push X out of the open coarse block (side 2) onto its frontier.

    The interior content is replaced by the boundary cells met by the radial
    cones from the block center; the move is rolled back if the relative
    coboundary domination fails (the continuous projection argument does not
    automatically survive rounding to cells).
    """
    problem = X.problem
    grid = problem.grid
    n, m = grid.n, problem.m
    highs = [lo + 2 for lo in lows]
    for a in range(n):
        if not grid.box[a][0] <= lows[a] < highs[a] <= grid.box[a][1]:
            raise ValueError("coarse block outside the grid box")
    interior_A = _cells_in_region(problem.A.cells, lows, highs, n)
    frontier_A = set(_cells_in_region(problem.A.cells, lows, highs, n, True))
    if any(c not in frontier_A for c in interior_A):
        raise ValueError("coarse block interior touches A")

    from .lattice import build_skeleton

    block_grid = GridSpec(n, grid.k, tuple((lows[a], highs[a]) for a in range(n)))
    skel = build_skeleton(block_grid, m)
    interior, frontier = _region_cells(block_grid, lows, highs, skel, m)
    interior_set = set(interior)
    inside_now = sorted(c for c in X.mcells if c in interior_set)
    if not inside_now:
        return PushOutcome(X, True, Fraction(0), Fraction(0))

    center = tuple(Fraction(lo + 1) for lo in lows)
    frontier_by_facet: dict[tuple[int, int], list[Cell]] = {}
    for b in frontier:
        for a in range(n):
            if not b.has_axis(a):
                if b.anchor[a] == lows[a]:
                    frontier_by_facet.setdefault((a, -1), []).append(b)
                if b.anchor[a] == highs[a]:
                    frontier_by_facet.setdefault((a, 1), []).append(b)

    shadow: set[Cell] = set()
    for c in inside_now:
        landings: dict[tuple[int, int], list[tuple[Fraction, ...]]] = {}
        for corner in c.corners():
            pt = _project_point(center, tuple(Fraction(x) for x in corner))
            if pt is None:
                continue
            landing, facets = pt
            for facet in facets:
                landings.setdefault(facet, []).append(landing)
        for facet, pts in landings.items():
            axes = [a for a in range(n) if a != facet[0]]
            los = [min(p[a] for p in pts) for a in axes]
            his = [max(p[a] for p in pts) for a in axes]
            for b in frontier_by_facet.get(facet, []):
                ok = True
                for i, a in enumerate(axes):
                    blo = Fraction(b.anchor[a])
                    bhi = blo + (1 if b.has_axis(a) else 0)
                    if bhi < los[i] or blo > his[i]:
                        ok = False
                        break
                if ok and b.dim == m:
                    shadow.add(b)

    shadow_measure = sum(
        (cell_measure(b, grid) for b in shadow), Fraction(0)
    )
    interior_measure = sum(
        (cell_measure(c, grid) for c in inside_now), Fraction(0)
    )
    bound = Fraction(4 * n) ** m
    if shadow_measure > bound * interior_measure:
        raise AssertionError("skeleton push exceeded the (4n)^m measure bound")

    T_cells = _cells_in_region(X.complex.cells, lows, highs, n, True)
    T = CubicalComplex(block_grid, T_cells, closed=True)
    Xin = CubicalComplex(
        block_grid, _cells_in_region(X.complex.cells, lows, highs, n), closed=True
    )
    Y = CubicalComplex(block_grid, set(T.cells) | shadow)
    if not relative_coboundary_dominates(Y, Xin, T, m - 1, problem.coeffs):
        return PushOutcome(X, False, shadow_measure, interior_measure)
    new_mcells = (X.mcells - interior_set) | shadow
    result = Surface(problem, frozenset(new_mcells))
    system = system or build_witness_system(problem)
    if not system.spans_surface(result):
        return PushOutcome(X, False, shadow_measure, interior_measure)
    return PushOutcome(result, True, shadow_measure, interior_measure)


# ---------------------------------------------------------------------------
# full pipeline


def _admissible_regions(problem: SpanningProblem, side: int):
    grid = problem.grid
    n = grid.n
    ranges = [
        range(grid.box[a][0], grid.box[a][1] - side + 1) for a in range(n)
    ]
    for lows in itertools.product(*ranges):
        highs = [lo + side for lo in lows]
        interior_A = _cells_in_region(problem.A.cells, lows, highs, n)
        frontier_A = set(_cells_in_region(problem.A.cells, lows, highs, n, True))
        if any(c not in frontier_A for c in interior_A):
            continue
        yield lows, highs


def solve(problem: SpanningProblem, cfg: SolverConfig) -> tuple[Surface, SolveReport]:
    """initial fill, greedy removal, then local replacement sweeps."""
    t0 = time.monotonic()
    system = build_witness_system(problem)
    X = initial_fill(problem, system)
    initial_weight = surface_weight(X)
    X, greedy_report = greedy_minimize(X, cfg, system)
    moves = list(greedy_report.moves)
    # witness re-seeding: minimize the union of per-class witness chains
    # drawn from the whole box, and keep it if it beats the greedy surface
    seed = contract_to_witnesses(None, system, problem)
    seed, _ = greedy_minimize(seed, cfg, system)
    if surface_weight(seed) < surface_weight(X):
        moves.append(("witness_seed", surface_weight(seed) - surface_weight(X)))
        X = seed
    for _ in range(cfg.max_passes):
        improved = False
        Xc = contract_to_witnesses(X, system)
        if surface_weight(Xc) < surface_weight(X):
            before = surface_weight(X)
            Xc, rep_c = greedy_minimize(Xc, cfg, system)
            if surface_weight(Xc) < before:
                moves.append(("witness_contract", surface_weight(Xc) - before))
                X = Xc
                improved = True
        for lows, highs in _admissible_regions(problem, cfg.local_box_side):
            before = surface_weight(X)
            X2 = local_replace(X, lows, highs, system)
            after = surface_weight(X2)
            if after < before:
                moves.append(("local_replace", after - before))
                X = X2
                improved = True
        if improved:
            X, rep2 = greedy_minimize(X, cfg, system)
            moves.extend(rep2.moves)
        else:
            break
    report = SolveReport(
        initial_weight=initial_weight,
        final_weight=surface_weight(X),
        moves=moves,
        spans_verified=system.spans_surface(X),
        wall_time=time.monotonic() - t0,
    )
    if not report.spans_verified:
        raise AssertionError("solver output lost the spanning property")
    return X, report


def assert_one_minimal(X: Surface, system: Optional[WitnessSystem] = None) -> None:
    """Check that removing any single free m-cell breaks spanning."""
    system = system or build_witness_system(X.problem)
    a_cells = X.problem.A.cells_of_dim(X.problem.m)
    base = system.mask_of(X.mcells) | system.mask_of(a_cells)
    for c in X.free_mcells():
        mask = base & ~(1 << system.column[c])
        if system.spans_mask(mask):
            raise AssertionError(f"cell {c} is removable; surface not 1-minimal")
