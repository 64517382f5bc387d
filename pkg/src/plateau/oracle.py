"""Exhaustive minimization with certified optimality (branch and bound).

The search works on the witness affine spaces: branching includes or excludes
one m-cell at a time, exclusion constrains every class's witness space, and a
node is closed as soon as the included cells alone carry a witness for every
class.  Lower bounds come from face-disjoint packings of dual-lattice loops
whose crossing parity is odd on every witness of some class: each such loop
forces at least one of its crossed faces into any spanning surface.

A budget caps the number of expanded nodes; on exhaustion the best surface
found is reported together with a still-valid global lower bound.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .lattice import Cell, CubicalComplex, GridSpec
from .linking import DualLoop, crossed_faces
from .solver import SolverConfig, cell_weight, solve, surface_weight
from .spanning import CohomologyClass, SpanningProblem, Surface
from .witness import WitnessSystem, build_witness_system


@dataclass(frozen=True)
class OracleConfig:
    budget: int = 500_000
    time_limit: float = 540.0
    use_loops: bool = True
    use_crop: bool = True
    warm_start: bool = True


@dataclass
class OracleResult:
    best_weight: Fraction
    lower_bound: Fraction
    optimal: bool
    nodes: int
    best_mcells: frozenset[Cell]
    cropped_box: tuple[tuple[int, int], ...]
    loop_count: int

    def to_dict(self) -> dict:
        def fr(x: Fraction) -> str:
            return (
                f"{x.numerator}/{x.denominator}"
                if x.denominator != 1
                else str(x.numerator)
            )

        return {
            "best_weight": fr(self.best_weight),
            "lower_bound": fr(self.lower_bound),
            "optimal": self.optimal,
            "nodes": self.nodes,
            "cells": len(self.best_mcells),
            "cropped_box": [list(b) for b in self.cropped_box],
            "loop_count": self.loop_count,
        }


# ---------------------------------------------------------------------------
# crop reduction


def crop_problem(problem: SpanningProblem) -> SpanningProblem:
    """Shrink the box to the hull of A along density-invariant axes.

    Clamping a witness chain into the hull along such an axis fixes A, keeps
    the boundary inside A and never increases weight, so the cropped minimum
    equals the original one.
    """
    grid = problem.grid
    n = grid.n
    box = []
    for a in range(n):
        lo0, hi0 = grid.box[a]
        if not problem.density.constant_along(a):
            box.append((lo0, hi0))
            continue
        lo = min(c.anchor[a] for c in problem.A.cells)
        hi = max(c.anchor[a] + (1 if c.has_axis(a) else 0) for c in problem.A.cells)
        if lo == hi:
            hi = hi + 1 if hi < hi0 else hi
            lo = lo - 1 if lo == hi else lo
        box.append((lo, hi))
    new_box = tuple(box)
    if new_box == grid.box:
        return problem
    new_grid = GridSpec(n, grid.k, new_box)
    new_A = CubicalComplex(new_grid, problem.A.cells, closed=True)
    new_L = [
        CohomologyClass(new_A, cls.degree, list(cls.rep), cls.label)
        for cls in problem.L
    ]
    return SpanningProblem(
        new_A, new_grid, problem.m, new_L, problem.coeffs, problem.density
    )


# ---------------------------------------------------------------------------
# dual-loop catalogue


def _rectangle_loop(
    n: int, plane: tuple[int, int], fixed: tuple[int, ...],
    p_range: tuple[int, int], q_range: tuple[int, int],
) -> DualLoop:
    """Axis-aligned rectangle of voxels in one coordinate plane.

    Ranges are inclusive voxel coordinates with p0 < p1 and q0 < q1; corners
    may lie outside the grid box, in which case those crossings are ignored.
    Rectangles subsume through-lines, one-turn elbows, U-shapes and the unit
    squares around single edges.
    """
    p, q = plane
    p0, p1 = p_range
    q0, q1 = q_range
    voxels = []

    def put(vp: int, vq: int) -> None:
        v = list(fixed)
        v[p] = vp
        v[q] = vq
        voxels.append(tuple(v))

    for t in range(p0, p1):
        put(t, q0)
    for t in range(q0, q1):
        put(p1, t)
    for t in range(p1, p0, -1):
        put(t, q1)
    for t in range(q1, q0, -1):
        put(p0, t)
    return DualLoop(tuple(voxels))


def loop_catalogue(grid: GridSpec) -> list[DualLoop]:
    """All dual rectangle loops of the grid (corners up to one voxel outside)."""
    import itertools

    n = grid.n
    out: list[DualLoop] = []
    for p, q in itertools.combinations(range(n), 2):
        others = [a for a in range(n) if a not in (p, q)]
        p_lo, p_hi = grid.box[p][0] - 1, grid.box[p][1]
        q_lo, q_hi = grid.box[q][0] - 1, grid.box[q][1]
        fixed_ranges = [range(grid.box[a][0], grid.box[a][1]) for a in others]
        for pos in itertools.product(*fixed_ranges):
            fixed = [0] * n
            for a, v in zip(others, pos):
                fixed[a] = v
            for p0 in range(p_lo, p_hi):
                for p1 in range(p0 + 1, p_hi + 1):
                    for q0 in range(q_lo, q_hi):
                        for q1 in range(q0 + 1, q_hi + 1):
                            out.append(
                                _rectangle_loop(
                                    n, (p, q), tuple(fixed), (p0, p1), (q0, q1)
                                )
                            )
    return out


def _loop_mask(loop: DualLoop, grid: GridSpec, column: dict[Cell, int]) -> int:
    g = 0
    for face, _sign in crossed_faces(loop, grid):
        col = column.get(face)
        if col is not None:
            g ^= 1 << col
    return g


def build_loop_catalogue(system: WitnessSystem) -> list[int]:
    """Crossing masks of dual loops that are odd on some class's witnesses.

    Only applies to codimension-one surfaces over GF(2); otherwise empty.
    Returned masks are deduplicated and sorted by popcount for greedy packing.
    """
    problem = system.problem
    grid = problem.grid
    n = grid.n
    if problem.coeffs.kind != "gf2" or problem.m != n - 1:
        return []
    column = system.column
    masks: set[int] = set()
    for loop in loop_catalogue(grid):
        masks.add(_loop_mask(loop, grid, column))
    masks.discard(0)

    valid: list[int] = []
    for g in sorted(masks, key=lambda m: (bin(m).count("1"), m)):
        for s in system.spaces:
            if bin(s.particular & g).count("1") & 1 and all(
                not bin(v & g).count("1") & 1 for v in s.basis
            ):
                valid.append(g)
                break
    return valid


def packing_lower_bound(
    loops: list[int], satisfied_mask: int, excluded_mask: int,
    weights: list[Fraction],
) -> tuple[Fraction, bool]:
    """Greedy face-disjoint loop packing; (bound, feasible).

    Each packed loop forces one distinct cell among its available faces, so
    the sum of per-loop minimum face weights bounds any completion from below.
    A loop with no available face at all proves the node infeasible.
    """
    used = 0
    lb = Fraction(0)
    for g in loops:
        if g & satisfied_mask:
            continue
        avail = g & ~excluded_mask
        if not avail:
            return lb, False
        if avail & used:
            # a cell satisfying an already-packed loop could satisfy this one
            continue
        used |= avail
        best = None
        v = avail
        while v:
            bit = v & -v
            col = bit.bit_length() - 1
            w = weights[col]
            if best is None or w < best:
                best = w
            v ^= bit
        lb += best
    return lb, True


# ---------------------------------------------------------------------------
# branch and bound


@dataclass
class _Node:
    include: int
    exclude: int
    weight: Fraction
    spaces: list
    bound: Fraction


def isoperimetric_scan(
    problem: SpanningProblem, cfg: Optional[OracleConfig] = None
) -> OracleResult:
    """Certified minimum weight over all spanning surfaces of the problem."""
    cfg = cfg or OracleConfig()
    t0 = time.monotonic()
    work = crop_problem(problem) if cfg.use_crop else problem
    system = build_witness_system(work)
    ncols = system.ncols
    a_mask = system.mask_of(work.A.cells_of_dim(work.m))
    weights = [
        Fraction(0) if (1 << j) & a_mask else cell_weight(c, work)
        for j, c in enumerate(system.mcells)
    ]
    loops = build_loop_catalogue(system) if cfg.use_loops else []

    if not work.L:
        return OracleResult(
            Fraction(0), Fraction(0), True, 0, frozenset(), work.grid.box, 0
        )

    best_weight: Optional[Fraction] = None
    best_mask = 0
    if cfg.warm_start:
        X_ub, _ = solve(work, SolverConfig())
        best_weight = surface_weight(X_ub)
        best_mask = system.mask_of(X_ub.mcells) | a_mask

    def node_bound(include: int, exclude: int, w: Fraction):
        lb, feasible = packing_lower_bound(
            loops, include | a_mask, exclude, weights
        )
        return (w + lb), feasible

    root_spaces = system.copy_spaces()
    root_bound, feasible = node_bound(0, 0, Fraction(0))
    if not feasible:
        raise AssertionError("root infeasible despite existing witnesses")
    stack = [_Node(0, 0, Fraction(0), root_spaces, root_bound)]
    nodes = 0
    exhausted = False
    open_bounds: list[Fraction] = []

    while stack:
        if nodes >= cfg.budget or time.monotonic() - t0 > cfg.time_limit:
            exhausted = True
            open_bounds = [nd.bound for nd in stack]
            break
        nd = stack.pop()
        nodes += 1
        if best_weight is not None and nd.bound >= best_weight:
            continue
        include, exclude, w, spaces = nd.include, nd.exclude, nd.weight, nd.spaces

        # forced cells: coordinates equal to one on every remaining witness
        forced = 0
        for s in spaces:
            forced |= s.forced_mask()
        forced &= ~(include | a_mask)
        if forced:
            include |= forced
            v = forced
            while v:
                bit = v & -v
                w += weights[bit.bit_length() - 1]
                v ^= bit
            if best_weight is not None and w >= best_weight:
                continue

        allowed_now = include | a_mask
        if all(s.member_within(allowed_now) is not None for s in spaces):
            if best_weight is None or w < best_weight:
                best_weight = w
                best_mask = allowed_now
            continue

        # choose a branching face set
        branch_cols: list[int] = []
        best_loop = None
        for g in loops:
            if g & allowed_now:
                continue
            avail = g & ~exclude
            if avail and (
                best_loop is None
                or bin(avail).count("1") < bin(best_loop).count("1")
            ):
                best_loop = avail
                if bin(avail).count("1") <= 2:
                    break
        if best_loop is not None:
            v = best_loop
            while v:
                bit = v & -v
                branch_cols.append(bit.bit_length() - 1)
                v ^= bit
        else:
            pick = None
            for s in spaces:
                if s.member_within(allowed_now) is None:
                    outside = s.particular & ~allowed_now
                    if outside:
                        pick = (outside & -outside).bit_length() - 1
                        break
            if pick is None:
                raise AssertionError("no branching column at an open node")
            branch_cols = [pick]

        children: list[_Node] = []
        if len(branch_cols) == 1:
            col = branch_cols[0]
            ex_spaces = [s.copy() for s in spaces]
            if all(s.constrain_zero(col) for s in ex_spaces):
                b, feas = node_bound(include, exclude | 1 << col, w)
                if feas and (best_weight is None or b < best_weight):
                    children.append(
                        _Node(include, exclude | 1 << col, w, ex_spaces, b)
                    )
            b, _ = node_bound(include | 1 << col, exclude, w + weights[col])
            if best_weight is None or b < best_weight:
                children.append(
                    _Node(include | 1 << col, exclude, w + weights[col], spaces, b)
                )
            children.reverse()  # explore exclusion first
        else:
            # one child per choice of first included face of the loop
            cur_spaces = spaces
            cur_exclude = exclude
            dead = False
            for i, col in enumerate(branch_cols):
                b, _ = node_bound(
                    include | 1 << col, cur_exclude, w + weights[col]
                )
                if best_weight is None or b < best_weight:
                    children.append(
                        _Node(
                            include | 1 << col, cur_exclude, w + weights[col],
                            [s.copy() for s in cur_spaces]
                            if i < len(branch_cols) - 1
                            else cur_spaces,
                            b,
                        )
                    )
                if i < len(branch_cols) - 1:
                    nxt = [s.copy() for s in cur_spaces]
                    if not all(s.constrain_zero(col) for s in nxt):
                        dead = True
                        break
                    cur_spaces = nxt
                    cur_exclude |= 1 << col
            del dead
            children.reverse()
        stack.extend(children)

    if best_weight is None:
        if not exhausted:
            raise AssertionError("search ended without any spanning surface")
        # budget ran out before any incumbent: fall back to the full fill,
        # which always spans (the box is contractible)
        best_mask = (1 << ncols) - 1
        best_weight = sum(weights, Fraction(0))
    if exhausted:
        lower = min(open_bounds + [best_weight])
        optimal = lower == best_weight
    else:
        lower = best_weight
        optimal = True

    cells = frozenset(
        system.mcells[b.bit_length() - 1]
        for b in _bits(best_mask & ~a_mask)
    )
    # report against the original problem (crop preserves the optimum)
    return OracleResult(
        best_weight, lower, optimal, nodes, cells, work.grid.box, len(loops)
    )


def _bits(mask: int):
    while mask:
        bit = mask & -mask
        yield bit
        mask ^= bit


def oracle_surface(problem: SpanningProblem, result: OracleResult) -> Surface:
    """Lift the oracle's winning cell set back onto the original problem."""
    return Surface(problem, result.best_mcells)
