"""Witness-chain formulation of the spanning test.

Over a field, a class l on A fails to extend over X iff some m-chain w
supported on X's m-cells has boundary supported on A with <l, bd w> = 1.
The witnesses for one class form an affine subspace of the m-chain space of
the full box; spanning tests against any X reduce to asking whether that
affine space meets the coordinate subspace supported on X.  This is the
engine behind the greedy solver and the exhaustive oracle; it is
cross-checked against the direct cohomological definition in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .cochain import CellIndexing, boundary_incidences
from .lattice import Cell, build_skeleton
from .linalg import Coeffs, FieldMatrix, kernel_basis, solve
from .spanning import SpanningProblem, Surface


class Gf2AffineSpace:
    """Affine subspace of GF(2)^ncols: particular + span(basis), bit-packed."""

    __slots__ = ("ncols", "particular", "basis", "or_mask")

    def __init__(self, ncols: int, particular: int, basis: list[int]):
        self.ncols = ncols
        self.particular = particular
        self.basis = basis
        self._refresh()

    def _refresh(self) -> None:
        m = 0
        for v in self.basis:
            m |= v
        self.or_mask = m

    def copy(self) -> "Gf2AffineSpace":
        return Gf2AffineSpace(self.ncols, self.particular, list(self.basis))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def forced_mask(self) -> int:
        """Coordinates equal to 1 on every member."""
        return self.particular & ~self.or_mask

    def support_mask(self) -> int:
        """Support of the current particular member, as a bitmask."""
        return self.particular

    def can_zero(self, col: int) -> bool:
        return not (self.particular >> col & 1) or bool(self.or_mask >> col & 1)

    def constrain_zero(self, col: int) -> bool:
        """Intersect with {w_col = 0}; False if that empties the space."""
        bit = 1 << col
        pivot = None
        for i, v in enumerate(self.basis):
            if v & bit:
                pivot = i
                break
        if self.particular & bit:
            if pivot is None:
                return False
            self.particular ^= self.basis[pivot]
        if pivot is not None:
            pv = self.basis[pivot]
            self.basis = [
                (v ^ pv if v & bit else v)
                for j, v in enumerate(self.basis)
                if j != pivot
            ]
            self._refresh()
        return True

    def member_within(self, allowed: int) -> Optional[int]:
        """Some member with support inside the allowed bitmask, or None."""
        full = (1 << self.ncols) - 1
        forbidden = full & ~allowed
        pivots: list[tuple[int, int]] = []
        for v in self.basis:
            for bit, pv in pivots:
                if v >> bit & 1:
                    v ^= pv
            rem = v & forbidden
            if rem:
                pivots.append(((rem & -rem).bit_length() - 1, v))
        t = self.particular
        for bit, pv in pivots:
            if t >> bit & 1:
                t ^= pv
        if t & forbidden:
            return None
        return t


class GenericAffineSpace:
    """Same interface as Gf2AffineSpace over GF(p) or the rationals."""

    def __init__(self, coeffs: Coeffs, ncols: int, particular: list, basis: list[list]):
        self.coeffs = coeffs
        self.ncols = ncols
        self.particular = list(particular)
        self.basis = [list(v) for v in basis]

    def copy(self) -> "GenericAffineSpace":
        return GenericAffineSpace(self.coeffs, self.ncols, self.particular, self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def forced_mask(self) -> int:
        F = self.coeffs
        mask = 0
        for col in range(self.ncols):
            if self.particular[col] != F.zero and all(
                v[col] == F.zero for v in self.basis
            ):
                mask |= 1 << col
        return mask

    def support_mask(self) -> int:
        F = self.coeffs
        mask = 0
        for col, x in enumerate(self.particular):
            if x != F.zero:
                mask |= 1 << col
        return mask

    def can_zero(self, col: int) -> bool:
        F = self.coeffs
        return self.particular[col] == F.zero or any(
            v[col] != F.zero for v in self.basis
        )

    def constrain_zero(self, col: int) -> bool:
        F = self.coeffs
        pivot = None
        for i, v in enumerate(self.basis):
            if v[col] != F.zero:
                pivot = i
                break
        if self.particular[col] != F.zero:
            if pivot is None:
                return False
            pv = self.basis[pivot]
            factor = F.mul(self.particular[col], F.inv(pv[col]))
            self.particular = [
                F.sub(x, F.mul(factor, y)) for x, y in zip(self.particular, pv)
            ]
        if pivot is not None:
            pv = self.basis[pivot]
            inv = F.inv(pv[col])
            new_basis = []
            for j, v in enumerate(self.basis):
                if j == pivot:
                    continue
                if v[col] != F.zero:
                    factor = F.mul(v[col], inv)
                    v = [F.sub(x, F.mul(factor, y)) for x, y in zip(v, pv)]
                new_basis.append(v)
            self.basis = new_basis
        return True

    def member_within(self, allowed: int) -> Optional[list]:
        F = self.coeffs
        forbidden = [c for c in range(self.ncols) if not allowed >> c & 1]
        rows = [list(v) for v in self.basis]
        t = list(self.particular)
        pivots: list[tuple[int, list]] = []
        for v in rows:
            for col, pv in pivots:
                if v[col] != F.zero:
                    factor = F.mul(v[col], F.inv(pv[col]))
                    v = [F.sub(x, F.mul(factor, y)) for x, y in zip(v, pv)]
            pc = next((c for c in forbidden if v[c] != F.zero), None)
            if pc is not None:
                pivots.append((pc, v))
        for col, pv in pivots:
            if t[col] != F.zero:
                factor = F.mul(t[col], F.inv(pv[col]))
                t = [F.sub(x, F.mul(factor, y)) for x, y in zip(t, pv)]
        if any(t[c] != F.zero for c in forbidden):
            return None
        return t


def _gf2_solve_affine(rows: list[int], rhs: list[int], ncols: int) -> Optional[Gf2AffineSpace]:
    """Solve a bit-packed GF(2) system; returns the full solution space."""
    aug = [r | (b << ncols) for r, b in zip(rows, rhs)]
    pivots: list[tuple[int, int]] = []  # (col, row index in reduced list)
    reduced: list[int] = []
    for r in aug:
        for col, pr in pivots:
            if r >> col & 1:
                r ^= pr
        if r == 0:
            continue
        low = r & ((1 << ncols) - 1)
        if low == 0:
            return None  # 0 = 1 row
        col = (low & -low).bit_length() - 1
        # keep reduced form: clear this column from earlier rows
        for i, (c0, pr) in enumerate(pivots):
            if pr >> col & 1:
                pivots[i] = (c0, pr ^ r)
        pivots.append((col, r))
    pivot_cols = {c for c, _ in pivots}
    particular = 0
    for col, pr in pivots:
        if pr >> ncols & 1:
            particular |= 1 << col
    basis = []
    for j in range(ncols):
        if j in pivot_cols:
            continue
        v = 1 << j
        for col, pr in pivots:
            if pr >> j & 1:
                v |= 1 << col
        basis.append(v)
    return Gf2AffineSpace(ncols, particular, basis)


@dataclass
class WitnessSystem:
    """Witness affine spaces of all classes of one problem, plus indexing."""

    problem: SpanningProblem
    mcells: list[Cell]
    column: dict[Cell, int]
    spaces: list

    @property
    def ncols(self) -> int:
        return len(self.mcells)

    def mask_of(self, cells) -> int:
        mask = 0
        for c in cells:
            mask |= 1 << self.column[c]
        return mask

    def full_mask(self) -> int:
        return (1 << self.ncols) - 1

    def spans_mask(self, allowed: int) -> bool:
        return all(s.member_within(allowed) is not None for s in self.spaces)

    def spans_surface(self, X: Surface) -> bool:
        free_mask = self.mask_of(X.mcells)
        a_cells = self.problem.A.cells_of_dim(self.problem.m)
        free_mask |= self.mask_of(a_cells)
        return self.spans_mask(free_mask)

    def copy_spaces(self) -> list:
        return [s.copy() for s in self.spaces]


def build_witness_system(problem: SpanningProblem) -> WitnessSystem:
    """Set up the witness spaces on the full box grid of the problem."""
    m = problem.m
    skel = build_skeleton(problem.grid, m)
    idx = CellIndexing(skel)
    mcells = idx.order(m)
    column = {c: j for j, c in enumerate(mcells)}
    lower = idx.order(m - 1)
    A_lower = problem.A.cells_of_dim(m - 1)
    constraint_rows = [c for c in lower if c not in A_lower]
    row_index = {c: i for i, c in enumerate(constraint_rows)}
    A_idx = CellIndexing(problem.A)
    A_pos = A_idx.position(m - 1)
    F = problem.coeffs
    ncols = len(mcells)

    if F.kind == "gf2":
        rows = [0] * (len(constraint_rows) + len(problem.L))
        for j, cell in enumerate(mcells):
            for f, _sign in boundary_incidences(cell):
                i = row_index.get(f)
                if i is not None:
                    rows[i] ^= 1 << j
        for li, cls in enumerate(problem.L):
            acc = 0
            for j, cell in enumerate(mcells):
                total = 0
                for f, _sign in boundary_incidences(cell):
                    p = A_pos.get(f)
                    if p is not None:
                        total ^= cls.rep[p] & 1
                if total:
                    acc |= 1 << j
            rows[len(constraint_rows) + li] = acc
        spaces = []
        for li in range(len(problem.L)):
            sel = rows[: len(constraint_rows)] + [rows[len(constraint_rows) + li]]
            rhs = [0] * len(constraint_rows) + [1]
            space = _gf2_solve_affine(sel, rhs, ncols)
            if space is None:
                raise ValueError(
                    "class admits no witness chain in the box; "
                    "check the problem setup"
                )
            spaces.append(space)
    else:
        M = FieldMatrix(F, len(constraint_rows) + 1, ncols)
        for j, cell in enumerate(mcells):
            for f, sign in boundary_incidences(cell):
                i = row_index.get(f)
                if i is not None:
                    M[i, j] = F.add(M[i, j], F.reduce(sign))
        spaces = []
        for cls in problem.L:
            for j, cell in enumerate(mcells):
                acc = F.zero
                for f, sign in boundary_incidences(cell):
                    p = A_pos.get(f)
                    if p is not None:
                        acc = F.add(acc, F.mul(F.reduce(sign), cls.rep[p]))
                M[len(constraint_rows), j] = acc
            b = [F.zero] * len(constraint_rows) + [F.one]
            x = solve(M, b)
            if x is None:
                raise ValueError(
                    "class admits no witness chain in the box; "
                    "check the problem setup"
                )
            kern = kernel_basis(M)
            spaces.append(GenericAffineSpace(F, ncols, x, kern.basis))
    return WitnessSystem(problem, list(mcells), column, spaces)
