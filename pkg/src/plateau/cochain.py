"""Cellular cochain complexes of cubical complexes and their cohomology.

For finite cubical complexes (compact polyhedra) cellular cohomology is the
right finite computation; degree 0 can be reduced, with the convention that
the reduced group of the empty complex is zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .lattice import Cell, CubicalComplex, connected_components
from .linalg import Coeffs, FieldMatrix, Subspace, kernel_basis, row_reduce


def boundary_incidences(cell: Cell) -> list[tuple[Cell, int]]:
    """Codimension-1 faces of cell with incidence signs.

    The face pair along the j-th free axis (in increasing axis order) carries
    sign (-1)**(j-1), the high face positive and the low face negative.
    """
    out = []
    axes = cell.axes()
    for j, a in enumerate(axes):
        mask = cell.free_axes & ~(1 << a)
        sign = 1 if j % 2 == 0 else -1
        shifted = list(cell.anchor)
        shifted[a] += 1
        out.append((Cell(tuple(shifted), mask), sign))
        out.append((Cell(cell.anchor, mask), -sign))
    return out


class CellIndexing:
    """Canonical (sorted) cell orderings of one complex, per dimension."""

    def __init__(self, X: CubicalComplex):
        self.complex = X
        self._order: dict[int, list[Cell]] = {}
        self._pos: dict[int, dict[Cell, int]] = {}

    def order(self, d: int) -> list[Cell]:
        if d not in self._order:
            cells = self.complex.sorted_cells(d)
            self._order[d] = cells
            self._pos[d] = {c: i for i, c in enumerate(cells)}
        return self._order[d]

    def position(self, d: int) -> dict[Cell, int]:
        self.order(d)
        return self._pos[d]


def boundary_matrix(X: CubicalComplex, d: int, coeffs: Coeffs,
                    indexing: Optional[CellIndexing] = None) -> FieldMatrix:
    """Boundary operator C_d(X) -> C_{d-1}(X); rows are (d-1)-cells."""
    idx = indexing or CellIndexing(X)
    cols = idx.order(d)
    rows = idx.position(d - 1)
    M = FieldMatrix(coeffs, len(rows), len(cols))
    for j, c in enumerate(cols):
        for f, sign in boundary_incidences(c):
            M[rows[f], j] = sign
    return M


class CochainComplexData:
    """Coboundary matrices of one complex over one field, cached per degree."""

    def __init__(self, X: CubicalComplex, coeffs: Coeffs):
        self.complex = X
        self.coeffs = coeffs
        self.indexing = CellIndexing(X)
        self._delta: dict[int, FieldMatrix] = {}

    def delta(self, d: int) -> FieldMatrix:
        """Coboundary C^d -> C^{d+1}: transpose of the boundary operator."""
        if d not in self._delta:
            idx = self.indexing
            cols = idx.order(d)
            rows = idx.position(d + 1)
            M = FieldMatrix(self.coeffs, len(rows), len(cols))
            pos = idx.position(d)
            for c, i in rows.items():
                for f, sign in boundary_incidences(c):
                    M[i, pos[f]] = sign
            self._delta[d] = M
        return self._delta[d]

    def cochain_dim(self, d: int) -> int:
        return len(self.indexing.order(d))


def _augmentation_span(data: CochainComplexData) -> list[list]:
    """Span of the constant cochain, the degree-0 reduction subspace."""
    n0 = data.cochain_dim(0)
    if n0 == 0:
        return []
    return [[data.coeffs.one] * n0]


@dataclass
class CohomologySpace:
    """Computed H^d of one complex: cocycles, coboundaries, quotient basis."""

    data: CochainComplexData
    degree: int
    cocycles: Subspace
    coboundaries: Subspace
    basis_reps: list[list]
    reduced_flag: bool

    @property
    def dim(self) -> int:
        return len(self.basis_reps)


def cohomology(X: CubicalComplex, d: int, coeffs: Coeffs,
               reduced: bool = False,
               data: Optional[CochainComplexData] = None) -> CohomologySpace:
    """H^d(X) over the field, optionally reduced in degree 0."""
    if d < 0:
        raise ValueError("cohomology degree must be nonnegative")
    data = data or CochainComplexData(X, coeffs)
    n_d = data.cochain_dim(d)
    cocycles = kernel_basis(data.delta(d))
    cob_vectors: list[list] = []
    if d > 0:
        delta_prev = data.delta(d - 1)
        for j in range(delta_prev.cols):
            vec = [delta_prev[i, j] for i in range(delta_prev.rows)]
            cob_vectors.append(vec)
    if d == 0 and reduced:
        cob_vectors.extend(_augmentation_span(data))
    coboundaries = Subspace.from_vectors(coeffs, n_d, cob_vectors)
    reps = quotient_basis(cocycles, coboundaries)
    return CohomologySpace(data, d, cocycles, coboundaries, reps, reduced and d == 0)


def quotient_basis(cocycles: Subspace, coboundaries: Subspace) -> list[list]:
    """Cocycle vectors forming a basis of cocycles / coboundaries."""
    F = cocycles.coeffs
    n = cocycles.ambient_dim
    acc = FieldMatrix.from_rows(F, coboundaries.basis, n)
    _, rank, _ = row_reduce(acc)
    reps = []
    current = list(coboundaries.basis)
    for v in cocycles.basis:
        trial = FieldMatrix.from_rows(F, current + [v], n)
        _, r, _ = row_reduce(trial)
        if r > rank:
            reps.append(list(v))
            current.append(list(v))
            rank = r
    return reps


@dataclass
class RestrictionImage:
    """Image of H^d(X) -> H^d(A) as cocycle vectors on A, with A's coboundaries."""

    A_data: CochainComplexData
    degree: int
    image: Subspace
    coboundaries: Subspace

    def contains_class(self, rep: Sequence) -> bool:
        """Class membership of a cocycle on A, modulo coboundaries of A."""
        from .linalg import in_subspace_mod

        return in_subspace_mod(list(rep), self.image, self.coboundaries)

    def quotient_dim(self) -> int:
        joint = self.image.sum(self.coboundaries)
        return joint.dim - self.coboundaries.dim


def restrict_cochain(vec: Sequence, X_data: CochainComplexData,
                     A_data: CochainComplexData, d: int) -> list:
    """Restrict a d-cochain on X to A (A must be a subcomplex of X)."""
    xpos = X_data.indexing.position(d)
    out = []
    for c in A_data.indexing.order(d):
        out.append(vec[xpos[c]])
    return out


def restriction_image(X: CubicalComplex, A: CubicalComplex, d: int, coeffs: Coeffs,
                      X_data: Optional[CochainComplexData] = None,
                      A_data: Optional[CochainComplexData] = None) -> RestrictionImage:
    """Image of the restriction map on degree-d cohomology, as a subspace.

    Returned on the nose as the span of restricted X-cocycles inside the
    cocycles of A; membership tests must work modulo A's coboundaries, so
    those are carried along.
    """
    if not A.is_subcomplex_of(X):
        raise ValueError("A is not a subcomplex of X")
    X_data = X_data or CochainComplexData(X, coeffs)
    A_data = A_data or CochainComplexData(A, coeffs)
    X_cocycles = kernel_basis(X_data.delta(d))
    restricted = [restrict_cochain(v, X_data, A_data, d) for v in X_cocycles.basis]
    image = Subspace.from_vectors(coeffs, A_data.cochain_dim(d), restricted)
    cob_vectors: list[list] = []
    if d > 0:
        delta_prev = A_data.delta(d - 1)
        for j in range(delta_prev.cols):
            cob_vectors.append([delta_prev[i, j] for i in range(delta_prev.rows)])
    coboundaries = Subspace.from_vectors(coeffs, A_data.cochain_dim(d), cob_vectors)
    return RestrictionImage(A_data, d, image, coboundaries)


def component_count(X: CubicalComplex) -> int:
    return len(connected_components(X))
