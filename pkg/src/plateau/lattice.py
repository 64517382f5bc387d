"""Cubical complexes on dyadic grids: cells, faces, skeleta, balls, components.

All geometry is exact: anchors are integer lattice coordinates at a fixed
dyadic level, distances and measures are Fractions.  Cells are identified
combinatorially (minimal-corner anchor + bitmask of free axes), never by
floating point data.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


@dataclass(frozen=True)
class GridSpec:
    """A dyadic grid at level k inside an integer bounding box.

    Cell side length is 2**-k in ambient units; anchors are in lattice units,
    i.e. an anchor coordinate c corresponds to the point c * 2**-k.
    """

    n: int
    k: int
    box: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if not 1 <= self.n <= 6:
            raise ValueError(f"ambient dimension must be in 1..6, got {self.n}")
        if len(self.box) != self.n:
            raise ValueError("bounding box must have one (low, high) pair per axis")
        for low, high in self.box:
            if low >= high:
                raise ValueError(f"degenerate box axis: low={low} high={high}")

    @property
    def side(self) -> Fraction:
        return Fraction(1, 2**self.k)

    def extents(self) -> tuple[int, ...]:
        return tuple(high - low for low, high in self.box)

    def contains_cell(self, cell: "Cell") -> bool:
        for a in range(self.n):
            low, high = self.box[a]
            top = cell.anchor[a] + (1 if cell.has_axis(a) else 0)
            if cell.anchor[a] < low or top > high:
                return False
        return True


@dataclass(frozen=True, order=True)
class Cell:
    """A d-cell of the grid: minimal corner + bitmask of spanned axes."""

    anchor: tuple[int, ...]
    free_axes: int

    @property
    def dim(self) -> int:
        return bin(self.free_axes).count("1")

    def has_axis(self, a: int) -> bool:
        return bool(self.free_axes >> a & 1)

    def axes(self) -> list[int]:
        return [a for a in range(len(self.anchor)) if self.has_axis(a)]

    def faces(self) -> set["Cell"]:
        """The 2*dim codimension-1 faces, in canonical (minimal-corner) form."""
        out: set[Cell] = set()
        for a in self.axes():
            mask = self.free_axes & ~(1 << a)
            out.add(Cell(self.anchor, mask))
            shifted = list(self.anchor)
            shifted[a] += 1
            out.add(Cell(tuple(shifted), mask))
        return out

    def corners(self) -> list[tuple[int, ...]]:
        axes = self.axes()
        out = []
        for bits in itertools.product((0, 1), repeat=len(axes)):
            p = list(self.anchor)
            for b, a in zip(bits, axes):
                p[a] += b
            out.append(tuple(p))
        return out

    def barycenter(self) -> tuple[Fraction, ...]:
        """Barycenter in lattice units (multiply by grid side for ambient)."""
        return tuple(
            Fraction(2 * c + 1, 2) if self.has_axis(a) else Fraction(c)
            for a, c in enumerate(self.anchor)
        )


def cell_measure(cell: Cell, grid: GridSpec) -> Fraction:
    """d-dimensional measure of a d-cell: (2**-k) ** d, exactly."""
    return grid.side ** cell.dim


def cofaces(cell: Cell, grid: GridSpec) -> set[Cell]:
    """Codimension-1 cofaces of a cell that lie inside the grid box."""
    out: set[Cell] = set()
    for a in range(grid.n):
        if cell.has_axis(a):
            continue
        mask = cell.free_axes | 1 << a
        for shift in (0, -1):
            anchor = list(cell.anchor)
            anchor[a] += shift
            cand = Cell(tuple(anchor), mask)
            if grid.contains_cell(cand):
                out.add(cand)
    return out


class CubicalComplex:
    """A face-closed finite set of cells of one grid."""

    def __init__(self, grid: GridSpec, cells: Iterable[Cell], closed: bool = False):
        self.grid = grid
        cellset = set(cells)
        if not closed:
            cellset = _close(cellset)
        for c in cellset:
            if not grid.contains_cell(c):
                raise ValueError(f"cell {c} outside bounding box")
        self._by_dim: dict[int, frozenset[Cell]] = {}
        for c in cellset:
            self._by_dim.setdefault(c.dim, set()).add(c)  # type: ignore[arg-type]
        self._by_dim = {d: frozenset(s) for d, s in self._by_dim.items()}
        self._cells = frozenset(cellset)

    @property
    def cells(self) -> frozenset[Cell]:
        return self._cells

    def cells_of_dim(self, d: int) -> frozenset[Cell]:
        return self._by_dim.get(d, frozenset())

    def sorted_cells(self, d: int) -> list[Cell]:
        return sorted(self.cells_of_dim(d))

    @property
    def dim(self) -> int:
        return max(self._by_dim, default=-1)

    def __contains__(self, cell: Cell) -> bool:
        return cell in self._cells

    def __len__(self) -> int:
        return len(self._cells)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CubicalComplex):
            return NotImplemented
        return self.grid == other.grid and self._cells == other._cells

    def __hash__(self) -> int:
        return hash((self.grid, self._cells))

    def is_subcomplex_of(self, other: "CubicalComplex") -> bool:
        return self._cells <= other._cells

    def union(self, other: "CubicalComplex") -> "CubicalComplex":
        return CubicalComplex(self.grid, self._cells | other._cells, closed=True)

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(s) for d, s in self._by_dim.items())


def _close(cells: set[Cell]) -> set[Cell]:
    out = set(cells)
    frontier = list(cells)
    while frontier:
        c = frontier.pop()
        for f in c.faces():
            if f not in out:
                out.add(f)
                frontier.append(f)
    return out


def face_closure(grid: GridSpec, cells: Iterable[Cell]) -> CubicalComplex:
    return CubicalComplex(grid, cells)


def build_skeleton(grid: GridSpec, d: int) -> CubicalComplex:
    """Full d-skeleton of every cube of the bounding box."""
    if not 0 <= d <= grid.n:
        raise ValueError(f"skeleton dimension {d} out of range 0..{grid.n}")
    cells: set[Cell] = set()
    for dd in range(d + 1):
        for axes in itertools.combinations(range(grid.n), dd):
            mask = sum(1 << a for a in axes)
            ranges = []
            for a in range(grid.n):
                low, high = grid.box[a]
                ranges.append(range(low, high if a in axes else high + 1))
            for anchor in itertools.product(*ranges):
                cells.add(Cell(anchor, mask))
    return CubicalComplex(grid, cells, closed=True)


@dataclass(frozen=True)
class BallQuery:
    """Closed ball (or thin shell at its frontier) in lattice units."""

    center: tuple[Fraction, ...]
    radius: Fraction

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")


def _dist2(p: Sequence[Fraction], q: Sequence[Fraction]) -> Fraction:
    return sum((a - b) ** 2 for a, b in zip(p, q))


def restrict_to_ball(
    X: CubicalComplex, q: BallQuery, mode: str = "closed-ball"
) -> CubicalComplex:
    """Cells of X selected by barycenter distance to q.center.

    closed-ball: barycenter within distance r; sphere-shell: barycenter
    distance in (r - half cell diagonal, r].  Exact rational comparisons.
    """
    if mode not in ("closed-ball", "sphere-shell"):
        raise ValueError(f"unknown ball mode {mode!r}")
    r2 = q.radius**2
    n = X.grid.n
    # squared inner shell radius, (r - sqrt(n)/2)^2 compared without sqrt:
    # d in (r - w, r] with w = sqrt(n)/2  <=>  d2 <= r2 and (r - d)^2 < n/4.
    picked = []
    for c in X.cells:
        d2 = _dist2(c.barycenter(), q.center)
        if d2 > r2:
            continue
        if mode == "sphere-shell":
            # drop cells with d <= r - w, w = sqrt(n)/2; squared out:
            # t = r2 + n/4 - d2 >= 0  and  n * r2 <= t * t.
            t = r2 + Fraction(n, 4) - d2
            if t >= 0 and n * r2 <= t * t:
                continue
        picked.append(c)
    return CubicalComplex(X.grid, picked)


def connected_components(X: CubicalComplex) -> list[CubicalComplex]:
    """Partition of X by shared-face connectivity, in deterministic order."""
    parent: dict[Cell, Cell] = {c: c for c in X.cells}

    def find(c: Cell) -> Cell:
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def link(a: Cell, b: Cell) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for c in X.cells:
        for f in c.faces():
            if f in parent:
                link(c, f)
    groups: dict[Cell, set[Cell]] = {}
    for c in X.cells:
        groups.setdefault(find(c), set()).add(c)
    comps = [CubicalComplex(X.grid, s, closed=True) for s in groups.values()]
    comps.sort(key=lambda comp: min(comp.cells))
    return comps


# ---------------------------------------------------------------------------
# serialization


def complex_to_text(X: CubicalComplex) -> str:
    """Line format: header 'n k low high ...', then 'anchor... axesmask'."""
    head = [str(X.grid.n), str(X.grid.k)]
    for low, high in X.grid.box:
        head.extend((str(low), str(high)))
    lines = [" ".join(head)]
    for c in sorted(X.cells):
        lines.append(" ".join(map(str, (*c.anchor, c.free_axes))))
    return "\n".join(lines) + "\n"


def complex_from_text(text: str) -> CubicalComplex:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty complex file")
    head = lines[0].split()
    n, k = int(head[0]), int(head[1])
    nums = list(map(int, head[2:]))
    if len(nums) != 2 * n:
        raise ValueError("malformed complex header")
    box = tuple((nums[2 * i], nums[2 * i + 1]) for i in range(n))
    grid = GridSpec(n, k, box)
    cells = []
    for ln in lines[1:]:
        vals = list(map(int, ln.split()))
        if len(vals) != n + 1:
            raise ValueError(f"malformed cell line: {ln!r}")
        cells.append(Cell(tuple(vals[:n]), vals[n]))
    return CubicalComplex(grid, cells)


def export_off(X: CubicalComplex, path: str) -> None:
    """Write the 2-cells of X as quads in OFF format (for external viewers)."""
    side = X.grid.side
    verts: dict[tuple[int, ...], int] = {}
    quads: list[list[int]] = []
    for c in X.sorted_cells(2):
        a1, a2 = c.axes()
        loop = []
        for da1, da2 in ((0, 0), (1, 0), (1, 1), (0, 1)):
            p = list(c.anchor)
            p[a1] += da1
            p[a2] += da2
            key = tuple(p)
            if key not in verts:
                verts[key] = len(verts)
            loop.append(verts[key])
        quads.append(loop)
    lines = ["OFF", f"{len(verts)} {len(quads)} 0"]
    for p in verts:
        coords = [float(side * x) for x in p] + [0.0] * (3 - len(p))
        lines.append(" ".join(f"{v:.6f}" for v in coords[:3]))
    for quad in quads:
        lines.append("4 " + " ".join(map(str, quad)))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
