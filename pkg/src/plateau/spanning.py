"""Spanning problems: class sets on the boundary complex and the spanning test.

A candidate surface X = A u (face closure of chosen m-cells) spans a class l
on A iff l does not extend over X, i.e. l lies outside the image of the
restriction map on degree (m-1) cohomology, taken modulo coboundaries of A.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .cochain import (
    CellIndexing,
    CochainComplexData,
    RestrictionImage,
    boundary_incidences,
    restriction_image,
)
from .density import DensityField
from .lattice import (
    Cell,
    CubicalComplex,
    GridSpec,
    build_skeleton,
    cofaces,
    connected_components,
)
from .linalg import Coeffs, Subspace


@dataclass
class CohomologyClass:
    """A degree-(m-1) class on A given by an explicit cocycle representative.

    The representative vector is indexed by A's sorted (m-1)-cells.
    """

    A: CubicalComplex
    degree: int
    rep: list
    label: str = ""


def class_is_zero(cls: CohomologyClass, coeffs: Coeffs, reduced: bool) -> bool:
    """Whether the representative is a coboundary (the zero class)."""
    A_data = CochainComplexData(cls.A, coeffs)
    d = cls.degree
    n_d = A_data.cochain_dim(d)
    vectors: list[list] = []
    if d > 0:
        delta_prev = A_data.delta(d - 1)
        for j in range(delta_prev.cols):
            vectors.append([delta_prev[i, j] for i in range(delta_prev.rows)])
    if d == 0 and reduced and n_d:
        vectors.append([coeffs.one] * n_d)
    cob = Subspace.from_vectors(coeffs, n_d, vectors)
    return cob.contains(cls.rep)


def class_is_cocycle(cls: CohomologyClass, coeffs: Coeffs) -> bool:
    A_data = CochainComplexData(cls.A, coeffs)
    delta = A_data.delta(cls.degree)
    return all(v == coeffs.zero for v in delta.apply(cls.rep))


@dataclass
class SpanningProblem:
    """The data (A, C, L, m, coefficients, density) of one minimization."""

    A: CubicalComplex
    grid: GridSpec
    m: int
    L: list[CohomologyClass]
    coeffs: Coeffs = field(default_factory=lambda: Coeffs("gf2"))
    density: DensityField = field(default_factory=DensityField)

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("m must be at least 1")
        if self.A.grid != self.grid:
            raise ValueError("boundary complex must live on the problem grid")
        if self.A.dim > self.m:
            raise ValueError("boundary complex dimension exceeds m")
        reduced = self.m == 1
        for cls in self.L:
            if cls.degree != self.m - 1:
                raise ValueError("class degree must be m - 1")
            if not class_is_cocycle(cls, self.coeffs):
                raise ValueError("class representative is not a cocycle")
            if class_is_zero(cls, self.coeffs, reduced):
                raise ValueError("L must avoid the zero class")
        self.density.validate(self.grid, self.m)

    @property
    def reduced_degree(self) -> bool:
        return self.m == 1

    def surface(self, mcells) -> "Surface":
        return Surface(self, frozenset(mcells))

    def box_mcells(self) -> list[Cell]:
        return build_skeleton(self.grid, self.m).sorted_cells(self.m)


class Surface:
    """A candidate X = A u closure(mcells) for one spanning problem."""

    def __init__(self, problem: SpanningProblem, mcells: frozenset[Cell]):
        self.problem = problem
        self.mcells = frozenset(mcells)
        for c in self.mcells:
            if c.dim != problem.m:
                raise ValueError(f"cell {c} is not {problem.m}-dimensional")
            if not problem.grid.contains_cell(c):
                raise ValueError(f"cell {c} outside the problem box")
        self._complex: Optional[CubicalComplex] = None

    @property
    def complex(self) -> CubicalComplex:
        if self._complex is None:
            closure = CubicalComplex(self.problem.grid, self.mcells)
            self._complex = closure.union(self.problem.A)
        return self._complex

    def free_mcells(self) -> list[Cell]:
        """m-cells carrying weight: those not already part of A."""
        A_cells = self.problem.A.cells_of_dim(self.problem.m)
        return sorted(c for c in self.mcells if c not in A_cells)

    def without(self, cell: Cell) -> "Surface":
        return Surface(self.problem, self.mcells - {cell})

    def with_added(self, cells) -> "Surface":
        return Surface(self.problem, self.mcells | set(cells))


def _augmented(image: RestrictionImage, problem: SpanningProblem) -> RestrictionImage:
    if not problem.reduced_degree:
        return image
    n0 = image.A_data.cochain_dim(0)
    extra = [[problem.coeffs.one] * n0] if n0 else []
    cob = Subspace.from_vectors(
        problem.coeffs, n0, image.coboundaries.basis + extra
    )
    return RestrictionImage(image.A_data, image.degree, image.image, cob)


def spans(X: Surface) -> bool:
    """True iff no class of L extends over X."""
    problem = X.problem
    if not problem.L:
        return True
    d = problem.m - 1
    image = restriction_image(X.complex, problem.A, d, problem.coeffs)
    image = _augmented(image, problem)
    return not any(image.contains_class(cls.rep) for cls in problem.L)


def relative_coboundary_dominates(
    Y: CubicalComplex, Xin: CubicalComplex, T: CubicalComplex, d: int,
    coeffs: Coeffs,
) -> bool:
    """Local replacement test: image of Y in H^d(T) inside the image of Xin.

    When true, substituting Y for Xin inside a region whose frontier trace is
    T preserves the global spanning verdict.
    """
    if not (T.is_subcomplex_of(Y) and T.is_subcomplex_of(Xin)):
        raise ValueError("frontier trace must be contained in both complexes")
    img_Y = restriction_image(Y, T, d, coeffs)
    img_X = restriction_image(Xin, T, d, coeffs)
    mod = img_X.image.sum(img_X.coboundaries)
    return all(mod.contains(v) for v in img_Y.image.basis)


# ---------------------------------------------------------------------------
# canonical class sets


def _component_closed_manifold_check(comp: CubicalComplex, m: int) -> None:
    if comp.dim != m - 1:
        raise ValueError(
            f"component has dimension {comp.dim}, expected closed ({m - 1})-manifold"
        )
    top = comp.cells_of_dim(m - 1)
    for ridge in comp.cells_of_dim(m - 2):
        count = sum(1 for c in cofaces(ridge, comp.grid) if c in top)
        if count != 2:
            raise ValueError(
                f"ridge {ridge} has {count} top cofaces; component is not a "
                "closed manifold complex"
            )


def orient_component(comp: CubicalComplex, m: int) -> dict[Cell, int]:
    """Consistent +-1 orientation of the top cells, or raise if non-orientable."""
    top = sorted(comp.cells_of_dim(m - 1))
    if not top:
        raise ValueError("component has no top cells")
    incidence: dict[Cell, list[tuple[Cell, int]]] = {}
    for c in top:
        for f, sign in boundary_incidences(c):
            incidence.setdefault(f, []).append((c, sign))
    orientation: dict[Cell, int] = {top[0]: 1}
    queue = [top[0]]
    while queue:
        c = queue.pop()
        for f, sign in boundary_incidences(c):
            for c2, sign2 in incidence.get(f, []):
                if c2 == c:
                    continue
                want = -orientation[c] * sign * sign2
                if c2 not in orientation:
                    orientation[c2] = want
                    queue.append(c2)
                elif orientation[c2] != want:
                    raise ValueError("component is non-orientable")
    if len(orientation) != len(top):
        raise ValueError("top cells of component are not ridge-connected")
    return orientation


def fundamental_cycle(comp: CubicalComplex, m: int) -> dict[Cell, int]:
    """Oriented fundamental (m-1)-cycle of a closed manifold component."""
    orientation = orient_component(comp, m)
    boundary: dict[Cell, int] = {}
    for c, o in orientation.items():
        for f, sign in boundary_incidences(c):
            boundary[f] = boundary.get(f, 0) + o * sign
    if any(v != 0 for v in boundary.values()):
        raise ValueError("component top cells do not form a cycle")
    return orientation


def canonical_L(A: CubicalComplex, m: int, coeffs: Coeffs) -> list[CohomologyClass]:
    """One generator class per closed-manifold component of A.

    Over GF(2) the generator is the indicator of a single top cell; over other
    fields the cell is weighted by its orientation so the pairing with the
    fundamental cycle is 1.  For m = 1 the classes live in reduced degree 0.
    """
    comps = connected_components(A)
    if not comps:
        return []
    indexing = CellIndexing(A)
    pos = indexing.position(m - 1)
    n = len(indexing.order(m - 1))
    out = []
    for ci, comp in enumerate(comps):
        if m >= 2:
            _component_closed_manifold_check(comp, m)
        rep = [coeffs.zero] * n
        if m == 1:
            for c in comp.cells_of_dim(0):
                rep[pos[c]] = coeffs.one
        else:
            marked = min(comp.cells_of_dim(m - 1))
            if coeffs.kind == "gf2":
                rep[pos[marked]] = 1
            else:
                orientation = fundamental_cycle(comp, m)
                rep[pos[marked]] = coeffs.reduce(orientation[marked])
        cls = CohomologyClass(A, m - 1, rep, label=f"component-{ci}")
        if not class_is_zero(cls, coeffs, reduced=m == 1):
            out.append(cls)
    return out


# ---------------------------------------------------------------------------
# randomized structural checks


@dataclass
class SuiteReport:
    trials: int
    monotone_pass: int = 0
    monotone_fail: int = 0
    isolated_pass: int = 0
    isolated_fail: int = 0
    low_dim_pass: int = 0
    low_dim_fail: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return not (self.monotone_fail or self.isolated_fail or self.low_dim_fail)


def spanning_lemma_suite(problem: SpanningProblem, trials: int, seed: int) -> SuiteReport:
    """Randomized checks of the structural spanning facts.

    - enlarging a spanning surface keeps it spanning (monotonicity);
    - adding an isolated lower-dimensional cell never changes the verdict;
    - complexes of dimension <= m-2 have trivial H^(m-1).
    """
    rng = random.Random(seed)
    report = SuiteReport(trials=trials)
    all_mcells = problem.box_mcells()
    from .cochain import cohomology

    for _ in range(trials):
        base = frozenset(c for c in all_mcells if rng.random() < 0.6)
        X = problem.surface(base)
        verdict = spans(X)
        extra = [c for c in all_mcells if c not in base and rng.random() < 0.3]
        if verdict:
            bigger = X.with_added(extra)
            if spans(bigger):
                report.monotone_pass += 1
            else:
                report.monotone_fail += 1
                report.failures.append(f"monotonicity broken adding {extra[:3]}...")
        else:
            report.monotone_pass += 1

        iso = _isolated_low_cell(problem, X, rng)
        if iso is None:
            report.isolated_pass += 1
        else:
            enlarged = CubicalComplex(
                problem.grid, set(X.complex.cells) | {iso} | iso.faces()
            )
            image = restriction_image(enlarged, problem.A, problem.m - 1, problem.coeffs)
            image = _augmented(image, problem)
            verdict2 = not any(image.contains_class(c.rep) for c in problem.L)
            if verdict2 == verdict:
                report.isolated_pass += 1
            else:
                report.isolated_fail += 1
                report.failures.append(f"isolated cell {iso} flipped the verdict")

        if problem.m >= 2:
            low = build_skeleton(problem.grid, problem.m - 2)
            keep = [c for c in low.cells if rng.random() < 0.5]
            Z = CubicalComplex(problem.grid, keep)
            h = cohomology(Z, problem.m - 1, problem.coeffs)
            if h.dim == 0:
                report.low_dim_pass += 1
            else:
                report.low_dim_fail += 1
                report.failures.append("low-dimensional complex has H^(m-1) != 0")
        else:
            report.low_dim_pass += 1
    return report


def _isolated_low_cell(problem: SpanningProblem, X: Surface, rng) -> Optional[Cell]:
    """A random vertex not in X's closure (safe to add in isolation)."""
    skel = build_skeleton(problem.grid, 0)
    candidates = [c for c in skel.sorted_cells(0) if c not in X.complex]
    if not candidates:
        return None
    return rng.choice(candidates)
