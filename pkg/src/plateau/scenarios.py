"""Scenario files, built-in boundary complexes, and run orchestration.

Scenario files are JSON with exact rationals written as "p/q" strings.
Built-in boundaries are lattice discretizations of round benchmark shapes:
a square "disk" boundary loop, three stacked rings, a square-annulus torus
surface, and a box-boundary sphere shell.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from . import __version__
from .density import DensityField
from .diagnostics import (
    default_probe_point,
    density_profile,
    monotonicity_check,
    regularity_constant,
    slicing_check,
)
from .lattice import (
    Cell,
    CubicalComplex,
    GridSpec,
    cofaces,
    complex_from_text,
    connected_components,
    export_off,
)
from .linalg import GF2, Coeffs
from .solver import SolverConfig, SolveReport, solve, surface_weight
from .spanning import CohomologyClass, SpanningProblem, Surface, canonical_L, spans

DIAGNOSTIC_NAMES = ("slicing", "profile", "regularity", "monotonicity")


def parse_rational(value: Any) -> Fraction:
    if isinstance(value, bool):
        raise ValueError(f"expected a rational, got boolean {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational literal {value!r}") from exc
    raise ValueError(f"expected a rational, got {value!r}")


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


@dataclass
class Scenario:
    name: str
    grid: GridSpec
    boundary: dict
    m: int
    coeffs: Coeffs
    L_spec: Any  # "canonical" or explicit cochain list
    density: DensityField
    solver: SolverConfig
    diagnostics: list[str]
    seed: int
    raw: dict = field(default_factory=dict)


def load_scenario(path: str) -> Scenario:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"scenario parse error in {path}: {exc}") from exc
    return scenario_from_dict(data)


def scenario_from_dict(data: dict) -> Scenario:
    for key in ("grid", "boundary", "m", "seed"):
        if key not in data:
            raise ValueError(f"scenario field {key!r} is required")
    g = data["grid"]
    for key in ("n", "k", "box"):
        if key not in g:
            raise ValueError(f"grid field {key!r} is required")
    grid = GridSpec(int(g["n"]), int(g["k"]), tuple(tuple(b) for b in g["box"]))
    boundary = data["boundary"]
    if "tag" not in boundary:
        raise ValueError("boundary field 'tag' is required")
    m = int(data["m"])
    kind = data.get("coeffs", "gf2")
    if kind == "gf2":
        coeffs = GF2
    elif kind == "rational":
        coeffs = Coeffs("rational")
    elif isinstance(kind, dict) and kind.get("kind") == "gfp":
        coeffs = Coeffs("gfp", int(kind["p"]))
    else:
        raise ValueError(f"unknown coefficient field {kind!r}")
    density = _density_from_dict(data.get("density", {"kind": "constant"}))
    solver_cfg = _solver_from_dict(data.get("solver", {}))
    diag = data.get("diagnostics", "all")
    if diag == "all":
        diag = list(DIAGNOSTIC_NAMES)
    elif diag == "none":
        diag = []
    for name in diag:
        if name not in DIAGNOSTIC_NAMES:
            raise ValueError(f"unknown diagnostic {name!r}")
    return Scenario(
        name=str(data.get("name", "unnamed")),
        grid=grid,
        boundary=boundary,
        m=m,
        coeffs=coeffs,
        L_spec=data.get("L", "canonical"),
        density=density,
        solver=solver_cfg,
        diagnostics=list(diag),
        seed=int(data["seed"]),
        raw=data,
    )


def _density_from_dict(d: dict) -> DensityField:
    kind = d.get("kind", "constant")
    kwargs: dict[str, Any] = {"kind": kind}
    for key in ("value", "offset", "slope", "a", "b", "hoelder_alpha", "hoelder_const"):
        if key in d:
            kwargs[key] = parse_rational(d[key])
    for key in ("coeffs", "center"):
        if key in d:
            kwargs[key] = tuple(parse_rational(v) for v in d[key])
    if "a" not in kwargs or "b" not in kwargs:
        lo, hi = _density_range_hint(kwargs)
        kwargs.setdefault("a", lo)
        kwargs.setdefault("b", hi)
    return DensityField(**kwargs)


def _density_range_hint(kwargs: dict) -> tuple[Fraction, Fraction]:
    """Loose declared bounds when the scenario omits them (validated later)."""
    kind = kwargs.get("kind", "constant")
    if kind == "constant":
        v = kwargs.get("value", Fraction(1))
        return v, v
    return Fraction(1, 1000), Fraction(1000)


def _solver_from_dict(d: dict) -> SolverConfig:
    return SolverConfig(
        removal_order=d.get("removal_order", "heaviest-first"),
        local_box_side=int(d.get("local_box_side", 2)),
        max_passes=int(d.get("max_passes", 4)),
        seed=int(d.get("seed", 0)),
    )


# ---------------------------------------------------------------------------
# built-in boundaries


def _rectangle_ring(
    grid: GridSpec, plane: tuple[int, int], lo: tuple[int, int],
    hi: tuple[int, int], fixed: dict[int, int],
) -> set[Cell]:
    """Edge loop around an axis-aligned rectangle in the given plane."""
    a, b = plane
    cells: set[Cell] = set()

    def edge(pa: int, pb: int, axis: int) -> Cell:
        anchor = [0] * grid.n
        anchor[a], anchor[b] = pa, pb
        for ax, v in fixed.items():
            anchor[ax] = v
        return Cell(tuple(anchor), 1 << axis)

    for t in range(lo[0], hi[0]):
        cells.add(edge(t, lo[1], a))
        cells.add(edge(t, hi[1], a))
    for t in range(lo[1], hi[1]):
        cells.add(edge(lo[0], t, b))
        cells.add(edge(hi[0], t, b))
    return cells


def _solid_boundary(grid: GridSpec, solids: set[tuple[int, ...]]) -> set[Cell]:
    """Mod-2 boundary faces of a set of top-dimensional cells."""
    full = (1 << grid.n) - 1
    count: dict[Cell, int] = {}
    for anchor in solids:
        for f in Cell(anchor, full).faces():
            count[f] = count.get(f, 0) + 1
    return {f for f, c in count.items() if c % 2 == 1}


def _verify_closed_manifold(
    A: CubicalComplex, dim: int, expected_components: int
) -> CubicalComplex:
    """Check the builtin produced a closed manifold complex of this dimension.

    Curve builtins (disk boundary, rings) are (m-1)-manifolds; the torus and
    sphere shell builtins are closed surfaces of dimension equal to A's own
    top dimension.
    """
    comps = connected_components(A)
    if len(comps) != expected_components:
        raise ValueError(
            f"boundary has {len(comps)} components, expected {expected_components}"
        )
    if A.dim != dim:
        raise ValueError(f"boundary has dimension {A.dim}, expected {dim}")
    top = A.cells_of_dim(dim)
    for ridge in A.cells_of_dim(dim - 1):
        count = sum(1 for c in cofaces(ridge, A.grid) if c in top)
        if count != 2:
            raise ValueError(
                "boundary self-intersects or has a free ridge; "
                "builtin parameters do not produce a closed manifold"
            )
    return A


def build_boundary(scenario: Scenario) -> CubicalComplex:
    grid = scenario.grid
    spec = scenario.boundary
    tag = spec["tag"]
    if tag == "disk":
        if grid.n != 2:
            raise ValueError("disk boundary requires a 2-dimensional grid")
        size = int(spec.get("size", 3))
        x0, y0 = spec.get("origin", (0, 0))
        lo, hi = (x0, y0), (x0 + size, y0 + size)
        _require_in_box(grid, (0, 1), lo, hi)
        ring = CubicalComplex(grid, _rectangle_ring(grid, (0, 1), lo, hi, {}))
        return _verify_closed_manifold(ring, 1, 1)
    if tag == "three_rings":
        if grid.n != 3:
            raise ValueError("three_rings requires a 3-dimensional grid")
        size = int(spec.get("size", 3))
        spacing = int(spec["spacing"])
        x0, y0 = spec.get("origin", (0, 0))
        z0 = int(spec.get("z0", 0))
        if spacing < 1:
            raise ValueError("ring spacing must be at least 1")
        if z0 + 2 * spacing > grid.box[2][1] or z0 < grid.box[2][0]:
            raise ValueError("ring spacing exceeds the box height")
        lo, hi = (x0, y0), (x0 + size, y0 + size)
        _require_in_box(grid, (0, 1), lo, hi)
        cells: set[Cell] = set()
        for i in range(3):
            cells |= _rectangle_ring(grid, (0, 1), lo, hi, {2: z0 + i * spacing})
        return _verify_closed_manifold(CubicalComplex(grid, cells), 1, 3)
    if tag == "torus_longitude":
        if grid.n != 3:
            raise ValueError("torus_longitude requires a 3-dimensional grid")
        outer = [tuple(b) for b in spec.get("outer", [[0, 6], [0, 6]])]
        hole = [tuple(b) for b in spec.get("hole", [[2, 4], [2, 4]])]
        zlo, zhi = spec.get("z", (1, 3))
        _require_in_box(grid, (0, 1), (outer[0][0], outer[1][0]), (outer[0][1], outer[1][1]))
        if not (grid.box[2][0] <= zlo < zhi <= grid.box[2][1]):
            raise ValueError("torus z-range outside the box")
        for axis in (0, 1):
            if not outer[axis][0] < hole[axis][0] < hole[axis][1] < outer[axis][1]:
                raise ValueError("torus hole must be strictly inside the outer box")
        solids = {
            (x, y, z)
            for x in range(outer[0][0], outer[0][1])
            for y in range(outer[1][0], outer[1][1])
            for z in range(zlo, zhi)
            if not (
                hole[0][0] <= x < hole[0][1] and hole[1][0] <= y < hole[1][1]
            )
        }
        torus = CubicalComplex(grid, _solid_boundary(grid, solids))
        return _verify_closed_manifold(torus, 2, 1)
    if tag == "sphere_shell":
        if grid.n != 3:
            raise ValueError("sphere_shell requires a 3-dimensional grid")
        box = [tuple(b) for b in spec.get("solid", [[0, 3], [0, 3], [0, 3]])]
        for a in range(3):
            if not grid.box[a][0] <= box[a][0] < box[a][1] <= grid.box[a][1]:
                raise ValueError("sphere shell solid outside the box")
        solids = set(
            itertools.product(*(range(lo, hi) for lo, hi in box))
        )
        shell = CubicalComplex(grid, _solid_boundary(grid, solids))
        return _verify_closed_manifold(shell, 2, 1)
    if tag == "custom":
        with open(spec["path"]) as fh:
            A = complex_from_text(fh.read())
        if A.grid != grid:
            raise ValueError("custom boundary grid differs from the scenario grid")
        return A
    raise ValueError(f"unknown boundary tag {tag!r}")


def _require_in_box(grid, axes, lo, hi) -> None:
    for a, l, h in zip(axes, lo, hi):
        if not grid.box[a][0] <= l < h <= grid.box[a][1]:
            raise ValueError(f"boundary rectangle outside the box on axis {a}")


def build_classes(scenario: Scenario, A: CubicalComplex) -> list[CohomologyClass]:
    if scenario.L_spec == "canonical":
        return canonical_L(A, scenario.m, scenario.coeffs)
    classes = []
    lower = sorted(A.cells_of_dim(scenario.m - 1))
    pos = {c: i for i, c in enumerate(lower)}
    for i, entry in enumerate(scenario.L_spec):
        rep = [scenario.coeffs.zero] * len(lower)
        for item in entry["cochain"]:
            *anchor, mask, coeff = item
            cell = Cell(tuple(int(v) for v in anchor), int(mask))
            if cell not in pos:
                raise ValueError(f"class cochain cell {cell} is not a cell of A")
            rep[pos[cell]] = scenario.coeffs.reduce(parse_rational(coeff))
        classes.append(
            CohomologyClass(A, scenario.m - 1, rep, entry.get("label", f"class-{i}"))
        )
    return classes


def build_problem(scenario: Scenario) -> SpanningProblem:
    A = build_boundary(scenario)
    L = build_classes(scenario, A)
    return SpanningProblem(
        A, scenario.grid, scenario.m, L, scenario.coeffs, scenario.density
    )


# ---------------------------------------------------------------------------
# orchestration


@dataclass
class RunReport:
    scenario: dict
    solve_report: dict
    diagnostics: dict
    files: list[str]
    version: str
    seed: int
    wall_time: float
    determinism_hash: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "scenario": self.scenario,
                "solve": self.solve_report,
                "diagnostics": self.diagnostics,
                "files": self.files,
                "version": self.version,
                "seed": self.seed,
                "wall_time_seconds": round(self.wall_time, 3),
                "determinism_hash": self.determinism_hash,
            },
            indent=2,
            sort_keys=True,
        )


def _hashable_core(scenario: dict, solve_report: dict, diagnostics: dict) -> str:
    core = {
        "scenario": scenario,
        "solve": {k: v for k, v in solve_report.items() if k != "wall_time_seconds"},
        "diagnostics": diagnostics,
    }
    return hashlib.sha256(
        json.dumps(core, sort_keys=True).encode()
    ).hexdigest()


def _diagnostics_blocks(X: Surface, names: list[str]) -> dict:
    out: dict[str, Any] = {}
    if not X.free_mcells():
        return {name: "empty surface" for name in names}
    side = X.problem.grid.side
    p = default_probe_point(X)
    if "slicing" in names:
        rep = slicing_check(X, p, 2 * side)
        out["slicing"] = {
            "center": [frac_str(c) for c in rep.center],
            "shell_width": frac_str(rep.shell_width),
            "lhs": frac_str(rep.lhs),
            "rhs": frac_str(rep.rhs),
            "slack_factor": frac_str(rep.slack_factor)
            if rep.slack_factor is not None
            else None,
        }
    if "profile" in names:
        radii = [side * k for k in (1, 2, 3, 4)]
        prof = density_profile(X, p, radii)
        out["profile"] = {
            "point": [frac_str(c) for c in prof.point],
            "radii": [frac_str(r) for r in prof.radii],
            "g": [frac_str(v) for v in prof.g],
            "ratios": [round(v, 9) for v in prof.ratios()],
        }
    if "regularity" in names:
        reg = regularity_constant(X, 4 * side)
        out["regularity"] = {
            "c_hat": frac_str(reg.c_hat),
            "max_radius": frac_str(reg.max_radius),
            "sample_size": reg.sample_size,
        }
    if "monotonicity" in names:
        pairs = [(4 * side, 2 * side), (3 * side, 2 * side), (2 * side, side)]
        mono = monotonicity_check(X, p, pairs)
        out["monotonicity"] = {
            "pairs": [[frac_str(r), frac_str(s)] for r, s in mono.pairs],
            "ratios": [
                frac_str(r) if r is not None else None for r in mono.ratios
            ],
            "warnings": mono.warnings,
        }
    return out


def run(
    scenario: Scenario,
    out_dir: Optional[str] = None,
    mesh: bool = False,
    diagnostics_override: Optional[list[str]] = None,
) -> tuple[RunReport, Surface]:
    t0 = time.monotonic()
    problem = build_problem(scenario)
    X, solve_report = solve(problem, scenario.solver)
    names = (
        diagnostics_override
        if diagnostics_override is not None
        else scenario.diagnostics
    )
    blocks = _diagnostics_blocks(X, names)
    files: list[str] = []
    if out_dir is not None:
        import os

        os.makedirs(out_dir, exist_ok=True)
        from .lattice import complex_to_text

        surf_path = os.path.join(out_dir, f"{scenario.name}.surface.txt")
        with open(surf_path, "w") as fh:
            fh.write(complex_to_text(X.complex))
        files.append(surf_path)
        if mesh:
            mesh_path = os.path.join(out_dir, f"{scenario.name}.off")
            export_off(X.complex, mesh_path)
            files.append(mesh_path)
    report = RunReport(
        scenario=scenario.raw,
        solve_report=solve_report.to_dict(),
        diagnostics=blocks,
        files=files,
        version=__version__,
        seed=scenario.seed,
        wall_time=time.monotonic() - t0,
        determinism_hash=_hashable_core(
            scenario.raw, solve_report.to_dict(), blocks
        ),
    )
    if out_dir is not None:
        report_path = os.path.join(out_dir, f"{scenario.name}.report.json")
        with open(report_path, "w") as fh:
            fh.write(report.to_json() + "\n")
        report.files.append(report_path)
    return report, X


def check_surface(surface_path: str, scenario: Scenario) -> bool:
    """Spanning verdict for a surface stored in the complex text format."""
    with open(surface_path) as fh:
        complex_ = complex_from_text(fh.read())
    if complex_.grid != scenario.grid:
        raise ValueError("surface grid differs from the scenario grid")
    problem = build_problem(scenario)
    a_mcells = problem.A.cells_of_dim(problem.m)
    mcells = frozenset(
        c for c in complex_.cells_of_dim(problem.m) if c not in a_mcells
    )
    return spans(Surface(problem, mcells))
