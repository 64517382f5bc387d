"""Empirical measure-theoretic diagnostics on discrete surfaces.

Slicing tables, density profiles, regularity constants, and monotonicity
ratios.  Pass/fail decisions stay in exact rational arithmetic; pi enters
only in reported float ratios, never in assertions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .lattice import Cell, cell_measure
from .oracle import OracleConfig, OracleResult, isoperimetric_scan  # noqa: F401
from .solver import cell_weight
from .spanning import Surface

# unit-ball volumes used in reported ratios (floats by design)
_ALPHA = {0: 1.0, 1: 2.0, 2: math.pi, 3: 4.0 * math.pi / 3.0}


def _dist2(p: Sequence[Fraction], q: Sequence[Fraction]) -> Fraction:
    return sum((a - b) ** 2 for a, b in zip(p, q))


def _ambient_barycenter(cell: Cell, side: Fraction) -> tuple[Fraction, ...]:
    return tuple(x * side for x in cell.barycenter())


@dataclass
class SliceReport:
    center: tuple[Fraction, ...]
    shell_width: Fraction
    bands: list[tuple[Fraction, Fraction, Fraction]]  # (t_low, band weight, slice est.)
    lhs: Fraction
    rhs: Fraction

    @property
    def slack_factor(self) -> Optional[Fraction]:
        return self.lhs / self.rhs if self.rhs else None

    def to_csv(self) -> str:
        lines = ["t_low,band_weight,slice_estimate"]
        for t, bw, sl in self.bands:
            lines.append(f"{float(t)},{float(bw)},{float(sl)}")
        return "\n".join(lines) + "\n"


def _band_index(d2: Fraction, w: Fraction) -> int:
    """floor(sqrt(d2)/w) without leaving exact arithmetic."""
    q = d2 / w**2
    return math.isqrt(q.numerator // q.denominator)


def slicing_check(X: Surface, center: Sequence[Fraction], shell_width: Fraction) -> SliceReport:
    """Band the weighted m-measure by barycenter distance from the center.

    The per-band slice estimate is band weight / width, so lhs approximates
    the integrated slice measure; the calibrated claim is lhs within a sqrt(n)
    factor of rhs, not the continuous inequality verbatim.
    """
    grid = X.problem.grid
    if shell_width < grid.side:
        raise ValueError("shell width must be at least one cell side")
    center = tuple(Fraction(c) for c in center)
    bands: dict[int, Fraction] = {}
    rhs = Fraction(0)
    for c in X.free_mcells():
        w = cell_weight(c, X.problem)
        rhs += w
        j = _band_index(_dist2(_ambient_barycenter(c, grid.side), center), shell_width)
        bands[j] = bands.get(j, Fraction(0)) + w
    table = [
        (j * shell_width, bw, bw / shell_width) for j, bw in sorted(bands.items())
    ]
    lhs = sum((sl * shell_width for _, _, sl in table), Fraction(0))
    return SliceReport(center, shell_width, table, lhs, rhs)


@dataclass
class DensityProfile:
    point: tuple[Fraction, ...]
    radii: list[Fraction]
    g: list[Fraction]
    m: int

    def ratios(self) -> list[float]:
        alpha = _ALPHA[self.m]
        return [
            float(gv) / (alpha * float(r) ** self.m) if r else 0.0
            for r, gv in zip(self.radii, self.g)
        ]

    def lower_density(self, min_radius: Fraction) -> Optional[float]:
        vals = [
            ratio
            for r, ratio in zip(self.radii, self.ratios())
            if r >= min_radius
        ]
        return min(vals) if vals else None

    def to_csv(self) -> str:
        lines = ["r,g,ratio"]
        for r, gv, ratio in zip(self.radii, self.g, self.ratios()):
            lines.append(f"{float(r)},{float(gv)},{ratio}")
        return "\n".join(lines) + "\n"


def _surface_vertices(X: Surface, free_only: bool = True) -> list[tuple[int, ...]]:
    verts: set[tuple[int, ...]] = set()
    cells = X.free_mcells() if free_only else X.complex.cells
    for c in cells:
        verts.update(c.corners())
    return sorted(verts)


def _weighted_ball_measure(
    X: Surface, point: tuple[Fraction, ...], r: Fraction, weighted: bool
) -> Fraction:
    grid = X.problem.grid
    total = Fraction(0)
    r2 = r**2
    for c in X.free_mcells():
        if _dist2(_ambient_barycenter(c, grid.side), point) <= r2:
            total += (
                cell_weight(c, X.problem)
                if weighted
                else cell_measure(c, grid)
            )
    return total


def density_profile(
    X: Surface, point: Sequence[Fraction], radii: Sequence[Fraction]
) -> DensityProfile:
    point = tuple(Fraction(p) for p in point)
    side = X.problem.grid.side
    lattice = tuple(p / side for p in point)
    if any(v.denominator != 1 for v in lattice) or tuple(
        int(v) for v in lattice
    ) not in set(_surface_vertices(X, free_only=False)):
        raise ValueError("profile point must be a lattice point of the surface")
    rs = sorted(Fraction(r) for r in radii)
    g = [_weighted_ball_measure(X, point, r, weighted=True) for r in rs]
    for a, b in zip(g, g[1:]):
        assert a <= b, "profile must be monotone in r"
    return DensityProfile(point, rs, g, X.problem.m)


@dataclass
class RegularityReport:
    c_hat: Fraction
    max_radius: Fraction
    sample_size: int
    worst: Optional[tuple[tuple[Fraction, ...], Fraction]] = None


def regularity_constant(X: Surface, max_radius: Fraction) -> RegularityReport:
    """c_hat = min over surface lattice points p and dyadic radii r <= R of
    measure(X within r of p) / r^m, in exact rationals."""
    if not X.free_mcells():
        raise ValueError("surface has no cells outside A")
    grid = X.problem.grid
    m = X.problem.m
    radii = []
    r = grid.side
    while r <= max_radius:
        radii.append(r)
        r *= 2
    if not radii:
        raise ValueError("max radius below one cell side")
    c_hat: Optional[Fraction] = None
    worst = None
    count = 0
    for v in _surface_vertices(X):
        point = tuple(Fraction(x) * grid.side for x in v)
        for r in radii:
            val = _weighted_ball_measure(X, point, r, weighted=False) / r**m
            count += 1
            if c_hat is None or val < c_hat:
                c_hat = val
                worst = (point, r)
    assert c_hat is not None
    return RegularityReport(c_hat, max_radius, count, worst)


@dataclass
class MonotonicityReport:
    point: tuple[Fraction, ...]
    pairs: list[tuple[Fraction, Fraction]]
    ratios: list[Optional[Fraction]]
    warn_threshold: Fraction
    warnings: list[str] = field(default_factory=list)

    @property
    def min_ratio(self) -> Optional[Fraction]:
        vals = [r for r in self.ratios if r is not None]
        return min(vals) if vals else None

    @property
    def k_hat(self) -> Optional[float]:
        vals = [
            float(ratio) ** (1.0 / float(r))
            for (r, _s), ratio in zip(self.pairs, self.ratios)
            if ratio is not None and ratio > 0
        ]
        return min(vals) if vals else None


def monotonicity_check(
    X: Surface,
    point: Sequence[Fraction],
    radius_pairs: Sequence[tuple[Fraction, Fraction]],
    warn_threshold: Fraction = Fraction(1, 10),
) -> MonotonicityReport:
    """Ratios (g(r)/r^m)/(g(s)/s^m) for s <= r; WARN below threshold, no hard
    assertion (lattice surfaces need not be pointwise minimizers)."""
    point = tuple(Fraction(p) for p in point)
    m = X.problem.m
    pairs = []
    ratios: list[Optional[Fraction]] = []
    warnings = []
    for r, s in radius_pairs:
        r, s = Fraction(r), Fraction(s)
        if s > r:
            raise ValueError(f"pair ({r}, {s}) must satisfy s <= r")
        pairs.append((r, s))
        gs = _weighted_ball_measure(X, point, s, weighted=True)
        gr = _weighted_ball_measure(X, point, r, weighted=True)
        if gs == 0:
            ratios.append(None)
            continue
        ratio = (gr / r**m) / (gs / s**m)
        ratios.append(ratio)
        if ratio < warn_threshold:
            warnings.append(
                f"WARN monotonicity ratio {float(ratio):.4f} below "
                f"{float(warn_threshold):.4f} at (r={r}, s={s})"
            )
    return MonotonicityReport(point, pairs, ratios, warn_threshold, warnings)


def default_probe_point(X: Surface) -> tuple[Fraction, ...]:
    """Deterministic lattice point on X outside A, for report probes."""
    verts = _surface_vertices(X)
    if not verts:
        raise ValueError("surface has no cells outside A")
    side = X.problem.grid.side
    mid = verts[len(verts) // 2]
    return tuple(Fraction(x) * side for x in mid)
