"""Hoelder-continuous density weights f: box -> [a, b] on cell barycenters."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .lattice import Cell, GridSpec


@dataclass(frozen=True)
class DensityField:
    """Weight function evaluated at cell barycenters, in exact rationals.

    kind:
      constant:          f = value
      coordinate-affine: f = offset + sum(coeffs[i] * x_i), ambient units
      radial:            f = offset + slope * max(0, |x - center|_inf)
    bounds (a, b) and the Hoelder data are declared, and spot-checked against
    the box by `validate`.
    """

    kind: str = "constant"
    value: Fraction = Fraction(1)
    offset: Fraction = Fraction(1)
    coeffs: tuple[Fraction, ...] = ()
    center: tuple[Fraction, ...] = ()
    slope: Fraction = Fraction(0)
    a: Fraction = Fraction(1)
    b: Fraction = Fraction(1)
    hoelder_alpha: Fraction = Fraction(1)
    hoelder_const: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "coordinate-affine", "radial"):
            raise ValueError(f"unknown density kind {self.kind!r}")
        if not 0 < self.a <= self.b:
            raise ValueError("density bounds must satisfy 0 < a <= b")
        if not 0 < self.hoelder_alpha <= 1:
            raise ValueError("hoelder exponent must lie in (0, 1]")

    def __call__(self, point: Sequence[Fraction]) -> Fraction:
        if self.kind == "constant":
            return self.value
        if self.kind == "coordinate-affine":
            acc = self.offset
            for c, x in zip(self.coeffs, point):
                acc += c * x
            return acc
        dist = max(
            (abs(x - c) for c, x in zip(self.center, point)), default=Fraction(0)
        )
        return self.offset + self.slope * dist

    def at_cell(self, cell: Cell, grid: GridSpec) -> Fraction:
        point = tuple(x * grid.side for x in cell.barycenter())
        return self(point)

    def constant_along(self, axis: int) -> bool:
        """Whether f is independent of the given coordinate."""
        if self.kind == "constant":
            return True
        if self.kind == "coordinate-affine":
            return axis >= len(self.coeffs) or self.coeffs[axis] == 0
        # radial: a center shorter than n leaves trailing axes unused
        return axis >= len(self.center)

    def validate(self, grid: GridSpec, top_dim: int) -> None:
        """Check the [a, b] bounds on every top-cell barycenter of the box."""
        from .lattice import build_skeleton

        skel = build_skeleton(grid, top_dim)
        for cell in skel.cells_of_dim(top_dim):
            v = self.at_cell(cell, grid)
            if not self.a <= v <= self.b:
                raise ValueError(
                    f"density {v} at cell {cell} escapes bounds [{self.a}, {self.b}]"
                )
