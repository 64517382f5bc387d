"""Exact linear algebra over GF(2), GF(p) and the rationals.

Matrices are small and dense enough that straightforward Gauss-Jordan with
deterministic lowest-column pivoting is the right tool.  GF(2) rows are
packed into Python ints; other fields use tuples of ints / Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Coeffs:
    """Field of coefficients: 'gf2', 'gfp' (with p), or 'rational'."""

    kind: str
    p: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("gf2", "gfp", "rational"):
            raise ValueError(f"unknown coefficient kind {self.kind!r}")
        if self.kind == "gfp" and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def zero(self):
        return Fraction(0) if self.kind == "rational" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "rational" else 1

    def reduce(self, x):
        if self.kind == "gf2":
            return x & 1 if isinstance(x, int) else int(x) % 2
        if self.kind == "gfp":
            return int(x) % self.p
        return Fraction(x)

    def add(self, a, b):
        if self.kind == "gf2":
            return (a + b) & 1
        if self.kind == "gfp":
            return (a + b) % self.p
        return a + b

    def sub(self, a, b):
        if self.kind == "gf2":
            return (a + b) & 1
        if self.kind == "gfp":
            return (a - b) % self.p
        return a - b

    def mul(self, a, b):
        if self.kind == "gf2":
            return a & b
        if self.kind == "gfp":
            return a * b % self.p
        return a * b

    def inv(self, a):
        if self.kind == "gf2":
            if a & 1 == 0:
                raise ZeroDivisionError
            return 1
        if self.kind == "gfp":
            if a % self.p == 0:
                raise ZeroDivisionError
            return pow(a, self.p - 2, self.p)
        return 1 / Fraction(a)


GF2 = Coeffs("gf2")
RATIONAL = Coeffs("rational")


class FieldMatrix:
    """Exact matrix over a field; entries supplied as a sparse (i, j) map."""

    def __init__(self, coeffs: Coeffs, rows: int, cols: int, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.coeffs = coeffs
        self.rows = rows
        self.cols = cols
        self._rows: list = [
            0 if coeffs.kind == "gf2" else [coeffs.zero] * cols for _ in range(rows)
        ]
        if coeffs.kind != "gf2":
            self._rows = [list(r) for r in self._rows]
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise ValueError(f"entry index ({i}, {j}) out of range")
            self[i, j] = v

    def __getitem__(self, ij):
        i, j = ij
        if self.coeffs.kind == "gf2":
            return self._rows[i] >> j & 1
        return self._rows[i][j]

    def __setitem__(self, ij, v) -> None:
        i, j = ij
        v = self.coeffs.reduce(v)
        if self.coeffs.kind == "gf2":
            if self._rows[i] >> j & 1 != v:
                self._rows[i] ^= 1 << j
        else:
            self._rows[i][j] = v

    def entries(self) -> dict:
        out = {}
        for i in range(self.rows):
            for j in range(self.cols):
                v = self[i, j]
                if v != self.coeffs.zero:
                    out[(i, j)] = v
        return out

    def row(self, i: int) -> list:
        if self.coeffs.kind == "gf2":
            return [self._rows[i] >> j & 1 for j in range(self.cols)]
        return list(self._rows[i])

    def copy(self) -> "FieldMatrix":
        out = FieldMatrix(self.coeffs, self.rows, self.cols)
        out._rows = (
            list(self._rows)
            if self.coeffs.kind == "gf2"
            else [list(r) for r in self._rows]
        )
        return out

    @classmethod
    def from_rows(cls, coeffs: Coeffs, rows: Sequence[Sequence], cols: int):
        out = cls(coeffs, len(rows), cols)
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                out[i, j] = v
        return out

    def apply(self, v: Sequence) -> list:
        """Matrix-vector product M @ v."""
        if len(v) != self.cols:
            raise ValueError("dimension mismatch in apply")
        F = self.coeffs
        if F.kind == "gf2":
            packed = 0
            for j, x in enumerate(v):
                if F.reduce(x):
                    packed |= 1 << j
            return [bin(r & packed).count("1") & 1 for r in self._rows]
        out = []
        for r in self._rows:
            acc = F.zero
            for a, b in zip(r, v):
                acc = F.add(acc, F.mul(a, b))
            out.append(acc)
        return out


def row_reduce(M: FieldMatrix) -> tuple[FieldMatrix, int, list[int]]:
    """Gauss-Jordan reduced form, rank, and pivot columns.

    Pivots are chosen at the lowest available column, first available row:
    deterministic for a fixed input.
    """
    R = M.copy()
    F = M.coeffs
    pivots: list[int] = []
    lead = 0
    for col in range(M.cols):
        piv = None
        for i in range(lead, M.rows):
            if R[i, col] != F.zero:
                piv = i
                break
        if piv is None:
            continue
        R._rows[lead], R._rows[piv] = R._rows[piv], R._rows[lead]
        if F.kind == "gf2":
            prow = R._rows[lead]
            for i in range(M.rows):
                if i != lead and R._rows[i] >> col & 1:
                    R._rows[i] ^= prow
        else:
            inv = F.inv(R[lead, col])
            R._rows[lead] = [F.mul(inv, x) for x in R._rows[lead]]
            prow = R._rows[lead]
            for i in range(M.rows):
                if i == lead:
                    continue
                factor = R._rows[i][col]
                if factor != F.zero:
                    R._rows[i] = [
                        F.sub(x, F.mul(factor, px))
                        for x, px in zip(R._rows[i], prow)
                    ]
        pivots.append(col)
        lead += 1
        if lead == M.rows:
            break
    return R, len(pivots), pivots


@dataclass
class Subspace:
    """Row-reduced basis of a subspace of coeffs**ambient_dim."""

    coeffs: Coeffs
    ambient_dim: int
    basis: list[list]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def from_vectors(cls, coeffs: Coeffs, ambient_dim: int, vectors: Iterable[Sequence]):
        vecs = [list(v) for v in vectors]
        M = FieldMatrix.from_rows(coeffs, vecs, ambient_dim)
        R, rank, _ = row_reduce(M)
        return cls(coeffs, ambient_dim, [R.row(i) for i in range(rank)])

    def contains(self, v: Sequence) -> bool:
        aug = Subspace.from_vectors(self.coeffs, self.ambient_dim, self.basis + [list(v)])
        return aug.dim == self.dim

    def sum(self, other: "Subspace") -> "Subspace":
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return Subspace.from_vectors(
            self.coeffs, self.ambient_dim, self.basis + other.basis
        )


def kernel_basis(M: FieldMatrix) -> Subspace:
    """Basis of the right null space {v : M v = 0}."""
    R, rank, pivots = row_reduce(M)
    F = M.coeffs
    pivot_set = set(pivots)
    free = [j for j in range(M.cols) if j not in pivot_set]
    basis = []
    for j in free:
        v = [F.zero] * M.cols
        v[j] = F.one
        for i, pc in enumerate(pivots):
            v[pc] = F.sub(F.zero, R[i, j])
        basis.append(v)
    return Subspace.from_vectors(F, M.cols, basis)


def solve(M: FieldMatrix, b: Sequence) -> Optional[list]:
    """Some x with M x = b, or None iff b is outside the column space."""
    if len(b) != M.rows:
        raise ValueError("dimension mismatch in solve")
    F = M.coeffs
    aug = FieldMatrix(F, M.rows, M.cols + 1)
    for i in range(M.rows):
        for j in range(M.cols):
            v = M[i, j]
            if v != F.zero:
                aug[i, j] = v
        aug[i, M.cols] = b[i]
    R, _, pivots = row_reduce(aug)
    if M.cols in pivots:
        return None
    x = [F.zero] * M.cols
    for i, pc in enumerate(pivots):
        x[pc] = R[i, M.cols]
    assert M.apply(x) == [F.reduce(v) for v in b]
    return x


def in_subspace_mod(v: Sequence, S: Subspace, Q: Subspace) -> bool:
    """True iff v lies in S + Q."""
    if S.ambient_dim != Q.ambient_dim or len(v) != S.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return S.sum(Q).contains(v)
