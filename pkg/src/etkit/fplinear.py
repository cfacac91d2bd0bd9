"""Dense exact linear algebra over prime fields F_p.

Everything here works on small/medium integer matrices with entries reduced
mod p; elimination uses a fixed pivot order (leftmost column, topmost row)
so ranks, solutions, and kernel bases are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p.

    Returns ``(R, pivots)`` where ``pivots`` lists the pivot columns in
    increasing order.
    """
    m = np.array(a, dtype=np.int64, copy=True) % p
    n_rows, n_cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        other = np.nonzero(m[:, c])[0]
        other = other[other != r]
        if other.size:
            m[other] = (m[other] - np.outer(m[other, c], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, p: int) -> int:
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def solve(a, b, p: int) -> np.ndarray | None:
    """One solution x of a @ x = b over F_p, or None when inconsistent."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64).reshape(-1) % p
    if a.shape[0] != b.shape[0]:
        raise ValidationError("right-hand side length does not match row count")
    aug = np.hstack([a, b[:, None]])
    red, pivots = rref(aug, p)
    if a.shape[1] in pivots:
        return None
    x = np.zeros(a.shape[1], dtype=np.int64)
    for row, c in enumerate(pivots):
        x[c] = red[row, -1]
    return x


def kernel_basis(a, p: int) -> list[np.ndarray]:
    """Deterministic basis of the null space, one vector per free column."""
    a = np.asarray(a, dtype=np.int64) % p
    n_cols = a.shape[1]
    red, pivots = rref(a, p)
    pivot_set = set(pivots)
    basis = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        v = np.zeros(n_cols, dtype=np.int64)
        v[free] = 1
        for row, c in enumerate(pivots):
            v[c] = (-red[row, free]) % p
        basis.append(v)
    return basis


def row_space_basis(a, p: int) -> np.ndarray:
    """Nonzero rows of the RREF: a deterministic basis of the row space."""
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return np.zeros((0, a.shape[1] if a.ndim == 2 else 0), dtype=np.int64)
    red, pivots = rref(a, p)
    return red[: len(pivots)]


def in_span(rows, v, p: int) -> bool:
    """Whether v lies in the row span of ``rows`` over F_p."""
    rows = np.asarray(rows, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if rows.size == 0:
        return bool(np.all(v % p == 0))
    return rank(rows, p) == rank(np.vstack([rows, v]), p)


@dataclass(frozen=True)
class FpMatrix:
    """Matrix over F_p; entries are stored reduced into [0, p)."""

    p: int
    data: np.ndarray

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValidationError(f"modulus {self.p} is not prime")
        arr = np.asarray(self.data, dtype=np.int64)
        if arr.ndim != 2:
            raise ValidationError("matrix data must be two-dimensional")
        object.__setattr__(self, "data", arr % self.p)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def rank(self) -> int:
        return rank(self.data, self.p)

    def solve(self, b) -> np.ndarray | None:
        return solve(self.data, b, self.p)

    def kernel_basis(self) -> list[np.ndarray]:
        return kernel_basis(self.data, self.p)

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if self.p != other.p:
            raise ValidationError("mixed moduli")
        return FpMatrix(self.p, (self.data @ other.data) % self.p)
