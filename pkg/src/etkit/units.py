"""Truncated p-adic units and invariants of their finitely generated subgroups.

Units are residues mod p^K that are congruent to 1 mod p (for p = 2 that
means every odd residue, since Z_2^x = {+-1} x (1+4 Z_2) and -1 = 1 mod 2).
The subgroup invariants computed here are the ones that classify theta-images:
the q-invariant, the epsilon component, and the index of squares.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    DenominatorNotInvertible,
    NotAUnit,
    PrecisionExhausted,
    ValidationError,
)
from .fplinear import is_prime

DEFAULT_PRECISION = 64


@dataclass(frozen=True)
class PAdicUnit:
    """A 1-unit of Z_p known mod p^K.

    ``num``/``den`` record the rational the unit came from when known; they
    are provenance only and do not take part in equality.
    """

    p: int
    value: int
    K: int = DEFAULT_PRECISION
    num: int | None = field(default=None, compare=False)
    den: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValidationError(f"{self.p} is not prime")
        if self.K < 1:
            raise ValidationError("precision must be at least 1")
        v = self.value % self.p**self.K
        if v % self.p != 1 % self.p:
            raise NotAUnit(f"{self.value} is not congruent to 1 mod {self.p}")
        object.__setattr__(self, "value", v)

    @property
    def modulus(self) -> int:
        return self.p**self.K

    def reduce(self, K: int) -> "PAdicUnit":
        if K > self.K:
            raise ValidationError("cannot increase precision by reduction")
        return PAdicUnit(self.p, self.value % self.p**K, K, self.num, self.den)

    def __mul__(self, other: "PAdicUnit") -> "PAdicUnit":
        if self.p != other.p:
            raise ValidationError("mixed primes")
        K = min(self.K, other.K)
        return PAdicUnit(self.p, (self.value * other.value) % self.p**K, K)

    def inverse(self) -> "PAdicUnit":
        return PAdicUnit(self.p, pow(self.value, -1, self.modulus), self.K)

    def to_json(self) -> dict:
        if self.num is not None and self.den is not None:
            return {"num": self.num, "den": self.den}
        return {"residue": self.value, "precision": self.K}


def make_unit(p: int, num: int, den: int = 1, K: int = DEFAULT_PRECISION) -> PAdicUnit:
    """The residue of num/den mod p^K as a 1-unit.

    Raises DenominatorNotInvertible when p | den and NotAUnit when the
    value is not a 1-unit (for odd p: not in 1 + pZ_p).
    """
    if den % p == 0:
        raise DenominatorNotInvertible(f"{den} is divisible by {p}")
    value = num * pow(den, -1, p**K) % p**K
    if value % p != 1 % p:
        raise NotAUnit(f"{num}/{den} = {value} mod {p}^{K} is not a 1-unit")
    return PAdicUnit(p, value, K, num=num, den=den)


def epsilon_of(u: PAdicUnit) -> int:
    """The epsilon component: 0 for odd p; for p=2 whether u = -1 mod 4."""
    if u.p != 2:
        return 0
    return 0 if u.value % 4 == 1 else 1


@dataclass(frozen=True)
class UnitSubgroupInvariants:
    """Invariants of the closed subgroup generated by finitely many units.

    ``q_invariant`` is the largest p-power q > 1 with every generator in
    1 + qZ_p, or 0 for the trivial subgroup.  ``eps_nonzero`` and
    ``square_index`` are meaningful for p = 2 only (None otherwise).
    """

    p: int
    trivial: bool
    q_invariant: int
    eps_nonzero: bool | None
    square_index: int | None

    def __post_init__(self):
        if self.q_invariant != 0:
            q = self.q_invariant
            while q % self.p == 0:
                q //= self.p
            if q != 1 or self.q_invariant <= 1:
                raise ValidationError("q must be 0 or a p-power > 1")
        if self.square_index == 4 and not (self.p == 2 and self.eps_nonzero):
            raise ValidationError("square index 4 forces p=2 and eps nonzero")

    def to_json(self) -> dict:
        out = {"trivial": self.trivial, "q": self.q_invariant}
        if self.p == 2:
            out["epsNonzero"] = self.eps_nonzero
            out["squareIndex"] = self.square_index
        return out


def _extgcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return abs(a), (1 if a >= 0 else -1), 0
    g, s, t = _extgcd(b, a % b)
    return g, t, s - (a // b) * t


def _dlog_two(value: int, K: int) -> tuple[int, int]:
    """Coordinates (a, b) with value = (-1)^a 5^b mod 2^K (K >= 3)."""
    mod = 1 << K
    a = 0 if value % 4 == 1 else 1
    x = (-value) % mod if a else value
    # bitwise discrete log: 5^(2^i) = 1 + 2^(i+2) mod 2^(i+3)
    b = 0
    pw = 5 % mod
    for i in range(K - 2):
        if x % (1 << min(i + 3, K)) != 1:
            b |= 1 << i
            x = (x * pow(pw, -1, mod)) % mod
        pw = (pw * pw) % mod
    return a, b


def _square_index_from_rows(rows: list[tuple[int, int]], M: int) -> int:
    """Index of squares in the subgroup of Z/2 x Z/2^M spanned by ``rows``.

    Works through the lattice L spanned by the rows together with the
    kernel lattice (2,0),(0,2^M); the subgroup is L/kernel and its
    invariant factors come from a 2x2 Smith normal form.
    """
    rows = list(rows) + [(2, 0), (0, 1 << M)]
    a = b = 0
    ys: list[int] = []
    for x, y in rows:
        if x == 0:
            ys.append(y)
            continue
        if a == 0:
            a, b = x, y
            continue
        g, s, t = _extgcd(a, x)
        ys.append((x // g) * b - (a // g) * y)
        a, b = g, s * b + t * y
    c = 0
    for y in ys:
        c = math.gcd(c, y)
    # X = diag(2, 2^M) B^-1 with B = [[a, b], [0, c]]; the kernel lattice
    # lies inside L, so all three entries are integers.
    if 2 % a or (2 * b) % (a * c) or (1 << M) % c:
        raise ValidationError("kernel lattice not contained in generated lattice")
    x11 = 2 // a
    x12 = -(2 * b) // (a * c)
    x22 = (1 << M) // c
    s1 = math.gcd(math.gcd(abs(x11), abs(x12)), abs(x22))
    s2 = abs(x11 * x22) // s1
    return (2 if s1 % 2 == 0 else 1) * (2 if s2 % 2 == 0 else 1)


def subgroup_invariants(
    p: int, generators: list[PAdicUnit], K: int | None = None
) -> UnitSubgroupInvariants:
    """Invariants of the subgroup generated by the given units mod p^K.

    Raises PrecisionExhausted when the q-invariant would need digits beyond
    K-2, where truncation can no longer distinguish it from larger values.
    """
    if not is_prime(p):
        raise ValidationError(f"{p} is not prime")
    for g in generators:
        if g.p != p:
            raise ValidationError("generator prime does not match")
    if K is None:
        K = min((g.K for g in generators), default=DEFAULT_PRECISION)
    mod = p**K
    values = [g.value % mod for g in generators]
    nontrivial = [v for v in values if v != 1]
    if not nontrivial:
        sq = 1 if p == 2 else None
        return UnitSubgroupInvariants(p, True, 0, False if p == 2 else None, sq)

    t_min = K
    for v in nontrivial:
        d = (v - 1) % mod
        t = 0
        while d % p == 0:
            d //= p
            t += 1
        t_min = min(t_min, t)
    if p**t_min >= p ** (K - 2):
        raise PrecisionExhausted(
            f"q-invariant would be >= {p}^{K - 2}; rerun at higher precision"
        )
    q = p**t_min

    if p != 2:
        return UnitSubgroupInvariants(p, False, q, None, None)

    eps = any(v % 4 != 1 for v in nontrivial)
    coords = [_dlog_two(v, K) for v in nontrivial]
    sq = _square_index_from_rows(coords, K - 2)
    return UnitSubgroupInvariants(p, False, q, eps, sq)


def enumerate_subgroup(p: int, generators: list[PAdicUnit], K: int) -> set[int]:
    """Literal closure of the generated subgroup mod p^K (test oracle).

    Only sensible at small K; see subgroup_invariants for the production
    route.
    """
    mod = p**K
    gens = [g.value % mod for g in generators]
    seen = {1}
    frontier = [1]
    while frontier:
        x = frontier.pop()
        for g in gens:
            for y in ((x * g) % mod, (x * pow(g, -1, mod)) % mod):
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
    return seen
