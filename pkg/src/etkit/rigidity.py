"""Augmented F_p-bilinear maps and rigid-element analysis.

An augmented map is a pairing A_1 x A_1 -> A_2 of F_p-spaces together
with a distinguished degree-one element eps (2*eps = 0, so eps = 0 for
odd p).  A nonzero a is rigid when every b pairing to zero with a is
linearly dependent with eps + a.  Everything here is decided by
exhaustive enumeration of A_1, which the bounded dimensions make exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iter_product

import numpy as np

from .cohomology import GradedAlgebra, build_cohomology
from .errors import DimensionTooLarge, NotAnExtension, ValidationError
from .fplinear import kernel_basis, rank, row_space_basis, solve
from .pairs import Ext, PairExpr, normalize
from .units import DEFAULT_PRECISION

DEFAULT_ENUM_BOUND = 4096
DEFAULT_PAIR_CAP = 2_000_000


@dataclass(frozen=True, eq=False)
class AugBilinearMap:
    """Pairing tensor of shape (d, d, e) with a distinguished eps in A_1."""

    p: int
    tensor: np.ndarray
    eps: np.ndarray
    labels: tuple[str, ...] = ()
    multiplicative: bool = False

    def __post_init__(self):
        t = np.asarray(self.tensor, dtype=np.int64) % self.p
        if t.ndim != 3 or t.shape[0] != t.shape[1]:
            raise ValidationError("pairing tensor must have shape (d, d, e)")
        ep = np.asarray(self.eps, dtype=np.int64) % self.p
        if ep.shape != (t.shape[0],):
            raise ValidationError("eps must be a degree-one vector of length d")
        if self.p != 2 and ep.any():
            raise ValidationError("eps must vanish when p is odd")
        object.__setattr__(self, "tensor", t)
        object.__setattr__(self, "eps", ep)
        if not self.labels:
            object.__setattr__(
                self, "labels", tuple(f"a{i + 1}" for i in range(t.shape[0]))
            )
        elif len(self.labels) != t.shape[0]:
            raise ValidationError("need one label per basis vector")

    @property
    def d(self) -> int:
        return self.tensor.shape[0]

    @property
    def e(self) -> int:
        return self.tensor.shape[2]

    def pair(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64) % self.p
        b = np.asarray(b, dtype=np.int64) % self.p
        return np.einsum("i,ijk,j->k", a, self.tensor, b) % self.p


def from_cohomology(ga: GradedAlgebra) -> AugBilinearMap:
    """Cup product H^1 x H^1 -> H^2 with the epsilon class."""
    return AugBilinearMap(
        p=ga.p,
        tensor=ga.gram(),
        eps=ga.eps,
        labels=tuple(ga.basis[1]),
        multiplicative=False,
    )


def _all_vectors(p: int, d: int) -> np.ndarray:
    if d == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(iter_product(range(p), repeat=d)), dtype=np.int64)


def _rigid_one(bmap: AugBilinearMap, a: np.ndarray, vecs: np.ndarray) -> bool:
    p = bmap.p
    u = (bmap.eps + a) % p
    if not u.any():
        # every pair {0, b} is linearly dependent
        return True
    w = np.einsum("i,ijk->jk", a, bmap.tensor) % p
    cand = vecs[~((vecs @ w) % p).any(axis=1)]
    j0 = int(np.flatnonzero(u)[0])
    inv_u = pow(int(u[j0]), -1, p)
    lam = (cand[:, j0] * inv_u) % p
    return bool(((lam[:, None] * u[None, :]) % p == cand).all())


def is_rigid(bmap: AugBilinearMap, a, bound: int = DEFAULT_ENUM_BOUND) -> bool:
    """Exhaustively test rigidity of the nonzero vector a."""
    p, d = bmap.p, bmap.d
    if p**d > bound:
        raise DimensionTooLarge(f"p^d = {p**d} exceeds the enumeration bound {bound}")
    av = np.asarray(a, dtype=np.int64) % p
    if av.shape != (d,):
        raise ValidationError(f"expected a vector of length {d}")
    if not av.any():
        raise ValidationError("rigidity is defined for nonzero vectors")
    return _rigid_one(bmap, av, _all_vectors(p, d))


def _scan(bmap: AugBilinearMap, bound: int):
    """All nonzero vectors of A_1 with their rigidity flags."""
    p, d = bmap.p, bmap.d
    if p**d > bound:
        raise DimensionTooLarge(f"p^d = {p**d} exceeds the enumeration bound {bound}")
    vecs = _all_vectors(p, d)
    nonzero = vecs[1:]
    flags = [_rigid_one(bmap, a, vecs) for a in nonzero]
    return nonzero, flags


def vector_label(bmap: AugBilinearMap, v) -> str:
    """Human-readable name of a coefficient vector in the map's basis."""
    parts = []
    for c, lbl in zip(np.asarray(v) % bmap.p, bmap.labels):
        c = int(c)
        if not c:
            continue
        if c == 1:
            parts.append(lbl)
        elif bmap.multiplicative:
            parts.append(f"{lbl}^{c}")
        else:
            parts.append(f"{c}*{lbl}")
    if not parts:
        return "1" if bmap.multiplicative else "0"
    return ("*" if bmap.multiplicative else "+").join(parts)


def n_subspace(bmap: AugBilinearMap, bound: int = DEFAULT_ENUM_BOUND) -> np.ndarray:
    """Basis of the span of eps and all non-rigid nonzero vectors."""
    vecs, flags = _scan(bmap, bound)
    rows = [bmap.eps[None, :]]
    rows.extend(v[None, :] for v, f in zip(vecs, flags) if not f)
    return row_space_basis(np.vstack(rows), bmap.p)


def rigidity_report(bmap: AugBilinearMap, bound: int = DEFAULT_ENUM_BOUND) -> dict:
    vecs, flags = _scan(bmap, bound)
    rigid = [vector_label(bmap, v) for v, f in zip(vecs, flags) if f]
    non = [vector_label(bmap, v) for v, f in zip(vecs, flags) if not f]
    rows = [bmap.eps[None, :]]
    rows.extend(v[None, :] for v, f in zip(vecs, flags) if not f)
    nsub = row_space_basis(np.vstack(rows), bmap.p)
    return {"rigid": rigid, "nonRigid": non, "nSubspaceDim": int(len(nsub))}


@dataclass(frozen=True)
class RigidityCriterionReport:
    holds: bool
    checked: int
    counterexamples: tuple[str, ...]


def check_rigidity_criterion(
    e: PairExpr,
    p: int,
    K: int = DEFAULT_PRECISION,
    bound: int = DEFAULT_ENUM_BOUND,
) -> RigidityCriterionReport:
    """Every degree-one class outside the inflation subspace of an
    extension must be rigid; scan them all and report violations."""
    ne = normalize(e, p, K)
    if not isinstance(ne, Ext):
        raise NotAnExtension(f"normal form {type(ne).__name__} has no extension root")
    alg = build_cohomology(ne, p, 2, K)
    bmap = from_cohomology(alg)
    t = alg.meta["ext_inflation_dim"]
    vecs, flags = _scan(bmap, bound)
    outside = [i for i, v in enumerate(vecs) if v[t:].any()]
    counter = tuple(
        vector_label(bmap, vecs[i]) for i in outside if not flags[i]
    )
    return RigidityCriterionReport(not counter, len(outside), counter)


def restrict(bmap: AugBilinearMap, rows) -> AugBilinearMap:
    """Sub-map on the row span of ``rows``; eps must lie in that span."""
    p = bmap.p
    r = np.asarray(rows, dtype=np.int64) % p
    if r.ndim != 2 or r.shape[1] != bmap.d:
        raise ValidationError("subspace rows must have length d")
    if rank(r, p) != r.shape[0]:
        raise ValidationError("subspace rows must be independent")
    eps_coords = solve(r.T, bmap.eps, p)
    if eps_coords is None:
        raise ValidationError("eps does not lie in the subspace")
    t = np.einsum("ai,bj,ijk->abk", r, r, bmap.tensor) % p
    return AugBilinearMap(
        p=p,
        tensor=t,
        eps=eps_coords,
        labels=tuple(f"v{i + 1}" for i in range(r.shape[0])),
        multiplicative=bmap.multiplicative,
    )


def find_equivalence(
    m1: AugBilinearMap,
    m2: AugBilinearMap,
    cap: int = DEFAULT_PAIR_CAP,
    q_cap: int = 10_000,
):
    """Invertible P, Q with Q B1(a,b) = B2(Pa, Pb) and P eps1 = eps2.

    Returns the pair (P, Q) or None.  P is found by enumeration of all
    d x d matrices (capped), Q by solving the induced linear system.
    """
    if m1.p != m2.p:
        raise ValidationError("maps live over different primes")
    p = m1.p
    if m1.d != m2.d or m1.e != m2.e:
        return None
    d, e = m1.d, m1.e
    if d == 0:
        return np.zeros((0, 0), dtype=np.int64), np.eye(e, dtype=np.int64)
    if p ** (d * d) > cap:
        raise DimensionTooLarge(
            f"p^(d^2) = {p ** (d * d)} exceeds the search cap {cap}"
        )
    v_t = m1.tensor.reshape(d * d, e)
    ker = kernel_basis(v_t, p)
    k = len(ker)

    def try_p(pm: np.ndarray):
        if ((pm @ m1.eps) % p != m2.eps).any():
            return None
        if rank(pm, p) < d:
            return None
        w = np.einsum("ia,jb,ijk->abk", pm, pm, m2.tensor).reshape(d * d, e).T % p
        q_rows = []
        for row in range(e):
            x = solve(v_t, w[row], p)
            if x is None:
                return None
            q_rows.append(x)
        q0 = np.array(q_rows, dtype=np.int64).reshape(e, e) % p
        if rank(q0, p) == e:
            return q0
        if k == 0:
            return None
        if p ** (k * e) > q_cap:
            raise DimensionTooLarge(
                f"kernel coset search size p^(k*e) = {p ** (k * e)} exceeds {q_cap}"
            )
        for combo in iter_product(range(p), repeat=k * e):
            q = q0.copy()
            for row in range(e):
                for c in range(k):
                    q[row] += combo[row * k + c] * ker[c]
            q %= p
            if rank(q, p) == e:
                return q
        return None

    ident = np.eye(d, dtype=np.int64)
    q = try_p(ident)
    if q is not None:
        return ident, q
    for bits in iter_product(range(p), repeat=d * d):
        pm = np.array(bits, dtype=np.int64).reshape(d, d)
        q = try_p(pm)
        if q is not None:
            return pm, q
    return None
