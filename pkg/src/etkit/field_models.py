"""Concrete fields with computable p-th-power class groups and symbols.

Six backends: finite fields, Q_ell for odd ell (tame), Q_2, R, C, and
truncated Laurent extensions of the finite/Laurent backends.  Each gets a
labeled basis of F^x/(F^x)^p, a degree-2 symbol into an F_p-vector
target, a predicted Galois pair, and the bounded search routines (the
trichotomy probe, O(S,H) membership, total rigidity).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import islice
from itertools import product as iter_product
from typing import Union

import numpy as np

from .cohomology import build_cohomology
from .errors import (
    DimensionTooLarge,
    InvalidModel,
    ModelUnsupported,
    PrecisionExhausted,
    ValidationError,
)
from .fplinear import in_span, is_prime, rank, row_space_basis
from .laurent import LaurentRing, Series
from .pairs import EBlock, Ext, PAdicBlock, PairExpr, Trivial, ZBlock
from .rigidity import AugBilinearMap, find_equivalence, from_cohomology
from .smallfields import GF, gf
from .units import DEFAULT_PRECISION, make_unit

DEFAULT_SERIES_PRECISION = 16


# ---------------------------------------------------------------------------
# model descriptions


@dataclass(frozen=True)
class FiniteField:
    q: int


@dataclass(frozen=True)
class LocalRational:
    ell: int


@dataclass(frozen=True)
class DyadicRational:
    pass


@dataclass(frozen=True)
class RealField:
    pass


@dataclass(frozen=True)
class ComplexField:
    pass


@dataclass(frozen=True)
class Laurent:
    base: "FieldModel"
    var: str = "t"
    precision: int = DEFAULT_SERIES_PRECISION


FieldModel = Union[FiniteField, LocalRational, DyadicRational, RealField,
                   ComplexField, Laurent]


def _vars_of(model: FieldModel) -> list[str]:
    if isinstance(model, Laurent):
        return _vars_of(model.base) + [model.var]
    return []


def validate_model(model: FieldModel, p: int) -> None:
    """mu_p must live in the field and the backend must be tame for p."""
    if not is_prime(p):
        raise InvalidModel(f"{p} is not prime")
    if isinstance(model, FiniteField):
        gf(model.q)
        if (model.q - 1) % p:
            raise InvalidModel(
                f"F_{model.q} has no p-th roots of unity for p={p}"
            )
        return
    if isinstance(model, LocalRational):
        if not is_prime(model.ell) or model.ell == 2:
            raise InvalidModel("the residue prime must be an odd prime")
        if p != 2 and (model.ell - 1) % p:
            raise InvalidModel(f"need ell = 1 mod {p} for mu_{p} in Q_ell")
        return
    if isinstance(model, (DyadicRational, RealField)):
        if p != 2:
            raise InvalidModel(f"{type(model).__name__} requires p=2")
        return
    if isinstance(model, ComplexField):
        return
    if isinstance(model, Laurent):
        if not isinstance(model.base, (FiniteField, Laurent)):
            raise InvalidModel(
                "Laurent models are supported over finite fields and "
                "Laurent models only"
            )
        if model.precision < 2:
            raise InvalidModel("series precision must be >= 2")
        if model.var in _vars_of(model.base):
            raise InvalidModel(f"variable {model.var!r} reused in the tower")
        validate_model(model.base, p)
        return
    raise ModelUnsupported(f"unknown model {model!r}")


def model_from_json(data, p: int) -> FieldModel:
    if not isinstance(data, dict) or "kind" not in data:
        raise InvalidModel("model JSON needs a 'kind' key")
    kind = data["kind"]
    params = data.get("params", {})
    if kind == "FiniteField":
        model: FieldModel = FiniteField(int(params["q"]))
    elif kind == "LocalRational":
        model = LocalRational(int(params["ell"]))
    elif kind == "DyadicRational":
        model = DyadicRational()
    elif kind == "RealField":
        model = RealField()
    elif kind == "ComplexField":
        model = ComplexField()
    elif kind == "Laurent":
        base = model_from_json(params["base"], p)
        model = Laurent(
            base,
            str(params.get("var", "t")),
            int(data.get("precision", DEFAULT_SERIES_PRECISION)),
        )
    else:
        raise InvalidModel(f"unknown model kind {kind!r}")
    validate_model(model, p)
    return model


def model_to_json(model: FieldModel) -> dict:
    if isinstance(model, FiniteField):
        return {"kind": "FiniteField", "params": {"q": model.q}}
    if isinstance(model, LocalRational):
        return {"kind": "LocalRational", "params": {"ell": model.ell}}
    if isinstance(model, DyadicRational):
        return {"kind": "DyadicRational", "params": {}}
    if isinstance(model, RealField):
        return {"kind": "RealField", "params": {}}
    if isinstance(model, ComplexField):
        return {"kind": "ComplexField", "params": {}}
    if isinstance(model, Laurent):
        return {
            "kind": "Laurent",
            "params": {"base": model_to_json(model.base), "var": model.var},
            "precision": model.precision,
        }
    raise ModelUnsupported(f"unknown model {model!r}")


# ---------------------------------------------------------------------------
# element operations per backend


class _FracOps:
    """Exact rationals; shared by the local, real, and complex backends."""

    zero = Fraction(0)
    one = Fraction(1)
    minus_one = Fraction(-1)

    @staticmethod
    def from_int(n: int) -> Fraction:
        return Fraction(n)

    @staticmethod
    def add(x, y):
        return x + y

    @staticmethod
    def sub(x, y):
        return x - y

    @staticmethod
    def mul(x, y):
        return x * y

    @staticmethod
    def inv(x):
        if x == 0:
            raise ValidationError("0 is not invertible")
        return 1 / Fraction(x)

    @staticmethod
    def pow_(x, n: int):
        if x == 0 and n <= 0:
            raise ValidationError("0 to a nonpositive power")
        return Fraction(x) ** n

    @staticmethod
    def is_zero(x) -> bool:
        return x == 0

    @staticmethod
    def render(x) -> str:
        return str(Fraction(x))


def domain_for(model: FieldModel):
    """Element operations: a GF, a LaurentRing, or rational ops."""
    if isinstance(model, FiniteField):
        return gf(model.q)
    if isinstance(model, Laurent):
        return LaurentRing(domain_for(model.base), model.var, model.precision)
    return _FracOps()


def element_from_json(model: FieldModel, data):
    """Decode a field element: integers and {"num","den"} for the rational
    backends, residue encodings for finite fields, {"v","coeffs"} for
    Laurent series."""
    if isinstance(model, FiniteField):
        if not isinstance(data, int):
            raise ValidationError("finite-field elements are integer encodings")
        if not 0 <= data < model.q:
            raise ValidationError(f"element {data} outside [0, {model.q})")
        return data
    if isinstance(model, Laurent):
        if not isinstance(data, dict) or "v" not in data or "coeffs" not in data:
            raise ValidationError('series elements look like {"v":0,"coeffs":[...]}')
        ring = domain_for(model)
        coeffs = [element_from_json(model.base, c) for c in data["coeffs"]]
        return ring.from_coeffs(int(data["v"]), coeffs)
    if isinstance(data, bool) or not isinstance(data, (int, dict)):
        raise ValidationError("rational elements are ints or {\"num\",\"den\"}")
    if isinstance(data, int):
        return Fraction(data)
    if "num" not in data:
        raise ValidationError('rational elements need a "num" key')
    return Fraction(int(data["num"]), int(data.get("den", 1)))


def render_element(model: FieldModel, x) -> str:
    return domain_for(model).render(x)


# ---------------------------------------------------------------------------
# rational 2-adic / ell-adic helpers


def _val_unit(x: Fraction, ell: int) -> tuple[int, Fraction]:
    if x == 0:
        raise ValidationError("0 has no valuation")
    v = 0
    num, den = x.numerator, x.denominator
    while num % ell == 0:
        num //= ell
        v += 1
    while den % ell == 0:
        den //= ell
        v -= 1
    return v, Fraction(num, den)


def _residue(u: Fraction, ell: int) -> int:
    """Unit rational mod ell."""
    return (u.numerator * pow(u.denominator, -1, ell)) % ell


def _eps2(u: Fraction) -> int:
    """(u-1)/2 mod 2 of a 2-adic unit given as an odd rational."""
    return 0 if (u.numerator * pow(u.denominator, -1, 4)) % 4 == 1 else 1


def _omega2(u: Fraction) -> int:
    """(u^2-1)/8 mod 2 of a 2-adic unit."""
    m8 = (u.numerator * pow(u.denominator, -1, 8)) % 8
    return 1 if m8 in (3, 5) else 0


def hilbert2(a: Fraction, b: Fraction) -> int:
    """Quadratic Hilbert symbol of Q_2, written additively in F_2."""
    alpha, u = _val_unit(Fraction(a), 2)
    beta, w = _val_unit(Fraction(b), 2)
    return (_eps2(u) * _eps2(w) + alpha * _omega2(w) + beta * _omega2(u)) % 2


def norm_oracle_solvable(a: Fraction, b: Fraction, bits: int = 9) -> bool:
    """Brute-force check that z^2 = a x^2 + b y^2 has a nontrivial 2-adic
    solution: search primitive solutions modulo 2^bits with the standard
    lifting criteria.  Independent of hilbert2 by construction."""
    a, b = Fraction(a), Fraction(b)
    # scale by squares to integers
    ai = a.numerator * a.denominator
    bi = b.numerator * b.denominator
    m = 1 << bits
    xs = np.arange(m, dtype=np.int64)
    x2 = (xs * xs) % m
    sq = np.zeros(m, dtype=bool)
    sq[np.unique(x2)] = True
    t = ((ai % m) * x2[:, None] + (bi % m) * x2[None, :]) % m
    odd = (xs % 2 == 1)
    xy_odd = odd[:, None] | odd[None, :]
    if (sq[t] & xy_odd).any():
        return True
    # x, y both even: z must be odd, so t = 1 mod 8
    return bool(((t % 8 == 1) & ~xy_odd).any())


# ---------------------------------------------------------------------------
# class groups


def class_dim(model: FieldModel, p: int) -> int:
    if isinstance(model, FiniteField):
        return 1
    if isinstance(model, LocalRational):
        return 2
    if isinstance(model, DyadicRational):
        return 3
    if isinstance(model, RealField):
        return 1
    if isinstance(model, ComplexField):
        return 0
    if isinstance(model, Laurent):
        return class_dim(model.base, p) + 1
    raise ModelUnsupported(f"unknown model {model!r}")


def class_group(model: FieldModel, p: int) -> list[str]:
    """Labels of a basis of F^x/(F^x)^p."""
    validate_model(model, p)
    if isinstance(model, FiniteField):
        f = gf(model.q)
        return [f.render(f.generator)]
    if isinstance(model, LocalRational):
        return [str(gf(model.ell).generator), str(model.ell)]
    if isinstance(model, DyadicRational):
        return ["-1", "2", "5"]
    if isinstance(model, RealField):
        return ["-1"]
    if isinstance(model, ComplexField):
        return []
    if isinstance(model, Laurent):
        return class_group(model.base, p) + [model.var]
    raise ModelUnsupported(f"unknown model {model!r}")


def class_reps(model: FieldModel, p: int) -> list:
    """Basis representatives as backend elements, aligned with class_group."""
    if isinstance(model, FiniteField):
        return [gf(model.q).generator]
    if isinstance(model, LocalRational):
        return [Fraction(gf(model.ell).generator), Fraction(model.ell)]
    if isinstance(model, DyadicRational):
        return [Fraction(-1), Fraction(2), Fraction(5)]
    if isinstance(model, RealField):
        return [Fraction(-1)]
    if isinstance(model, ComplexField):
        return []
    if isinstance(model, Laurent):
        ring = domain_for(model)
        lifted = [_laurent_lift(ring, r) for r in class_reps(model.base, p)]
        return lifted + [ring.gen()]
    raise ModelUnsupported(f"unknown model {model!r}")


def _laurent_lift(ring: LaurentRing, base_elem) -> Series:
    return ring.from_const(base_elem)


def class_of(model: FieldModel, p: int, a) -> tuple[int, ...]:
    """Coordinates of a in the class_group basis."""
    ops = domain_for(model)
    if ops.is_zero(a):
        raise ValidationError("0 has no power class")
    if isinstance(model, FiniteField):
        return gf(model.q).class_of(a, p)
    if isinstance(model, LocalRational):
        v, u = _val_unit(a, model.ell)
        f = gf(model.ell)
        return (f.class_of(_residue(u, model.ell), p)[0], v % p)
    if isinstance(model, DyadicRational):
        v, u = _val_unit(Fraction(a), 2)
        s = 1 if u < 0 else 0
        m8 = (abs(u.numerator) * pow(u.denominator, -1, 8)) % 8
        return ((s + (1 if m8 in (3, 7) else 0)) % 2, v % 2,
                1 if m8 in (3, 5) else 0)
    if isinstance(model, RealField):
        return (1 if a < 0 else 0,)
    if isinstance(model, ComplexField):
        return ()
    if isinstance(model, Laurent):
        return domain_for(model).class_of(a, p)
    raise ModelUnsupported(f"unknown model {model!r}")


def is_pth_power(model: FieldModel, p: int, a) -> bool:
    return not any(class_of(model, p, a))


# ---------------------------------------------------------------------------
# symbols


def symbol_dim(model: FieldModel, p: int) -> int:
    if isinstance(model, (FiniteField, ComplexField)):
        return 0
    if isinstance(model, (LocalRational, DyadicRational, RealField)):
        return 1
    if isinstance(model, Laurent):
        return symbol_dim(model.base, p) + class_dim(model.base, p)
    raise ModelUnsupported(f"unknown model {model!r}")


def symbol_vector(model: FieldModel, p: int, a, b) -> np.ndarray:
    """Degree-2 symbol of {a, b} in the model's F_p^e target."""
    ops = domain_for(model)
    if ops.is_zero(a) or ops.is_zero(b):
        raise ValidationError("symbols take nonzero arguments")
    if isinstance(model, (FiniteField, ComplexField)):
        return np.zeros(0, dtype=np.int64)
    if isinstance(model, RealField):
        return np.array([1 if a < 0 and b < 0 else 0], dtype=np.int64)
    if isinstance(model, DyadicRational):
        return np.array([hilbert2(a, b)], dtype=np.int64)
    if isinstance(model, LocalRational):
        ell = model.ell
        f = gf(ell)
        va, ua = _val_unit(a, ell)
        vb, ub = _val_unit(b, ell)
        ra, rb = _residue(ua, ell), _residue(ub, ell)
        d = f.mul(
            f.mul(f.pow_(f.minus_one, va * vb), f.pow_(ra, vb)),
            f.pow_(rb, -va),
        )
        return np.array(f.class_of(d, p), dtype=np.int64)
    if isinstance(model, Laurent):
        ring = domain_for(model)
        base = ring.base
        va, vb = ring.val(a), ring.val(b)
        ua, ub = ring.lead(a), ring.lead(b)
        head = symbol_vector(model.base, p, ua, ub)
        d = base.mul(
            base.mul(base.pow_(base.minus_one, va * vb), base.pow_(ua, vb)),
            base.pow_(ub, -va),
        )
        tail = np.array(class_of(model.base, p, d), dtype=np.int64)
        return np.concatenate([head, tail])
    raise ModelUnsupported(f"unknown model {model!r}")


# ---------------------------------------------------------------------------
# Galois-pair prediction and the pairing match


def predict_galois_pair(model: FieldModel, p: int,
                        K: int = DEFAULT_PRECISION) -> PairExpr:
    validate_model(model, p)
    if isinstance(model, ComplexField):
        return Trivial()
    if isinstance(model, RealField):
        return EBlock()
    if isinstance(model, FiniteField):
        return ZBlock(make_unit(p, model.q, 1, K))
    if isinstance(model, LocalRational):
        return Ext(1, ZBlock(make_unit(p, model.ell, 1, K)))
    if isinstance(model, DyadicRational):
        return PAdicBlock(n=3, q=2, case="II", f=2, s=4)
    if isinstance(model, Laurent):
        return Ext(1, predict_galois_pair(model.base, p, K))
    raise ModelUnsupported(f"unknown model {model!r}")


def from_field_model(model: FieldModel, p: int) -> AugBilinearMap:
    """The symbol pairing on F^x/(F^x)^p with eps = class of -1."""
    validate_model(model, p)
    reps = class_reps(model, p)
    labels = class_group(model, p)
    d = len(reps)
    e = symbol_dim(model, p)
    tensor = np.zeros((d, d, e), dtype=np.int64)
    for i, ri in enumerate(reps):
        for j, rj in enumerate(reps):
            tensor[i, j] = symbol_vector(model, p, ri, rj)
    ops = domain_for(model)
    eps = np.array(class_of(model, p, ops.minus_one), dtype=np.int64)
    return AugBilinearMap(
        p=p, tensor=tensor, eps=eps, labels=tuple(labels), multiplicative=True
    )


def check_pairing_match(model: FieldModel, e: PairExpr, p: int,
                        K: int = DEFAULT_PRECISION) -> bool:
    """Are the field's symbol map and the expression's cup map isomorphic
    as augmented bilinear maps?"""
    m1 = from_field_model(model, p)
    if m1.d > 4 or m1.e > 4:
        raise DimensionTooLarge(
            f"pairing match supports d,e <= 4, got d={m1.d}, e={m1.e}"
        )
    m2 = from_cohomology(build_cohomology(e, p, 2, K))
    if (m1.d, m1.e) != (m2.d, m2.e):
        return False
    if bool(m1.eps.any()) != bool(m2.eps.any()):
        return False
    flat1 = m1.tensor.reshape(m1.d, m1.d * m1.e)
    flat2 = m2.tensor.reshape(m2.d, m2.d * m2.e)
    if rank(flat1, p) != rank(flat2, p):
        return False
    return find_equivalence(m1, m2) is not None


# ---------------------------------------------------------------------------
# candidate pools for the bounded searches


def _rational_pool():
    seen = {Fraction(0), Fraction(1)}
    h = 2
    while True:
        for den in range(1, h):
            num_abs = h - den
            for num in (num_abs, -num_abs):
                f = Fraction(num, den)
                if f.denominator == den and f not in seen:
                    seen.add(f)
                    yield f
        h += 1


def _coeff_pool(domain, limit: int = 8) -> list:
    """Small nonzero coefficients of a series domain."""
    if isinstance(domain, GF):
        return list(domain.units())[:limit]
    out = [domain.one, domain.add(domain.one, domain.gen()), domain.gen()]
    for c in _coeff_pool(domain.base, 3):
        out.append(domain.from_const(c))
    return out[:limit]


def element_pool(model: FieldModel, p: int):
    """Deterministic stream of nonzero elements excluding 1."""
    if isinstance(model, FiniteField):
        yield from range(2, model.q)
        return
    if isinstance(model, DyadicRational):
        seed = [Fraction(-1), Fraction(2), Fraction(5), Fraction(-2),
                Fraction(10), Fraction(-5), Fraction(-10)]
        yield from seed
        for f in _rational_pool():
            if f not in seed:
                yield f
        return
    if isinstance(model, LocalRational):
        ell = model.ell
        seed = [Fraction(r) for r in range(2, min(ell, 12))]
        seed += [Fraction(ell), Fraction(ell + 1), Fraction(1, ell),
                 Fraction(1 - ell)]
        yield from seed
        for f in _rational_pool():
            if f not in seed:
                yield f
        return
    if isinstance(model, (RealField, ComplexField)):
        yield from _rational_pool()
        return
    if isinstance(model, Laurent):
        ring = domain_for(model)
        units = _coeff_pool(ring.base)
        yield ring.add(ring.one, ring.gen())
        yield ring.gen()
        for c in units:
            # value equality here, exact subtraction of equal series
            # would exhaust the precision window
            if c != ring.base.one:
                yield ring.from_const(c)
        for v in (0, 1, -1, 2):
            for c0 in units:
                for c1 in [ring.base.zero] + units:
                    if v == 0 and c1 == ring.base.zero and c0 == ring.base.one:
                        continue
                    s = ring.from_coeffs(v, [c0, c1])
                    if s.zero:
                        continue
                    yield s
        return
    raise ModelUnsupported(f"unknown model {model!r}")


# ---------------------------------------------------------------------------
# trichotomy search


@dataclass(frozen=True)
class TrichotomyResult:
    verdict: str
    witness: str | None
    searched: int
    bound: int

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": self.witness,
            "searched": self.searched,
            "searchBound": self.bound,
        }


def trichotomic_search(model: FieldModel, p: int, a,
                       bound: int = 200) -> TrichotomyResult:
    """Look for b with {a,b}, {a,1-b}, {a,1-1/b} all zero."""
    validate_model(model, p)
    if is_pth_power(model, p, a):
        raise ValidationError("a must not be a p-th power")
    ops = domain_for(model)
    searched = 0
    for b in islice(element_pool(model, p), bound):
        searched += 1
        try:
            one_minus_b = ops.sub(ops.one, b)
            if ops.is_zero(one_minus_b):
                continue
            one_minus_binv = ops.sub(ops.one, ops.inv(b))
            if ops.is_zero(one_minus_binv):
                continue
            if symbol_vector(model, p, a, b).any():
                continue
            if symbol_vector(model, p, a, one_minus_b).any():
                continue
            if symbol_vector(model, p, a, one_minus_binv).any():
                continue
        except PrecisionExhausted:
            continue
        return TrichotomyResult("Witness", ops.render(b), searched, bound)
    return TrichotomyResult("NoCounterexampleWithinBound", None, searched, bound)


# ---------------------------------------------------------------------------
# O(S, H) membership


@dataclass(frozen=True)
class OVerdict:
    target: str
    verdict: str
    search_bound: int
    witness: str | None = None

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "verdict": self.verdict,
            "searchBound": self.search_bound,
            "witness": self.witness,
        }


def _parse_h(h_spec, d: int, p: int) -> frozenset:
    if h_spec == "all":
        return frozenset(iter_product(range(p), repeat=d))
    vecs = set()
    for row in h_spec:
        t = tuple(int(c) % p for c in row)
        if len(t) != d:
            raise ValidationError(f"coset vector {row} should have length {d}")
        vecs.add(t)
    if tuple([0] * d) not in vecs:
        raise ValidationError("H must contain the trivial coset")
    for x in vecs:
        for y in vecs:
            if tuple((a + b) % p for a, b in zip(x, y)) not in vecs:
                raise ValidationError("H is not closed under multiplication")
    return frozenset(vecs)


def o_membership(model: FieldModel, p: int, a, h_spec, target: str,
                 bound: int = 200) -> OVerdict:
    """Membership of a in O^-, O^+, or their union, for S = (F^x)^p.

    O^- = (1-S) and H intersected; O^+ multiplies O^- into itself.  O^-
    is decided exactly; the O^+ side reports NonMember on a concrete
    refuting c, and otherwise Member only when the backend is exhaustive.
    """
    validate_model(model, p)
    if target not in ("OMinus", "OPlus", "ORing"):
        raise ValidationError(f"unknown target {target!r}")
    ops = domain_for(model)
    if ops.is_zero(a):
        raise ValidationError("membership is about nonzero elements")
    d = class_dim(model, p)
    h = _parse_h(h_spec, d, p)

    def in_h(x) -> bool:
        return class_of(model, p, x) in h

    def in_o_minus(x) -> bool:
        if not in_h(x):
            return False
        s = ops.sub(ops.one, x)
        if ops.is_zero(s):
            return False
        return is_pth_power(model, p, s)

    if target == "OMinus":
        verdict = "Member" if in_o_minus(a) else "NonMember"
        return OVerdict(target, verdict, bound)

    if target == "ORing" and in_o_minus(a):
        return OVerdict(target, "Member", bound)
    if not in_h(a):
        return OVerdict(target, "NonMember", bound, ops.render(a))

    if isinstance(model, FiniteField):
        f = gf(model.q)
        o_minus = [c for c in f.units() if in_o_minus(c)]
        for c in o_minus:
            if not in_o_minus(f.mul(a, c)):
                return OVerdict(target, "NonMember", bound, ops.render(c))
        return OVerdict(target, "Member", bound)

    tried = 0
    for sigma in element_pool(model, p):
        if tried >= bound:
            break
        tried += 1
        try:
            s = ops.pow_(sigma, p)
            c = ops.sub(ops.one, s)
            if ops.is_zero(c) or not in_h(c):
                continue
            # c = 1 - s is certified to lie in O^-
            if not in_o_minus(ops.mul(a, c)):
                return OVerdict(target, "NonMember", bound, ops.render(c))
        except PrecisionExhausted:
            continue
    return OVerdict(target, "UnknownWithinBound", bound)


# ---------------------------------------------------------------------------
# total rigidity


@dataclass(frozen=True)
class TotalRigidityVerdict:
    verdict: str
    witness: str | None
    st_dim: int
    d_dim: int
    decided_pairs: int
    total_pairs: int

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": self.witness,
            "stDim": self.st_dim,
            "dDim": self.d_dim,
            "decidedPairs": self.decided_pairs,
            "totalPairs": self.total_pairs,
        }


def _one_in_sum(model: FieldModel, p: int, a, b, inner_bound: int) -> bool | None:
    """Does 1 lie in aS + bS?  True/False when decidable, None otherwise."""
    ops = domain_for(model)
    if isinstance(model, FiniteField):
        f = gf(model.q)
        powers = {f.pow_(x, p) for x in f.units()}
        for s1 in powers:
            for s2 in powers:
                if f.add(f.mul(a, s1), f.mul(b, s2)) == 1:
                    return True
        return False
    if isinstance(model, ComplexField):
        return True
    if isinstance(model, RealField):
        return a > 0 or b > 0
    if isinstance(model, DyadicRational):
        return hilbert2(a, b) == 0
    if p == 2 and isinstance(model, (LocalRational, Laurent)):
        # over a tame local field, <a,b> represents 1 iff the symbol splits
        try:
            return not symbol_vector(model, 2, a, b).any()
        except PrecisionExhausted:
            return None
    # odd p over Q_ell / Laurent: bounded positive search only
    for sigma in islice(element_pool(model, p), inner_bound):
        try:
            s = ops.mul(a, ops.pow_(sigma, p))
            t = ops.sub(ops.one, s)
            if ops.is_zero(t):
                continue
            if class_of(model, p, t) == class_of(model, p, b):
                return True
        except PrecisionExhausted:
            continue
    return None


def is_totally_rigid_bounded(model: FieldModel, p: int,
                             bound: int = 4096) -> TotalRigidityVerdict:
    """Compare the Steinberg subgroup St_2(S), generated by witnesses of
    1 in aS + bS, with the subgroup generated by the tensors a (x) (-a)."""
    validate_model(model, p)
    d = class_dim(model, p)
    total = p ** (2 * d)
    if total > bound:
        raise DimensionTooLarge(
            f"{total} coset pairs exceed the search bound {bound}"
        )
    ops = domain_for(model)
    vecs = list(iter_product(range(p), repeat=d))
    reps = class_reps(model, p)

    def rep_of(vec):
        acc = ops.one
        for c, r in zip(vec, reps):
            if c:
                acc = ops.mul(acc, ops.pow_(r, c))
        return acc

    eps_vec = np.array(class_of(model, p, ops.minus_one), dtype=np.int64)
    d_rows = np.zeros((len(vecs), d * d), dtype=np.int64)
    for i, va in enumerate(vecs):
        av = np.array(va, dtype=np.int64)
        d_rows[i] = np.outer(av, (eps_vec + av) % p).reshape(-1)
    d_span = row_space_basis(d_rows, p) if d else np.zeros((0, 0), dtype=np.int64)

    st_rows = []
    decided = 0
    witness = None
    for va in vecs:
        for vb in vecs:
            res = _one_in_sum(model, p, rep_of(va), rep_of(vb), 60)
            if res is None:
                continue
            decided += 1
            if res:
                tens = np.outer(
                    np.array(va, dtype=np.int64), np.array(vb, dtype=np.int64)
                ).reshape(-1) % p
                st_rows.append(tens)
                if tens.any() and d and not in_span(d_span, tens, p):
                    if witness is None:
                        witness = f"[{_vec_label(va)}] (x) [{_vec_label(vb)}]"
    st_span = (
        row_space_basis(np.array(st_rows, dtype=np.int64), p)
        if st_rows else np.zeros((0, d * d), dtype=np.int64)
    )
    st_dim, d_dim = len(st_span), len(d_span)

    if witness is not None:
        return TotalRigidityVerdict(
            "NotTotallyRigid", witness, st_dim, d_dim, decided, total
        )
    if decided < total:
        return TotalRigidityVerdict(
            "UnknownWithinBound", None, st_dim, d_dim, decided, total
        )
    # exhaustively decided; St subset of D certain, check the converse
    for row in d_span:
        if not in_span(st_span, row, p):
            return TotalRigidityVerdict(
                "NotTotallyRigid", f"missing {row.tolist()}",
                st_dim, d_dim, decided, total,
            )
    return TotalRigidityVerdict(
        "TotallyRigid", None, st_dim, d_dim, decided, total
    )


def _vec_label(vec) -> str:
    return ",".join(str(int(c)) for c in vec)
