import random
from fractions import Fraction

import numpy as np
import pytest

from etkit.errors import InvalidModel, ValidationError
from etkit.field_models import (
    ComplexField,
    DyadicRational,
    FiniteField,
    Laurent,
    LocalRational,
    RealField,
    check_pairing_match,
    class_dim,
    class_group,
    class_of,
    domain_for,
    element_from_json,
    element_pool,
    from_field_model,
    hilbert2,
    is_pth_power,
    is_totally_rigid_bounded,
    model_from_json,
    model_to_json,
    norm_oracle_solvable,
    o_membership,
    predict_galois_pair,
    symbol_dim,
    symbol_vector,
    trichotomic_search,
)
from etkit.pairs import EBlock, Ext, PAdicBlock, ZBlock
from etkit.smallfields import gf

F7T = Laurent(FiniteField(7), "t", 8)
TOWER = Laurent(Laurent(FiniteField(3), "t", 8), "u", 8)


def test_validate_model():
    from etkit.field_models import validate_model

    validate_model(FiniteField(5), 2)
    validate_model(FiniteField(9), 2)
    validate_model(LocalRational(7), 3)
    validate_model(F7T, 3)
    validate_model(TOWER, 2)
    for model, p in [
        (FiniteField(5), 3),     # p must divide q - 1
        (FiniteField(6), 2),     # not a prime power
        (LocalRational(2), 2),   # residue characteristic 2
        (LocalRational(5), 3),   # 5 is not 1 mod 3
        (DyadicRational(), 3),
        (RealField(), 3),
        (Laurent(Laurent(FiniteField(3), "t", 8), "t", 8), 2),  # var reuse
        (Laurent(FiniteField(3), "t", 1), 2),  # precision too small
    ]:
        with pytest.raises(InvalidModel):
            validate_model(model, p)


def test_model_json_round_trip():
    for model, p in [
        (FiniteField(13), 3),
        (DyadicRational(), 2),
        (LocalRational(5), 2),
        (RealField(), 2),
        (ComplexField(), 5),
        (F7T, 3),
        (TOWER, 2),
    ]:
        assert model_from_json(model_to_json(model), p) == model
    with pytest.raises(InvalidModel):
        model_from_json({"kind": "Weird", "params": {}}, 2)


def test_element_from_json():
    assert element_from_json(FiniteField(5), 3) == 3
    with pytest.raises(ValidationError):
        element_from_json(FiniteField(5), 7)
    assert element_from_json(DyadicRational(), {"num": -1, "den": 3}) == \
        Fraction(-1, 3)
    assert element_from_json(DyadicRational(), 4) == Fraction(4)
    ring = domain_for(F7T)
    e = element_from_json(F7T, {"v": -1, "coeffs": [1, 2]})
    assert ring.val(e) == -1 and ring.render(e) == "t^-1 + 2 + O(t^7)"
    with pytest.raises(ValidationError):
        element_from_json(F7T, [1, 2])


def test_class_groups():
    assert class_group(DyadicRational(), 2) == ["-1", "2", "5"]
    assert class_group(FiniteField(5), 2) == ["2"]
    assert class_group(LocalRational(5), 2) == ["2", "5"]
    assert class_group(RealField(), 2) == ["-1"]
    assert class_group(ComplexField(), 2) == []
    assert class_group(F7T, 3) == ["3", "t"]
    assert class_group(TOWER, 2) == ["2", "t", "u"]


def test_class_of_dyadic():
    assert class_of(DyadicRational(), 2, Fraction(-1)) == (1, 0, 0)
    assert class_of(DyadicRational(), 2, Fraction(10)) == (0, 1, 1)
    assert class_of(DyadicRational(), 2, Fraction(9, 49)) == (0, 0, 0)
    assert is_pth_power(DyadicRational(), 2, Fraction(17))  # 17 = 1 mod 8
    assert not is_pth_power(DyadicRational(), 2, Fraction(5))


def test_hilbert_vs_norm_oracle():
    reps = [Fraction(s * u * t) for s in (1, -1) for u in (1, 5)
            for t in (1, 2)]
    assert len(reps) == 8
    for a in reps:
        for b in reps:
            formula = hilbert2(a, b) == 0
            assert formula == norm_oracle_solvable(a, b), (a, b)


def test_symbol_steinberg_and_antisymmetry_dyadic():
    pool = [Fraction(x) for x in (2, 5, -1, 10, -2, 7, 3, -5)]
    for a in pool:
        if a != 1:
            assert symbol_vector(DyadicRational(), 2, a, 1 - a).tolist() == [0]
        assert symbol_vector(DyadicRational(), 2, a, -a).tolist() == [0]
        for b in pool:
            s1 = symbol_vector(DyadicRational(), 2, a, b)
            s2 = symbol_vector(DyadicRational(), 2, b, a)
            assert np.array_equal(s1, (-s2) % 2)
            # multiplying by a square leaves the symbol alone
            s3 = symbol_vector(DyadicRational(), 2, a * 9, b)
            assert np.array_equal(s1, s3)


def _random_series(rng, ring, f):
    v = rng.randrange(-2, 3)
    coeffs = [rng.randrange(f.q) for _ in range(4)]
    if all(c == 0 for c in coeffs):
        coeffs[0] = 1
    while coeffs[0] == 0:
        coeffs.pop(0)
        v += 1
    return ring.from_coeffs(v, coeffs)


@pytest.mark.parametrize("q,p", [(3, 2), (5, 2), (7, 2), (9, 2), (13, 2),
                                 (7, 3), (13, 3)])
def test_tame_symbol_two_routes(q, p):
    model = Laurent(FiniteField(q), "t", 8)
    ring = domain_for(model)
    f = gf(q)
    rng = random.Random(1000 + q + p)
    for _ in range(60):
        a = _random_series(rng, ring, f)
        b = _random_series(rng, ring, f)
        va, vb = ring.val(a), ring.val(b)
        # residue route: the tame symbol only sees valuations and leads
        lead = f.mul(f.pow_(ring.lead(a), vb), f.inv(f.pow_(ring.lead(b), va)))
        if (va * vb) % 2:
            lead = f.mul(lead, f.minus_one)
        expect = list(f.class_of(lead, p))
        assert symbol_vector(model, p, a, b).tolist() == expect


def test_tame_symbol_bilinear_on_cosets():
    ring = domain_for(F7T)
    rng = random.Random(77)
    f = gf(7)
    for _ in range(40):
        a = _random_series(rng, ring, f)
        b = _random_series(rng, ring, f)
        s = _random_series(rng, ring, f)
        sa = ring.mul(a, ring.pow_(s, 3))
        assert np.array_equal(symbol_vector(F7T, 3, a, b),
                              symbol_vector(F7T, 3, sa, b))


def test_symbol_dims():
    assert symbol_dim(DyadicRational(), 2) == 1
    assert symbol_dim(FiniteField(5), 2) == 0
    assert symbol_dim(F7T, 3) == 1
    assert symbol_dim(TOWER, 2) == 3
    assert class_dim(TOWER, 2) == 3


def test_predictions():
    assert predict_galois_pair(ComplexField(), 2) is not None
    assert isinstance(predict_galois_pair(RealField(), 2), EBlock)
    z = predict_galois_pair(FiniteField(5), 2)
    assert isinstance(z, ZBlock) and z.alpha.value == 5
    e = predict_galois_pair(LocalRational(5), 2)
    assert isinstance(e, Ext) and isinstance(e.base, ZBlock)
    d = predict_galois_pair(DyadicRational(), 2)
    assert d == PAdicBlock(n=3, q=2, case="II", f=2, s=4)
    t = predict_galois_pair(TOWER, 2)
    assert isinstance(t, Ext) and isinstance(t.base, Ext)


def test_pairing_matches():
    assert check_pairing_match(DyadicRational(),
                               PAdicBlock(n=3, q=2, case="II", f=2), 2)
    assert check_pairing_match(RealField(), EBlock(), 2)
    assert not check_pairing_match(FiniteField(5), EBlock(), 2)
    for model, p in [(ComplexField(), 2), (FiniteField(9), 2),
                     (LocalRational(7), 3), (F7T, 3), (TOWER, 2)]:
        assert check_pairing_match(model, predict_galois_pair(model, p), p)


def test_from_field_model_eps_is_class_of_minus_one():
    for model, p in [(DyadicRational(), 2), (RealField(), 2),
                     (FiniteField(5), 2), (TOWER, 2)]:
        m = from_field_model(model, p)
        if isinstance(model, (DyadicRational, RealField)):
            minus = Fraction(-1)
        else:
            minus = domain_for(model).minus_one
        assert m.eps.tolist() == list(class_of(model, p, minus))


def test_trichotomic_examples():
    r = trichotomic_search(DyadicRational(), 2, Fraction(2))
    assert r.verdict == "Witness" and r.witness == "-1"
    ring = domain_for(F7T)
    r = trichotomic_search(F7T, 3, ring.gen())
    assert r.verdict == "Witness" and r.witness == "1 + t + O(t^8)"
    r = trichotomic_search(FiniteField(5), 2, 2)
    assert r.verdict == "Witness"
    with pytest.raises(ValidationError):
        trichotomic_search(DyadicRational(), 2, Fraction(4))
    j = r.to_json()
    assert set(j) == {"verdict", "witness", "searched", "searchBound"}


def test_o_membership_examples():
    ring = domain_for(TOWER)
    u = ring.gen()
    r = o_membership(TOWER, 2, u, "all", "OMinus")
    assert r.verdict == "Member"  # 1 - u is a square by Hensel lifting
    base_t = ring.from_const(domain_for(TOWER.base).gen())
    tu = ring.mul(base_t, u)
    even = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]]
    r = o_membership(TOWER, 2, tu, even, "OMinus")
    assert r.verdict == "NonMember"  # odd u-valuation leaves H
    r = o_membership(FiniteField(3), 2, 2, [[0]], "OMinus")
    assert r.verdict == "NonMember"
    r = o_membership(FiniteField(3), 2, 1, "all", "ORing")
    assert r.verdict == "Member"
    r = o_membership(TOWER, 2, u, "all", "ORing")
    assert r.verdict == "Member"
    u2 = ring.mul(u, u)
    r = o_membership(TOWER, 2, u2, "all", "OPlus", bound=3)
    assert r.verdict == "UnknownWithinBound"
    # -1 times 1-u^2 leaves the candidate set, with the witness reported
    r = o_membership(TOWER, 2, ring.minus_one, "all", "ORing")
    assert r.verdict == "NonMember" and "u^2" in r.witness
    with pytest.raises(ValidationError):
        o_membership(TOWER, 2, ring.zero, "all", "OMinus")
    with pytest.raises(ValidationError):
        o_membership(FiniteField(3), 2, 2, [[1]], "OMinus")  # H without 1


def test_total_rigidity_verdicts():
    v = is_totally_rigid_bounded(FiniteField(5), 2)
    assert v.verdict == "TotallyRigid"
    assert v.decided_pairs == v.total_pairs == 4
    v = is_totally_rigid_bounded(DyadicRational(), 2)
    assert v.verdict == "NotTotallyRigid"
    assert v.witness == "[0,0,1] (x) [0,0,1]"  # the class of 5 squared
    assert (v.st_dim, v.d_dim) == (8, 5)
    assert v.decided_pairs == v.total_pairs == 64
    v = is_totally_rigid_bounded(ComplexField(), 2)
    assert v.verdict == "TotallyRigid"
    j = v.to_json()
    assert set(j) == {"verdict", "witness", "stDim", "dDim",
                      "decidedPairs", "totalPairs"}


def test_element_pool_deterministic():
    first = [domain_for(F7T).render(x)
             for _, x in zip(range(6), element_pool(F7T, 3))]
    second = [domain_for(F7T).render(x)
              for _, x in zip(range(6), element_pool(F7T, 3))]
    assert first == second
    pool = list(zip(range(5), element_pool(DyadicRational(), 2)))
    assert [x for _, x in pool][:3] == [Fraction(-1), Fraction(2), Fraction(5)]
