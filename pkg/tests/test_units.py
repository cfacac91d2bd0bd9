import pytest
from hypothesis import given
from hypothesis import strategies as st

from etkit.errors import (
    DenominatorNotInvertible,
    NotAUnit,
    PrecisionExhausted,
    ValidationError,
)
from etkit.units import (
    PAdicUnit,
    enumerate_subgroup,
    epsilon_of,
    make_unit,
    subgroup_invariants,
)


def test_make_unit_reduces_rationals():
    u = make_unit(2, -1, 3)
    assert u.value == (-pow(3, -1, 2**64)) % 2**64
    assert u.num == -1 and u.den == 3


def test_make_unit_rejects_bad_inputs():
    with pytest.raises(DenominatorNotInvertible):
        make_unit(2, 1, 4)
    with pytest.raises(NotAUnit):
        make_unit(2, 4, 1)
    with pytest.raises(NotAUnit):
        make_unit(3, 2, 1)


def test_multiplication_and_inverse():
    u = make_unit(2, 3)
    v = make_unit(2, 5)
    w = u * v
    assert w.value == 15
    assert (u * u.inverse()).value == 1


def test_epsilon_values():
    assert epsilon_of(make_unit(2, -1)) == 1
    assert epsilon_of(make_unit(2, 5)) == 0
    assert epsilon_of(make_unit(2, 3)) == 1
    assert epsilon_of(make_unit(2, -1, 3)) == 0  # -1/3 = 5 mod 8
    assert epsilon_of(make_unit(3, 4)) == 0


def test_to_json_prefers_provenance():
    assert make_unit(2, -1, 3).to_json() == {"num": -1, "den": 3}
    raw = PAdicUnit(2, 5, 16)
    assert raw.to_json() == {"residue": 5, "precision": 16}


def test_q_invariant_examples():
    inv = subgroup_invariants(2, [make_unit(2, 5)], K=16)
    assert inv.q_invariant == 4 and not inv.eps_nonzero
    inv = subgroup_invariants(2, [make_unit(2, -1)], K=16)
    assert inv.q_invariant == 2 and inv.eps_nonzero
    inv = subgroup_invariants(3, [make_unit(3, 4)], K=16)
    assert inv.q_invariant == 3
    inv = subgroup_invariants(2, [make_unit(2, 1)], K=16)
    assert inv.trivial and inv.q_invariant == 0


def test_precision_exhausted_on_deep_units():
    with pytest.raises(PrecisionExhausted):
        subgroup_invariants(2, [make_unit(2, 1 + 2**14, 1, 16)], K=16)


def test_q2_theta_image_invariants():
    # generators of the dyadic theta image: -1 and -1/3
    inv = subgroup_invariants(2, [make_unit(2, -1), make_unit(2, -1, 3)])
    assert inv.q_invariant == 2
    assert inv.eps_nonzero
    assert inv.square_index == 4


@st.composite
def generator_sets(draw):
    k = draw(st.integers(1, 3))
    nums = draw(st.lists(st.integers(-60, 60).filter(lambda n: n % 2),
                         min_size=k, max_size=k))
    return [make_unit(2, n, 1, 10) for n in nums]


@given(generator_sets())
def test_invariants_match_enumeration(gens):
    """Two-route check at low precision: the lattice-based invariants
    against literal subgroup closure mod 2^10."""
    K = 10
    try:
        inv = subgroup_invariants(2, gens, K=K)
    except PrecisionExhausted:
        return
    subgroup = enumerate_subgroup(2, gens, K)
    if inv.trivial:
        assert subgroup == {1}
        return
    mod = 1 << K
    # q-invariant: from the minimal valuation of g-1 over the subgroup
    vals = []
    for x in subgroup:
        if x == 1:
            continue
        d, t = (x - 1) % mod, 0
        while d % 2 == 0:
            d //= 2
            t += 1
        vals.append(t)
    assert inv.q_invariant == 2 ** min(vals)
    assert inv.eps_nonzero == any(x % 4 == 3 for x in subgroup)
    squares = {(x * x) % mod for x in subgroup}
    assert inv.square_index == len(subgroup) // len(squares)
