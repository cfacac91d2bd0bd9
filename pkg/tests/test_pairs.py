import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from etkit.errors import ParseError, ValidationError
from etkit.pairs import (
    EBlock,
    Ext,
    FreeProd,
    PAdicBlock,
    Trivial,
    ZBlock,
    abelianization,
    eps_of_expr,
    normalize,
    parse,
    rank,
    render,
    structurally_isomorphic,
    theta_generators,
    theta_image,
    to_json,
    validate,
)
from etkit.randexpr import random_expr
from etkit.units import make_unit


def test_parse_blocks():
    assert parse("triv", 2) == Trivial()
    assert parse("E", 2) == EBlock()
    z = parse("Z(5)", 2)
    assert isinstance(z, ZBlock) and z.alpha.value == 5
    z = parse("Z(-1/3)", 2)
    assert isinstance(z, ZBlock) and z.alpha.num == -1 and z.alpha.den == 3


def test_parse_padic_defaults():
    b = parse("padic(n=3,case=II,f=2)", 2)
    assert b == PAdicBlock(n=3, q=2, case="II", f=2, s=4)
    b = parse("padic(n=3,case=II,f=inf)", 2)
    assert b.f == math.inf
    b = parse("padic(n=4,q=4,case=I)", 2)
    assert b.f is None and b.s == 1


def test_parse_compound():
    e = parse("E * Z(5) * ext(2, triv)", 2)
    assert isinstance(e, FreeProd) and len(e.factors) == 3
    e = parse("ext(1, (E * E))", 2)
    assert isinstance(e, Ext) and isinstance(e.base, FreeProd)


def test_parse_errors_carry_position():
    with pytest.raises(ParseError):
        parse("ext(1,", 2)
    with pytest.raises(ValidationError):
        parse("padic(n=3)", 2)  # missing case
    with pytest.raises(ValidationError):
        parse("Z(4)", 2)
    with pytest.raises(ValidationError):
        parse("E", 3)


def test_validation_rules():
    with pytest.raises(ValidationError):
        validate(PAdicBlock(n=2, q=2, case="II"), 2)
    with pytest.raises(ValidationError):
        validate(PAdicBlock(n=4, q=2, case="II", f=2), 2)  # II needs odd n
    with pytest.raises(ValidationError):
        validate(PAdicBlock(n=3, q=2, case="II", f=1), 2)
    with pytest.raises(ValidationError):
        validate(PAdicBlock(n=4, q=2, case="IV", f=math.inf), 2)
    with pytest.raises(ValidationError):
        validate(PAdicBlock(n=4, q=2, case="III", f=2, s=1), 2)  # s=1 iff case I
    with pytest.raises(ValidationError):
        validate(PAdicBlock(n=5, q=3, case="I"), 3)  # odd p needs even n
    validate(PAdicBlock(n=4, q=3, case="I"), 3)
    validate(PAdicBlock(n=6, q=2, case="III", f=math.inf), 2)


def test_normalize_sorts_and_flattens():
    e = parse("(Z(5) * E) * triv * E", 2)
    n = normalize(e, 2)
    assert isinstance(n, FreeProd)
    assert render(n) == "Z(5) * E * E"


def test_normalize_ext_rules():
    # a 1-step extension of E splits into a free product
    assert render(normalize(parse("ext(1, E)", 2), 2)) == "E * E"
    assert render(normalize(parse("ext(2, E)", 2), 2)) == "ext(1, E * E)"
    n = normalize(parse("ext(1, ext(2, Z(5)))", 2), 2)
    assert isinstance(n, Ext) and n.m == 3 and isinstance(n.base, ZBlock)
    z = normalize(parse("ext(1, triv)", 2), 2)
    assert isinstance(z, ZBlock) and z.alpha.value == 1


def test_normalize_fills_s():
    n = normalize(parse("padic(n=3,case=II,f=2)", 2), 2)
    assert n.s == 4
    n = normalize(parse("padic(n=4,q=4,case=I)", 2), 2)
    assert n.s == 1


def test_render_round_trip():
    rng = random.Random(11)
    for _ in range(40):
        p = rng.choice([2, 3])
        e = random_expr(rng, p, max_rank=6)
        again = normalize(parse(render(e), p), p)
        assert again == e, (render(e), render(again))


def test_json_shapes():
    e = parse("ext(1, Z(-1/3))", 2)
    j = to_json(e)
    assert j["type"] == "ext" and j["base"]["alpha"] == {"num": -1, "den": 3}


def test_rank_values():
    assert rank(parse("triv", 2)) == 0
    assert rank(parse("E * Z(5)", 2)) == 2
    assert rank(parse("padic(n=3,case=II,f=2)", 2)) == 3
    assert rank(parse("ext(2, E * E)", 2)) == 4


def test_theta_generators_and_image():
    gens = theta_generators(parse("padic(n=3,case=II,f=2)", 2), 2)
    assert [(g.num, g.den) for g in gens] == [(-1, 1), (1, -3)]
    inv = theta_image(parse("padic(n=3,case=II,f=2)", 2), 2)
    assert inv.q_invariant == 2 and inv.square_index == 4
    inv = theta_image(parse("Z(5) * Z(9)", 2), 2)
    assert inv.q_invariant == 4


def test_abelianization():
    assert abelianization(parse("Z(5)", 2), 2) == [0]
    assert abelianization(parse("E", 2), 2) == [2]
    assert abelianization(parse("ext(1, E)", 2), 2) == [2, 2]
    assert abelianization(parse("padic(n=3,case=II,f=2)", 2), 2) == [0, 0, 2]
    # extension twists the fibre by the base theta image
    assert abelianization(parse("ext(2, Z(5))", 2), 2) == [4, 4, 0]


def test_eps_of_expr():
    assert eps_of_expr(parse("Z(5)", 2), 2) == 0
    assert eps_of_expr(parse("Z(3)", 2), 2) == 1
    assert eps_of_expr(parse("E", 2), 2) == 1
    assert eps_of_expr(parse("Z(7)", 3), 3) == 0


def test_structural_isomorphism_on_sorted_forms():
    a = normalize(parse("Z(5) * E", 2), 2)
    b = normalize(parse("E * Z(5)", 2), 2)
    assert structurally_isomorphic(a, b, 2)
    c = normalize(parse("E * Z(9)", 2), 2)
    assert not structurally_isomorphic(a, c, 2)


@given(st.integers(0, 2**32))
def test_random_exprs_stay_valid_after_normalize(seed):
    rng = random.Random(seed)
    p = rng.choice([2, 3])
    e = random_expr(rng, p, max_rank=8)
    validate(e, p)
    # normalization is idempotent
    assert normalize(e, p) == e
