import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from divring.errors import NotInvertible
from divring.fields import GF
from divring.ore import (BOTTOM, DifferenceField, OrePoly, evaluate, factor_through_root,
                         format_twist, frobenius_field, left_divide, parse_twist,
                         perfect_closure_field, right_divide, right_gcd, root_factor, twist_mul)

F9 = frobenius_field(3, 2)
F8 = frobenius_field(2, 3)
PERF = perfect_closure_field(3)
FINITE = [F9, F8, frobenius_field(2, 2), frobenius_field(3, 3)]


def S(H, k=1):
    return OrePoly.sigma(H, k)


def I(H):
    return OrePoly.identity(H)


def test_bottom_degree():
    assert OrePoly.zero(F9).degree is BOTTOM
    assert BOTTOM < -10 and not BOTTOM < BOTTOM
    assert BOTTOM + 3 is BOTTOM
    assert OrePoly(F9, [F9.zero, F9.zero]).degree is BOTTOM


def test_composition_law():
    a = F9.field.gen
    f = S(F9) * OrePoly.constant(F9, a)
    assert f == OrePoly(F9, [F9.zero, a ** 3])
    g = OrePoly.random(F9, random.Random(1), 3)
    assert g * I(F9) == g and I(F9) * g == g


def test_evaluate_small_cases():
    for c in F9.elements():
        assert evaluate(S(F9) - I(F9), c) == c ** 3 - c
        assert evaluate(OrePoly.zero(F9), c) == F9.zero
    fixed = [c for c in F9.elements() if not evaluate(S(F9) - I(F9), c)]
    assert sorted(c.v for c in fixed) == sorted(c.v for c in F9.fixed_elements())


@pytest.mark.parametrize("H", FINITE, ids=repr)
def test_evaluate_matches_p_polynomial(H):
    rng = random.Random(2)
    p = H.field.p
    for _ in range(50):
        f = OrePoly.random(H, rng, rng.randint(0, 4))
        c = H.random_element(rng)
        direct = sum((r * c ** (p ** i) for i, r in enumerate(f.coeffs)), H.zero)
        assert evaluate(f, c) == direct


@given(st.integers(0, 10 ** 6))
@settings(max_examples=80, deadline=None)
def test_evaluation_respects_composition(seed):
    rng = random.Random(seed)
    H = rng.choice(FINITE)
    f = OrePoly.random(H, rng, rng.randint(-1, 4))
    g = OrePoly.random(H, rng, rng.randint(-1, 4))
    c = H.random_element(rng)
    assert evaluate(twist_mul(f, g), c) == evaluate(f, evaluate(g, c))


def test_evaluation_respects_composition_perfect_closure():
    rng = random.Random(3)
    for _ in range(10):
        f = OrePoly.random(PERF, rng, rng.randint(0, 2))
        g = OrePoly.random(PERF, rng, rng.randint(0, 1))
        c = PERF.random_element(rng)
        assert evaluate(f * g, c) == evaluate(f, evaluate(g, c))


def test_twist_ring_axioms():
    rng = random.Random(4)
    for _ in range(40):
        H = rng.choice(FINITE)
        a, b, c = (OrePoly.random(H, rng, rng.randint(-1, 3)) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a + b) * c == a * c + b * c
        if a and b:
            assert (a * b).degree == a.degree + b.degree


def test_division_edge_cases():
    rng = random.Random(5)
    f = OrePoly.random(F9, rng, 3)
    assert right_divide(f, f) == (I(F9), OrePoly.zero(F9))
    g = OrePoly.random(F9, rng, 4)
    assert right_divide(f, g) == (OrePoly.zero(F9), f)
    assert left_divide(f, g) == (OrePoly.zero(F9), f)
    h = OrePoly.random(F9, rng, 2)
    assert left_divide(g * h, g) == (h, OrePoly.zero(F9))
    with pytest.raises(NotInvertible):
        right_divide(f, OrePoly.zero(F9))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=100, deadline=None)
def test_division_reconstructs(seed):
    rng = random.Random(seed)
    H = rng.choice(FINITE)
    f = OrePoly.random(H, rng, rng.randint(-1, 6))
    g = OrePoly.random(H, rng, rng.randint(0, 4))
    q, r = right_divide(f, g)
    assert q * g + r == f and r.degree < g.degree
    q, r = left_divide(f, g)
    assert g * q + r == f and r.degree < g.degree


def test_division_reconstructs_perfect_closure():
    rng = random.Random(6)
    for _ in range(25):
        f = OrePoly.random(PERF, rng, rng.randint(-1, 3))
        g = OrePoly.random(PERF, rng, rng.randint(0, 2))
        q, r = right_divide(f, g)
        assert q * g + r == f and r.degree < g.degree
        q, r = left_divide(f, g)
        assert g * q + r == f and r.degree < g.degree


def test_left_division_needs_inversive_handle():
    H = frobenius_field(3, 2, inversive=False)
    f = OrePoly.random(H, random.Random(0), 2)
    with pytest.raises(ValueError):
        left_divide(f, S(H))


def test_gcd_small_cases():
    rng = random.Random(7)
    f = OrePoly.random(F9, rng, 3)
    assert right_gcd(f, OrePoly.zero(F9)) == f.monic()
    d = S(F9) - I(F9)
    assert right_gcd(d, d) == d
    with pytest.raises(ValueError):
        right_gcd(OrePoly.zero(F9), OrePoly.zero(F9))


def test_gcd_planted_common_factor():
    rng = random.Random(8)
    for _ in range(60):
        H = rng.choice(FINITE)
        h = OrePoly.random(H, rng, rng.randint(1, 3))
        a = OrePoly.random(H, rng, rng.randint(0, 3))
        b = OrePoly.random(H, rng, rng.randint(0, 3))
        g = right_gcd(a * h, b * h)
        assert g.leading_coefficient() == H.one
        assert right_divide(g, h)[1].is_zero()
        assert right_divide(a * h, g)[1].is_zero()
        assert right_divide(b * h, g)[1].is_zero()


def test_root_factor_basic():
    d = S(F9) - I(F9)
    assert factor_through_root(d, F9.one) == I(F9)
    f = S(F9, 2) - I(F9)
    for a in F9.field.nonzero_elements():
        # every element of F_9 is a root of sigma^2 - id
        assert not evaluate(f, a)
        rf = OrePoly(F9, [-(a ** 2), F9.one])
        assert rf == root_factor(F9, a)
        q, r = right_divide(f, rf)
        assert r.is_zero() and q * rf == f


def test_root_factor_plant_and_recover():
    rng = random.Random(9)
    for H in FINITE + [PERF]:
        for _ in range(15):
            a = H.random_element(rng, nonzero=True)
            d = OrePoly.random(H, rng, rng.randint(0, 2))
            assert factor_through_root(d * root_factor(H, a), a) == d


def test_non_root_rejected():
    a = F9.field.gen
    with pytest.raises(ValueError):
        factor_through_root(S(F9) - I(F9), a)


def test_root_equivalence_exhaustive_degree_one():
    elems = list(F9.elements())
    for coeffs in itertools.product(elems, repeat=2):
        f = OrePoly(F9, coeffs)
        for a in elems[1:]:
            assert (not evaluate(f, a)) == right_divide(f, root_factor(F9, a))[1].is_zero()


def test_text_round_trip():
    rng = random.Random(10)
    for H in FINITE + [PERF]:
        for _ in range(20):
            f = OrePoly.random(H, rng, rng.randint(-1, 3))
            assert parse_twist(format_twist(f), H) == f
    assert parse_twist("S^2 + 2", F9) == OrePoly(F9, [F9.field(2), F9.zero, F9.one])
    assert format_twist(OrePoly(F9, [F9.field.gen, F9.one])) == "[1,0]*S + [0,1]"


def test_handle_rejects_non_endomorphism():
    F = GF(5)
    with pytest.raises(ValueError):
        DifferenceField("bad", F, sigma=lambda a: a + 1)
    with pytest.raises(ValueError):
        DifferenceField("bad-square", F, sigma=lambda a: a * a)
