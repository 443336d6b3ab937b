import math
import random
from collections import defaultdict
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from divring._kron import grid_product
from divring.errors import NotInvertible, NotPerfectError, ValuationUndefined
from divring.fields import GF, FpBar
from divring.hahn import HahnField, gamma_coset, gamma_membership, nested_field, split_exponent

INF = math.inf
F9 = GF(3, 2)
S9 = HahnField(F9, prec=8)
SBAR = HahnField(FpBar(3), prec=8)
NEST = nested_field(3, prec=6)


def naive_product(a, b):
    """Direct convolution of the stored terms, truncated at the product precision."""
    acc = defaultdict(lambda: None)
    for e1, c1 in a.terms():
        for e2, c2 in b.terms():
            acc[e1 + e2] = c1 * c2 if acc[e1 + e2] is None else acc[e1 + e2] + c1 * c2
    prec = INF
    if a.prec != INF:
        prec = min(prec, a.prec + b.valuation())
    if b.prec != INF:
        prec = min(prec, b.prec + a.valuation())
    return {e: c for e, c in acc.items() if e < prec and c}, prec


def as_dict(s):
    return dict(s.terms())


def random_series(field, rng, terms=4, prec=None):
    return field.random_element(rng, terms=terms, prec=prec)


def test_exponent_splitting():
    assert split_exponent(Fraction(5, 9), 3) == (5, 2)
    assert split_exponent(6, 3) == (6, 0)
    with pytest.raises(ValueError):
        split_exponent(Fraction(1, 2), 3)


def test_gamma_membership():
    assert gamma_membership(Fraction(1, 9), 3)
    assert not gamma_membership(Fraction(1, 2), 3)
    assert gamma_membership(Fraction(1, 2), 2)


def test_gamma_coset_parity_classes_never_collide():
    rng = random.Random(5)
    for p in (3, 5):
        for _ in range(500):
            g = Fraction(rng.randint(-50, 50), p ** rng.randint(0, 3))
            d = Fraction(rng.randint(-50, 50), p ** rng.randint(0, 3))
            assert gamma_coset(2 * g, 2, p) == 0
            assert gamma_coset(2 * d + 1, 2, p) == 1
    # exhaustive at bounded height: 2G and 2G+1 are disjoint
    p = 3
    evens = {2 * Fraction(n, p ** k) for n in range(-20, 21) for k in range(3)}
    odds = {2 * Fraction(n, p ** k) + 1 for n in range(-20, 21) for k in range(3)}
    assert not evens & odds


def test_add_zero_keeps_precision():
    s = S9.series({0: 1, 1: 2}, prec=5)
    r = s + S9.zero
    assert r == s and r.prec == 5


def test_monomial_products_add_exponents():
    t13 = S9.monomial(1, Fraction(1, 3))
    assert t13 * t13 == S9.monomial(1, Fraction(2, 3))


def test_polynomial_product():
    t = S9.gen()
    assert (1 + t) * (1 - t) == 1 - t * t
    assert ((1 + t) * (1 - t)).prec == INF


def test_valuation():
    t = S9.gen()
    assert (S9.monomial(1, Fraction(1, 3)) + t).valuation() == Fraction(1, 3)
    assert S9.one.valuation() == 0
    with pytest.raises(ValuationUndefined):
        S9.zero.add_bigoh(3).valuation()


@given(st.integers(0, 10 ** 6))
@settings(max_examples=100, deadline=None)
def test_product_matches_naive_convolution(seed):
    rng = random.Random(seed)
    for field in (S9, SBAR):
        pa = rng.choice([None, Fraction(rng.randint(1, 12), 3)])
        pb = rng.choice([None, Fraction(rng.randint(1, 12), 3)])
        a = random_series(field, rng, prec=pa)
        b = random_series(field, rng, prec=pb)
        if not a.terms() or not b.terms():
            continue
        expected, prec = naive_product(a, b)
        got = a * b
        assert got.prec == prec
        assert as_dict(got) == expected
        assert got.valuation() == a.valuation() + b.valuation()


def test_nested_product_matches_naive_on_large_inputs(monkeypatch):
    # dense enough for the Kronecker path
    import divring.hahn as hahn_module

    calls = []
    monkeypatch.setattr(hahn_module, "grid_product",
                        lambda *args: calls.append(1) or grid_product(*args))
    rng = random.Random(2)
    k = NEST.coefficients

    def big():
        terms = {}
        for e in range(-3, 30):
            inner = k.series({Fraction(j, 3): F9.random_element(rng, nonzero=True)
                              for j in rng.sample(range(0, 12), 10)})
            terms[Fraction(e, 3)] = inner
        return NEST.series(terms)

    a, b = big(), big()
    got = a * b
    flat = defaultdict(lambda: F9.zero)
    for e1, c1 in a.terms():
        for e2, c2 in b.terms():
            for f1, d1 in c1.terms():
                for f2, d2 in c2.terms():
                    flat[(e1 + e2, f1 + f2)] += d1 * d2
    got_flat = {(e, f): d for e, c in got.terms() for f, d in c.terms()}
    assert got_flat == {key: v for key, v in flat.items() if v}
    assert calls


def test_grid_product_against_naive():
    rng = random.Random(9)
    for f in (GF(3, 2), GF(2, 3), GF(5)):
        a = {(rng.randrange(6), rng.randrange(6)): rng.randrange(1, f.order) for _ in range(12)}
        b = {(rng.randrange(6), rng.randrange(6)): rng.randrange(1, f.order) for _ in range(12)}
        naive = defaultdict(int)
        for (i, j), v in a.items():
            for (k, l), w in b.items():
                naive[(i + k, j + l)] = f._add(naive[(i + k, j + l)], f._mul(v, w))
        assert grid_product(f, a, b) == {key: v for key, v in naive.items() if v}


def test_inverse_of_one_and_monomials():
    assert S9.one.inverse() == S9.one
    m = S9.monomial(F9.gen, Fraction(-5, 9))
    inv = m.inverse()
    assert inv == S9.monomial(F9.gen.inverse(), Fraction(5, 9))
    assert inv.prec == INF


def test_geometric_series_inverse():
    t = S9.gen()
    s = (1 - t).add_bigoh(3)
    inv = s.inverse()
    assert as_dict(inv) == {0: F9.one, 1: F9.one, 2: F9.one}
    r = inv * s
    assert as_dict(r) == {0: F9.one}


def test_inverse_of_zero_fails():
    with pytest.raises(NotInvertible):
        S9.zero.inverse()


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_inverse_residual_vanishes(seed):
    rng = random.Random(seed)
    for field in (S9, NEST):
        a = random_series(field, rng, terms=3)
        if not a.terms():
            continue
        r = a * a.inverse() - 1
        assert r.is_zero()
        assert r.prec > 0


def test_inverse_of_inexact_series_has_relative_precision():
    t = S9.gen()
    s = (t + t * t).add_bigoh(4)
    inv = s.inverse()
    assert inv.prec == 4 - 2 * s.valuation()


def test_pth_root():
    t = SBAR.gen()
    assert t.pth_root() == SBAR.monomial(1, Fraction(1, 3))
    assert SBAR.one.pth_root() == SBAR.one
    rng = random.Random(4)
    for _ in range(100):
        s = random_series(SBAR, rng, prec=rng.choice([None, Fraction(7, 3)]))
        # repeated multiplication loses precision, Frobenius does not
        assert (s.pth_root() ** 3).eq_to_prec(s)
        assert s.pth_root().frobenius() == s


def test_pth_root_requires_perfect_coefficients():
    with pytest.raises(NotPerfectError):
        HahnField(HahnField(F9), var="x").gen().pth_root()


def test_frobenius_is_additive():
    rng = random.Random(8)
    for _ in range(50):
        a, b = random_series(S9, rng), random_series(S9, rng)
        assert (a + b).frobenius() == a.frobenius() + b.frobenius()
        assert (a * b).frobenius() == a.frobenius() * b.frobenius()


def test_json_round_trip():
    rng = random.Random(1)
    for field in (S9, SBAR, NEST):
        for _ in range(20):
            s = random_series(field, rng, prec=rng.choice([None, Fraction(5, 3)]))
            assert field.element_from_json(field.element_to_json(s)) == s


def test_ring_axioms_nested():
    rng = random.Random(12)
    for _ in range(20):
        a, b, c = (random_series(NEST, rng, terms=3) for _ in range(3))
        assert ((a * b) * c - a * (b * c)).is_zero()
        assert (a * (b + c) - (a * b + a * c)).is_zero()
        assert a * b == b * a
