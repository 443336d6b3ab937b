import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from divring.errors import FieldMismatch, NotInvertible
from divring.fields import (GF, PerfectClosure, FpBar, artin_schreier_solve, embed, format_fq,
                            format_perf, frobenius, frobenius_inverse, is_irreducible, is_prime,
                            parse_fq, parse_perf, primitive_root_of_unity, smallest_irreducible,
                            trace)

SMALL = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1)]


def poly_mul_oracle(F, a, b):
    """Schoolbook product of coordinate vectors reduced by the defining polynomial."""
    p, n = F.p, F.n
    ca, cb = a.coords, b.coords
    prod = [0] * (2 * n - 1)
    for i, x in enumerate(ca):
        for j, y in enumerate(cb):
            prod[i + j] = (prod[i + j] + x * y) % p
    poly = F.poly  # monic, low to high, length n + 1
    for k in range(2 * n - 2, n - 1, -1):
        top = prod[k]
        if top:
            for t in range(n + 1):
                prod[k - n + t] = (prod[k - n + t] - top * poly[t]) % p
    return prod[:n]


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2), (5, 2), (2, 4)])
def test_defining_polynomial_has_no_roots_or_factors(p, n):
    poly = smallest_irreducible(p, n)
    assert is_irreducible(poly, p)
    # brute force: no monic factor of degree 1..n//2
    for d in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            r = list(poly)
            while len(r) >= len(g):
                c = r[-1]
                shift = len(r) - len(g)
                for i, gi in enumerate(g):
                    r[shift + i] = (r[shift + i] - c * gi) % p
                r.pop()
            assert any(r), (poly, g)


@pytest.mark.parametrize("p,n", SMALL)
def test_multiplication_matches_schoolbook(p, n):
    F = GF(p, n)
    els = list(F.elements())
    pairs = itertools.product(els, els) if F.order <= 27 else (
        (F.random_element(random.Random(i)), F.random_element(random.Random(-i))) for i in range(200))
    for a, b in pairs:
        assert (a * b).coords == poly_mul_oracle(F, a, b)


@pytest.mark.parametrize("p,n", SMALL)
def test_field_axioms_exhaustive_small(p, n):
    F = GF(p, n)
    rng = random.Random(p * 100 + n)
    for _ in range(100):
        a, b, c = (F.random_element(rng) for _ in range(3))
        assert a + b == b + a and a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == F.zero and a + (-a) == F.zero
        if a:
            assert a * a.inverse() == F.one
            assert (b / a) * a == b
    with pytest.raises(NotInvertible):
        F.zero.inverse()


def test_frobenius_in_f9_by_brute_powering():
    F = GF(3, 2)
    g = F.gen
    assert frobenius(g) == g * g * g
    for x in F.elements():
        assert frobenius(x) == x * x * x
    assert frobenius(F.zero) == F.zero
    for x in F.prime_field_elements():
        assert frobenius(x) == x


@pytest.mark.parametrize("p,n", SMALL)
def test_frobenius_inverse_round_trip(p, n):
    F = GF(p, n)
    rng = random.Random(7)
    assert frobenius_inverse(F.one) == F.one
    for _ in range(100):
        x = F.random_element(rng)
        assert frobenius_inverse(frobenius(x)) == x
        assert frobenius(frobenius_inverse(x)) == x


def test_trace_of_one_and_zero():
    for p, n in SMALL:
        F = GF(p, n)
        assert trace(F.one) == F(n % p)
        assert trace(F.zero) == F.zero


def test_trace_in_f8_matches_direct_formula():
    F = GF(2, 3)
    for x in F.elements():
        assert trace(x) == x + x ** 2 + x ** 4


def test_relative_trace_lands_in_subfield():
    F = GF(2, 4)
    rng = random.Random(3)
    for _ in range(30):
        x = F.random_element(rng)
        t = trace(x, 2)
        assert t == x + x ** 4
        assert t ** 4 == t


@pytest.mark.parametrize("p,n", [(2, 1), (2, 3), (3, 2), (5, 2), (3, 3)])
def test_artin_schreier_exhaustive(p, n):
    F = GF(p, n)
    assert artin_schreier_solve(F.zero) == F.zero
    for b in F.elements():
        roots = [y for y in F.elements() if y ** p - y == b]
        y = artin_schreier_solve(b)
        if trace(b):
            assert y is None and not roots
        else:
            assert y is not None and y ** p - y == b
            assert len(roots) == p


def test_embedding_respects_minimal_polynomial():
    F4, F16 = GF(2, 2), GF(2, 4)
    g = F4.gen
    # minimal polynomial of g over F_2 is the defining polynomial of F_4
    poly = F4.poly
    h = embed(g, F16)
    value = sum((h ** i * c for i, c in enumerate(poly)), F16.zero)
    assert value == F16.zero
    assert h != F16.zero and h ** 3 == F16.one


@pytest.mark.parametrize("p,m,n", [(2, 2, 4), (3, 1, 2), (2, 3, 6), (3, 2, 4)])
def test_embedding_is_a_homomorphism(p, m, n):
    small, big = GF(p, m), GF(p, n)
    rng = random.Random(m * n)
    for x in small.prime_field_elements():
        assert embed(x, big) == big(x.coords[0])
    for _ in range(100):
        a, b = small.random_element(rng), small.random_element(rng)
        assert embed(a + b, big) == embed(a, big) + embed(b, big)
        assert embed(a * b, big) == embed(a, big) * embed(b, big)


def test_embeddings_compose():
    F4, F16, F256 = GF(2, 2), GF(2, 4), GF(2, 8)
    for x in F4.elements():
        assert embed(embed(x, F16), F256) == embed(x, F256)


def test_embed_into_non_extension_fails():
    with pytest.raises((FieldMismatch, ValueError)):
        embed(GF(2, 2).gen, GF(2, 3))


def test_primitive_cube_root_of_unity_in_f4():
    w = primitive_root_of_unity(3, 2)
    assert w ** 3 == w.field.one and w != w.field.one
    assert w.field.one + w + w * w == w.field.zero
    assert primitive_root_of_unity(1, 2) == GF(2).one


@pytest.mark.parametrize("q,p", [(3, 2), (2, 3), (4, 5), (3, 7), (5, 2)])
def test_root_of_unity_order_by_powering(q, p):
    w = primitive_root_of_unity(q, p)
    one = w.field.one
    assert w ** q == one
    assert all(w ** k != one for k in range(1, q))


def test_fpbar_mixes_degrees():
    K = FpBar(3)
    a = GF(3, 2).gen
    b = GF(3, 3).gen
    c = K(a) * K(b)
    assert c.field.n == 6
    assert c == embed(a, GF(3, 6)) * embed(b, GF(3, 6))


def test_format_parse_round_trip():
    for p, n in SMALL:
        F = GF(p, n)
        for x in itertools.islice(F.elements(), 30):
            assert parse_fq(format_fq(x), F) == x


# -- perfect closure ---------------------------------------------------------

P3 = PerfectClosure(GF(3))


def test_perfect_closure_inverse_frobenius_of_t():
    t = P3.t
    r = frobenius_inverse(t)
    assert r.level == 1
    assert r ** 3 == t


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_perfect_closure_field_axioms(seed):
    rng = random.Random(seed)
    a, b, c = (P3.random_element(rng) for _ in range(3))
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert frobenius(a + b) == frobenius(a) + frobenius(b)
    assert frobenius_inverse(frobenius(a)) == a
    if a:
        assert a * a.inverse() == P3.one


def test_perfect_closure_text_round_trip():
    rng = random.Random(11)
    for _ in range(50):
        x = P3.random_element(rng)
        assert parse_perf(format_perf(x), P3) == x
