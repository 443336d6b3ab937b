import random
from fractions import Fraction

import pytest

from divring.cyclic import CyclicAlgebra, build_paper_example, norm_obstruction_certify
from divring.fields import GF
from divring.hahn import HahnField


@pytest.fixture(scope="module")
def A3():
    return build_paper_example(3)


@pytest.fixture(scope="module")
def A2():
    return build_paper_example(2)


def structure_constant_product(A, u, v):
    """Product from the multiplication table of the basis theta^m x^j.

    (theta^m x^j)(theta^n x^l) = zeta^(j n) theta^(m+n) x^(j+l), then
    theta^s = r and x^s = alpha.
    """
    s, F = A.s, A.F
    zeta = F(A.zeta)
    out = [F.zero] * (s * s)
    uv, vv = A.to_vector(u), A.to_vector(v)
    for j in range(s):
        for m in range(s):
            a = uv[j * s + m]
            if a.is_exact_zero():
                continue
            for l in range(s):
                for n in range(s):
                    b = vv[l * s + n]
                    if b.is_exact_zero():
                        continue
                    c = a * b * zeta ** (j * n)
                    mm, jj = m + n, j + l
                    if mm >= s:
                        mm -= s
                        c = c * A.radicand
                    if jj >= s:
                        jj -= s
                        c = c * A.alpha
                    out[jj * s + mm] = out[jj * s + mm] + c
    return A.from_vector(out)


def test_descriptors():
    A = build_paper_example(3)
    assert (A.s, A.dimension) == (2, 4)
    B = build_paper_example(2)
    assert (B.s, B.dimension) == (3, 9)
    with pytest.raises(ValueError):
        build_paper_example(4)
    d = A.to_json()
    assert d["s"] == 2 and d["standard_construction"]


def test_non_primitive_root_rejected():
    F = HahnField(GF(3))
    with pytest.raises(ValueError):
        CyclicAlgebra(F, 2, F.gen(), GF(3).one)


def test_sigma_on_theta(A3, A2):
    assert A3.k_sigma(A3.theta) == -A3.theta
    assert A3.k_mul(A3.theta, A3.theta) == A3.k(A3.F.gen())
    rng = random.Random(1)
    for A in (A3, A2):
        for _ in range(100):
            u = A.random_k(rng)
            assert A.k_sigma(u, A.s) == u


def test_norm_formulas(A3, A2):
    rng = random.Random(2)
    assert A3.norm(A3.k(1)) == A3.F.one
    for A in (A3, A2):
        for _ in range(30):
            u = A.random_k(rng)
            assert (A.norm(u) - A.norm_closed_form(u)).is_zero()
    a, b = A3.F.gen() + 1, A3.F.one
    assert A3.norm(A3.k(a, b)) == a * a - b * b * A3.F.gen()


def test_norm_of_theta_and_one(A3):
    t = A3.F.gen()
    assert A3.norm(A3.theta) == -t
    assert A3.norm(A3.k(1)) == 1


def test_twist_rule_and_x_power(A3, A2):
    rng = random.Random(3)
    for A in (A3, A2):
        x = A.x
        assert x ** A.s == A.d(A.alpha)
        for _ in range(20):
            a = A.random_k(rng)
            assert x * A.d(a) == A.d(A.k_sigma(a)) * x


def test_noncommutativity_witness(A3):
    th = A3.d(A3.theta)
    assert A3.x * th == -(th * A3.x)
    assert A3.x * th != th * A3.x


def test_product_matches_structure_constants(A3, A2):
    rng = random.Random(4)
    for A in (A3, A2):
        for _ in range(15):
            u, v = A.random_d(rng), A.random_d(rng)
            assert (u * v - structure_constant_product(A, u, v)).is_zero()


def test_unit_and_associativity(A3, A2):
    rng = random.Random(5)
    for A in (A3, A2):
        for _ in range(15):
            a, b, c = A.random_d(rng), A.random_d(rng), A.random_d(rng)
            assert a * A.one == a and A.one * a == a
            assert ((a * b) * c - a * (b * c)).is_zero()
            assert (a * (b + c) - (a * b + a * c)).is_zero()


def test_inverse_of_one_and_x(A3, A2):
    for A in (A3, A2):
        assert A.one.inverse() == A.one
        expected = A.d(A.alpha).inverse() * A.x ** (A.s - 1)
        assert (A.x.inverse() - expected).is_zero()


def test_inverse_methods_agree_and_residual_vanishes(A3, A2):
    rng = random.Random(6)
    for A in (A3, A2):
        for _ in range(10):
            u = A.random_d(rng)
            v = u.inverse()
            assert (u * v - 1).is_zero() and (v * u - 1).is_zero()
            w = u.inverse("linear")
            assert (v - w).is_zero()


def test_norm_certificate_hand_cases(A3):
    t = A3.F.gen()
    assert A3.norm(A3.k(0, 1)) == -t
    assert A3.norm(A3.k(0, 1)).valuation() == 1
    assert A3.norm(A3.k(1, 0)) == 1
    assert A3.norm(A3.k(1, 0)) != A3.alpha


def test_norm_certificate_sampling(A3, A2):
    for A in (A3, A2):
        r = norm_obstruction_certify(A, 60, seed=1)
        assert r["violations"] == []
        assert sum(r["class_histogram"].values()) > 0
        assert r == norm_obstruction_certify(A, 60, seed=1)


def test_metro_identity(A3):
    assert A3.metro_identity_check(A3.zero)
    assert A3.metro_identity_check(A3.one)
    rng = random.Random(7)
    for _ in range(5):
        assert A3.metro_identity_check(A3.random_d(rng))


def test_centralizer_dimensions(A3, A2):
    assert A3.centralizer_dimension(A3.d(A3.F.gen() + 1)) == 4
    for a in (A3.x, A3.d(A3.theta)):
        r = A3.brauer_check(a)
        assert r["dim_C"] == 2 and r["dim_C_reversed"] == 2
        assert r["index"] == Fraction(2) == r["min_poly_degree"]
        assert r["holds"]
    r = A2.brauer_check(A2.x)
    assert r["dim_C"] == 3 and r["min_poly_degree"] == 3


def test_central_elements(A3):
    assert A3.is_central(A3.d(A3.F.gen()))
    assert not A3.is_central(A3.x)
