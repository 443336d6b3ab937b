"""Twisted polynomials R[sigma] over a difference field (R, sigma).

A twist sum r_i sigma^i has its coefficients on the left and acts on R by
c -> sum r_i sigma^i(c).  Products compose these maps:

    (sum_i r_i sigma^i)(sum_j s_j sigma^j) = sum_{i,j} r_i sigma^i(s_j) sigma^(i+j)

The degree of the zero twist is the sentinel :data:`BOTTOM`, which compares
below every integer and absorbs addition.
"""

from __future__ import annotations

import functools
import random
import re
from typing import Callable, Iterable

from .errors import FieldMismatch, NotInvertible
from .fields import (GF, FqElement, PerfectClosure, PerfElement, format_fq,
                     format_perf, parse_fq, parse_perf)


@functools.total_ordering
class _Bottom:
    """Degree of the zero twist: below every integer, absorbing under addition."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("BOTTOM")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __repr__(self):
        return "BOTTOM"


BOTTOM = _Bottom()


class DifferenceField:
    """A field R with a ring endomorphism sigma and, when inversive, its inverse.

    ``field`` must provide ``zero``, ``one``, ``random_element(rng, nonzero=...)``
    and conversion by calling.  ``elements`` and ``fixed_elements``, when given,
    enumerate R and Fix(sigma); they make brute-force oracles available.
    """

    def __init__(self, name: str, field, sigma: Callable, sigma_inv: Callable | None = None,
                 elements: Callable[[], Iterable] | None = None,
                 fixed_elements: Callable[[], Iterable] | None = None,
                 order: int | None = None,
                 formatter: Callable = repr, parser: Callable | None = None,
                 frobenius: bool = False, check_samples: int = 8):
        self.name = name
        self.field = field
        self._sigma = sigma
        self._sigma_inv = sigma_inv
        self._elements = elements
        self._fixed = fixed_elements
        self.order = order
        self.format = formatter
        self._parser = parser
        # sigma is x -> x^p with Fix(sigma) = F_p, which enables Moore-matrix tests
        self.frobenius = frobenius
        self._spot_check(check_samples)

    def __repr__(self):
        return f"DifferenceField({self.name})"

    @property
    def inversive(self) -> bool:
        return self._sigma_inv is not None

    @property
    def zero(self):
        return self.field.zero

    @property
    def one(self):
        return self.field.one

    @property
    def is_finite(self) -> bool:
        return self._elements is not None

    def sigma(self, a, k: int = 1):
        """sigma^k(a); negative k needs an inversive handle."""
        if k < 0:
            if self._sigma_inv is None:
                raise ValueError(f"{self.name} is not inversive")
            for _ in range(-k):
                a = self._sigma_inv(a)
            return a
        for _ in range(k):
            a = self._sigma(a)
        return a

    def elements(self):
        if self._elements is None:
            raise ValueError(f"{self.name} is not enumerable")
        return self._elements()

    def fixed_elements(self):
        if self._fixed is None:
            raise ValueError(f"Fix(sigma) of {self.name} is not enumerable")
        return self._fixed()

    @property
    def fixed_is_enumerable(self) -> bool:
        return self._fixed is not None

    def random_element(self, rng: random.Random, nonzero: bool = False):
        return self.field.random_element(rng, nonzero=nonzero)

    def parse(self, text: str):
        if self._parser is None:
            raise ValueError(f"{self.name} has no literal syntax")
        return self._parser(text)

    def _spot_check(self, samples: int):
        rng = random.Random(f"spot-check:{self.name}")
        one = self.field.one
        if self._sigma(one) != one:
            raise ValueError("sigma(1) != 1")
        for _ in range(samples):
            a, b = self.random_element(rng), self.random_element(rng)
            sa, sb = self._sigma(a), self._sigma(b)
            if self._sigma(a + b) != sa + sb or self._sigma(a * b) != sa * sb:
                raise ValueError(f"sigma is not a ring endomorphism of {self.name}")
            if self._sigma_inv is not None and (self._sigma(self._sigma_inv(a)) != a
                                                or self._sigma_inv(sa) != a):
                raise ValueError("sigma_inv is not inverse to sigma")


def frobenius_field(p: int, n: int, inversive: bool = True) -> DifferenceField:
    """(F_{p^n}, x -> x^p); Fix(sigma) = F_p."""
    F = GF(p, n)
    return DifferenceField(
        f"GF({p}^{n})", F,
        sigma=lambda a: a.frobenius(),
        sigma_inv=(lambda a: a.frobenius_inverse()) if inversive else None,
        elements=F.elements,
        fixed_elements=lambda: (F(c) for c in range(p)),
        order=F.order,
        formatter=format_fq,
        parser=lambda s: parse_fq(s, F),
        frobenius=True)


def perfect_closure_field(p: int, n: int = 1) -> DifferenceField:
    """(F_{p^n}(t^(1/p^inf)), x -> x^p), an infinite inversive testbed with Fix(sigma) = F_p."""
    K = PerfectClosure(GF(p, n))
    return DifferenceField(
        f"Perf(GF({p}^{n})(t))", K,
        sigma=lambda a: a.frobenius(),
        sigma_inv=lambda a: a.frobenius_inverse(),
        fixed_elements=lambda: (K(c) for c in range(p)),
        formatter=format_perf,
        parser=lambda s: parse_perf(s, K),
        frobenius=True)


class OrePoly:
    """The twist sum r_i sigma^i, coefficients r_0..r_n on the left."""

    __slots__ = ("handle", "coeffs")

    def __init__(self, handle: DifferenceField, coeffs: Iterable = ()):
        conv = handle.field
        cs = [conv(c) if not isinstance(c, (FqElement, PerfElement)) else c for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.handle = handle
        self.coeffs = tuple(cs)

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, handle) -> OrePoly:
        return cls(handle, ())

    @classmethod
    def identity(cls, handle) -> OrePoly:
        return cls(handle, (handle.one,))

    @classmethod
    def sigma(cls, handle, power: int = 1) -> OrePoly:
        return cls(handle, [handle.zero] * power + [handle.one])

    @classmethod
    def constant(cls, handle, c) -> OrePoly:
        return cls(handle, (c,))

    @classmethod
    def random(cls, handle, rng: random.Random, degree: int, monic: bool = False,
               valuation_zero: bool = False) -> OrePoly:
        """Random twist of exact degree ``degree``."""
        if degree is BOTTOM or degree < 0:
            return cls.zero(handle)
        cs = [handle.random_element(rng) for _ in range(degree)]
        cs.append(handle.one if monic else handle.random_element(rng, nonzero=True))
        if valuation_zero and not cs[0]:
            cs[0] = handle.random_element(rng, nonzero=True)
        return cls(handle, cs)

    # -- inspection ------------------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else BOTTOM

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def leading_coefficient(self):
        if not self.coeffs:
            raise ValueError("the zero twist has no leading coefficient")
        return self.coeffs[-1]

    def coefficient(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.handle.zero

    def _check(self, other):
        if not isinstance(other, OrePoly):
            return None
        if other.handle is not self.handle:
            raise FieldMismatch("twists over different difference fields")
        return other

    def __eq__(self, other):
        if not isinstance(other, OrePoly):
            return NotImplemented
        return self.handle is other.handle and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    # -- ring operations ---------------------------------------------------------

    def __add__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return OrePoly(self.handle, [self.coefficient(i) + other.coefficient(i) for i in range(n)])

    def __neg__(self):
        return OrePoly(self.handle, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, OrePoly):
            return twist_mul(self, other)
        return NotImplemented

    def scale_left(self, c) -> OrePoly:
        """c * self."""
        return OrePoly(self.handle, [c * r for r in self.coeffs])

    def shift(self, k: int) -> OrePoly:
        """self * sigma^k."""
        if not self.coeffs:
            return self
        return OrePoly(self.handle, [self.handle.zero] * k + list(self.coeffs))

    def __call__(self, c):
        return evaluate(self, c)

    def monic(self) -> OrePoly:
        """l^{-1} * self for the leading coefficient l."""
        return self.scale_left(self.leading_coefficient().inverse())

    # -- text form -----------------------------------------------------------------

    def __str__(self):
        return format_twist(self)

    def __repr__(self):
        return f"OrePoly({format_twist(self)})"


def twist_mul(f: OrePoly, g: OrePoly) -> OrePoly:
    """Composition product sum_{i,j} r_i sigma^i(s_j) sigma^(i+j)."""
    g = f._check(g)
    if g is None:
        raise TypeError("twist_mul needs two twists")
    H = f.handle
    if not f.coeffs or not g.coeffs:
        return OrePoly.zero(H)
    out = [H.zero] * (len(f.coeffs) + len(g.coeffs) - 1)
    twisted = list(g.coeffs)
    for i, r in enumerate(f.coeffs):
        if i:
            twisted = [H.sigma(s) for s in twisted]
        if not r:
            continue
        for j, s in enumerate(twisted):
            out[i + j] = out[i + j] + r * s
    return OrePoly(H, out)


def evaluate(f: OrePoly, c):
    """sum r_i sigma^i(c)."""
    H = f.handle
    total = H.zero
    x = c
    for i, r in enumerate(f.coeffs):
        if i:
            x = H.sigma(x)
        if r:
            total = total + r * x
    return total


def right_divide(f: OrePoly, g: OrePoly) -> tuple[OrePoly, OrePoly]:
    """(q, r) with f = q * g + r and deg r < deg g."""
    g = f._check(g)
    if g is None or g.is_zero():
        raise NotInvertible("division by the zero twist")
    H = f.handle
    m = g.degree
    lg = g.leading_coefficient()
    q = [H.zero] * max(len(f.coeffs) - m, 0)
    r = f
    while not r.is_zero() and r.degree >= m:
        k = r.degree - m
        # (c sigma^k) g has leading coefficient c sigma^k(l_g)
        c = r.leading_coefficient() * H.sigma(lg, k).inverse()
        q[k] = q[k] + c
        r = r - twist_mul(OrePoly(H, [H.zero] * k + [c]), g)
    return OrePoly(H, q), r


def left_divide(f: OrePoly, g: OrePoly) -> tuple[OrePoly, OrePoly]:
    """(q, r) with f = g * q + r and deg r < deg g; needs sigma^{-1}."""
    g = f._check(g)
    if g is None or g.is_zero():
        raise NotInvertible("division by the zero twist")
    H = f.handle
    if not H.inversive:
        raise ValueError("left division needs an inversive difference field")
    m = g.degree
    lg_inv = g.leading_coefficient().inverse()
    q = [H.zero] * max(len(f.coeffs) - m, 0)
    r = f
    while not r.is_zero() and r.degree >= m:
        k = r.degree - m
        # g (c sigma^k) has leading coefficient l_g sigma^m(c)
        c = H.sigma(lg_inv * r.leading_coefficient(), -m)
        q[k] = q[k] + c
        r = r - twist_mul(g, OrePoly(H, [H.zero] * k + [c]))
    return OrePoly(H, q), r


def right_gcd(f: OrePoly, g: OrePoly) -> OrePoly:
    """Monic greatest common right divisor by the Euclidean algorithm."""
    g = f._check(g)
    if g is None:
        raise TypeError("right_gcd needs two twists")
    if f.is_zero() and g.is_zero():
        raise ValueError("right_gcd(0, 0) is undefined")
    # left-scaling by a unit keeps the left ideal, so remainders are kept monic
    a, b = f, g
    if not a.is_zero():
        a = a.monic()
    while not b.is_zero():
        b = b.monic()
        _, r = right_divide(a, b)
        a, b = b, r
    return a.monic()


def root_factor(H: DifferenceField, a) -> OrePoly:
    """sigma - sigma(a) a^{-1}, the monic degree-one twist vanishing at a."""
    if not a:
        raise ValueError("the root must be nonzero")
    return OrePoly(H, [-(H.sigma(a) * a.inverse()), H.one])


def factor_through_root(f: OrePoly, a) -> OrePoly:
    """delta with f = delta * (sigma - sigma(a) a^{-1}), for a nonzero root a of f."""
    H = f.handle
    q, r = right_divide(f, root_factor(H, a))
    if not r.is_zero():
        raise ValueError(f"{H.format(a)} is not a root of {format_twist(f)}")
    return q


# ---------------------------------------------------------------------------
# text form "r_n*S^n + ... + r_0"


def format_twist(f: OrePoly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for i in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[i]
        if not c:
            continue
        lit = f.handle.format(c)
        parts.append(lit if i == 0 else f"{lit}*S" if i == 1 else f"{lit}*S^{i}")
    return " + ".join(parts)


_TERM = re.compile(r"^(?P<coef>.+?)(?P<s>\*S(?:\^(?P<exp>\d+))?)?$")


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "[{":
            depth += 1
        elif ch in "]}":
            depth -= 1
        if ch == "+" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_twist(text: str, handle: DifferenceField) -> OrePoly:
    text = text.strip()
    if text == "0":
        return OrePoly.zero(handle)
    coeffs: dict[int, object] = {}
    for part in _split_top_level(text):
        part = part.strip()
        if not part:
            raise ValueError(f"empty term in {text!r}")
        if part == "S" or part.startswith("S^"):
            part = "1*" + part
        m = _TERM.match(part)
        if m is None:
            raise ValueError(f"malformed term {part!r}")
        coef_text, exp = m.group("coef"), m.group("exp")
        i = 0 if m.group("s") is None else (1 if exp is None else int(exp))
        c = handle.parse(coef_text)
        coeffs[i] = coeffs[i] + c if i in coeffs else c
    n = max(coeffs) + 1
    return OrePoly(handle, [coeffs.get(i, handle.zero) for i in range(n)])
