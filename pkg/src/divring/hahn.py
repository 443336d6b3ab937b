"""Hahn series k((t^G)) with value group G = Z[1/p], truncated at a tracked precision.

A series stores finitely many terms a_e t^e with e < prec and the promise that
everything at or above ``prec`` is unknown.  ``prec`` is ``math.inf`` for series
that are exact (finite support, nothing hidden).  The coefficient field may be
F_p^alg (:class:`~divring.fields.FpBar`), a finite field, or another
:class:`HahnField`, so k = F_p^alg((x^G)) and F = k((t^G)) nest naturally.

Internally exponents are integers at a common "level" K, meaning e / p^K.

Zero handling follows the capped-precision convention:

* the exact zero has no terms and infinite precision;
* a series with no terms and finite precision is *zero to precision*; its
  valuation is undefined and asking for it raises :class:`ValuationUndefined`;
* a nested coefficient that is itself zero to precision is kept, so that its
  precision is not silently forgotten.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Iterable

from .config import default_precision
from .errors import FieldMismatch, NotInvertible, NotPerfectError, ValuationUndefined
from ._kron import grid_product
from .fields import FqElement, FpBar

INF = math.inf
MAX_LEVEL = 64


# ---------------------------------------------------------------------------
# exponents


def split_exponent(q, p: int) -> tuple[int, int]:
    """Write q in Z[1/p] as (num, k) meaning num / p^k, with p not dividing num when k > 0."""
    q = Fraction(q)
    den = q.denominator
    k = 0
    while den % p == 0:
        den //= p
        k += 1
    if den != 1:
        raise ValueError(f"{q} is not in Z[1/{p}]")
    if k > MAX_LEVEL:
        raise OverflowError(f"exponent {q} exceeds the supported p-power denominator")
    return q.numerator, k


def gamma_membership(q, p: int) -> bool:
    """Whether the rational q lies in Z[1/p]."""
    q = Fraction(q)
    den = q.denominator
    while den % p == 0:
        den //= p
    return den == 1


def gamma_coset(q, m: int, p: int) -> int:
    """The class j in {0, ..., m-1} with q in m*G + j, for m coprime to p.

    G/mG is cyclic of order m: num/p^k lies in mG + j exactly when
    m divides num - j*p^k.
    """
    if math.gcd(m, p) != 1:
        raise ValueError(f"{m} must be coprime to {p}")
    num, k = split_exponent(q, p)
    return num * pow(p, -k, m) % m


def _check_level(k: int) -> int:
    if k > MAX_LEVEL:
        raise OverflowError("p-power denominator of an exponent exceeds the supported range")
    return k


# ---------------------------------------------------------------------------


def _negligible(c) -> bool:
    """True if c is zero, possibly only to its precision."""
    if type(c) is HahnSeries:
        return c.is_zero()
    return not c


class HahnField:
    """The Hahn series field ``coefficients((var^G))`` with G = Z[1/p].

    ``prec`` is the default working precision (relative precision of
    inverses of exact series).  ``sample_terms`` and ``sample_height`` shape
    :meth:`random_element`.
    """

    def __init__(self, coefficients, var: str = "t", prec=None,
                 sample_terms: int = 3, sample_height=2):
        self.coefficients = coefficients
        self.p = coefficients.p
        self.var = var
        self.prec = Fraction(prec) if prec is not None else default_precision()
        split_exponent(self.prec, self.p)
        self.sample_terms = sample_terms
        self.sample_height = Fraction(sample_height)
        self.is_perfect = getattr(coefficients, "is_perfect", False)

    def __eq__(self, other):
        return (isinstance(other, HahnField) and self.var == other.var
                and self.coefficients == other.coefficients)

    def __hash__(self):
        return hash(("HahnField", self.var, self.coefficients))

    def __repr__(self):
        return f"{self.coefficients!r}(({self.var}^G))"

    # -- constructors -------------------------------------------------------

    @property
    def zero(self) -> HahnSeries:
        return HahnSeries(self, 0, (), None)

    @property
    def one(self) -> HahnSeries:
        return HahnSeries(self, 0, ((0, self.coefficients.one),), None)

    def gen(self) -> HahnSeries:
        return self.monomial(self.coefficients.one, 1)

    def _coeff(self, c):
        return self.coefficients(c)

    def monomial(self, c, exponent=0) -> HahnSeries:
        c = self._coeff(c)
        num, k = split_exponent(exponent, self.p)
        if not c:
            return self.zero
        return HahnSeries(self, k, ((num, c),), None)

    def series(self, terms: Iterable, prec=INF) -> HahnSeries:
        """Build a series from (exponent, coefficient) pairs or a dict."""
        if isinstance(terms, dict):
            terms = terms.items()
        items = [(split_exponent(e, self.p), self._coeff(c)) for e, c in terms]
        ks = [k for (_, k), _ in items]
        if prec is not None and prec != INF:
            pnum, pk = split_exponent(prec, self.p)
            ks.append(pk)
        K = max(ks, default=0)
        acc: dict[int, object] = {}
        for (num, k), c in items:
            e = num * self.p ** (K - k)
            acc[e] = acc[e] + c if e in acc else c
        P = None
        if prec is not None and prec != INF:
            P = pnum * self.p ** (K - pk)
        return HahnSeries._make(self, K, acc, P)

    def __call__(self, value) -> HahnSeries:
        if type(value) is HahnSeries:
            if value.parent is self or value.parent == self:
                return value
            if value.parent == self.coefficients:
                return HahnSeries(self, 0, ((0, value),), None) if value else self.zero
            raise FieldMismatch(f"cannot coerce a series over {value.parent!r} into {self!r}")
        c = self._coeff(value)
        if not c:
            return self.zero
        return HahnSeries(self, 0, ((0, c),), None)

    def random_element(self, rng: random.Random, terms: int | None = None, prec=None,
                       nonzero: bool = True) -> HahnSeries:
        """Random series with 1..terms terms, exponents j/p^k (k <= 1) in [-1, height].

        ``prec`` defaults to exact (infinite) precision.
        """
        terms = terms or self.sample_terms
        p = self.p
        lo, hi = -p, int(self.sample_height * p)
        count = rng.randint(1 if nonzero else 0, terms)
        exps = rng.sample(range(lo, hi + 1), min(count, hi - lo + 1))
        pairs = [(Fraction(e, p), self.coefficients.random_element(rng, nonzero=True)) for e in exps]
        return self.series(pairs, INF if prec is None else prec)

    def to_json(self) -> dict:
        return {"kind": "HahnField", "var": self.var, "prec": str(self.prec),
                "coefficients": self.coefficients.to_json()}

    def element_to_json(self, s: HahnSeries):
        return s.to_json()

    def element_from_json(self, data) -> HahnSeries:
        return HahnSeries.from_json(self, data)


def _leaf_field(terms):
    """The common finite field of the coefficients, when they all lie in one table-backed field."""
    f = None
    for _, c in terms:
        if type(c) is not FqElement:
            return None
        if f is None:
            f = c.field
            if not f.has_tables:
                return None
        elif c.field is not f:
            return None
    return f


def _mul_leaf(f, a, b, P) -> dict:
    log, pexp, unpack = f._packing()
    lb = [(e2, log[c2.v]) for e2, c2 in b]
    acc: dict[int, int] = {}
    get = acc.get
    for e1, c1 in a:
        l1 = log[c1.v]
        for e2, l2 in lb:
            e = e1 + e2
            if P is not None and e >= P:
                break
            acc[e] = get(e, 0) + pexp[l1 + l2]
    out = {}
    for e, w in acc.items():
        v = unpack(w)
        if v:
            out[e] = FqElement(f, v)
    return out


def _nested_leaf_field(terms):
    """The common leaf field when every coefficient is a series over one table-backed field."""
    f = None
    for _, c in terms:
        if type(c) is not HahnSeries:
            return None
        g = _leaf_field(c._terms)
        if g is None:
            if c._terms:
                return None
            continue
        if f is None:
            f = g
        elif g is not f:
            return None
    return f


def dot(parent: HahnField, pairs) -> HahnSeries:
    """sum(x * y for x, y in pairs), accumulated in a single pass for nested finite-field series."""
    pairs = [(parent(x), parent(y)) for x, y in pairs]
    pairs = [(x, y) for x, y in pairs if not x.is_exact_zero() and not y.is_exact_zero()]
    if not pairs:
        return parent.zero
    f = inner = None
    for x, y in pairs:
        for z in (x, y):
            g = _nested_leaf_field(z._terms)
            if g is None or (f is not None and g is not f):
                return sum((x * y for x, y in pairs), parent.zero)
            f = g
            if inner is None:
                inner = z._terms[0][1].parent
            elif z._terms[0][1].parent is not inner:
                return sum((x * y for x, y in pairs), parent.zero)
    K = max(max(x._K, y._K) for x, y in pairs)
    Kin = max(c._K for x, y in pairs for z in (x, y) for _, c in z._terms)
    acc = _NestedAccumulator(inner, f, Kin)
    Ptot = None
    for x, y in pairs:
        a, b, P = x._product_setup(y, K)
        if P is not None:
            Ptot = P if Ptot is None else min(Ptot, P)
        acc.add_product(acc.prep(a), acc.prep(b), P)
    return HahnSeries._make(parent, K, acc.finish(), Ptot)


class _NestedAccumulator:
    """Sum of products of series whose coefficients are series over one finite field f.

    Both levels are multiplied on integer encodings, and sums are kept as
    packed integers until :meth:`finish`.  Inner precisions follow the
    ordinary multiplication rule, combined by minimum across summands.
    """

    def __init__(self, inner: HahnField, f, Kin: int):
        self.inner, self.f, self.Kin = inner, f, Kin
        self.log, self.pexp, self.unpack = f._packing()
        self.slots: dict[int, list] = {}

    def prep(self, terms):
        p, Kin, log = self.inner.p, self.Kin, self.log
        out = []
        for e, c in terms:
            scale = p ** (Kin - c._K)
            ts = [(x * scale, log[y.v]) for x, y in c._terms]
            cp = None if c._prec is None else c._prec * scale
            vlb = c._vlb()
            vlb = None if vlb is None else vlb * scale
            out.append((e, ts, cp, vlb))
        return out

    def _slot_precisions(self, pa, pb, P):
        slots = self.slots
        for e1, _, p1, v1 in pa:
            for e2, _, p2, v2 in pb:
                e = e1 + e2
                if P is not None and e >= P:
                    break
                if v1 is None or v2 is None:
                    continue
                Pin = None
                if p1 is not None:
                    Pin = p1 + v2
                if p2 is not None:
                    Pin = p2 + v1 if Pin is None else min(Pin, p2 + v1)
                slot = slots.get(e)
                if slot is None:
                    slots[e] = [{}, Pin]
                elif Pin is not None and (slot[1] is None or Pin < slot[1]):
                    slot[1] = Pin

    def add_product(self, pa, pb, P):
        na = sum(len(t) for _, t, _, _ in pa)
        nb = sum(len(t) for _, t, _, _ in pb)
        if na * nb > _KRON_THRESHOLD:
            # the big-integer product costs about one decode per cell of its grid
            xs_a = [x for _, t, _, _ in pa for x, _ in t]
            xs_b = [x for _, t, _, _ in pb for x, _ in t]
            grid = ((pa[-1][0] - pa[0][0]) + (pb[-1][0] - pb[0][0]) + 1) * (
                (max(xs_a) - min(xs_a)) + (max(xs_b) - min(xs_b)) + 1)
            if na * nb > _KRON_RATIO * grid:
                self._add_product_kron(pa, pb, P)
                return
        pexp = self.pexp
        slots = self.slots
        for e1, t1, p1, v1 in pa:
            for e2, t2, p2, v2 in pb:
                e = e1 + e2
                if P is not None and e >= P:
                    break
                if v1 is None or v2 is None:
                    continue
                Pin = None
                if p1 is not None:
                    Pin = p1 + v2
                if p2 is not None:
                    Pin = p2 + v1 if Pin is None else min(Pin, p2 + v1)
                slot = slots.get(e)
                if slot is None:
                    slot = slots[e] = [{}, Pin]
                elif Pin is not None and (slot[1] is None or Pin < slot[1]):
                    slot[1] = Pin
                d = slot[0]
                get = d.get
                for x1, l1 in t1:
                    for x2, l2 in t2:
                        x = x1 + x2
                        if Pin is not None and x >= Pin:
                            break
                        d[x] = get(x, 0) + pexp[l1 + l2]

    def _add_product_kron(self, pa, pb, P):
        f = self.f
        exp = f._build_tables()[0]
        log, pexp = self.log, self.pexp
        oa, ob = pa[0][0], pb[0][0]
        ia = min((x for _, t, _, _ in pa for x, _ in t), default=0)
        ib = min((x for _, t, _, _ in pb for x, _ in t), default=0)
        A = {(e - oa, x - ia): exp[l] for e, t, _, _ in pa for x, l in t}
        B = {(e - ob, x - ib): exp[l] for e, t, _, _ in pb for x, l in t}
        self._slot_precisions(pa, pb, P)
        slots = self.slots
        # cells beyond a slot's inner precision are dropped in finish()
        for (i, j), v in grid_product(f, A, B).items():
            e = i + oa + ob
            if P is not None and e >= P:
                continue
            slot = slots.get(e)
            if slot is None:
                continue
            d = slot[0]
            x = j + ia + ib
            d[x] = d.get(x, 0) + pexp[log[v]]

    def finish(self) -> dict:
        f, unpack, inner, Kin = self.f, self.unpack, self.inner, self.Kin
        out = {}
        for e, (d, Pin) in self.slots.items():
            terms = {}
            for x, w in d.items():
                if Pin is not None and x >= Pin:
                    continue
                v = unpack(w)
                if v:
                    terms[x] = FqElement(f, v)
            out[e] = HahnSeries._make(inner, Kin, terms, Pin)
        return out


def _mul_nested_leaf(inner, f, a, b, P) -> dict:
    acc = _NestedAccumulator(inner, f, max(c._K for _, c in a + b))
    acc.add_product(acc.prep(a), acc.prep(b), P)
    return acc.finish()


_KRON_THRESHOLD = 400
_KRON_RATIO = 24


def _inverse_leaf(f, gaps, cinv, reach, rel) -> dict:
    exp, log = f._tables[:2] if f._tables else f._build_tables()[:2]
    add, neg = f._add, f._neg
    lg = [(g, log[c.v]) for g, c in gaps]
    lci = log[cinv.v]
    y: dict[int, int] = {0: cinv.v}
    for x in range(1, rel):
        if not reach[x]:
            continue
        acc = 0
        for g, lc in lg:
            if g > x:
                break
            prev = y.get(x - g)
            if prev:
                acc = add(acc, exp[lc + log[prev]])
        if acc:
            y[x] = neg(exp[log[acc] + lci])
    return {x: FqElement(f, v) for x, v in y.items()}


class HahnSeries:
    """An immutable truncated Hahn series; see the module docstring."""

    __slots__ = ("parent", "_K", "_terms", "_prec")

    def __init__(self, parent: HahnField, K: int, terms: tuple, prec: int | None):
        self.parent = parent
        self._K = K
        self._terms = terms
        self._prec = prec

    @staticmethod
    def _make(parent: HahnField, K: int, acc: dict, P: int | None) -> HahnSeries:
        """Normalize: drop exact zeros and terms at or beyond precision, sort, lower the level."""
        p = parent.p
        if P is None:
            terms = [(e, c) for e, c in acc.items() if c]
        else:
            terms = [(e, c) for e, c in acc.items() if c and e < P]
        terms.sort(key=lambda ec: ec[0])
        while K > 0 and (P is None or P % p == 0) and all(e % p == 0 for e, _ in terms):
            terms = [(e // p, c) for e, c in terms]
            if P is not None:
                P //= p
            K -= 1
        return HahnSeries(parent, K, tuple(terms), P)

    # -- inspection ---------------------------------------------------------

    @property
    def p(self) -> int:
        return self.parent.p

    @property
    def prec(self):
        """Precision as a Fraction, or ``math.inf`` for exact series."""
        if self._prec is None:
            return INF
        return Fraction(self._prec, self.p ** self._K)

    def is_exact(self) -> bool:
        return self._prec is None

    def terms(self) -> list[tuple[Fraction, object]]:
        d = self.p ** self._K
        return [(Fraction(e, d), c) for e, c in self._terms]

    def coefficient(self, exponent):
        num, k = split_exponent(exponent, self.p)
        if k > self._K:
            return self.parent.coefficients.zero
        e = num * self.p ** (self._K - k)
        for f, c in self._terms:
            if f == e:
                return c
        return self.parent.coefficients.zero

    def support(self) -> list[Fraction]:
        return [e for e, _ in self.terms()]

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        """False only for the exact zero."""
        return bool(self._terms) or self._prec is not None

    def is_exact_zero(self) -> bool:
        return not self._terms and self._prec is None

    def is_zero(self) -> bool:
        """Zero to precision: every stored coefficient is itself zero to precision."""
        return all(_negligible(c) for _, c in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1 and self._prec is None

    def valuation(self) -> Fraction:
        if not self._terms:
            raise ValuationUndefined("valuation of a series that is zero to precision")
        e, c = self._terms[0]
        if _negligible(c):
            raise ValuationUndefined("leading coefficient is only known to be zero to precision")
        return Fraction(e, self.p ** self._K)

    def leading_coefficient(self):
        self.valuation()
        return self._terms[0][1]

    def leading_term(self) -> tuple[Fraction, object]:
        return self.valuation(), self._terms[0][1]

    # -- internal helpers ---------------------------------------------------

    def _at(self, K: int):
        """(terms, prec) rescaled to level K >= self._K."""
        if K == self._K:
            return self._terms, self._prec
        f = self.p ** (K - self._K)
        terms = tuple((e * f, c) for e, c in self._terms)
        return terms, (None if self._prec is None else self._prec * f)

    def _coerce(self, other) -> HahnSeries | None:
        if type(other) is HahnSeries and other.parent is self.parent:
            return other
        try:
            return self.parent(other)
        except FieldMismatch:
            raise
        except TypeError:
            return None

    def _vlb(self) -> int | None:
        """Lower bound for the valuation at level self._K (None = exact zero)."""
        if self._terms:
            v = self._terms[0][0]
            return v if self._prec is None else min(v, self._prec)
        return self._prec

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other._terms and other._prec is None:
            return self
        if not self._terms and self._prec is None:
            return other
        K = max(self._K, other._K)
        a, pa = self._at(K)
        b, pb = other._at(K)
        acc = dict(a)
        for e, c in b:
            if e in acc:
                acc[e] = acc[e] + c
            else:
                acc[e] = c
        P = pb if pa is None else (pa if pb is None else min(pa, pb))
        return HahnSeries._make(self.parent, K, acc, P)

    __radd__ = __add__

    def __neg__(self):
        return HahnSeries(self.parent, self._K, tuple((e, -c) for e, c in self._terms), self._prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def _scale_shift(self, e0: int, K: int, c0) -> HahnSeries:
        """c0 * t^(e0 / p^K) * self, exact monomial fast path."""
        K2 = max(K, self._K)
        terms, P = self._at(K2)
        shift = e0 * self.p ** (K2 - K)
        if type(c0) is FqElement and c0.v == 1:
            acc = {e + shift: c for e, c in terms}
        elif type(c0) is FqElement and _leaf_field(terms) is c0.field:
            f, v0 = c0.field, c0.v
            mul = f._mul
            acc = {e + shift: FqElement(f, mul(v0, c.v)) for e, c in terms}
        else:
            acc = {e + shift: c0 * c for e, c in terms}
        return HahnSeries._make(self.parent, K2, acc, None if P is None else P + shift)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_exact_zero() or other.is_exact_zero():
            return self.parent.zero
        if other.is_monomial():
            (e0, c0), = other._terms
            return self._scale_shift(e0, other._K, c0)
        if self.is_monomial():
            (e0, c0), = self._terms
            return other._scale_shift(e0, self._K, c0)
        return self._mul_general(other)

    __rmul__ = __mul__

    def _product_setup(self, other: HahnSeries, K: int):
        """Both operands' terms at level K >= both levels, and the product's precision there."""
        a, pa = self._at(K)
        b, pb = other._at(K)
        va, vb = self._vlb(), other._vlb()
        if va is not None and K != self._K:
            va *= self.p ** (K - self._K)
        if vb is not None and K != other._K:
            vb *= self.p ** (K - other._K)
        P = None
        if pa is not None:
            P = pa + vb
        if pb is not None:
            P = pb + va if P is None else min(P, pb + va)
        return a, b, P

    def _mul_general(self, other: HahnSeries) -> HahnSeries:
        K = max(self._K, other._K)
        a, b, P = self._product_setup(other, K)
        f = _leaf_field(a)
        if f is not None and _leaf_field(b) is f:
            return HahnSeries._make(self.parent, K, _mul_leaf(f, a, b, P), P)
        f = _nested_leaf_field(a)
        if f is not None and _nested_leaf_field(b) is f:
            inner = a[0][1].parent
            if b[0][1].parent is inner:
                return HahnSeries._make(self.parent, K, _mul_nested_leaf(inner, f, a, b, P), P)
        acc: dict[int, object] = {}
        get = acc.get
        for e1, c1 in a:
            for e2, c2 in b:
                e = e1 + e2
                if P is not None and e >= P:
                    break
                prev = get(e)
                acc[e] = c1 * c2 if prev is None else prev + c1 * c2
        return HahnSeries._make(self.parent, K, acc, P)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.parent.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self) -> HahnSeries:
        """Multiplicative inverse, exact for monomials, else to relative precision.

        The relative precision is prec - v(s) for inexact input and the
        parent's working precision for exact non-monomials.
        """
        if self.is_exact_zero():
            raise NotInvertible("the exact zero has no inverse")
        self.valuation()  # raises when only zero to precision
        K, p = self._K, self.p
        terms = self._terms
        v0, c0 = terms[0]
        cinv = c0.inverse()
        if self.is_monomial():
            return HahnSeries(self.parent, K, ((-v0, cinv),), None)
        if self._prec is None:
            wnum, wk = split_exponent(self.parent.prec, p)
            if wk > K:
                return self._rescaled(wk).inverse()
            rel = wnum * p ** (K - wk)
        else:
            rel = self._prec - v0
        # s * y = 1 solved term by term; supp(y) - (-v) lies in the monoid
        # generated by the gaps e - v of s, below the relative precision.
        gaps = [(e - v0, c) for e, c in terms[1:]]
        reach = bytearray(rel)
        reach[0] = 1
        for x in range(rel):
            if reach[x]:
                for g, _ in gaps:
                    if x + g < rel:
                        reach[x + g] = 1
        f = _leaf_field(terms)
        if f is not None:
            out = {x - v0: c for x, c in _inverse_leaf(f, gaps, cinv, reach, rel).items()}
            return HahnSeries._make(self.parent, K, out, rel - v0)
        coef = self.parent.coefficients
        nested = isinstance(coef, HahnField)
        y: dict[int, object] = {}
        for x in range(rel):
            if not reach[x]:
                continue
            acc = None
            if nested:
                pairs = [(c, y[x - g]) for g, c in gaps if g <= x and (x - g) in y]
                if pairs:
                    acc = dot(coef, pairs)
            else:
                for g, c in gaps:
                    if g > x:
                        break
                    prev = y.get(x - g)
                    if prev is not None:
                        acc = c * prev if acc is None else acc + c * prev
            if x == 0:
                y[0] = cinv
            elif acc is not None:
                y[x] = -(acc * cinv)
        out = {x - v0: c for x, c in y.items()}
        return HahnSeries._make(self.parent, K, out, rel - v0)

    def _rescaled(self, K: int) -> HahnSeries:
        terms, P = self._at(K)
        return HahnSeries(self.parent, K, terms, P)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def scale(self, c) -> HahnSeries:
        """Multiply every coefficient by c (an element of the coefficient field or below)."""
        return HahnSeries._make(self.parent, self._K, {e: c * a for e, a in self._terms}, self._prec)

    def add_bigoh(self, prec) -> HahnSeries:
        """Forget everything at or above ``prec``."""
        if prec == INF:
            return self
        num, k = split_exponent(prec, self.p)
        K = max(k, self._K)
        terms, P = self._at(K)
        P2 = num * self.p ** (K - k)
        P = P2 if P is None else min(P, P2)
        return HahnSeries._make(self.parent, K, dict(terms), P)

    # -- characteristic p ---------------------------------------------------

    def frobenius(self) -> HahnSeries:
        """s -> s^p, computed termwise (exact in characteristic p)."""
        p = self.p
        terms = {e * p: c.frobenius() for e, c in self._terms}
        return HahnSeries._make(self.parent, self._K, terms, None if self._prec is None else self._prec * p)

    def pth_root(self) -> HahnSeries:
        """Sum a_e^(1/p) t^(e/p)."""
        if not self.parent.is_perfect:
            raise NotPerfectError(f"{self.parent.coefficients!r} is not perfect")
        K = _check_level(self._K + 1)
        terms = tuple((e, c.pth_root()) for e, c in self._terms)
        return HahnSeries._make(self.parent, K, dict(terms), self._prec)

    frobenius_inverse = pth_root

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        """Structural equality: same stored terms and the same precision."""
        if type(other) is not HahnSeries:
            try:
                other = self._coerce(other)
            except (TypeError, FieldMismatch):
                return NotImplemented
            if other is None:
                return NotImplemented
        return (self.parent == other.parent and self._K == other._K
                and self._prec == other._prec and self._terms == other._terms)

    def __hash__(self):
        return hash((self._K, self._prec, self._terms))

    def eq_to_prec(self, other) -> bool:
        """Equal up to the smaller of the two precisions (nested coefficients included)."""
        return (self - other).is_zero()

    # -- text and JSON ------------------------------------------------------

    def __repr__(self):
        var = self.parent.var
        parts = []
        for e, c in self.terms():
            cs = repr(c)
            if type(c) is HahnSeries and len(c) > 1:
                cs = f"({cs})"
            if e == 0:
                parts.append(cs)
            else:
                ex = f"{e}" if e.denominator == 1 else f"({e})"
                parts.append(f"{cs}*{var}^{ex}")
        if self._prec is not None:
            parts.append(f"O({var}^{self.prec})")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        """{prec, terms: [[num, k, coeff], ...]}; prec is "inf" or [num, k]."""
        coeffs = self.parent.coefficients
        terms = []
        for e, c in self.terms():
            num, k = split_exponent(e, self.p)
            terms.append([num, k, coeffs.element_to_json(c)])
        if self._prec is None:
            prec = "inf"
        else:
            prec = list(split_exponent(self.prec, self.p))
        return {"prec": prec, "terms": terms}

    @classmethod
    def from_json(cls, parent: HahnField, data: dict) -> HahnSeries:
        coeffs = parent.coefficients
        pairs = [(Fraction(num, parent.p ** k), coeffs.element_from_json(c)) for num, k, c in data["terms"]]
        prec = data["prec"]
        prec = INF if prec == "inf" else Fraction(prec[0], parent.p ** prec[1])
        return parent.series(pairs, prec)


def nested_field(p: int, prec=None, sample_degree: int = 2, sample_terms: int = 3) -> HahnField:
    """F = k((t^G)) with k = F_p^alg((x^G)), both levels sharing one working precision."""
    k = HahnField(FpBar(p, sample_degree), var="x", prec=prec, sample_terms=sample_terms)
    return HahnField(k, var="t", prec=prec, sample_terms=sample_terms)
