"""Exact finite fields, an on-demand tower inside F_p^alg, and the perfect closure of F_q(t).

Elements of F_{p^n} are stored as a single integer whose base-p digits are the
coordinates on the power basis 1, g, ..., g^{n-1} of F_p[g]/(f).  Small fields
(up to ``TABLE_LIMIT`` elements) get exp/log/Zech tables so that every field
operation is a couple of list lookups.

Each degree uses the lexicographically smallest monic irreducible polynomial
(coefficient list ``[c_0, ..., c_n]`` compared left to right).  Embeddings
F_{p^m} -> F_{p^n} are chosen once per pair and cached, with the root picked so
that every pair of embeddings composes compatibly.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
import threading
from typing import Iterator, Sequence

from .errors import FieldMismatch, NotInvertible

TABLE_LIMIT = 1 << 16


@functools.lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# ---------------------------------------------------------------------------
# polynomials over F_p as lists of ints, lowest degree first


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul_p(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pmod_p(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    a = list(a)
    df = len(f) - 1
    inv_lc = pow(f[-1], -1, p)
    while len(_trim(a)) - 1 >= df:
        c = a[-1] * inv_lc % p
        shift = len(a) - 1 - df
        for i, y in enumerate(f):
            a[shift + i] = (a[shift + i] - c * y) % p
    return a


def _pgcd_p(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _trim(_pmod_p(a, b, p))
    return a


def _xpow_mod_p(e: int, f: Sequence[int], p: int) -> list[int]:
    """x^e mod f over F_p."""
    result = [1]
    base = _pmod_p([0, 1], f, p)
    while e:
        if e & 1:
            result = _pmod_p(_pmul_p(result, base, p), f, p)
        base = _pmod_p(_pmul_p(base, base, p), f, p)
        e >>= 1
    return result


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Rabin's irreducibility test over F_p; ``poly`` is [c_0, ..., c_n] with c_n != 0."""
    f = _trim([c % p for c in poly])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    if _trim(_xpow_mod_p(p**n, f, p)) != _trim(_pmod_p(x, f, p)):
        return False
    for r in prime_factors(n):
        h = _xpow_mod_p(p ** (n // r), f, p)
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(_pgcd_p(f, _trim(h), p)) != 1:
            return False
    return True


@functools.lru_cache(maxsize=None)
def smallest_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible [c_0, ..., c_{n-1}, 1] of degree n."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError(f"degree must be positive, got {n}")
    for head in itertools.product(range(p), repeat=n):
        poly = (*head, 1)
        if is_irreducible(poly, p):
            return poly
    raise AssertionError("no irreducible polynomial found")


# ---------------------------------------------------------------------------


_SLOT = 24


class FiniteField:
    """The field F_{p^n} = F_p[g]/(poly).

    Use :func:`GF` for the standard (cached, tower-compatible) field of each degree.
    """

    def __init__(self, p: int, n: int, poly: Sequence[int] | None = None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if poly is None:
            poly = smallest_irreducible(p, n)
        poly = tuple(int(c) % p for c in poly)
        if len(poly) != n + 1 or poly[-1] != 1:
            raise ValueError("defining polynomial must be monic of degree n")
        if not is_irreducible(poly, p):
            raise ValueError(f"{list(poly)} is not irreducible over F_{p}")
        self.p = p
        self.n = n
        self.poly = poly
        self.order = p**n
        self.standard = poly == smallest_irreducible(p, n)
        self._pw = [p**i for i in range(n + 1)]
        self._tables = None
        self._lock = threading.Lock()

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self.p == other.p and self.poly == other.poly

    def __hash__(self):
        return hash((self.p, self.poly))

    def __repr__(self):
        return f"GF({self.p}^{self.n})"

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "poly": list(self.poly)}

    @classmethod
    def from_json(cls, data: dict) -> FiniteField:
        field = cls(data["p"], data["n"], data["poly"])
        return GF(field.p, field.n) if field.standard else field

    def element_to_json(self, x: FqElement) -> list[int]:
        return x.coords

    def element_from_json(self, data) -> FqElement:
        return self(list(data))

    # -- integer encoding --------------------------------------------------

    def _coords(self, v: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.n):
            v, r = divmod(v, p)
            out.append(r)
        return out

    def _from_coords(self, coords: Sequence[int]) -> int:
        if len(coords) > self.n:
            raise ValueError(f"expected at most {self.n} coordinates")
        return sum((c % self.p) * self._pw[i] for i, c in enumerate(coords))

    def _mul_slow(self, a: int, b: int) -> int:
        prod = _pmul_p(self._coords(a), self._coords(b), self.p)
        return self._from_coords(_trim(_pmod_p(prod, self.poly, self.p)))

    def _pow_slow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._mul_slow(result, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return result

    def _add_slow(self, a: int, b: int) -> int:
        p = self.p
        out, w = 0, 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            out += ((x + y) % p) * w
            w *= p
        return out

    def _neg_slow(self, a: int) -> int:
        return self._from_coords([(-c) % self.p for c in self._coords(a)])

    def _primitive_int(self) -> int:
        m = self.order - 1
        if m == 1:
            return 1
        rs = prime_factors(m)
        for v in range(2, self.order):
            if all(self._pow_slow(v, m // r) != 1 for r in rs):
                return v
        raise AssertionError("no primitive element")

    def _build_tables(self):
        with self._lock:
            if self._tables is not None:
                return self._tables
            q, m = self.order, self.order - 1
            g = self._primitive_int()
            exp = [0] * (2 * m + 1)
            log = [-1] * q
            x = 1
            for i in range(m):
                exp[i] = x
                log[x] = i
                x = self._mul_slow(x, g)
            for i in range(m, 2 * m + 1):
                exp[i] = exp[i - m]
            # zech[e] = log(1 + g^e), -1 when 1 + g^e = 0
            zech = [-1] * m
            for e in range(m):
                s = self._add_slow(1, exp[e])
                zech[e] = log[s] if s else -1
            half = m // 2 if self.p != 2 else 0
            self._tables = (exp, log, zech, m, half, g)
            return self._tables

    def _packing(self):
        """(log, pexp, unpack) for summing products as plain integers.

        pexp[i] is g^i with its base-p digits spread into 24-bit slots, so a
        sum of up to 2^24 / p such values has no carries between digits;
        ``unpack`` reduces the digits mod p and returns the field encoding.
        """
        packing = getattr(self, "_packing_cache", None)
        if packing is not None:
            return packing
        exp, log = self._build_tables()[:2]
        p, n = self.p, self.n
        mask = (1 << _SLOT) - 1

        def pack(v):
            out = 0
            for i, c in enumerate(self._coords(v)):
                out |= c << (_SLOT * i)
            return out

        pexp = [pack(v) for v in exp]
        pw = self._pw

        if n == 1:
            def unpack(w):
                return w % p
        elif n == 2:
            def unpack(w):
                return (w & mask) % p + (w >> _SLOT) % p * p
        else:
            def unpack(w):
                v = 0
                for i in range(n):
                    v += ((w >> (_SLOT * i)) & mask) % p * pw[i]
                return v

        self._packing_cache = (log, pexp, unpack)
        return self._packing_cache

    @property
    def has_tables(self) -> bool:
        return self.order <= TABLE_LIMIT

    # -- integer-level field operations ------------------------------------

    def _add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if not a:
            return b
        if not b:
            return a
        if self.n == 1:
            return (a + b) % self.p
        t = self._tables or (self._build_tables() if self.has_tables else None)
        if t is None:
            return self._add_slow(a, b)
        exp, log, zech, m, _, _ = t
        la = log[a]
        z = zech[(log[b] - la) % m]
        if z < 0:
            return 0
        return exp[la + z]

    def _neg(self, a: int) -> int:
        if self.p == 2 or not a:
            return a
        if self.n == 1:
            return self.p - a
        t = self._tables or (self._build_tables() if self.has_tables else None)
        if t is None:
            return self._neg_slow(a)
        exp, log, _, _, half, _ = t
        return exp[log[a] + half]

    def _sub(self, a: int, b: int) -> int:
        return self._add(a, self._neg(b))

    def _mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if self.n == 1:
            return a * b % self.p
        t = self._tables or (self._build_tables() if self.has_tables else None)
        if t is None:
            return self._mul_slow(a, b)
        exp, log = t[0], t[1]
        return exp[log[a] + log[b]]

    def _inv(self, a: int) -> int:
        if not a:
            raise NotInvertible(f"0 is not invertible in {self!r}")
        if self.n == 1:
            return pow(a, -1, self.p)
        t = self._tables or (self._build_tables() if self.has_tables else None)
        if t is None:
            return self._pow_slow(a, self.order - 2)
        exp, log, _, m, _, _ = t
        return exp[(m - log[a]) % m]

    def _pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self._inv(a), -e
        if e == 0:
            return 1
        if not a:
            return 0
        if self.n == 1:
            return pow(a, e, self.p)
        t = self._tables or (self._build_tables() if self.has_tables else None)
        if t is None:
            return self._pow_slow(a, e)
        exp, log, _, m, _, _ = t
        return exp[(log[a] * e) % m]

    def _frob(self, a: int, k: int = 1) -> int:
        return self._pow(a, self.p ** (k % self.n))

    # -- element construction ----------------------------------------------

    def _el(self, v: int) -> FqElement:
        return FqElement(self, v)

    def __call__(self, value) -> FqElement:
        if isinstance(value, FqElement):
            if value.field == self:
                return FqElement(self, value.v)
            return embed(value, self)
        if isinstance(value, int):
            return FqElement(self, value % self.p)
        if isinstance(value, (list, tuple)):
            return FqElement(self, self._from_coords(value))
        raise TypeError(f"cannot convert {value!r} into {self!r}")

    @property
    def zero(self) -> FqElement:
        return FqElement(self, 0)

    @property
    def one(self) -> FqElement:
        return FqElement(self, 1)

    @property
    def gen(self) -> FqElement:
        """Class of the indeterminate g (a root of the defining polynomial)."""
        if self.n == 1:
            return FqElement(self, (-self.poly[0]) % self.p)
        return FqElement(self, self.p)

    def primitive_element(self) -> FqElement:
        if self.has_tables:
            return FqElement(self, self._build_tables()[5])
        return FqElement(self, self._primitive_int())

    def elements(self) -> Iterator[FqElement]:
        for v in range(self.order):
            yield FqElement(self, v)

    def nonzero_elements(self) -> Iterator[FqElement]:
        for v in range(1, self.order):
            yield FqElement(self, v)

    def prime_field_elements(self) -> Iterator[FqElement]:
        for v in range(self.p):
            yield FqElement(self, v)

    def random_element(self, rng: random.Random, nonzero: bool = False) -> FqElement:
        lo = 1 if nonzero else 0
        return FqElement(self, rng.randrange(lo, self.order))

    def _subfield_ints(self, d: int) -> list[int]:
        """Elements of the degree-d subfield, in increasing integer order."""
        if self.n % d:
            raise ValueError(f"{d} does not divide {self.n}")
        exp = self._build_tables()[0]
        step = (self.order - 1) // (self.p**d - 1)
        return sorted([0] + [exp[j * step] for j in range(self.p**d - 1)])

    def _eval_poly(self, poly: Sequence[int], x: int) -> int:
        """Horner evaluation of a polynomial whose coefficients lie in F_p."""
        acc = 0
        for c in reversed(poly):
            acc = self._add(self._mul(acc, x), c % self.p)
        return acc


@functools.lru_cache(maxsize=None)
def GF(p: int, n: int = 1) -> FiniteField:
    """The standard copy of F_{p^n} used by the tower."""
    return FiniteField(p, n)


# ---------------------------------------------------------------------------
# compatible embeddings

_EMB_LOCK = threading.RLock()
_GEN_IMAGE: dict[tuple[int, int, int], int] = {}
_EMB_TABLE: dict[tuple[int, int, int], list[int]] = {}
_EMB_INVERSE: dict[tuple[int, int, int], dict[int, int]] = {}


def _gen_image(p: int, m: int, n: int) -> int:
    """Image in GF(p, n) of the generator of GF(p, m).

    The root is chosen so that the embedding restricts, on every maximal
    subfield GF(p, m/r), to the embedding already fixed for that subfield;
    this makes the whole system of embeddings commute.
    """
    key = (p, m, n)
    img = _GEN_IMAGE.get(key)
    if img is not None:
        return img
    with _EMB_LOCK:
        if key in _GEN_IMAGE:
            return _GEN_IMAGE[key]
        if n % m:
            raise ValueError(f"F_{p}^{m} does not embed in F_{p}^{n}")
        src, dst = GF(p, m), GF(p, n)
        if m == n:
            img = src.gen.v
        elif m == 1:
            img = dst._from_coords([src.gen.v])
        else:
            if not dst.has_tables:
                raise NotImplementedError(f"embedding into {dst!r} exceeds the table limit")
            constraints = []
            for r in prime_factors(m):
                d = m // r
                if d == 1:
                    continue
                inner = src._coords(_gen_image(p, d, m))
                constraints.append((inner, _gen_image(p, d, n)))
            img = None
            for rho in dst._subfield_ints(m):
                if dst._eval_poly(src.poly, rho) != 0:
                    continue
                if all(dst._eval_poly(inner, rho) == target for inner, target in constraints):
                    img = rho
                    break
            if img is None:
                raise AssertionError("no compatible embedding found")
        _GEN_IMAGE[key] = img
        return img


def _embed_table(p: int, m: int, n: int) -> list[int]:
    key = (p, m, n)
    table = _EMB_TABLE.get(key)
    if table is not None:
        return table
    with _EMB_LOCK:
        if key in _EMB_TABLE:
            return _EMB_TABLE[key]
        src, dst = GF(p, m), GF(p, n)
        rho = _gen_image(p, m, n)
        basis = [1]
        for _ in range(1, m):
            basis.append(dst._mul(basis[-1], rho))
        table = [0] * src.order
        for v in range(1, src.order):
            i = 0
            while i + 1 < m and src._pw[i + 1] <= v:
                i += 1
            c = v // src._pw[i]
            table[v] = dst._add(table[v - c * src._pw[i]], dst._mul(c, basis[i]))
        _EMB_TABLE[key] = table
        _EMB_INVERSE[key] = {w: v for v, w in enumerate(table)}
        return table


def _map_int(p: int, m: int, n: int, v: int) -> int:
    if m == n:
        return v
    if m == 1:
        return v
    src = GF(p, m)
    if src.order <= TABLE_LIMIT:
        return _embed_table(p, m, n)[v]
    dst = GF(p, n)
    return dst._eval_poly(src._coords(v), _gen_image(p, m, n))


def embed(x: FqElement, target: FiniteField) -> FqElement:
    """Image of ``x`` under the cached embedding into ``target``."""
    src = x.field
    if src == target:
        return x
    if src.p != target.p:
        raise FieldMismatch(f"characteristics differ: {src!r} vs {target!r}")
    if target.n % src.n:
        raise ValueError(f"{src!r} does not embed in {target!r}")
    if not (src.standard and target.standard):
        raise FieldMismatch("embeddings are only defined between standard tower fields")
    return FqElement(target, _map_int(src.p, src.n, target.n, x.v))


def _descend(x: FqElement) -> tuple[int, int]:
    """(d, v): the smallest tower field GF(p, d) containing x and x's encoding there."""
    field = x.field
    if field.n == 1:
        return 1, x.v
    for d in divisors(field.n):
        if d == field.n:
            break
        if field._frob(x.v, d) == x.v:
            if d == 1:
                return 1, x.v
            _embed_table(field.p, d, field.n)
            return d, _EMB_INVERSE[(field.p, d, field.n)][x.v]
    return field.n, x.v


def _promote(a: FqElement, b: FqElement) -> tuple[FiniteField, int, int]:
    fa, fb = a.field, b.field
    if fa.p != fb.p:
        raise FieldMismatch(f"characteristics differ: {fa!r} vs {fb!r}")
    if fa.n == 1 and fb.n == 1:
        return fa, a.v, b.v
    if fa.n == 1 and fb.standard:
        return fb, a.v, b.v
    if fb.n == 1 and fa.standard:
        return fa, a.v, b.v
    if not (fa.standard and fb.standard):
        raise FieldMismatch(f"cannot mix {fa!r} and {fb!r}")
    n = math.lcm(fa.n, fb.n)
    return GF(fa.p, n), _map_int(fa.p, fa.n, n, a.v), _map_int(fa.p, fb.n, n, b.v)


class FqElement:
    """An element of a finite field F_{p^n}; immutable."""

    __slots__ = ("field", "v")

    def __init__(self, field: FiniteField, v: int):
        self.field = field
        self.v = v

    @property
    def coords(self) -> list[int]:
        return self.field._coords(self.v)

    @property
    def p(self) -> int:
        return self.field.p

    def _pair(self, other):
        field = self.field
        if type(other) is FqElement:
            if other.field is field:
                return field, self.v, other.v
            return _promote(self, other)
        if isinstance(other, int):
            return field, self.v, other % field.p
        return None

    def __add__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        f, a, b = pr
        return FqElement(f, f._add(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        f, a, b = pr
        return FqElement(f, f._sub(a, b))

    def __rsub__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        f, a, b = pr
        return FqElement(f, f._sub(b, a))

    def __mul__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        f, a, b = pr
        return FqElement(f, f._mul(a, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        f, a, b = pr
        return FqElement(f, f._mul(a, f._inv(b)))

    def __rtruediv__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        f, a, b = pr
        return FqElement(f, f._mul(b, f._inv(a)))

    def __neg__(self):
        return FqElement(self.field, self.field._neg(self.v))

    def __pow__(self, e: int):
        return FqElement(self.field, self.field._pow(self.v, e))

    def inverse(self) -> FqElement:
        return FqElement(self.field, self.field._inv(self.v))

    def __bool__(self):
        return self.v != 0

    def is_zero(self) -> bool:
        return self.v == 0

    def __eq__(self, other):
        if type(other) is FqElement and other.field is self.field:
            return self.v == other.v
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        _, a, b = pr
        return a == b

    def __hash__(self):
        f = self.field
        if not f.standard:
            return hash((f.p, f.poly, self.v))
        return hash((f.p,) + _descend(self))

    def __repr__(self):
        return format_fq(self)

    # -- Frobenius and friends ---------------------------------------------

    def frobenius(self, k: int = 1) -> FqElement:
        """x -> x^(p^k)."""
        return FqElement(self.field, self.field._frob(self.v, k))

    def frobenius_inverse(self) -> FqElement:
        """The unique y with y^p = x, computed as x^(p^(n-1))."""
        return FqElement(self.field, self.field._frob(self.v, self.field.n - 1))

    pth_root = frobenius_inverse

    def in_subfield(self, d: int) -> bool:
        return self.field.n % d == 0 and self.field._frob(self.v, d) == self.v

    def multiplicative_order(self) -> int:
        if not self.v:
            raise ValueError("0 has no multiplicative order")
        m = self.field.order - 1
        order = m
        for r in prime_factors(m):
            while order % r == 0 and self.field._pow(self.v, order // r) == 1:
                order //= r
        return order

    def trace(self, to_degree: int = 1) -> FqElement:
        """Trace to the subfield of degree ``to_degree``, returned as an element of GF(p, to_degree)."""
        return trace(self, to_degree)

    def to_json(self) -> list[int]:
        return self.coords


def format_fq(x: FqElement) -> str:
    """Text literal: a bare integer in a prime field, else ``[c0,c1,...]``."""
    if x.field.n == 1:
        return str(x.v)
    return "[" + ",".join(str(c) for c in x.coords) + "]"


def parse_fq(text: str, field: FiniteField) -> FqElement:
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise ValueError(f"malformed field literal {text!r}")
        body = text[1:-1].strip()
        coords = [int(c) for c in body.split(",")] if body else []
        return field(coords)
    return field(int(text))


# ---------------------------------------------------------------------------
# field-level operations


def frobenius(x):
    """x -> x^p on finite fields and on the perfect closure."""
    return x.frobenius()


def frobenius_inverse(x):
    """The p-th root of x."""
    return x.frobenius_inverse()


def trace(x: FqElement, to_degree: int = 1) -> FqElement:
    field = x.field
    m = to_degree
    if m < 1 or field.n % m:
        raise ValueError(f"trace to degree {m} is undefined on {field!r}")
    acc = 0
    for i in range(field.n // m):
        acc = field._add(acc, field._frob(x.v, m * i))
    if m == field.n:
        return FqElement(field, acc)
    if m == 1:
        return GF(field.p, 1)._el(acc)
    if not field.standard:
        raise FieldMismatch("trace to a proper subfield needs a standard tower field")
    _embed_table(field.p, m, field.n)
    return GF(field.p, m)._el(_EMB_INVERSE[(field.p, m, field.n)][acc])


def _solve_mod_p(rows: list[list[int]], rhs: list[int], p: int) -> list[int] | None:
    """One solution of rows . y = rhs over F_p, or None."""
    nr, nc = len(rows), len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if aug[i][c] % p), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [v * inv % p for v in aug[r]]
        for i in range(nr):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(v - f * w) % p for v, w in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] % p for row in aug[r:]):
        return None
    y = [0] * nc
    for i, c in enumerate(pivots):
        y[c] = aug[i][-1]
    return y


def artin_schreier_solve(b: FqElement) -> FqElement | None:
    """A root y of y^p - y = b, or None if there is none.

    y -> y^p - y is F_p-linear, so this is a linear solve on coordinates.
    The full root set is y + F_p.
    """
    field = b.field
    p, n = field.p, field.n
    cols = []
    for j in range(n):
        e = field._pw[j]
        cols.append(field._coords(field._sub(field._frob(e), e)))
    rows = [[cols[j][i] for j in range(n)] for i in range(n)]
    y = _solve_mod_p(rows, field._coords(b.v), p)
    if y is None:
        return None
    return FqElement(field, field._from_coords(y))


def primitive_root_of_unity(order: int, p: int, n: int | None = None) -> FqElement:
    """An element of exact multiplicative order ``order`` in GF(p, n).

    With ``n`` omitted the smallest degree containing such a root is used.
    """
    if order < 1:
        raise ValueError("order must be positive")
    if order % p == 0:
        raise ValueError(f"no roots of unity of order {order} in characteristic {p}")
    if n is None:
        n = 1
        while (p**n - 1) % order:
            n += 1
    elif (p**n - 1) % order:
        raise ValueError(f"GF({p}^{n}) has no primitive {order}-th root of unity")
    field = GF(p, n)
    if order == 1:
        return field.one
    g = field.primitive_element()
    return g ** ((field.order - 1) // order)


class FpBar:
    """F_p^alg, approximated by the tower of standard fields GF(p, n).

    Elements are plain :class:`FqElement` values carrying their home degree;
    mixed arithmetic promotes to the lcm degree.  ``sample_degree`` sets the
    field random elements are drawn from.
    """

    is_perfect = True

    def __init__(self, p: int, sample_degree: int = 2):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.sample_degree = sample_degree

    def __eq__(self, other):
        return isinstance(other, FpBar) and other.p == self.p

    def __hash__(self):
        return hash(("FpBar", self.p))

    def __repr__(self):
        return f"FpBar({self.p})"

    def __call__(self, value) -> FqElement:
        if isinstance(value, FqElement):
            if value.field.p != self.p:
                raise FieldMismatch(f"{value!r} is not in characteristic {self.p}")
            return value
        if isinstance(value, int):
            return GF(self.p, 1)(value)
        raise TypeError(f"cannot convert {value!r} into {self!r}")

    @property
    def zero(self) -> FqElement:
        return GF(self.p, 1).zero

    @property
    def one(self) -> FqElement:
        return GF(self.p, 1).one

    def random_element(self, rng: random.Random, nonzero: bool = False) -> FqElement:
        return GF(self.p, self.sample_degree).random_element(rng, nonzero=nonzero)

    def element_to_json(self, x: FqElement) -> list[int]:
        return x.coords

    def element_from_json(self, data) -> FqElement:
        return GF(self.p, len(data))(list(data))

    def to_json(self) -> dict:
        return {"kind": "FpBar", "p": self.p}


# ---------------------------------------------------------------------------
# the perfect closure of F_q(t)
#
# polynomials over a FiniteField are tuples of int encodings, lowest degree first


def _pt(a: list[int]) -> tuple[int, ...]:
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def _padd(F: FiniteField, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] = F._add(out[i], y)
    return _pt(out)


def _pneg(F: FiniteField, a):
    return tuple(F._neg(c) for c in a)


def _pmul(F: FiniteField, a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F._add(out[i + j], F._mul(x, y))
    return _pt(out)


def _pscale(F: FiniteField, a, c: int):
    return _pt([F._mul(x, c) for x in a])


def _pdivmod(F: FiniteField, a, b):
    if not b:
        raise NotInvertible("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    inv = F._inv(b[-1])
    q = [0] * max(0, len(a) - db)
    while len(r) - 1 >= db and r:
        c = F._mul(r[-1], inv)
        shift = len(r) - 1 - db
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] = F._sub(r[shift + i], F._mul(c, y))
        _pt(r)
    return _pt(q), _pt(r)


def _pgcd(F: FiniteField, a, b):
    while b:
        a, b = b, _pdivmod(F, a, b)[1]
    if a:
        a = _pscale(F, a, F._inv(a[-1]))
    return a


def _pspread(a, factor: int):
    """Substitute u -> u^factor."""
    if factor == 1 or not a:
        return tuple(a)
    out = [0] * ((len(a) - 1) * factor + 1)
    for i, c in enumerate(a):
        out[i * factor] = c
    return tuple(out)


class PerfectClosure:
    """The perfect closure F_q(t^(1/p^oo)) of the rational function field over ``base``.

    An element at level k is a reduced fraction num(u)/den(u), den monic, with
    u = t^(1/p^k); the level is always the smallest one possible.
    """

    is_perfect = True

    def __init__(self, base: FiniteField):
        self.base = base
        self.p = base.p

    def __eq__(self, other):
        return isinstance(other, PerfectClosure) and other.base == self.base

    def __hash__(self):
        return hash(("PerfectClosure", self.base))

    def __repr__(self):
        return f"PerfectClosure({self.base!r})"

    def element(self, num, den=(1,), level: int = 0) -> PerfElement:
        F = self.base
        num = _pt([F(c).v if not isinstance(c, int) else c % self.p for c in num])
        den = _pt([F(c).v if not isinstance(c, int) else c % self.p for c in den])
        return PerfElement._make(self, level, num, den)

    def __call__(self, value) -> PerfElement:
        if isinstance(value, PerfElement):
            if value.parent != self:
                raise FieldMismatch(f"{value!r} is not in {self!r}")
            return value
        if isinstance(value, (int, FqElement)):
            return self.element([value])
        raise TypeError(f"cannot convert {value!r} into {self!r}")

    @property
    def zero(self) -> PerfElement:
        return PerfElement(self, 0, (), (1,))

    @property
    def one(self) -> PerfElement:
        return PerfElement(self, 0, (1,), (1,))

    @property
    def t(self) -> PerfElement:
        return PerfElement(self, 0, (0, 1), (1,))

    def random_element(self, rng: random.Random, nonzero: bool = False,
                       max_level: int = 2, num_degree: int = 2, den_degree: int = 1) -> PerfElement:
        F = self.base
        while True:
            level = rng.randint(0, max_level)
            num = [rng.randrange(F.order) for _ in range(rng.randint(1, num_degree + 1))]
            dd = rng.randint(0, den_degree)
            den = [rng.randrange(F.order) for _ in range(dd)] + [1]
            x = PerfElement._make(self, level, _pt(num), _pt(den))
            if not nonzero or x:
                return x


class PerfElement:
    """An element of the perfect closure of F_q(t); immutable and canonical."""

    __slots__ = ("parent", "level", "num", "den")

    def __init__(self, parent: PerfectClosure, level: int, num: tuple, den: tuple):
        self.parent = parent
        self.level = level
        self.num = num
        self.den = den

    @staticmethod
    def _make(parent: PerfectClosure, level: int, num: tuple, den: tuple) -> PerfElement:
        F = parent.base
        if not den:
            raise NotInvertible("zero denominator")
        if not num:
            return PerfElement(parent, 0, (), (1,))
        g = _pgcd(F, num, den)
        if len(g) > 1:
            num = _pdivmod(F, num, g)[0]
            den = _pdivmod(F, den, g)[0]
        if den[-1] != 1:
            inv = F._inv(den[-1])
            num, den = _pscale(F, num, inv), _pscale(F, den, inv)
        p = parent.p
        while level > 0 and all(c == 0 for i, c in enumerate(num) if i % p) \
                and all(c == 0 for i, c in enumerate(den) if i % p):
            num, den = num[::p], den[::p]
            level -= 1
        return PerfElement(parent, level, num, den)

    def _lift(self, level: int):
        f = self.parent.p ** (level - self.level)
        return _pspread(self.num, f), _pspread(self.den, f)

    def _pair(self, other):
        if isinstance(other, (int, FqElement)):
            other = self.parent(other)
        elif type(other) is not PerfElement:
            return None
        elif other.parent != self.parent:
            raise FieldMismatch(f"{self.parent!r} vs {other.parent!r}")
        level = max(self.level, other.level)
        return level, self._lift(level), other._lift(level)

    def __add__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        level, (a, b), (c, d) = pr
        F = self.parent.base
        if b == d:
            return PerfElement._make(self.parent, level, _padd(F, a, c), b)
        return PerfElement._make(self.parent, level,
                                 _padd(F, _pmul(F, a, d), _pmul(F, c, b)), _pmul(F, b, d))

    __radd__ = __add__

    def __neg__(self):
        return PerfElement(self.parent, self.level, _pneg(self.parent.base, self.num), self.den)

    def __sub__(self, other):
        if isinstance(other, (int, FqElement)):
            other = self.parent(other)
        if type(other) is not PerfElement:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        level, (a, b), (c, d) = pr
        F = self.parent.base
        return PerfElement._make(self.parent, level, _pmul(F, a, c), _pmul(F, b, d))

    __rmul__ = __mul__

    def inverse(self) -> PerfElement:
        if not self.num:
            raise NotInvertible("0 is not invertible")
        return PerfElement._make(self.parent, self.level, self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, (int, FqElement)):
            other = self.parent(other)
        if type(other) is not PerfElement:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.parent.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self):
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def __eq__(self, other):
        if isinstance(other, (int, FqElement)):
            other = self.parent(other)
        if type(other) is not PerfElement:
            return NotImplemented
        return (self.parent == other.parent and self.level == other.level
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.level, self.num, self.den))

    def frobenius(self) -> PerfElement:
        F, p = self.parent.base, self.parent.p
        num = tuple(F._pow(c, p) for c in self.num)
        den = tuple(F._pow(c, p) for c in self.den)
        if self.level > 0:
            return PerfElement._make(self.parent, self.level - 1, num, den)
        return PerfElement._make(self.parent, 0, _pspread(num, p), _pspread(den, p))

    def frobenius_inverse(self) -> PerfElement:
        F = self.parent.base
        num = tuple(F._frob(c, F.n - 1) for c in self.num)
        den = tuple(F._frob(c, F.n - 1) for c in self.den)
        return PerfElement._make(self.parent, self.level + 1, num, den)

    pth_root = frobenius_inverse

    def to_json(self) -> dict:
        F = self.parent.base
        return {"level": self.level,
                "num": [F._coords(c) for c in self.num],
                "den": [F._coords(c) for c in self.den]}

    def __repr__(self):
        return format_perf(self)


def format_perf(x: PerfElement) -> str:
    """Text literal ``{n0;n1;.../d0;d1;...@level}`` with field literals as coefficients."""
    F = x.parent.base
    num = ";".join(format_fq(F._el(c)) for c in x.num) or "0"
    den = ";".join(format_fq(F._el(c)) for c in x.den)
    return "{" + num + "/" + den + "@" + str(x.level) + "}"


def parse_perf(text: str, parent: PerfectClosure) -> PerfElement:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        return parent(parse_fq(text, parent.base))
    body, _, level = text[1:-1].rpartition("@")
    num, _, den = body.partition("/")
    F = parent.base
    return parent.element([parse_fq(c, F) for c in num.split(";")],
                          [parse_fq(c, F) for c in den.split(";")], int(level))
