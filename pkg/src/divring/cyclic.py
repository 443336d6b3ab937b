"""Cyclic algebras D = (K/F, sigma, alpha) over Hahn series fields.

K = F(theta) with theta^s = r (the radicand, t in the standard constructions)
and sigma(theta) = zeta * theta for a primitive s-th root of unity zeta.
D = K + K x + ... + K x^(s-1) with x^s = alpha and x a = sigma(a) x.

Two constructions are provided by :func:`build_paper_example`:

* p odd: F = k((t^G)), k = F_p^alg((x^G)), s = 2, theta = sqrt(t), zeta = -1;
* p = 2: same F, s = 3, theta = cbrt(t), zeta = omega in F_4.

In both, alpha is the indeterminate x of k.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from fractions import Fraction

from .errors import FieldMismatch, PrecisionError
from .fields import FqElement, is_prime, primitive_root_of_unity
from .hahn import HahnField, HahnSeries, dot, gamma_coset, nested_field


def _perm_sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


class CyclicAlgebra:
    """The cyclic algebra (F(theta)/F, sigma, alpha) with theta^s = radicand."""

    def __init__(self, F: HahnField, s: int, alpha, zeta: FqElement, radicand=None):
        if not is_prime(s):
            raise ValueError(f"degree {s} must be prime")
        self.F = F
        self.s = s
        self.alpha = F(alpha)
        if self.alpha.is_zero():
            raise ValueError("alpha must be nonzero")
        self.radicand = F.gen() if radicand is None else F(radicand)
        if zeta ** s != 1 or any(zeta ** i == 1 for i in range(1, s)):
            raise ValueError(f"{zeta!r} is not a primitive {s}-th root of unity")
        self.zeta = zeta
        # _zpow[i][m] = zeta^(i*m) as an element of F
        self._zpow = [[F(zeta ** (i * m % s)) for m in range(s)] for i in range(s)]
        self._scalars: dict = {}
        self.standard_construction = False

    def __repr__(self):
        return f"CyclicAlgebra(s={self.s}, p={self.F.p}, alpha={self.alpha!r})"

    @property
    def p(self) -> int:
        return self.F.p

    @property
    def dimension(self) -> int:
        return self.s * self.s

    # -- element constructors -----------------------------------------------

    def k(self, *coords) -> KElement:
        coords = [self.F(c) for c in coords] + [self.F.zero] * (self.s - len(coords))
        if len(coords) != self.s:
            raise ValueError(f"expected at most {self.s} coordinates")
        return KElement(self, tuple(coords))

    def d(self, *coords) -> DElement:
        out = []
        for c in coords:
            if isinstance(c, KElement):
                if c.alg is not self:
                    raise FieldMismatch("element of a different algebra")
                out.append(c)
            else:
                out.append(self.k(c))
        out += [self.k()] * (self.s - len(out))
        if len(out) != self.s:
            raise ValueError(f"expected at most {self.s} coordinates")
        return DElement(self, tuple(out))

    @property
    def theta(self) -> KElement:
        return self.k(0, 1)

    @property
    def one(self) -> DElement:
        return self.d(1)

    @property
    def zero(self) -> DElement:
        return self.d()

    @property
    def x(self) -> DElement:
        return self.d(0, 1)

    def basis(self) -> list[DElement]:
        """The F-basis theta^m x^j, ordered by (j, m)."""
        out = []
        for j in range(self.s):
            for m in range(self.s):
                kc = [0] * self.s
                kc[m] = 1
                dc = [self.k()] * self.s
                dc[j] = self.k(*kc)
                out.append(DElement(self, tuple(dc)))
        return out

    def random_k(self, rng: random.Random, prec=None) -> KElement:
        return KElement(self, tuple(self.F.random_element(rng, prec=prec) for _ in range(self.s)))

    def random_d(self, rng: random.Random, prec=None) -> DElement:
        return DElement(self, tuple(self.random_k(rng, prec) for _ in range(self.s)))

    # -- K = F(theta) --------------------------------------------------------

    def k_mul(self, u: KElement, v: KElement) -> KElement:
        if u.alg is not self or v.alg is not self:
            raise FieldMismatch("operands belong to different algebras")
        s = self.s
        buckets = [[] for _ in range(s)]
        for a, x in enumerate(u.coords):
            if x.is_exact_zero():
                continue
            for b, y in enumerate(v.coords):
                if y.is_exact_zero():
                    continue
                buckets[(a + b) % s].append((x, y, (0, a + b >= s, False)))
        return KElement(self, tuple(self._contract(bucket) for bucket in buckets))

    def _scalar(self, key) -> HahnSeries:
        """The monomial zeta^z * r^[wrap_theta] * alpha^[wrap_x] for key (z, wrap_theta, wrap_x)."""
        cached = self._scalars.get(key)
        if cached is None:
            z, wt, wx = key
            cached = self.F(self.zeta ** z)
            if wt:
                cached = cached * self.radicand
            if wx:
                cached = cached * self.alpha
            self._scalars[key] = cached
        return cached

    def _contract(self, triples) -> HahnSeries:
        """sum of scalar(key) * x * y, with each scalar folded into the smaller factor."""
        pairs = []
        for x, y, key in triples:
            if key != (0, False, False):
                c = self._scalar(key)
                if _size(x) <= _size(y):
                    x = c * x
                else:
                    y = c * y
            pairs.append((x, y))
        return dot(self.F, pairs)

    def k_sigma(self, u: KElement, power: int = 1) -> KElement:
        if u.alg is not self:
            raise FieldMismatch("element of a different algebra")
        i = power % self.s
        if i == 0:
            return u
        zp = self._zpow[i]
        return KElement(self, tuple(c * zp[m] for m, c in enumerate(u.coords)))

    def norm(self, u: KElement) -> HahnSeries:
        """N(u), the product of the s Galois conjugates of u."""
        prod = u
        for i in range(1, self.s):
            prod = self.k_mul(prod, self.k_sigma(u, i))
        if not all(c.is_zero() for c in prod.coords[1:]):
            raise PrecisionError("conjugate product did not land in F")
        return prod.coords[0]

    def norm_closed_form(self, u: KElement) -> HahnSeries:
        """a^2 - b^2 r for s = 2; a^3 + b^3 r + c^3 r^2 - 3abcr for s = 3 (+abcr in characteristic 2)."""
        r = self.radicand
        if self.s == 2:
            a, b = u.coords
            return a * a - b * b * r
        if self.s == 3:
            a, b, c = u.coords
            return a * a * a + b * b * b * r + c * c * c * r * r - 3 * (a * b * c * r)
        raise NotImplementedError("closed-form norm is only implemented for s = 2, 3")

    def k_inverse(self, u: KElement) -> KElement:
        """u^{-1} = (product of the nontrivial conjugates) / N(u)."""
        rest = self.k(1)
        for i in range(1, self.s):
            rest = self.k_mul(rest, self.k_sigma(u, i))
        ninv = self.norm(u).inverse()
        return KElement(self, tuple(c * ninv for c in rest.coords))

    # -- D -------------------------------------------------------------------

    def d_mul(self, u: DElement, v: DElement) -> DElement:
        """Expand u_i x^i * v_j x^j = u_i sigma^i(v_j) x^(i+j), folding x^s to alpha.

        All F-coordinate products landing on the same basis element theta^c x^m
        are summed in one pass.
        """
        if u.alg is not self or v.alg is not self:
            raise FieldMismatch("operands belong to different algebras")
        s = self.s
        buckets = [[[] for _ in range(s)] for _ in range(s)]
        for i, ui in enumerate(u.coords):
            for j, vj in enumerate(v.coords):
                m = (i + j) % s
                for a, x in enumerate(ui.coords):
                    if x.is_exact_zero():
                        continue
                    for b, y in enumerate(vj.coords):
                        if y.is_exact_zero():
                            continue
                        key = (i * b % s, a + b >= s, i + j >= s)
                        buckets[m][(a + b) % s].append((x, y, key))
        return DElement(self, tuple(
            KElement(self, tuple(self._contract(bucket) for bucket in row)) for row in buckets))

    def d_inv(self, u: DElement, method: str = "auto") -> DElement:
        """Two-sided inverse to precision.

        ``method`` is ``"conjugate"`` (s = 2 only), ``"linear"`` or ``"auto"``.
        Right multiplication v -> v u is left K-linear, so v u = 1 is an s x s
        system over the commutative field K, solved by the adjugate and one
        inversion in K.
        """
        if u.is_zero():
            raise PrecisionError("element is zero to precision")
        if method == "auto":
            method = "conjugate" if self.s == 2 else "linear"
        if method == "conjugate":
            if self.s != 2:
                raise ValueError("the conjugate formula needs s = 2")
            a, b = u.coords
            n = self.norm(a) - self.alpha * self.norm(b)
            ninv = n.inverse()
            conj = self.d(self.k_sigma(a), -b)
            return conj.scale(ninv)
        if method != "linear":
            raise ValueError(f"unknown method {method!r}")
        s = self.s
        R = [[None] * s for _ in range(s)]
        for i in range(s):
            for k in range(s):
                j = (k - i) % s
                entry = self.k_sigma(u.coords[j], i)
                if i + j >= s:
                    entry = entry.scale(self.alpha)
                R[i][k] = entry
        det = self._kdet(R)
        if all(c.is_zero() for c in det.coords):
            raise PrecisionError("linear system is singular at the available precision")
        dinv = self.k_inverse(det)
        # v = e_0 R^{-1}: v_i = (adj R)_{0,i} / det = (-1)^i M_{i,0} / det
        v = []
        for i in range(s):
            minor = [[R[r][c] for c in range(1, s)] for r in range(s) if r != i]
            cof = self._kdet(minor) if minor else self.k(1)
            if i % 2:
                cof = -cof
            v.append(self.k_mul(cof, dinv))
        return DElement(self, tuple(v))

    def _kdet(self, M) -> KElement:
        n = len(M)
        total = self.k()
        for perm in itertools.permutations(range(n)):
            term = self.k(1)
            for r, c in enumerate(perm):
                term = self.k_mul(term, M[r][c])
            total = total + term if _perm_sign(perm) > 0 else total - term
        return total

    def is_central(self, u: DElement) -> bool:
        """Central iff u commutes with the generators theta and x."""
        th = self.d(self.theta)
        return (u * th - th * u).is_zero() and (u * self.x - self.x * u).is_zero()

    # -- F-linear algebra ------------------------------------------------------

    def to_vector(self, u: DElement) -> list[HahnSeries]:
        """F-coordinates on the basis theta^m x^j, index j*s + m."""
        return [c for kc in u.coords for c in kc.coords]

    def from_vector(self, vec) -> DElement:
        s = self.s
        return DElement(self, tuple(self.k(*vec[j * s:(j + 1) * s]) for j in range(s)))

    def centralizer_dimension(self, a: DElement, orientation: str = "da-ad") -> int:
        """dim_F C(a), from the kernel of d -> d a - a d on D = F^(s^2).

        Needs exact coordinates so that ranks are decided by exact zero tests.
        """
        _require_exact(a)
        rows = []
        for e in self.basis():
            comm = e * a - a * e if orientation == "da-ad" else a * e - e * a
            rows.append(self.to_vector(comm))
        return self.dimension - _exact_rank(rows)

    def minimal_polynomial_degree(self, a: DElement) -> int:
        """[F(a):F], the first n with 1, a, ..., a^n linearly dependent over F."""
        _require_exact(a)
        powers = [self.to_vector(self.one)]
        cur = self.one
        for n in range(1, self.dimension + 1):
            cur = cur * a
            powers.append(self.to_vector(cur))
            if _exact_rank(powers) < len(powers):
                return n
        raise AssertionError("powers of a stayed independent beyond dim D")

    def brauer_check(self, a: DElement) -> dict:
        """Compare [D:C(a)] = dim D / dim C(a) with [F(a):F]."""
        dim_c = self.centralizer_dimension(a)
        dim_c_rev = self.centralizer_dimension(a, orientation="ad-da")
        deg = self.minimal_polynomial_degree(a)
        index = Fraction(self.dimension, dim_c)
        return {"dim_C": dim_c, "dim_C_reversed": dim_c_rev, "index": index,
                "min_poly_degree": deg, "holds": index == deg and dim_c == dim_c_rev}

    # -- identities ------------------------------------------------------------

    def metro_identity_check(self, a: DElement) -> bool:
        """(a+1)^p - (a+1) == a^p - a to precision."""
        p = self.p
        b = a + 1
        return ((b ** p - b) - (a ** p - a)).is_zero()

    def to_json(self) -> dict:
        return {"p": self.p, "s": self.s, "prec": str(self.F.prec),
                "alpha": self.alpha.to_json(), "radicand": self.radicand.to_json(),
                "zeta": self.zeta.coords, "standard_construction": self.standard_construction}


def _size(x: HahnSeries) -> int:
    return sum(len(c._terms) if isinstance(c, HahnSeries) else 1 for _, c in x._terms)


def _require_exact(a: DElement):
    for kc in a.coords:
        for c in kc.coords:
            if not c.is_exact() or not all(
                    not isinstance(x, HahnSeries) or x.is_exact() for _, x in c.terms()):
                raise PrecisionError("exact (finite-support) coordinates are required")


def _exact_rank(rows: list[list[HahnSeries]]) -> int:
    """Rank over F by fraction-free elimination; entries are exact, zero tests are exact."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    rank = 0
    ncols = len(rows[0])
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if not rows[i][c].is_exact_zero()), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        pv = pr[c]
        for i in range(rank + 1, len(rows)):
            m = rows[i][c]
            if m.is_exact_zero():
                continue
            rows[i] = [pv * x - m * y for x, y in zip(rows[i], pr)]
        rank += 1
    return rank


class KElement:
    """a_0 + a_1 theta + ... + a_(s-1) theta^(s-1) with a_i in F."""

    __slots__ = ("alg", "coords")

    def __init__(self, alg: CyclicAlgebra, coords: tuple):
        self.alg = alg
        self.coords = coords

    def _other(self, other) -> KElement | None:
        if isinstance(other, KElement):
            if other.alg is not self.alg:
                raise FieldMismatch("operands belong to different algebras")
            return other
        try:
            return self.alg.k(other)
        except TypeError:
            return None

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return KElement(self.alg, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return KElement(self.alg, tuple(-a for a in self.coords))

    def __sub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return KElement(self.alg, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self.alg.k_mul(self, other)

    __rmul__ = __mul__

    def scale(self, c) -> KElement:
        """Multiply by an element of F."""
        return KElement(self.alg, tuple(a * c for a in self.coords))

    def sigma(self, power: int = 1) -> KElement:
        return self.alg.k_sigma(self, power)

    def norm(self) -> HahnSeries:
        return self.alg.norm(self)

    def inverse(self) -> KElement:
        return self.alg.k_inverse(self)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def is_exact_zero(self) -> bool:
        return all(c.is_exact_zero() for c in self.coords)

    def __eq__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def eq_to_prec(self, other) -> bool:
        return (self - other).is_zero()

    def __repr__(self):
        names = ["", "θ", "θ^2"] + [f"θ^{i}" for i in range(3, self.alg.s)]
        parts = [f"({c!r}){names[i]}" if i else f"({c!r})"
                 for i, c in enumerate(self.coords) if not c.is_exact_zero()]
        return " + ".join(parts) if parts else "0"


class DElement:
    """u_0 + u_1 x + ... + u_(s-1) x^(s-1) with u_i in K."""

    __slots__ = ("alg", "coords")

    def __init__(self, alg: CyclicAlgebra, coords: tuple):
        self.alg = alg
        self.coords = coords

    def _other(self, other) -> DElement | None:
        if isinstance(other, DElement):
            if other.alg is not self.alg:
                raise FieldMismatch("operands belong to different algebras")
            return other
        try:
            return self.alg.d(other)
        except TypeError:
            return None

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return DElement(self.alg, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return DElement(self.alg, tuple(-a for a in self.coords))

    def __sub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return DElement(self.alg, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self.alg.d_mul(self, other)

    def __rmul__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self.alg.d_mul(other, self)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.alg.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> DElement:
        """Multiply by an element of F (central)."""
        return DElement(self.alg, tuple(a.scale(c) for a in self.coords))

    def inverse(self, method: str = "auto") -> DElement:
        return self.alg.d_inv(self, method)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def __eq__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def eq_to_prec(self, other) -> bool:
        return (self - other).is_zero()

    def __repr__(self):
        parts = []
        for j, c in enumerate(self.coords):
            if c.is_exact_zero():
                continue
            parts.append(f"[{c!r}]" + ("" if j == 0 else "x" if j == 1 else f"x^{j}"))
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------


def build_paper_example(p: int, precision=None, sample_degree: int = 2) -> CyclicAlgebra:
    """The degree-2 (p odd) or degree-3 (p = 2) cyclic division algebra with alpha = x."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    F = nested_field(p, prec=precision, sample_degree=sample_degree)
    k = F.coefficients
    alpha = F(k.gen())
    if p == 2:
        alg = CyclicAlgebra(F, 3, alpha, primitive_root_of_unity(3, 2))
    else:
        alg = CyclicAlgebra(F, 2, alpha, k.coefficients(-1))
    th = alg.theta
    if th.sigma(alg.s) != th or any(th.sigma(i) == th for i in range(1, alg.s)):
        raise AssertionError("sigma does not have order s on K")
    alg.standard_construction = True
    return alg


def _leading(series: HahnSeries):
    return series.leading_term()


def norm_obstruction_certify(alg: CyclicAlgebra, samples: int, seed, zero_rate: float = 0.1) -> dict:
    """Sample norms N(a + b theta [+ c theta^2]) and check they avoid alpha for the coset reason.

    For each sample the leading exponent of each summand of the closed-form
    norm must fall in its predicted class of G/sG (class i for the summand
    coming from the coefficient of theta^i), the norm's leading term must be
    the minimal one, and the norm must differ from alpha, either because
    its valuation is nonzero or because its leading coefficient has
    x-valuation in sG while alpha = x has x-valuation 1.
    """
    if not alg.standard_construction:
        raise ValueError("certificate applies to the standard constructions with alpha = x")
    s, F = alg.s, alg.F
    rng = random.Random(f"norm-obstruction:{seed}")
    r = alg.radicand
    histogram: Counter = Counter()
    reasons: Counter = Counter()
    violations = []
    for idx in range(samples):
        while True:
            coords = [F.zero if rng.random() < zero_rate else F.random_element(rng)
                      for _ in range(s)]
            if any(not c.is_exact_zero() for c in coords):
                break
        u = alg.k(*coords)
        n = alg.norm_closed_form(u)
        problems = []
        # summand i is coords[i]^s * r^i, predicted class i
        leads = []
        for i, c in enumerate(coords):
            if c.is_exact_zero():
                continue
            v = c.valuation()
            term = c ** s * r ** i
            tv, tc = _leading(term)
            if tv != s * v + i or gamma_coset(tv, s, alg.p) != i:
                problems.append(f"summand {i} has leading exponent {tv} outside class {i}")
            leads.append((tv, i, tc))
        if all(not c.is_exact_zero() for c in coords) and s == 3:
            mean = sum(c.valuation() for c in coords) + 1
            if not min(tv for tv, _, _ in leads) < mean:
                problems.append("mixed term abct is not dominated")
        tv, cls, tc = min(leads, key=lambda z: z[0])
        if s == 2 and cls == 1:
            tc = -tc
        nv, nc = _leading(n)
        if nv != tv or not (nc - tc).is_zero():
            problems.append("norm's leading term is not the minimal summand's")
        histogram[f"{s}G+{cls}" if cls else f"{s}G"] += 1
        if (n - alg.alpha).is_zero():
            problems.append("norm equals alpha")
            reason = "equal"
        elif nv != 0:
            reason = "valuation"
        else:
            xv = nc.valuation()
            if gamma_coset(xv, s, alg.p) == 0:
                reason = "no-root"
            else:
                problems.append("leading coefficient has x-valuation outside sG")
                reason = "unexplained"
        reasons[reason] += 1
        if problems:
            violations.append({"sample": idx, "problems": problems})
    return {"samples": samples, "seed": seed, "s": s, "p": alg.p,
            "class_histogram": dict(sorted(histogram.items())),
            "reasons": dict(sorted(reasons.items())),
            "violations": violations}
