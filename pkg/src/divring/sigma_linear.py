"""n-twists, sigma-linear sets and their finite oracles.

An n-twist (d_1, ..., d_n) is the additive map x -> sum_j d_j(x_j) on R^n.
A presentation S (a finite list of n-twists) defines the sigma-linear set
V(S), the common zero set of its members.  The left R[sigma]-module they
generate has a rank computed by Euclidean row reduction, and
``dimension_upper`` = n - rank bounds the Zariski dimension from above (the
presented module may be smaller than the full vanishing module).
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .config import enum_bound
from .errors import EnumerationBoundExceeded, FieldMismatch, Undecidable
from .ore import DifferenceField, OrePoly, evaluate, format_twist, parse_twist, right_divide


class NTwist:
    """(d_1, ..., d_n) acting by x -> sum_j d_j(x_j)."""

    __slots__ = ("handle", "components")

    def __init__(self, handle: DifferenceField, components: Sequence[OrePoly]):
        for d in components:
            if d.handle is not handle:
                raise FieldMismatch("components over different difference fields")
        self.handle = handle
        self.components = tuple(components)

    @classmethod
    def zero(cls, handle, n: int) -> NTwist:
        return cls(handle, [OrePoly.zero(handle)] * n)

    @classmethod
    def single(cls, handle, n: int, j: int, d: OrePoly) -> NTwist:
        """d acting on coordinate j alone."""
        comps = [OrePoly.zero(handle)] * n
        comps[j] = d
        return cls(handle, comps)

    @property
    def arity(self) -> int:
        return len(self.components)

    def is_zero(self) -> bool:
        return all(d.is_zero() for d in self.components)

    def __call__(self, point):
        if len(point) != self.arity:
            raise ValueError(f"point of arity {len(point)} for a {self.arity}-twist")
        total = self.handle.zero
        for d, x in zip(self.components, point):
            if not d.is_zero():
                total = total + evaluate(d, x)
        return total

    def __add__(self, other: NTwist) -> NTwist:
        self._same_shape(other)
        return NTwist(self.handle, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: NTwist) -> NTwist:
        self._same_shape(other)
        return NTwist(self.handle, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> NTwist:
        return NTwist(self.handle, [-a for a in self.components])

    def left_mul(self, gamma: OrePoly) -> NTwist:
        """gamma composed after self: (gamma d_1, ..., gamma d_n)."""
        return NTwist(self.handle, [gamma * d for d in self.components])

    def _same_shape(self, other):
        if other.handle is not self.handle:
            raise FieldMismatch("twists over different difference fields")
        if other.arity != self.arity:
            raise ValueError("twists of different arity")

    def __eq__(self, other):
        if not isinstance(other, NTwist):
            return NotImplemented
        return self.handle is other.handle and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def to_text(self) -> list[str]:
        return [format_twist(d) for d in self.components]

    def __repr__(self):
        return "NTwist(" + ", ".join(self.to_text()) + ")"


def rank(generators: Sequence[NTwist]) -> int:
    """Rank of the left R[sigma]-module spanned by the generators.

    Rows are reduced column by column.  Within a column the pivot is the
    lowest-degree nonzero entry (ties to the earliest row), and the other
    rows are replaced by their right remainders modulo it, until a single
    nonzero entry remains.
    """
    rows = [list(g.components) for g in generators if not g.is_zero()]
    if not rows:
        return 0
    n = len(rows[0])
    r = 0
    for c in range(n):
        while True:
            live = [i for i in range(r, len(rows)) if not rows[i][c].is_zero()]
            if not live:
                break
            piv = min(live, key=lambda i: (rows[i][c].degree, i))
            rows[r], rows[piv] = rows[piv], rows[r]
            if len(live) == 1:
                r += 1
                break
            prow = rows[r]
            for i in range(r + 1, len(rows)):
                entry = rows[i][c]
                if entry.is_zero():
                    continue
                q, _ = right_divide(entry, prow[c])
                rows[i] = [a - q * b for a, b in zip(rows[i], prow)]
            rows = rows[:r + 1] + [row for row in rows[r + 1:] if not all(d.is_zero() for d in row)]
        if r == len(rows):
            break
    return r


class SigmaLinearSet:
    """V(S) for a finite presentation S of n-twists."""

    def __init__(self, handle: DifferenceField, n: int, generators: Sequence[NTwist] = ()):
        for g in generators:
            if g.handle is not handle:
                raise FieldMismatch("generator over a different difference field")
            if g.arity != n:
                raise ValueError(f"generator of arity {g.arity} in a presentation of arity {n}")
        self.handle = handle
        self.n = n
        self.generators = tuple(generators)

    def __repr__(self):
        return f"SigmaLinearSet(n={self.n}, generators={len(self.generators)})"

    def member(self, point) -> bool:
        if len(point) != self.n:
            raise ValueError(f"point of arity {len(point)} for a set in R^{self.n}")
        return all(not g(point) for g in self.generators)

    def rank(self) -> int:
        return rank(self.generators)

    def dimension_upper(self) -> int:
        """n - rank(S); equals the Zariski dimension when S generates the vanishing module."""
        return self.n - self.rank()

    def with_generator(self, delta: NTwist) -> SigmaLinearSet:
        return SigmaLinearSet(self.handle, self.n, self.generators + (delta,))

    def product(self, other: SigmaLinearSet) -> SigmaLinearSet:
        """U x V in R^(m+n), presented block-diagonally."""
        if other.handle is not self.handle:
            raise FieldMismatch("sets over different difference fields")
        zeros_r = [OrePoly.zero(self.handle)] * other.n
        zeros_l = [OrePoly.zero(self.handle)] * self.n
        gens = [NTwist(self.handle, list(g.components) + zeros_r) for g in self.generators]
        gens += [NTwist(self.handle, zeros_l + list(g.components)) for g in other.generators]
        return SigmaLinearSet(self.handle, self.n + other.n, gens)

    def count_points(self) -> int:
        """|V(S)| by enumeration of R^n; R must be finite and R^n within the enumeration bound."""
        H = self.handle
        if not H.is_finite:
            raise ValueError(f"{H.name} is not enumerable")
        total = H.order ** self.n
        if total > enum_bound():
            raise EnumerationBoundExceeded(f"{total} points exceed the bound {enum_bound()}")
        elements = list(H.elements())
        # tables[g][j][x] = d_j(x) for generator g
        tables = [[{x: evaluate(d, x) for x in elements} for d in g.components]
                  for g in self.generators]
        count = 0
        for point in itertools.product(elements, repeat=self.n):
            ok = True
            for tab in tables:
                s = H.zero
                for t, x in zip(tab, point):
                    s = s + t[x]
                if s:
                    ok = False
                    break
            count += ok
        return count

    def to_json(self) -> dict:
        return {"n": self.n, "generators": [g.to_text() for g in self.generators]}

    @classmethod
    def from_json(cls, handle: DifferenceField, data: dict) -> SigmaLinearSet:
        n = data["n"]
        gens = [NTwist(handle, [parse_twist(t, handle) for t in row]) for row in data["generators"]]
        return cls(handle, n, gens)


def build_G(handle: DifferenceField, b: Sequence) -> SigmaLinearSet:
    """G_b = {x : b_1(sigma(x_1) - x_1) = b_i(sigma(x_i) - x_i) for all i}."""
    b = [handle.field(c) if isinstance(c, int) else c for c in b]
    if not b:
        raise ValueError("b must be nonempty")
    if any(not c for c in b):
        raise ValueError("every b_i must be nonzero")
    n = len(b)
    gens = []
    for i in range(1, n):
        comps = [OrePoly.zero(handle)] * n
        comps[0] = OrePoly(handle, [-b[0], b[0]])
        comps[i] = OrePoly(handle, [b[i], -b[i]])
        gens.append(NTwist(handle, comps))
    return SigmaLinearSet(handle, n, gens)


def _det(handle: DifferenceField, M) -> object:
    """Determinant over a commutative field by Gaussian elimination."""
    M = [list(row) for row in M]
    n = len(M)
    det = handle.one
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return handle.zero
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det = det * M[c][c]
        inv = M[c][c].inverse()
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return det


def moore_determinant(handle: DifferenceField, xs: Sequence) -> object:
    """det(sigma^j(x_i)) for i, j < n."""
    rows = []
    for x in xs:
        row, y = [], x
        for j in range(len(xs)):
            row.append(y)
            y = handle.sigma(y)
        rows.append(row)
    return _det(handle, rows)


def fix_independent_exhaustive(handle: DifferenceField, xs: Sequence) -> bool:
    """No nonzero (l_1..l_n) in Fix(sigma)^n with sum l_i x_i = 0, by enumeration."""
    fixed = list(handle.fixed_elements())
    total = len(fixed) ** len(xs)
    if total > enum_bound():
        raise EnumerationBoundExceeded(f"{total} coefficient vectors exceed the bound {enum_bound()}")
    for lam in itertools.product(fixed, repeat=len(xs)):
        if not any(lam):
            continue
        s = handle.zero
        for l, x in zip(lam, xs):
            s = s + l * x
        if not s:
            return False
    return True


def radical_test_G(handle: DifferenceField, b: Sequence, method: str = "auto") -> bool:
    """Whether G_b is radical: b_1^{-1}, ..., b_n^{-1} are Fix(sigma)-linearly independent.

    ``method`` is ``"exhaustive"``, ``"moore"`` (Frobenius handles only) or
    ``"auto"`` (exhaustive when within the enumeration bound, else Moore).
    Raises :class:`Undecidable` when no method applies.
    """
    b = [handle.field(c) if isinstance(c, int) else c for c in b]
    if not b or any(not c for c in b):
        raise ValueError("every b_i must be nonzero")
    inv = [c.inverse() for c in b]
    can_enumerate = handle.fixed_is_enumerable
    if method == "exhaustive" or (method == "auto" and can_enumerate):
        if not can_enumerate:
            raise Undecidable(f"Fix(sigma) of {handle.name} is not enumerable")
        try:
            return fix_independent_exhaustive(handle, inv)
        except EnumerationBoundExceeded:
            if method == "exhaustive" or not handle.frobenius:
                raise
    if method in ("moore", "auto"):
        if not handle.frobenius:
            raise Undecidable(f"no Moore-matrix criterion for {handle.name}")
        return bool(moore_determinant(handle, inv))
    raise ValueError(f"unknown method {method!r}")


def kernel_size(d: OrePoly) -> int:
    H = d.handle
    return sum(1 for x in H.elements() if not evaluate(d, x))


def image_size(d: OrePoly) -> int:
    H = d.handle
    return len({evaluate(d, x) for x in H.elements()})


def decompose_sigma_delta(a, delta: OrePoly):
    """(u, v) with a = sigma(u) + delta(v), for delta = sum r_i sigma^i with r_0 != 0.

    With v = r_0^{-1} a we get delta(v) = a + sum_{i>=1} r_i sigma^i(v), so
    u = -sum_{i>=1} sigma^{-1}(r_i) sigma^(i-1)(v) gives sigma(u) = a - delta(v).
    """
    H = delta.handle
    if delta.is_zero() or not delta.coeffs[0]:
        raise ValueError("delta must have nonzero constant coefficient")
    if not H.inversive:
        raise ValueError("decomposition needs an inversive difference field")
    r = delta.coeffs
    v = r[0].inverse() * a
    u = H.zero
    y = v
    for i in range(1, len(r)):
        if i > 1:
            y = H.sigma(y)
        if r[i]:
            u = u - H.sigma(r[i], -1) * y
    return u, v


def printed_identity_residuals(a, delta: OrePoly) -> dict:
    """Residuals of two rearrangements of sum r_i sigma^i(a) against a.

    ``scaled``:   a - (sum_{i>=1} r_0^{-1} r_i sigma^i(a) + delta(-a))
    ``unscaled``: r_0 a - (sum_{i>=1} r_i sigma^i(a) + delta(-a))
    Both vanish only when a does; the valid rearrangement is
    r_0 a = delta(a) - sum_{i>=1} r_i sigma^i(a).
    """
    H = delta.handle
    r = delta.coeffs
    tail = H.zero
    y = a
    for i in range(1, len(r)):
        y = H.sigma(y)
        tail = tail + r[i] * y
    d_neg = evaluate(delta, -a)
    r0inv = r[0].inverse()
    return {
        "scaled": a - (r0inv * tail + d_neg),
        "unscaled": r[0] * a - (tail + d_neg),
        "valid": r[0] * a - (evaluate(delta, a) - tail),
    }


def hypersurface_cut_check(V: SigmaLinearSet, delta: NTwist) -> bool:
    """Adjoining one twist lowers dimension_upper by 0 or 1."""
    before = V.dimension_upper()
    after = V.with_generator(delta).dimension_upper()
    return 0 <= before - after <= 1
