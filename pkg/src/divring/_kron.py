"""Kronecker-substitution products for dense two-level series over a finite field.

A cell (i, j) holding v in F_{p^n} is spread into n 64-bit slots at index
((i * wi) + j) * wc + c, one per base-p coordinate. One big-integer product
then computes every convolution at once; slots never overflow because
each holds a sum of fewer than 2^40 products of digits below p.
"""

from __future__ import annotations

import re

_SLOT = 8  # bytes per slot
_NONZERO = re.compile(rb"[^\x00]+")


def _coords_table(f):
    table = getattr(f, "_coord_table", None)
    if table is None:
        table = [tuple(f._coords(v)) for v in range(f.order)]
        f._coord_table = table
    return table


def _encode(cells, wi: int, wc: int, size: int, coords) -> int:
    buf = bytearray(size * _SLOT)
    for (i, j), v in cells.items():
        base = ((i * wi + j) * wc) * _SLOT
        for c, d in enumerate(coords[v]):
            if d:
                pos = base + c * _SLOT
                if d < 256:
                    buf[pos] = d
                else:
                    buf[pos:pos + _SLOT] = d.to_bytes(_SLOT, "little")
    return int.from_bytes(buf, "little")


def grid_product(f, a: dict, b: dict) -> dict:
    """Product of sum a[i, j] X^i Y^j and the same for b; indices are non-negative.

    Returns the nonzero cells of the product as field integer encodings.
    """
    if not a or not b:
        return {}
    n, p = f.n, f.p
    wc = 2 * n - 1
    ai = max(i for i, _ in a) + 1
    aj = max(j for _, j in a) + 1
    bi = max(i for i, _ in b) + 1
    bj = max(j for _, j in b) + 1
    wi = aj + bj - 1
    wo = ai + bi - 1
    coords = _coords_table(f)
    A = _encode(a, wi, wc, ai * wi * wc, coords)
    B = _encode(b, wi, wc, bi * wi * wc, coords)
    prod = A * B
    total = wo * wi * wc
    data = prod.to_bytes(total * _SLOT, "little")
    raw = memoryview(data).cast("Q")
    # the product is sparse: locate nonzero cells by scanning bytes in C
    cells = []
    last = -1
    step = _SLOT * wc
    for m in _NONZERO.finditer(data):
        for cell in range(m.start() // step, (m.end() - 1) // step + 1):
            if cell != last:
                cells.append(cell)
                last = cell
    poly = f.poly
    pw = f._pw
    out = {}
    for cell in cells:
        base = cell * wc
        if n == 1:
            v = raw[base] % p
        else:
            digits = [d % p for d in raw[base:base + wc]]
            for k in range(wc - 1, n - 1, -1):
                top = digits[k]
                if top:
                    for t in range(n):
                        digits[k - n + t] = (digits[k - n + t] - top * poly[t]) % p
            v = 0
            for t in range(n):
                v += digits[t] * pw[t]
        if v:
            out[divmod(cell, wi)] = v
    return out
