"""Exact linear algebra over Z and Z/p^e, and closed forms for abelian p-groups."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class AbelianType:
    """The abelian p-group  Z_{p^a1} + Z_{p^a2} + ...  with a1 >= a2 >= ... >= 1."""

    p: int
    exps: tuple[int, ...] = ()

    def __post_init__(self):
        exps = tuple(sorted((int(a) for a in self.exps), reverse=True))
        if any(a < 1 for a in exps):
            raise ValueError(f"cyclic factor exponents must be >= 1, got {exps}")
        object.__setattr__(self, "exps", exps)

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> "AbelianType":
        """Build from cyclic factor orders such as [9, 3]."""
        orders = [o for o in orders if o != 1]
        if not orders:
            raise ValueError("cannot infer the prime from an empty order list")
        p = _smallest_prime_factor(orders[0])
        exps = []
        for o in orders:
            a = _exact_log(o, p)
            if a is None:
                raise ValueError(f"{o} is not a power of {p}")
            exps.append(a)
        return cls(p, tuple(exps))

    @property
    def log_order(self) -> int:
        return sum(self.exps)

    @property
    def order(self) -> int:
        return self.p**self.log_order

    @property
    def rank(self) -> int:
        return len(self.exps)

    @property
    def orders(self) -> list[int]:
        return [self.p**a for a in self.exps]

    def __str__(self):
        if not self.exps:
            return "1"
        return " x ".join(f"C{o}" for o in self.orders)


def _smallest_prime_factor(m: int) -> int:
    for q in range(2, m + 1):
        if m % q == 0:
            return q
    raise ValueError(f"no prime factor of {m}")


def _exact_log(m: int, p: int) -> int | None:
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    return k if m == 1 else None


def tensor_type(a: AbelianType, b: AbelianType) -> AbelianType:
    if a.p != b.p:
        raise ValueError(f"prime mismatch: {a.p} vs {b.p}")
    return AbelianType(a.p, tuple(min(x, y) for x in a.exps for y in b.exps))


def hom_ext_type(a: AbelianType, j: int) -> tuple[AbelianType, AbelianType]:
    """Hom(A, Z/p^j) and Ext(A, Z/p^j); both are sum of Z_{p^min(a_i, j)}."""
    if j < 1:
        raise ValueError("coefficient level must be >= 1")
    t = AbelianType(a.p, tuple(min(x, j) for x in a.exps))
    return t, t


def abelian_multiplier(a: AbelianType) -> AbelianType:
    ex = a.exps
    return AbelianType(a.p, tuple(min(ex[i], ex[k]) for i in range(len(ex)) for k in range(i + 1, len(ex))))


# -- Smith normal form over Z --------------------------------------------------


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors d1 | d2 | ... of an integer matrix.

    Zero diagonal entries are reported as 0 so the list has min(rows, cols)
    entries.
    """
    a = [[int(x) for x in row] for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag: list[int] = []
    t = 0
    while t < min(rows, cols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            piv = a[t][t]
            done = True
            for i in range(t + 1, rows):
                q = a[i][t] // piv
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = a[t][j] // piv
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if done:
                # the pivot must divide the rest of the block
                bad = next(
                    ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % piv),
                    None,
                )
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move the smallest remaining entry of row/column t into the pivot
            cand = [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t, cols) if a[t][j]]
            _, pi, pj = min(cand)
            a[t], a[pi] = a[pi], a[t]
            for row in a:
                row[t], row[pj] = row[pj], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    diag.extend([0] * (min(rows, cols) - len(diag)))
    return diag


# -- modules over Z/p^e ----------------------------------------------------------


def smith_valuations_mod(matrix, p: int, e: int) -> list[int]:
    """p-adic valuations (< e) of the nonzero Smith invariants of M mod p^e.

    Eliminates one valuation layer at a time: at layer v every live entry is
    divisible by p^v, so ordinary Gauss elimination on unit multiples of p^v
    is the same as pivoting on an entry of minimal valuation.
    """
    mod = p**e
    if mod >= 2**31:
        raise ValueError(f"modulus {p}^{e} too large for int64 elimination")
    a = np.array(matrix, dtype=np.int64, copy=True)
    if a.ndim != 2 or a.size == 0:
        return []
    a %= mod
    vals: list[int] = []
    for v in range(e):
        pv = p**v
        step = pv * p
        a = a[(a != 0).any(axis=1)]
        a = a[:, (a != 0).any(axis=0)]
        if a.size == 0:
            break
        live = np.ones(a.shape[0], dtype=bool)
        for c in range(a.shape[1]):
            col = a[:, c]
            units = np.flatnonzero(live & (col % step != 0))
            if not units.size:
                continue
            r = units[0]
            u = int(col[r]) // pv
            a[r] = (a[r] * pow(u % mod, -1, mod)) % mod
            hit = np.flatnonzero(live & (a[:, c] != 0))
            hit = hit[hit != r]
            if hit.size:
                factors = a[hit, c] // pv
                a[hit] = (a[hit] - factors[:, None] * a[r]) % mod
            live[r] = False
            vals.append(v)
        a = a[live]
    return vals


def span_order_from_valuations(vals: Sequence[int], p: int, j: int) -> int:
    """Order of the row span mod p^j, given valuations computed at a level >= j."""
    return p ** sum(j - min(v, j) for v in vals)


def span_size_mod(matrix, p: int, e: int) -> int:
    """Order of the subgroup of (Z/p^e)^cols generated by the rows."""
    return span_order_from_valuations(smith_valuations_mod(matrix, p, e), p, e)


def embed_mixed_moduli(vectors, p: int, local_exps: Sequence[int]) -> tuple[np.ndarray, int]:
    """Embed vectors of  prod Z/p^{m_c}  into (Z/p^E)^cols, E = max m_c.

    Z/p^m is identified with p^(E-m) Z/p^E, so subgroup orders are preserved.
    """
    local = np.asarray(local_exps, dtype=np.int64)
    top = int(local.max()) if local.size else 1
    top = max(top, 1)
    scale = p ** (top - local)
    vec = np.asarray(vectors, dtype=np.int64).reshape(-1, len(local))
    return (vec % (p**local)) * scale % (p**top), top


def mixed_span_size(vectors, p: int, local_exps: Sequence[int]) -> int:
    """Order of the subgroup generated by vectors in  prod Z/p^{m_c}."""
    if len(local_exps) == 0:
        return 1
    emb, top = embed_mixed_moduli(vectors, p, local_exps)
    if emb.shape[0] == 0:
        return 1
    return span_size_mod(emb, p, top)
