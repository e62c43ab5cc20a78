"""The Ellis-Wiegold maps Psi_i and the quantities bounded through them.

Psi_i sends (x_1, ..., x_{i+1}) in the (i+1)-fold tensor power of
Gbar^ab = G / gamma_2(G) Z(G) to (gamma_i / gamma_{i+1}) (x) Gbar^ab by

    sum_{m=0}^{i}  [ [x_{i+2-m}, ..., x_{i+1}]_r , [x_1, ..., x_{i-m}]_l ] (x) x_{i+1-m}

where an empty normed commutator is dropped from the outer bracket (so the
m = 0 and m = i terms are the plain left- and right-normed commutators).
For i = 2 this is [x1,x2](x)x3 + [x2,x3](x)x1 + [x3,x1](x)x2.

Tensor targets use fixed cyclic bases of both factors; a tensor element is a
vector whose (u, v) coordinate lives in Z / p^min(a_u, b_v).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .groups import GroupError, TableGroup
from .linalg import AbelianType, mixed_span_size, tensor_type
from .structure import Quotient, center, log_p, lower_central_series


@dataclass
class SectionBasis:
    """Cyclic decomposition of an abelian section upper/lower of G.

    ``coords[x]`` is the coordinate vector of the coset of x (rows for x
    outside ``upper`` are -1); ``basis`` are representatives in G.
    """

    type: AbelianType
    basis: list[int]
    coords: np.ndarray

    @property
    def moduli(self) -> np.ndarray:
        return np.array([self.type.p**a for a in self.type.exps], dtype=np.int64)


def _abelian_basis(a: TableGroup) -> tuple[list[int], list[int], np.ndarray]:
    """Basis elements, their exponents and coordinates for an abelian p-group table."""
    p = a.p
    member = np.zeros(a.order, dtype=bool)
    member[a.identity] = True
    coords = np.zeros((a.order, 0), dtype=np.int64)
    basis: list[int] = []
    exps: list[int] = []
    elements = np.arange(a.order)
    while member.sum() < a.order:
        # order of every element modulo the span so far
        rel = np.zeros(a.order, dtype=np.int64)
        cur = elements.copy()
        while True:
            outside = ~member[cur]
            if not outside.any():
                break
            rel[outside] += 1
            cur = a.power(cur, p)
        x = int(np.argmax(rel))
        b = int(rel[x])
        y = int(a.power(x, p**b))
        # lift to an element of exact order p^b; coefficients are divisible by p^b
        c = coords[y]
        for bi, ci in zip(basis, c):
            if ci % p**b:
                raise GroupError("abelian basis lifting failed")
            x = int(a.table[x, a.power(bi, -(int(ci) // p**b))])
        span = np.flatnonzero(member)
        new_coords = np.full((a.order, len(basis) + 1), -1, dtype=np.int64)
        new_member = member.copy()
        step = span
        for m in range(p**b):
            new_coords[step, :-1] = coords[span]
            new_coords[step, -1] = m
            new_member[step] = True
            step = a.table[step, x]
        member = new_member
        coords = new_coords
        basis.append(x)
        exps.append(b)
    return basis, exps, coords


def section_basis(g: TableGroup, upper, lower) -> SectionBasis:
    upper = np.unique(np.asarray(upper))
    lower = np.unique(np.asarray(lower))
    sub, emb = g.subgroup_group(upper)
    pos = np.full(g.order, -1, dtype=np.int64)
    pos[emb] = np.arange(len(emb))
    q = Quotient(sub, pos[lower], check=False)
    if not q.group.is_abelian:
        raise GroupError("section is not abelian")
    basis_q, exps, coords_q = _abelian_basis(q.group)
    coords = np.full((g.order, len(exps)), -1, dtype=np.int64)
    coords[emb] = coords_q[q.proj]
    basis = [int(emb[q.reps[b]]) for b in basis_q]
    return SectionBasis(AbelianType(g.p, tuple(exps)), basis, coords)


def normed_commutator(g: TableGroup, elems, side: str = "left"):
    """[..[[x1, x2], x3].., xk] (left) or [x1, [.. [x_{k-1}, x_k]..]] (right).

    Entries may be index arrays of equal shape (evaluated elementwise).
    """
    elems = list(elems)
    if not elems:
        raise ValueError("normed commutator of an empty list")
    if side == "left":
        out = elems[0]
        for x in elems[1:]:
            out = g.commutator(out, x)
        return out
    if side == "right":
        out = elems[-1]
        for x in reversed(elems[:-1]):
            out = g.commutator(x, out)
        return out
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


class EllisWiegold:
    """Psi maps for one group, with section bases built once up front."""

    def __init__(self, g: TableGroup):
        self.g = g
        self.p = g.p
        self.lcs = lower_central_series(g)
        self.c = len(self.lcs) - 1
        self.center = center(g)
        gamma2 = self.lcs[1] if self.c >= 1 else self.lcs[0]
        self.kernel = g.generate(np.concatenate([gamma2, self.center]))
        self.right = section_basis(g, np.arange(g.order), self.kernel)
        self.left = {
            i: section_basis(g, self.lcs[i - 1], self.lcs[i]) for i in range(2, self.c + 1)
        }
        # above the class every weight-i section is trivial, so Psi_i is zero
        self._trivial = SectionBasis(AbelianType(g.p), [], np.zeros((g.order, 0), dtype=np.int64))

    @property
    def delta(self) -> int:
        return self.right.type.rank

    def _check_weight(self, i: int):
        if i < 2:
            raise ValueError(f"weight {i} < 2")

    def section(self, i: int) -> SectionBasis:
        """Basis of gamma_i / gamma_{i+1}."""
        return self.left.get(i, self._trivial)

    def local_exps(self, i: int) -> np.ndarray:
        a = self.section(i).type.exps
        b = self.right.type.exps
        return np.array([min(x, y) for x in a for y in b], dtype=np.int64)

    def target_type(self, i: int) -> AbelianType:
        self._check_weight(i)
        return tensor_type(self.section(i).type, self.right.type)

    def tensor(self, i: int, left_elems, right_elems) -> np.ndarray:
        """Coordinates of  left (x) right  for arrays of elements."""
        lc = self.section(i).coords[np.asarray(left_elems)]
        rc = self.right.coords[np.asarray(right_elems)]
        if (lc < 0).any():
            raise GroupError(f"left factor not in gamma_{i}")
        prod = lc[..., :, None] * rc[..., None, :]
        prod = prod.reshape(prod.shape[:-2] + (-1,))
        return prod % (self.p ** self.local_exps(i))

    def psi_eval(self, i: int, tuples) -> np.ndarray:
        """Psi_i on one tuple (shape (i+1,)) or a batch (shape (T, i+1))."""
        self._check_weight(i)
        tup = np.asarray(tuples)
        single = tup.ndim == 1
        if single:
            tup = tup[None, :]
        if tup.shape[-1] != i + 1:
            raise ValueError(f"Psi_{i} takes {i + 1} entries")
        cols = [tup[:, s] for s in range(i + 1)]
        total = np.zeros((tup.shape[0], len(self.local_exps(i))), dtype=np.int64)
        for m in range(i + 1):
            parts = []
            if m:
                parts.append(normed_commutator(self.g, cols[i + 1 - m :], "right"))
            if i - m:
                parts.append(normed_commutator(self.g, cols[: i - m], "left"))
            left = parts[0] if len(parts) == 1 else self.g.commutator(parts[0], parts[1])
            total += self.tensor(i, left, cols[i - m])
        total %= self.p ** self.local_exps(i)
        return total[0] if single else total

    def generator_tuples(self, i: int) -> np.ndarray:
        gens = self.right.basis
        if not gens:
            return np.zeros((0, i + 1), dtype=np.int64)
        return np.array(list(itertools.product(gens, repeat=i + 1)), dtype=np.int64)

    def image_log(self, i: int, tuples=None) -> int:
        """log_p |Im Psi_i|, spanned over generator tuples by default."""
        self._check_weight(i)
        if tuples is None:
            tuples = self.generator_tuples(i)
        if len(tuples) == 0:
            return 0
        vecs = self.psi_eval(i, tuples)
        return log_p(self.p, mixed_span_size(vecs, self.p, self.local_exps(i)))

    @cached_property
    def image_logs(self) -> dict[int, int]:
        """log_p |Im Psi_i| for 2 <= i <= c."""
        return {i: self.image_log(i) for i in range(2, self.c + 1)}

    def psi_image_size(self, i: int) -> int:
        if i in self.image_logs:
            return self.p ** self.image_logs[i]
        return self.p ** self.image_log(i)


def psi_image_size(g: TableGroup, i: int) -> int:
    return EllisWiegold(g).psi_image_size(i)


@dataclass
class EWInequality:
    """Exponents of p in  lhs <= rhs <= rhs_relaxed."""

    p: int
    lhs: int
    rhs: int
    rhs_relaxed: int

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs <= self.rhs_relaxed

    def as_powers(self) -> tuple[int, int, int]:
        return self.p**self.lhs, self.p**self.rhs, self.p**self.rhs_relaxed


def ew_inequality(g: TableGroup, multiplier_log: int, ew: EllisWiegold | None = None) -> EWInequality:
    """Both sides of the Ellis-Wiegold inequality, given log_p |M(G)|."""
    from .cohomology import abelianization_type
    from .linalg import abelian_multiplier

    if ew is None:
        ew = EllisWiegold(g)
    if ew.c < 2:
        raise ValueError("the Ellis-Wiegold inequality needs a nonabelian group")
    k = log_p(g.p, len(ew.lcs[1]))
    m_ab = abelian_multiplier(abelianization_type(g)).log_order
    lhs = multiplier_log + k + sum(ew.image_logs.values())
    rhs = m_ab + sum(ew.target_type(i).log_order for i in range(2, ew.c + 1))
    relaxed = m_ab + k * ew.delta
    return EWInequality(g.p, lhs, rhs, relaxed)


def v_subgroup_size(g: TableGroup) -> int:
    """|<x^p (x) x gamma_2 : x in G>| inside gamma_2(G) (x) G/gamma_2(G).

    Requires p odd, class 2 and G/gamma_2(G) elementary abelian.
    """
    p = g.p
    if p == 2:
        raise ValueError("needs an odd prime")
    lcs = lower_central_series(g)
    if len(lcs) - 1 != 2:
        raise ValueError("needs nilpotency class 2")
    gamma2 = lcs[1]
    xs = np.arange(g.order)
    pw = g.power(xs, p)
    if not np.isin(pw, gamma2).all():
        raise ValueError("needs G/gamma_2(G) elementary abelian")
    left = section_basis(g, gamma2, [g.identity])
    right = section_basis(g, xs, gamma2)
    local = np.array([min(a, b) for a in left.type.exps for b in right.type.exps], dtype=np.int64)
    prod = left.coords[pw][:, :, None] * right.coords[xs][:, None, :]
    vecs = prod.reshape(g.order, -1) % (p**local)
    return mixed_span_size(vecs, p, local)
