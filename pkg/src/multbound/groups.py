"""Finite groups stored as full multiplication tables."""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class GroupError(ValueError):
    pass


class TableGroup:
    """A finite p-group given by its Cayley table over indices 0..order-1.

    ``table[a, b]`` is the index of the product ``a*b``.  ``labels`` optionally
    maps indices back to exponent tuples of a pc presentation.
    """

    def __init__(self, p: int, table: np.ndarray, labels: Sequence | None = None):
        table = np.asarray(table, dtype=np.int32)
        order = table.shape[0]
        if table.shape != (order, order):
            raise GroupError("table must be square")
        if order < 1:
            raise GroupError("empty table")
        m = order
        while m % p == 0:
            m //= p
        if m != 1:
            raise GroupError(f"order {order} is not a power of {p}")
        self.p = p
        self.table = table
        self.order = order
        self.labels = list(labels) if labels is not None else None

        diag = np.arange(order)
        ids = np.flatnonzero((table == diag).all(axis=1))
        if len(ids) != 1 or not np.array_equal(table[:, ids[0]], diag):
            raise GroupError("no two-sided identity")
        self.identity = int(ids[0])
        inv = np.full(order, -1, dtype=np.int32)
        rows, cols = np.nonzero(table == self.identity)
        inv[rows] = cols
        if (inv < 0).any() or not np.array_equal(table[diag, inv], np.full(order, self.identity)):
            raise GroupError("missing inverses")
        if not np.array_equal(table[inv, diag], np.full(order, self.identity)):
            raise GroupError("left and right inverses differ")
        if not (np.sort(table, axis=1) == diag).all():
            raise GroupError("table rows are not permutations")
        if not (np.sort(table, axis=0) == diag[:, None]).all():
            raise GroupError("table columns are not permutations")
        self.inverse = inv

    def __repr__(self):
        return f"TableGroup(p={self.p}, order={self.order})"

    @cached_property
    def n(self) -> int:
        """log_p of the order."""
        k, m = 0, self.order
        while m > 1:
            m //= self.p
            k += 1
        return k

    @property
    def elements(self) -> np.ndarray:
        return np.arange(self.order)

    def mul(self, a, b):
        return self.table[a, b]

    def commutator(self, a, b):
        """[a, b] = a^-1 b^-1 a b; accepts scalars or index arrays."""
        t, inv = self.table, self.inverse
        return t[t[inv[a], inv[b]], t[a, b]]

    def power(self, a, m: int):
        a = np.asarray(a)
        if m < 0:
            a, m = self.inverse[a], -m
        out = np.full(a.shape, self.identity, dtype=np.int32)
        base = a
        while m:
            if m & 1:
                out = self.table[out, base]
            base = self.table[base, base]
            m >>= 1
        return out if out.shape else int(out)

    def element_orders(self) -> np.ndarray:
        orders = np.ones(self.order, dtype=np.int64)
        cur = np.arange(self.order)
        while True:
            not_one = cur != self.identity
            if not not_one.any():
                return orders
            orders[not_one] *= self.p
            cur = self.power(cur, self.p)

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def check_associativity(self, samples: int = 1000, seed: int = 0) -> bool:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, self.order, size=(3, samples))
        t = self.table
        return bool(np.array_equal(t[t[a, b], c], t[a, t[b, c]]))

    def relabel(self, perm: Sequence[int]) -> "TableGroup":
        """Isomorphic copy where old element x becomes perm[x]."""
        perm = np.asarray(perm)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(len(perm))
        new = perm[self.table[np.ix_(inv, inv)]]
        labels = None
        if self.labels is not None:
            labels = [self.labels[inv[i]] for i in range(self.order)]
        return TableGroup(self.p, new, labels)

    # -- subgroup machinery -------------------------------------------------

    def generate(self, gens: Iterable[int]) -> np.ndarray:
        """Sorted element indices of the subgroup generated by ``gens``."""
        gens = np.unique(np.asarray(list(gens), dtype=np.int64))
        member = np.zeros(self.order, dtype=bool)
        member[self.identity] = True
        frontier = np.array([self.identity])
        while frontier.size:
            new = self.table[np.ix_(frontier, gens)].ravel() if gens.size else np.array([], int)
            new = np.unique(new)
            new = new[~member[new]]
            member[new] = True
            frontier = new
        return np.flatnonzero(member)

    def small_generating_set(self, elements: Sequence[int] | None = None) -> list[int]:
        """Greedy generating set of the subgroup formed by ``elements``."""
        if elements is None:
            elements = range(self.order)
        elements = np.asarray(list(elements))
        member = np.zeros(self.order, dtype=bool)
        member[self.identity] = True
        gens: list[int] = []
        # prefer elements of large order so fewer generators get picked
        orders = self.element_orders()[elements]
        for x in elements[np.argsort(-orders, kind="stable")]:
            if not member[x]:
                gens.append(int(x))
                member[self.generate(gens)] = True
        return gens

    def normal_closure(self, elements: Iterable[int], gens: Sequence[int] | None = None) -> np.ndarray:
        if gens is None:
            gens = self.generators
        sub = self.generate(elements)
        while True:
            member = np.zeros(self.order, dtype=bool)
            member[sub] = True
            conj = np.concatenate(
                [self.table[self.table[self.inverse[g], sub], g] for g in gens]
            ) if len(gens) else np.array([], int)
            extra = np.unique(conj[~member[conj]])
            if not extra.size:
                return sub
            sub = self.generate(np.concatenate([sub, extra]))

    @cached_property
    def generators(self) -> list[int]:
        return self.small_generating_set()

    def is_subgroup(self, elements: Sequence[int]) -> bool:
        el = np.unique(np.asarray(elements))
        if self.identity not in el:
            return False
        member = np.zeros(self.order, dtype=bool)
        member[el] = True
        return bool(member[self.table[np.ix_(el, el)]].all() and member[self.inverse[el]].all())

    def is_normal(self, elements: Sequence[int]) -> bool:
        el = np.asarray(elements)
        member = np.zeros(self.order, dtype=bool)
        member[el] = True
        for g in self.generators:
            if not member[self.table[self.table[self.inverse[g], el], g]].all():
                return False
        return True

    def subgroup_group(self, elements: Sequence[int]) -> tuple["TableGroup", np.ndarray]:
        """The subgroup as its own TableGroup, plus the embedding array."""
        el = np.asarray(sorted(set(int(x) for x in elements)))
        pos = np.full(self.order, -1, dtype=np.int64)
        pos[el] = np.arange(len(el))
        sub = pos[self.table[np.ix_(el, el)]]
        if (sub < 0).any():
            raise GroupError("elements are not closed under multiplication")
        labels = [self.labels[x] for x in el] if self.labels is not None else None
        return TableGroup(self.p, sub, labels), el


def direct_product_table(a: TableGroup, b: TableGroup) -> TableGroup:
    if a.p != b.p:
        raise GroupError("direct product of groups for different primes")
    na, nb = a.order, b.order
    ia = np.repeat(np.arange(na), nb)
    ib = np.tile(np.arange(nb), na)
    table = a.table[np.ix_(ia, ia)] * nb + b.table[np.ix_(ib, ib)]
    labels = None
    if a.labels is not None and b.labels is not None:
        labels = [tuple(a.labels[x]) + tuple(b.labels[y]) for x, y in zip(ia, ib)]
    return TableGroup(a.p, table, labels)
