"""Subgroups, series, quotients and the numeric invariants the bounds depend on."""

from __future__ import annotations

from dataclasses import dataclass, field, asdict

import numpy as np

from .groups import GroupError, TableGroup
from .linalg import AbelianType


def center(g: TableGroup) -> np.ndarray:
    t = g.table
    return np.flatnonzero((t == t.T).all(axis=1))


def commutator_subgroup(g: TableGroup, a, b=None) -> np.ndarray:
    """[A, B] for normal subgroups A, B (B defaults to G)."""
    a = np.asarray(a)
    b = np.asarray(g.generators if b is None else b, dtype=np.int64)
    comms = g.commutator(a[:, None], b[None, :]).ravel()
    return g.normal_closure(np.unique(comms))


def lower_central_series(g: TableGroup) -> list[np.ndarray]:
    """[gamma_1 = G, gamma_2, ..., trivial]; class c = len - 1."""
    series = [np.arange(g.order)]
    while len(series[-1]) > 1:
        nxt = commutator_subgroup(g, series[-1])
        if len(nxt) == len(series[-1]):
            raise GroupError("lower central series does not reach 1; group is not nilpotent")
        series.append(nxt)
    return series


def nilpotency_class(g: TableGroup) -> int:
    return len(lower_central_series(g)) - 1


def agemo(g: TableGroup) -> np.ndarray:
    """G^p, generated by all p-th powers."""
    return g.generate(np.unique(g.power(np.arange(g.order), g.p)))


def frattini_agemo(g: TableGroup) -> tuple[np.ndarray, np.ndarray]:
    gp = agemo(g)
    derived = commutator_subgroup(g, np.arange(g.order))
    phi = g.generate(np.concatenate([gp, derived]))
    return phi, gp


def log_p(p: int, m: int) -> int:
    k = 0
    while m > 1:
        if m % p:
            raise ValueError(f"{m} is not a power of {p}")
        m //= p
        k += 1
    return k


def rank_d(g: TableGroup) -> int:
    """Minimal number of generators, via |G/Phi(G)|."""
    phi, _ = frattini_agemo(g)
    return log_p(g.p, g.order // len(phi))


class Quotient:
    """G/N with its natural projection.

    ``group`` is the coset table; ``proj[x]`` is the coset of element x and
    ``reps[c]`` a representative of coset c.
    """

    def __init__(self, g: TableGroup, normal, check: bool = True):
        normal = np.unique(np.asarray(normal))
        if check:
            if not g.is_subgroup(normal):
                raise GroupError("not a subgroup")
            if not g.is_normal(normal):
                raise GroupError("subgroup is not normal")
        proj = np.full(g.order, -1, dtype=np.int64)
        reps = []
        for x in range(g.order):
            if proj[x] < 0:
                proj[g.table[x, normal]] = len(reps)
                reps.append(x)
        reps = np.asarray(reps)
        table = proj[g.table[np.ix_(reps, reps)]]
        self.parent = g
        self.normal = normal
        self.proj = proj
        self.reps = reps
        self.group = TableGroup(g.p, table)


def quotient(g: TableGroup, normal) -> TableGroup:
    return Quotient(g, normal).group


def abelian_invariants(g: TableGroup, elements=None) -> AbelianType:
    """Abelian type from |Omega_j| = #{x : x^(p^j) = 1}."""
    if elements is not None:
        g, _ = g.subgroup_group(elements)
    if not g.is_abelian:
        raise GroupError("abelian_invariants needs an abelian group")
    p = g.p
    orders = g.element_orders()
    exps: list[int] = []
    prev = 1
    j = 0
    counts = []
    while prev < g.order:
        j += 1
        omega = int((orders <= p**j).sum())
        counts.append(log_p(p, omega) - log_p(p, prev))
        prev = omega
    # counts[j-1] = number of cyclic factors of exponent >= j
    counts.append(0)
    for j in range(len(counts) - 1):
        exps.extend([j + 1] * (counts[j] - counts[j + 1]))
    return AbelianType(p, tuple(exps))


@dataclass
class GroupProfile:
    p: int
    n: int
    k: int
    d: int
    c: int
    delta: int
    gamma: int
    t: int
    is_abelian: bool = False
    is_special: bool = False
    is_maximal_class: bool = False
    has_Gp_in_gamma2: bool = False
    has_Gp_cyclic_p: bool = False
    has_Gp_equal_gamma2: bool = False
    # log_p of |Z(G)|, kept for the special-group cases
    z: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def mu(self) -> int:
        return min(self.d, self.c)

    @property
    def nu(self) -> int:
        return min(self.d, self.gamma + 1)

    def flags(self) -> dict[str, bool]:
        return {
            "is_abelian": self.is_abelian,
            "is_special": self.is_special,
            "is_maximal_class": self.is_maximal_class,
            "has_Gp_in_gamma2": self.has_Gp_in_gamma2,
            "has_Gp_cyclic_p": self.has_Gp_cyclic_p,
            "has_Gp_equal_gamma2": self.has_Gp_equal_gamma2,
        }

    def as_dict(self) -> dict:
        out = {key: getattr(self, key) for key in ("p", "n", "k", "d", "c", "delta", "gamma", "t")}
        out["flags"] = self.flags()
        return out


def _subset(a, b) -> bool:
    return bool(np.isin(a, b).all())


def group_profile(g: TableGroup) -> GroupProfile:
    p = g.p
    lcs = lower_central_series(g)
    c = len(lcs) - 1
    gamma2 = lcs[1] if c >= 1 else lcs[0]
    phi, gp = frattini_agemo(g)
    z = center(g)
    n = g.n
    k = log_p(p, len(gamma2))
    d = log_p(p, g.order // len(phi))
    t = log_p(p, len(gp))

    delta = rank_d(quotient(g, z)) if len(z) < g.order else 0
    if c >= 2:
        sec = Quotient(g, lcs[2], check=False)
        gamma = abelian_invariants(sec.group, np.unique(sec.proj[gamma2])).rank
    else:
        gamma = 0

    gp_in_g2 = _subset(gp, gamma2)
    return GroupProfile(
        p=p,
        n=n,
        k=k,
        d=d,
        c=c,
        delta=delta,
        gamma=gamma,
        t=t,
        is_abelian=c <= 1,
        is_special=(
            c == 2
            and len(z) == len(gamma2) == len(phi)
            and _subset(z, gamma2)
            and _subset(gamma2, phi)
        ),
        is_maximal_class=n >= 2 and c == n - 1,
        has_Gp_in_gamma2=gp_in_g2,
        has_Gp_cyclic_p=t == 1,
        has_Gp_equal_gamma2=len(gp) == len(gamma2) and gp_in_g2,
        z=log_p(p, len(z)),
    )
