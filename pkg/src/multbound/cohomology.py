"""Brute-force Schur multipliers from second cohomology with Z/p^j coefficients.

Two cochain models are provided, both working directly on the Cayley table:

``h2_size_bar``
    Normalized bar cochains f: G x G -> Z/p^j.  Exact but the constraint
    matrix has (|G|-1)^3 rows, so it is only practical for small groups.

``h2_size``
    Cochains on the edges of the Cayley graph for a pc generating sequence
    S read off the table.  A function f(x, s) defines an action of the free
    group F(S) on G x A; it gives a central extension exactly when every
    relator r acts by a constant translation c_r(x) = c_r(1).  Counting with
    the five-term sequence for 1 -> R -> F -> G -> 1,

        |H^2(G, A)| = |Z_tree| * |Hom(G, A)| / |A|^|S|,

    where Z_tree are the admissible f vanishing on a spanning tree.

The multiplier type is then read off from the level sweep
q_j = |H^2(G, Z/p^j)| / |Ext(G^ab, Z/p^j)| = p^(sum_i min(m_i, j)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groups import GroupError, TableGroup
from .linalg import (
    AbelianType,
    hom_ext_type,
    smith_valuations_mod,
    span_order_from_valuations,
)
from .structure import abelian_invariants, commutator_subgroup, log_p, lower_central_series, quotient

DEFAULT_ORACLE_CAP = 128
LARGE_ORACLE_CAP = 243
BAR_CAP = 32


class OracleCapError(GroupError):
    pass


class OracleConsistencyError(RuntimeError):
    """The level sweep produced an impossible sequence."""


# -- pc generating sequences from a table -----------------------------------------


def pc_sequence(g: TableGroup) -> list[int]:
    """Elements g1..gn with each <g_i, ..., g_n> normal of index p in the previous.

    The series refines the lower central series, so [g_j, g_i] (j > i) and
    g_i^p lie in <g_{i+1}, ..., g_n>.
    """
    lcs = lower_central_series(g)
    pcgs: list[int] = []
    for upper, lower in zip(lcs, lcs[1:]):
        member = np.zeros(g.order, dtype=bool)
        member[lower] = True
        layer: list[int] = []
        current = lower
        while len(current) < len(upper):
            cand = upper[~member[upper]]
            powers = g.power(cand, g.p)
            x = int(cand[np.flatnonzero(member[powers])[0]])
            layer.append(x)
            current = g.generate(np.concatenate([current, [x]]))
            member[:] = False
            member[current] = True
        pcgs.extend(reversed(layer))
    return pcgs


def exponent_table(g: TableGroup, pcgs: list[int]) -> np.ndarray:
    """exps[x] = exponent vector of x as g1^e1 ... gn^en."""
    n = len(pcgs)
    elems = np.array([g.identity])
    exps = np.zeros((1, n), dtype=np.int64)
    for pos in range(n - 1, -1, -1):
        x = pcgs[pos]
        powers = [g.identity]
        for _ in range(g.p - 1):
            powers.append(int(g.table[powers[-1], x]))
        new_elems = np.concatenate([g.table[pw, elems] for pw in powers])
        new_exps = np.concatenate([exps] * g.p)
        new_exps[:, pos] = np.repeat(np.arange(g.p), len(elems))
        elems, exps = new_elems, new_exps
    if len(np.unique(elems)) != g.order:
        raise GroupError("pc sequence does not give unique normal forms")
    out = np.empty((g.order, n), dtype=np.int64)
    out[elems] = exps
    return out


def relator_words(g: TableGroup, pcgs: list[int], exps: np.ndarray | None = None):
    """pc relators as lists of (generator position, +1/-1)."""
    if exps is None:
        exps = exponent_table(g, pcgs)
    n = len(pcgs)

    def inverse_letters(elem):
        letters = []
        for pos, e in enumerate(exps[elem]):
            letters.extend([(pos, -1)] * int(e))
        return letters[::-1]

    words = []
    for i, gi in enumerate(pcgs):
        rhs = g.power(gi, g.p)
        words.append([(i, 1)] * g.p + inverse_letters(rhs))
    for i in range(n):
        for j in range(i + 1, n):
            rhs = g.commutator(pcgs[j], pcgs[i])
            words.append([(j, -1), (i, -1), (j, 1), (i, 1)] + inverse_letters(rhs))
    return words


def presentation_from_table(g: TableGroup):
    """A pc presentation of g (same prime, n = log_p |g|)."""
    from .pc import PcPresentation

    pcgs = pc_sequence(g)
    exps = exponent_table(g, pcgs)
    n = len(pcgs)
    powers = {}
    comms = {}
    for i, gi in enumerate(pcgs):
        w = tuple(int(x) for x in exps[g.power(gi, g.p)])
        if any(w):
            powers[i] = w
        for j in range(i + 1, n):
            w = tuple(int(x) for x in exps[g.commutator(pcgs[j], gi)])
            if any(w):
                comms[j, i] = w
    return PcPresentation(g.p, n, powers, comms)


# -- cochain models ---------------------------------------------------------------


def _check_cap(g: TableGroup, cap: int):
    if g.order > cap:
        raise OracleCapError(f"group order {g.order} exceeds oracle cap {cap}")


def cayley_constraint_matrix(g: TableGroup):
    """Constraint rows on edge cochains with the spanning-tree edges removed.

    Returns (matrix, number of generators).
    """
    pcgs = pc_sequence(g)
    n = len(pcgs)
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64), 0
    exps = exponent_table(g, pcgs)
    words = relator_words(g, pcgs, exps)
    N = g.order
    gens = np.asarray(pcgs)
    inv_gens = g.inverse[gens]
    starts = np.arange(N)
    blocks = []
    for word in words:
        paths = np.zeros((N, N * n), dtype=np.int64)
        cur = starts.copy()
        for k, sign in word:
            if sign > 0:
                paths[starts, cur * n + k] += 1
                cur = g.table[cur, gens[k]]
            else:
                cur = g.table[cur, inv_gens[k]]
                paths[starts, cur * n + k] -= 1
        others = starts[starts != g.identity]
        blocks.append(paths[others] - paths[g.identity])
    matrix = np.vstack(blocks)

    # spanning tree: x reached from x * g_m^-1 where m is x's last nonzero exponent
    tree = []
    for x in range(N):
        nz = np.flatnonzero(exps[x])
        if nz.size:
            m = int(nz[-1])
            prev = int(g.table[x, inv_gens[m]])
            tree.append(prev * n + m)
    keep = np.setdiff1d(np.arange(N * n), np.asarray(tree, dtype=np.int64))
    return matrix[:, keep], n


def _hom_order(ab: AbelianType, j: int) -> int:
    return hom_ext_type(ab, j)[0].order


@dataclass
class _CayleyData:
    p: int
    cols: int
    ngens: int
    vals: list[int]
    top: int
    ab: AbelianType

    def h2(self, j: int) -> int:
        if j > self.top:
            raise ValueError(f"level {j} above computed level {self.top}")
        span = span_order_from_valuations(self.vals, self.p, j)
        z_tree = self.p ** (j * self.cols) // span
        return z_tree * _hom_order(self.ab, j) // self.p ** (j * self.ngens)


def _cayley_data(g: TableGroup, top: int) -> _CayleyData:
    matrix, n = cayley_constraint_matrix(g)
    ab = abelianization_type(g)
    vals = smith_valuations_mod(matrix, g.p, top) if matrix.size else []
    return _CayleyData(g.p, matrix.shape[1], n, vals, top, ab)


def abelianization_type(g: TableGroup) -> AbelianType:
    derived = commutator_subgroup(g, np.arange(g.order))
    return abelian_invariants(quotient(g, derived))


def h2_size(g: TableGroup, j: int, cap: int = DEFAULT_ORACLE_CAP) -> int:
    """|H^2(G, Z/p^j)| with trivial action."""
    _check_cap(g, cap)
    if j < 1:
        raise ValueError("level must be >= 1")
    return _cayley_data(g, j).h2(j)


def h2_size_bar(g: TableGroup, j: int, cap: int = BAR_CAP) -> int:
    """|H^2(G, Z/p^j)| from normalized bar cochains (small groups only)."""
    _check_cap(g, cap)
    p, N = g.p, g.order
    nonid = np.array([x for x in range(N) if x != g.identity], dtype=np.int64)
    M = len(nonid)
    if M == 0:
        return 1
    pos = np.full(N, -1, dtype=np.int64)
    pos[nonid] = np.arange(M)

    def var(a, b):
        ia, ib = pos[a], pos[b]
        return np.where((ia >= 0) & (ib >= 0), ia * M + ib, -1)

    x, y, z = (arr.ravel() for arr in np.meshgrid(nonid, nonid, nonid, indexing="ij"))
    xy = g.table[x, y]
    yz = g.table[y, z]
    rows = np.arange(len(x))
    delta2 = np.zeros((len(x), M * M + 1), dtype=np.int64)
    # f(y,z) - f(xy,z) + f(x,yz) - f(x,y); index -1 collects vanishing terms
    for cols, sign in ((var(y, z), 1), (var(xy, z), -1), (var(x, yz), 1), (var(x, y), -1)):
        np.add.at(delta2, (rows, np.where(cols >= 0, cols, M * M)), sign)
    delta2 = delta2[:, : M * M]

    a, b = (arr.ravel() for arr in np.meshgrid(nonid, nonid, indexing="ij"))
    ab = g.table[a, b]
    delta1 = np.zeros((M, M * M), dtype=np.int64)
    cols = pos[a] * M + pos[b]
    # (d phi)(a, b) = phi(b) - phi(ab) + phi(a)
    np.add.at(delta1, (pos[b], cols), 1)
    keep = ab != g.identity
    np.add.at(delta1, (pos[ab[keep]], cols[keep]), -1)
    np.add.at(delta1, (pos[a], cols), 1)

    im2 = span_order_from_valuations(smith_valuations_mod(delta2, p, j), p, j)
    im1 = span_order_from_valuations(smith_valuations_mod(delta1, p, j), p, j)
    return p ** (j * M * M) // (im2 * im1)


# -- multiplier ---------------------------------------------------------------------


@dataclass
class MultiplierResult:
    type: AbelianType
    h: list[int] = field(default_factory=list)
    group_id: str | None = None

    @property
    def order(self) -> int:
        return self.type.order

    @property
    def log_order(self) -> int:
        return self.type.log_order


def coefficient_level(g: TableGroup) -> int:
    """Smallest e with p^e >= |G| (at least 1)."""
    return max(1, log_p(g.p, g.order))


def types_from_levels(p: int, q_logs: list[int]) -> AbelianType:
    """Invert q_j = p^(sum_i min(m_i, j)) given log_p q_1, ..., log_p q_top.

    The sequence must have stabilized at the last level.
    """
    seq = [0] + list(q_logs)
    counts = [seq[j] - seq[j - 1] for j in range(1, len(seq))]
    if any(c < 0 for c in counts):
        raise OracleConsistencyError(f"non-monotone level sequence {q_logs}")
    if any(counts[i] < counts[i + 1] for i in range(len(counts) - 1)):
        raise OracleConsistencyError(f"level increments not nonincreasing: {q_logs}")
    if counts and counts[-1] != 0:
        raise OracleConsistencyError(f"level sequence has not stabilized: {q_logs}")
    exps: list[int] = []
    for j in range(1, len(counts)):
        exps.extend([j] * (counts[j - 1] - counts[j]))
    return AbelianType(p, tuple(exps))


def multiplier_type(
    g: TableGroup, cap: int = DEFAULT_ORACLE_CAP, group_id: str | None = None
) -> MultiplierResult:
    _check_cap(g, cap)
    p = g.p
    e = coefficient_level(g)
    # one level past e, to confirm the sweep has stabilized
    data = _cayley_data(g, e + 1)
    h = [data.h2(j) for j in range(1, e + 2)]
    q_logs = []
    for j, hj in enumerate(h, start=1):
        ext = hom_ext_type(data.ab, j)[1].order
        if hj % ext:
            raise OracleConsistencyError(f"|Ext| does not divide h_{j}")
        q_logs.append(log_p(p, hj // ext))
    mtype = types_from_levels(p, q_logs)
    return MultiplierResult(mtype, h[:e], group_id)
