"""Bounds on log_p |M(G)| as exact rationals, with applicability and verdicts.

Every function takes a GroupProfile. A bound that does not apply is still
returned, with ``applicable=False`` and the violated hypothesis as reason.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .structure import GroupProfile

UPPER = "upper"
LOWER = "lower"


@dataclass(frozen=True)
class BoundValue:
    name: str
    exponent: Fraction
    kind: str = UPPER
    applicable: bool = True
    reason: str = ""
    # False for bounds whose hypotheses put every instance beyond oracle reach
    verifiable: bool = True

    def holds(self, m: int) -> bool:
        if self.kind == UPPER:
            return m <= self.exponent
        return self.exponent <= m


def _bv(name, exponent, kind=UPPER, fail: str | None = None, verifiable=True, ok_reason="") -> BoundValue:
    return BoundValue(
        name, Fraction(exponent), kind, fail is None, fail if fail is not None else ok_reason, verifiable
    )


def _tri(m: int) -> Fraction:
    return Fraction(m * (m - 1), 2)


def _nonabelian(pr: GroupProfile) -> str | None:
    return "G is abelian" if pr.c < 2 else None


def _ew_base(pr: GroupProfile) -> Fraction:
    return Fraction((pr.d - 1) * (pr.n + pr.k), 2)


def _tail(d: int, top: int) -> int:
    """sum_{i=2}^{top} (d - i)."""
    return sum(d - i for i in range(2, top + 1))


def classical_bounds(pr: GroupProfile) -> list[BoundValue]:
    n, k, d, p = pr.n, pr.k, pr.d, pr.p
    out = [
        _bv("green", _tri(n)),
        _bv("gaschutz", n - 1, fail=None if d == 2 else f"d = {d}, needs d = 2"),
        _bv(
            "niroomand",
            Fraction((n - k - 1) * (n + k - 2), 2) + 1,
            fail=_nonabelian(pr),
        ),
        _bv("ellis_wiegold_d", _ew_base(pr) - (d - 2), fail=_nonabelian(pr)),
    ]
    moravec = Fraction(p + 1, 2) * ceil(Fraction(n - 1, p - 1))
    if not pr.is_maximal_class:
        why = "not of maximal class"
    elif n <= p + 1:
        why = f"n = {n} <= p + 1"
    else:
        why = None
    out.append(_bv("moravec", moravec, fail=why))
    return out


def class_bound(pr: GroupProfile) -> BoundValue:
    """Refinement of the d-bound by sum_{i=2}^{min(d,c)} (d - i)."""
    return _bv("nilpotency_class", _ew_base(pr) - _tail(pr.d, pr.mu), fail=_nonabelian(pr))


def class_bound_closed(pr: GroupProfile) -> Fraction:
    """Same exponent through mu = min(d, c) in closed form."""
    mu = pr.mu
    return _ew_base(pr) - Fraction((mu - 1) * (2 * pr.d - (mu + 2)), 2)


def commutator_rank_bound(pr: GroupProfile) -> BoundValue:
    """Refinement by sum_{i=2}^{min(d, gamma+1)} (d - i), gamma = d(gamma_2/gamma_3)."""
    return _bv("commutator_rank", _ew_base(pr) - _tail(pr.d, pr.nu), fail=_nonabelian(pr))


def commutator_rank_closed(pr: GroupProfile) -> Fraction:
    nu = pr.nu
    return _ew_base(pr) - Fraction((nu - 1) * (2 * pr.d - (nu + 2)), 2)


def class_two_bounds(pr: GroupProfile) -> list[BoundValue]:
    """Class-2 groups with G^p <= gamma_2(G): general range and refinements."""
    p, d, k = pr.p, pr.d, pr.k
    if pr.c != 2:
        base = f"class {pr.c} != 2"
    elif not pr.has_Gp_in_gamma2:
        base = "G^p not contained in gamma_2(G)"
    else:
        base = None

    upper = (d - 1) * (k + 1) if d <= k + 1 else _tri(d) + Fraction(k * (k + 1), 2)
    out = [
        _bv("class2_lower", _tri(d) - k, LOWER, fail=base),
        _bv("class2_upper", upper, fail=base),
    ]

    # G^p cyclic of order p
    why = base if base else (None if pr.has_Gp_cyclic_p else f"|G^p| = p^{pr.t}, needs p^1")
    if p == 2:
        # the argument for p = 2 reduces to D8 / Q8, where |M| <= 2
        out.append(_bv("class2_agemo_cyclic", 1, fail=why, ok_reason="p = 2: D8/Q8 dichotomy"))
    else:
        val = (d - 1) * k - 1 if d <= k else _tri(d) + _tri(k) - 1
        out.append(_bv("class2_agemo_cyclic", val, fail=why))

    # G^p = gamma_2, p odd
    if base:
        why = base
    elif p == 2:
        why = "needs p odd"
    elif not pr.has_Gp_equal_gamma2:
        why = "G^p != gamma_2(G)"
    else:
        why = None
    out.append(_bv("class2_agemo_derived", _tri(d) + Fraction(k * (k - 3), 2), fail=why))

    # special groups with centre of order p^2 or p^3
    for zk, lo, hi in ((2, 2, 3), (3, 3, 6)):
        if not pr.is_special:
            why = "not special"
        elif pr.k != zk:
            why = f"|Z(G)| = p^{pr.k}, needs p^{zk}"
        else:
            why = None
        out.append(_bv(f"special_center_p{zk}_lower", _tri(d) - lo, LOWER, fail=why))
        out.append(_bv(f"special_center_p{zk}_upper", _tri(d) + hi, fail=why))
    return out


def large_special_bounds(pr: GroupProfile) -> list[BoundValue]:
    """Special groups, p odd, |Z| = p^3, |G| >= p^13. Never oracle-checkable."""
    if pr.p == 2:
        why = "needs p odd"
    elif not pr.is_special:
        why = "not special"
    elif pr.k != 3:
        why = f"|Z(G)| = p^{pr.k}, needs p^3"
    elif pr.n < 13:
        why = f"n = {pr.n} < 13"
    else:
        why = None
    why2 = why or (None if pr.has_Gp_equal_gamma2 else "G^p != gamma_2(G)")
    return [
        _bv("large_special", _tri(pr.d) + 2, fail=why, verifiable=False),
        _bv("large_special_agemo_derived", _tri(pr.d) - 2, fail=why2, verifiable=False),
    ]


def maximal_class_bound(pr: GroupProfile) -> BoundValue:
    if pr.p == 2:
        why = "needs p odd"
    elif not pr.is_maximal_class:
        why = "not of maximal class"
    elif pr.n < 4:
        why = f"n = {pr.n} < 4"
    else:
        why = None
    return _bv("maximal_class", Fraction(pr.n, 2), fail=why)


def all_bounds(pr: GroupProfile) -> list[BoundValue]:
    return [
        *classical_bounds(pr),
        class_bound(pr),
        commutator_rank_bound(pr),
        *class_two_bounds(pr),
        *large_special_bounds(pr),
        maximal_class_bound(pr),
    ]


# -- verdicts ----------------------------------------------------------------------

PASS = "pass"
FAIL = "fail"
VACUOUS = "vacuous"
SKIPPED = "skipped"


@dataclass
class BoundReport:
    id: str
    profile: GroupProfile
    multiplier_log: int | None
    bounds: list[BoundValue]
    verdicts: dict[str, str] = field(default_factory=dict)
    dominance: dict[str, str] = field(default_factory=dict)

    @property
    def violations(self) -> list[str]:
        return [n for n, v in {**self.verdicts, **self.dominance}.items() if v == FAIL]


def bound_verdict(b: BoundValue, m: int | None) -> str:
    if not b.applicable:
        return VACUOUS
    if m is None or not b.verifiable:
        return SKIPPED
    return PASS if b.holds(m) else FAIL


def dominance_verdicts(pr: GroupProfile, bounds: list[BoundValue] | None = None) -> dict[str, str]:
    """Pure arithmetic comparisons between bound formulas."""
    if bounds is None:
        bounds = all_bounds(pr)
    by = {b.name: b for b in bounds}
    out: dict[str, str] = {}
    if pr.c < 2:
        for key in (
            "class_le_d_bound",
            "rank_le_d_bound",
            "d_bound_le_niroomand",
            "class_eq_d_bound",
            "closed_forms_agree",
        ):
            out[key] = VACUOUS
    else:
        ew = by["ellis_wiegold_d"].exponent
        cls = by["nilpotency_class"].exponent
        rk = by["commutator_rank"].exponent
        ok = lambda cond: PASS if cond else FAIL  # noqa: E731
        out["class_le_d_bound"] = ok(cls <= ew)
        out["rank_le_d_bound"] = ok(rk <= ew)
        if pr.d <= pr.n - pr.k:
            out["d_bound_le_niroomand"] = ok(ew <= by["niroomand"].exponent)
        else:
            out["d_bound_le_niroomand"] = VACUOUS
        # the refinement vanishes exactly when sum_{i=3}^{mu} (d - i) = 0
        out["class_eq_d_bound"] = ok((cls == ew) == (_tail(pr.d, pr.mu) == pr.d - 2))
        out["closed_forms_agree"] = ok(
            cls == class_bound_closed(pr) and rk == commutator_rank_closed(pr)
        )
    # with gamma = k and n = d + k, the class-2 upper bound is the rank bound
    up = by["class2_upper"]
    if up.applicable:
        alt = GroupProfile(**{**pr.__dict__, "gamma": pr.k, "n": pr.d + pr.k})
        out["class2_upper_is_rank_bound"] = PASS if commutator_rank_bound(alt).exponent == up.exponent else FAIL
    else:
        out["class2_upper_is_rank_bound"] = VACUOUS
    return out


def check_report(group_id: str, pr: GroupProfile, bounds=None, multiplier_log: int | None = None) -> BoundReport:
    if bounds is None:
        bounds = all_bounds(pr)
    rep = BoundReport(group_id, pr, multiplier_log, list(bounds))
    rep.verdicts = {b.name: bound_verdict(b, multiplier_log) for b in bounds}
    rep.dominance = dominance_verdicts(pr, bounds)
    return rep
