"""Builtin families of p-groups given by pc presentations.

Entries are addressed by expressions such as ``dihedral(8)``,
``abelian([9, 3])`` or ``direct_product(heisenberg(3), abelian([3]))``.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from typing import Callable

from sympy import isprime

from .groups import TableGroup, direct_product_table
from .linalg import AbelianType
from .pc import PcPresentation, materialize_table


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class Builtin:
    """A builtin group: a presentation, or a direct product of two builtins."""

    id: str
    presentation: PcPresentation | None = None
    factors: tuple["Builtin", ...] = ()

    @property
    def prime(self) -> int:
        if self.presentation is not None:
            return self.presentation.prime
        return self.factors[0].prime

    @property
    def order(self) -> int:
        if self.presentation is not None:
            return self.presentation.order
        out = 1
        for f in self.factors:
            out *= f.order
        return out

    def table(self, cap: int = 2048) -> TableGroup:
        if self.presentation is not None:
            return materialize_table(self.presentation, cap=cap)
        if self.order > cap:
            raise FamilyError(f"{self.id}: order {self.order} exceeds table cap {cap}")
        out = self.factors[0].table(cap)
        for f in self.factors[1:]:
            out = direct_product_table(out, f.table(cap))
        return out


def _word(n: int, entries: dict[int, int]) -> tuple[int, ...]:
    w = [0] * n
    for k, e in entries.items():
        w[k] = e
    return tuple(w)


def _digits(value: int, p: int, n: int, offset: int) -> dict[int, int]:
    """Base-p digits of value placed at generator positions offset, offset+1, ..."""
    out = {}
    pos = offset
    while value and pos < n:
        value, r = divmod(value, p)
        if r:
            out[pos] = r
        pos += 1
    if value:
        raise FamilyError("digit expansion overflow")
    return out


def _require_prime(p):
    if not isinstance(p, int) or not isprime(p):
        raise FamilyError(f"{p!r} is not a prime")


def _log(order: int, p: int, what: str) -> int:
    k = 0
    m = order
    while m > 1 and m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise FamilyError(f"{what}: {order} is not a power of {p}")
    return k


# -- families ----------------------------------------------------------------------


def abelian(orders) -> Builtin:
    try:
        t = AbelianType.from_orders(list(orders))
    except ValueError as exc:
        raise FamilyError(str(exc)) from None
    return _abelian_from_type(t, f"abelian({t.orders})")


def _abelian_from_type(t: AbelianType, ident: str) -> Builtin:
    p = t.p
    n = t.log_order
    powers = {}
    pos = 0
    for a in t.exps:
        for s in range(a - 1):
            powers[pos + s] = _word(n, {pos + s + 1: 1})
        pos += a
    return Builtin(ident, PcPresentation(p, n, powers, {}))


def elementary(p: int, d: int) -> Builtin:
    _require_prime(p)
    if d < 1:
        raise FamilyError("elementary: need d >= 1")
    return Builtin(f"elementary({p}, {d})", PcPresentation(p, d))


def heisenberg(p: int) -> Builtin:
    """Upper unitriangular 3x3 matrices over F_p."""
    _require_prime(p)
    return Builtin(f"heisenberg({p})", PcPresentation(p, 3, {}, {(1, 0): (0, 0, 1)}))


def extraspecial(p: int, m: int, variant: str | None = None) -> Builtin:
    """Extraspecial group of order p^(1+2m).

    Variants: p odd -> "p" (exponent p) or "p2" (exponent p^2);
    p = 2 -> "plus" (central product of D8s) or "minus" (one Q8 factor).
    """
    _require_prime(p)
    if m < 1:
        raise FamilyError("extraspecial: need m >= 1")
    allowed = ("plus", "minus") if p == 2 else ("p", "p2")
    if variant is None:
        variant = allowed[0]
    if variant not in allowed:
        raise FamilyError(f"extraspecial: variant must be one of {allowed} for p = {p}")
    n = 2 * m + 1
    zc = 2 * m
    comms = {(2 * i + 1, 2 * i): _word(n, {zc: 1}) for i in range(m)}
    powers = {}
    if variant in ("p2", "minus"):
        powers[0] = _word(n, {zc: 1})
    if variant == "minus":
        powers[1] = _word(n, {zc: 1})
    return Builtin(f"extraspecial({p}, {m}, {variant!r})", PcPresentation(p, n, powers, comms))


def _metacyclic(p: int, n: int, u: int, s_power: int, ident: str) -> Builtin:
    """<s, r | r^(p^(n-1)) = 1, s^p = r^s_power, s^-1 r s = r^u>.

    pc generators: g1 = s, g_k = r^(p^(k-2)) for k = 2..n.
    """
    N = p ** (n - 1)
    powers = {}
    comms = {}
    if s_power % N:
        powers[0] = _word(n, _digits(s_power % N, p, n, 1))
    for k in range(1, n - 1):
        powers[k] = _word(n, {k + 1: 1})
    for k in range(1, n):
        a = p ** (k - 1)
        value = (a * (u - 1)) % N
        if value:
            comms[k, 0] = _word(n, _digits(value, p, n, 1))
    return Builtin(ident, PcPresentation(p, n, powers, comms))


def dihedral(order: int) -> Builtin:
    n = _log(order, 2, "dihedral")
    if n < 3:
        raise FamilyError("dihedral: order must be >= 8")
    return _metacyclic(2, n, -1, 0, f"dihedral({order})")


def quaternion(order: int) -> Builtin:
    n = _log(order, 2, "quaternion")
    if n < 3:
        raise FamilyError("quaternion: order must be >= 8")
    return _metacyclic(2, n, -1, 2 ** (n - 2), f"quaternion({order})")


def semidihedral(order: int) -> Builtin:
    n = _log(order, 2, "semidihedral")
    if n < 4:
        raise FamilyError("semidihedral: order must be >= 16")
    return _metacyclic(2, n, 2 ** (n - 2) - 1, 0, f"semidihedral({order})")


def modular(p: int, n: int) -> Builtin:
    """<a, b | a^(p^(n-1)), b^p, b^-1 a b = a^(1 + p^(n-2))>."""
    _require_prime(p)
    if n < (4 if p == 2 else 3):
        raise FamilyError("modular: need n >= 3 (n >= 4 for p = 2)")
    return _metacyclic(p, n, 1 + p ** (n - 2), 0, f"modular({p}, {n})")


def free_class2_exp_p(p: int, rank: int) -> Builtin:
    """Free nilpotent class-2 exponent-p group, order p^(r + r(r-1)/2)."""
    _require_prime(p)
    if p == 2:
        raise FamilyError("free_class2_exp_p: exponent-2 groups are abelian, need p odd")
    if rank < 2:
        raise FamilyError("free_class2_exp_p: need rank >= 2")
    n = rank + rank * (rank - 1) // 2
    comms = {}
    pos = rank
    for i in range(rank):
        for j in range(i + 1, rank):
            comms[j, i] = _word(n, {pos: 1})
            pos += 1
    return Builtin(f"free_class2_exp_p({p}, {rank})", PcPresentation(p, n, {}, comms))


def wreath_pp(p: int) -> Builtin:
    """C_p wr C_p, order p^(p+1), maximal class.

    Base generators are (x-1)^k v in F_p[x]/(x-1)^p, so [b_k, s] = b_{k+1}.
    """
    _require_prime(p)
    n = p + 1
    comms = {(k, 0): _word(n, {k + 1: 1}) for k in range(1, p)}
    return Builtin(f"wreath_pp({p})", PcPresentation(p, n, {}, comms))


def direct_product(*factors: Builtin) -> Builtin:
    if len(factors) < 2:
        raise FamilyError("direct_product needs at least two factors")
    primes = {f.prime for f in factors}
    if len(primes) != 1:
        raise FamilyError("direct_product factors must share the prime")
    ident = "direct_product(" + ", ".join(f.id for f in factors) + ")"
    return Builtin(ident, None, tuple(factors))


FAMILIES: dict[str, Callable[..., Builtin]] = {
    "abelian": abelian,
    "elementary": elementary,
    "heisenberg": heisenberg,
    "extraspecial": extraspecial,
    "dihedral": dihedral,
    "quaternion": quaternion,
    "semidihedral": semidihedral,
    "modular": modular,
    "free_class2_exp_p": free_class2_exp_p,
    "wreath_pp": wreath_pp,
    "direct_product": direct_product,
}


def builtin_family(name: str, *params) -> Builtin:
    try:
        fn = FAMILIES[name]
    except KeyError:
        raise FamilyError(f"unknown family {name!r}") from None
    try:
        return fn(*params)
    except TypeError as exc:
        raise FamilyError(f"{name}: bad parameters {params!r} ({exc})") from None


def parse_entry(expr: str) -> Builtin:
    """Evaluate a family expression like ``extraspecial(3, 1, 'p2')``."""
    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as exc:
        raise FamilyError(f"cannot parse {expr!r}: {exc.msg}") from None
    return _eval(tree.body)


def _eval(node):
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.keywords:
            raise FamilyError("only plain family calls are allowed")
        return builtin_family(node.func.id, *(_eval(a) for a in node.args))
    if isinstance(node, (ast.Constant, ast.List, ast.Tuple, ast.UnaryOp)):
        try:
            return ast.literal_eval(node)
        except ValueError:
            pass
    raise FamilyError(f"unsupported expression {ast.dump(node)}")


def default_corpus(primes=(2, 3, 5), max_order: int = 128) -> list[Builtin]:
    """Every builtin family member with the given primes and order <= max_order."""
    out: dict[str, Builtin] = {}

    def add(b: Builtin):
        if b.prime in primes and b.order <= max_order and b.id not in out:
            out[b.id] = b

    for p in primes:
        n_max = _log_floor(max_order, p)
        for n in range(1, n_max + 1):
            for part in _partitions(n):
                add(abelian([p**a for a in part]))
        if p > 2:
            add(heisenberg(p))
            if p**6 <= max_order:
                add(free_class2_exp_p(p, 3))
        for m in range(1, n_max):
            if p ** (2 * m + 1) > max_order:
                break
            for v in (("plus", "minus") if p == 2 else ("p", "p2")):
                add(extraspecial(p, m, v))
        for n in range(3, n_max + 1):
            if p == 2:
                add(dihedral(2**n))
                add(quaternion(2**n))
                if n >= 4:
                    add(semidihedral(2**n))
                    add(modular(2, n))
            else:
                add(modular(p, n))
        if p ** (p + 1) <= max_order:
            add(wreath_pp(p))

    products = [
        ("dihedral(8)", "abelian([2])"),
        ("quaternion(8)", "abelian([2])"),
        ("dihedral(8)", "abelian([4])"),
        ("quaternion(8)", "abelian([4])"),
        ("dihedral(8)", "abelian([2, 2])"),
        ("dihedral(8)", "dihedral(8)"),
        ("dihedral(8)", "quaternion(8)"),
        ("quaternion(8)", "quaternion(8)"),
        ("dihedral(16)", "abelian([2])"),
        ("quaternion(16)", "abelian([2])"),
        ("extraspecial(2, 2, 'plus')", "abelian([2])"),
        ("extraspecial(2, 2, 'minus')", "abelian([4])"),
        ("heisenberg(3)", "abelian([3])"),
        ("extraspecial(3, 1, 'p2')", "abelian([3])"),
    ]
    for a, b in products:
        fa, fb = parse_entry(a), parse_entry(b)
        if fa.prime in primes and fa.order * fb.order <= max_order:
            add(direct_product(fa, fb))
    return [out[k] for k in sorted(out)]


def _log_floor(m: int, p: int) -> int:
    k = 0
    while p ** (k + 1) <= m:
        k += 1
    return k


def _partitions(n: int, largest: int | None = None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest
