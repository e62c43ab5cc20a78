"""Power-commutator presentations of finite p-groups.

A presentation has generators g1..gn, every relative order equal to p, power
relations ``gi^p = w`` and commutator relations ``[gj, gi] = w`` (j > i), where
each right-hand side ``w`` is a normal word in strictly higher generators.
Elements are exponent tuples ``(e1, ..., en)`` meaning ``g1^e1 ... gn^en``.

File format (one statement per line, ``#`` comments, ``/`` also separates
statements)::

    p 3
    n 3
    comm 2 1 : g3 1
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from sympy import isprime

from .groups import TableGroup

Word = tuple[int, ...]

DEFAULT_TABLE_CAP = 2048


class PresentationError(ValueError):
    """Malformed presentation text or structurally invalid relations."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class PcPresentation:
    prime: int
    ngens: int
    # index i (0-based) -> exponent tuple of gi^p
    powers: dict[int, Word] = field(default_factory=dict)
    # (j, i) with j > i (0-based) -> exponent tuple of [gj, gi]
    commutators: dict[tuple[int, int], Word] = field(default_factory=dict)

    def __post_init__(self):
        p, n = self.prime, self.ngens
        if not isprime(p):
            raise PresentationError(f"p = {p} is not prime")
        if n < 0:
            raise PresentationError("negative generator count")
        for i, w in self.powers.items():
            if not 0 <= i < n:
                raise PresentationError(f"power relation for unknown generator g{i + 1}")
            _check_word(w, p, n, above=i, what=f"pow {i + 1}")
        for (j, i), w in self.commutators.items():
            if not (0 <= i < j < n):
                raise PresentationError(f"comm {j + 1} {i + 1}: need n >= j > i >= 1")
            _check_word(w, p, n, above=j, what=f"comm {j + 1} {i + 1}")

    @property
    def order(self) -> int:
        return self.prime**self.ngens

    def identity(self) -> Word:
        return (0,) * self.ngens

    def generator(self, i: int) -> Word:
        e = [0] * self.ngens
        e[i] = 1
        return tuple(e)

    def power_word(self, i: int) -> Word:
        return self.powers.get(i, self.identity())

    def comm_word(self, j: int, i: int) -> Word:
        return self.commutators.get((j, i), self.identity())

    # -- arithmetic -------------------------------------------------------

    def collect(self, letters: Iterable[int | tuple[int, int]]) -> Word:
        """Normal form of a word.

        ``letters`` holds generator indices (0-based) or ``(index, sign)``
        pairs with sign +1/-1.
        """
        e = [0] * self.ngens
        for letter in letters:
            if isinstance(letter, tuple):
                k, sign = letter
            else:
                k, sign = letter, 1
            if not 0 <= k < self.ngens or sign not in (1, -1):
                raise PresentationError(f"bad letter {letter!r}")
            if sign == 1:
                self._mul_gen(e, k)
            else:
                inv = self.inverse(self.generator(k))
                for j, x in enumerate(inv):
                    for _ in range(x):
                        self._mul_gen(e, j)
        return tuple(e)

    def _mul_gen(self, e: list[int], k: int) -> None:
        """In place: e <- e * gk, collecting from the left."""
        p = self.prime
        tail = [(j, e[j]) for j in range(k + 1, self.ngens) if e[j]]
        for j, _ in tail:
            e[j] = 0
        pending: list[int] = []
        e[k] += 1
        if e[k] == p:
            e[k] = 0
            pending.extend(_letters(self.power_word(k)))
        # u gk = gk u^gk, and gj^gk = gj [gj, gk]
        for j, x in tail:
            conj = [j] + _letters(self.comm_word(j, k))
            pending.extend(conj * x)
        for letter in pending:
            self._mul_gen(e, letter)

    def multiply(self, a: Sequence[int], b: Sequence[int]) -> Word:
        e = list(a)
        for j, x in enumerate(b):
            for _ in range(x):
                self._mul_gen(e, j)
        return tuple(e)

    def inverse(self, a: Sequence[int]) -> Word:
        # Right-multiply by gi^m, i ascending, until a*x is the identity;
        # multiplying by gi only disturbs positions >= i.
        r = list(a)
        x = [0] * self.ngens
        for i in range(self.ngens):
            m = (-r[i]) % self.prime
            x[i] = m
            for _ in range(m):
                self._mul_gen(r, i)
        return tuple(x)

    def power(self, a: Sequence[int], m: int) -> Word:
        if m < 0:
            a, m = self.inverse(a), -m
        result = self.identity()
        base = tuple(a)
        while m:
            if m & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            m >>= 1
        return result

    def commutator(self, a: Sequence[int], b: Sequence[int]) -> Word:
        """[a, b] = a^-1 b^-1 a b."""
        left = self.multiply(self.inverse(a), self.inverse(b))
        return self.multiply(left, self.multiply(a, b))

    # -- validation -------------------------------------------------------

    def consistency_check(self) -> tuple[bool, tuple | None]:
        """Run the overlap tests; return (ok, first failing test or None)."""
        p, n = self.prime, self.ngens
        g = [self.generator(i) for i in range(n)]
        gp = [self.power_word(i) for i in range(n)]

        def mul(*ws):
            out = self.identity()
            for w in ws:
                out = self.multiply(out, w)
            return out

        for k in range(n):
            for j in range(k):
                for i in range(j):
                    lhs = self.multiply(self.multiply(g[k], g[j]), g[i])
                    rhs = self.multiply(g[k], self.multiply(g[j], g[i]))
                    if lhs != rhs:
                        return False, ("assoc", k + 1, j + 1, i + 1)
        for j in range(n):
            for i in range(j):
                # (gj^p) gi = gj^(p-1) (gj gi)
                lhs = self.multiply(gp[j], g[i])
                rhs = self.multiply(self.power(g[j], p - 1), self.multiply(g[j], g[i]))
                if lhs != rhs:
                    return False, ("pow-left", j + 1, i + 1)
                # gj (gi^p) = (gj gi) gi^(p-1)
                lhs = self.multiply(g[j], gp[i])
                rhs = mul(self.multiply(g[j], g[i]), self.power(g[i], p - 1))
                if lhs != rhs:
                    return False, ("pow-right", j + 1, i + 1)
        for i in range(n):
            lhs = self.multiply(gp[i], g[i])
            rhs = self.multiply(g[i], gp[i])
            if lhs != rhs:
                return False, ("pow-pow", i + 1)
        return True, None

    def is_consistent(self) -> bool:
        return self.consistency_check()[0]

    def to_text(self) -> str:
        lines = [f"p {self.prime}", f"n {self.ngens}"]
        for i in sorted(self.powers):
            if any(self.powers[i]):
                lines.append(f"pow {i + 1} : {_fmt_word(self.powers[i])}".rstrip())
        for j, i in sorted(self.commutators):
            w = self.commutators[j, i]
            if any(w):
                lines.append(f"comm {j + 1} {i + 1} : {_fmt_word(w)}".rstrip())
        return "\n".join(lines) + "\n"


def _letters(word: Sequence[int]) -> list[int]:
    out = []
    for j, x in enumerate(word):
        out.extend([j] * x)
    return out


def _fmt_word(w: Sequence[int]) -> str:
    return " ".join(f"g{j + 1} {x}" for j, x in enumerate(w) if x)


def _check_word(w: Sequence[int], p: int, n: int, above: int, what: str):
    if len(w) != n:
        raise PresentationError(f"{what}: word has wrong length")
    for j, x in enumerate(w):
        if not 0 <= x < p:
            raise PresentationError(f"{what}: exponent {x} out of range [0, {p - 1}]")
        if x and j <= above:
            raise PresentationError(f"{what}: g{j + 1} is not a higher generator")


_TOKEN_GEN = re.compile(r"g(\d+)$")


def parse_presentation(text: str) -> PcPresentation:
    """Parse the line-oriented presentation format. Consistency is not checked."""
    statements: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for chunk in line.split("/"):
            tokens = chunk.split()
            if tokens:
                statements.append((lineno, tokens))

    if len(statements) < 2:
        raise PresentationError("expected 'p <prime>' and 'n <count>' headers")
    (l1, t1), (l2, t2) = statements[0], statements[1]
    p = _header(t1, "p", l1)
    n = _header(t2, "n", l2)
    if not isprime(p):
        raise PresentationError(f"p = {p} is not prime", l1)
    if n < 0:
        raise PresentationError("negative generator count", l2)

    powers: dict[int, Word] = {}
    comms: dict[tuple[int, int], Word] = {}
    for lineno, tokens in statements[2:]:
        try:
            colon = tokens.index(":")
        except ValueError:
            raise PresentationError("missing ':'", lineno) from None
        head, rhs = tokens[:colon], tokens[colon + 1 :]
        kind = head[0]
        idx = [_int(t, lineno) for t in head[1:]]
        if kind == "pow":
            if len(idx) != 1:
                raise PresentationError("pow takes one index", lineno)
            (i,) = idx
            if not 1 <= i <= n:
                raise PresentationError(f"generator g{i} out of range", lineno)
            if i - 1 in powers:
                raise PresentationError(f"duplicate pow {i}", lineno)
            powers[i - 1] = _parse_rhs(rhs, p, n, i, lineno)
        elif kind == "comm":
            if len(idx) != 2:
                raise PresentationError("comm takes two indices", lineno)
            j, i = idx
            if not (1 <= i < j <= n):
                raise PresentationError(f"comm {j} {i}: need n >= j > i >= 1", lineno)
            if (j - 1, i - 1) in comms:
                raise PresentationError(f"duplicate comm {j} {i}", lineno)
            comms[j - 1, i - 1] = _parse_rhs(rhs, p, n, j, lineno)
        else:
            raise PresentationError(f"unknown statement {kind!r}", lineno)
    return PcPresentation(p, n, powers, comms)


def _header(tokens: list[str], key: str, lineno: int) -> int:
    if len(tokens) != 2 or tokens[0] != key:
        raise PresentationError(f"expected '{key} <int>'", lineno)
    return _int(tokens[1], lineno)


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise PresentationError(f"expected an integer, got {tok!r}", lineno) from None


def _parse_rhs(tokens: list[str], p: int, n: int, above: int, lineno: int) -> Word:
    if len(tokens) % 2:
        raise PresentationError("right-hand side must be (g<k> <e>) pairs", lineno)
    e = [0] * n
    last = above
    for gen_tok, exp_tok in zip(tokens[::2], tokens[1::2]):
        m = _TOKEN_GEN.match(gen_tok)
        if not m:
            raise PresentationError(f"expected generator, got {gen_tok!r}", lineno)
        k = int(m.group(1))
        x = _int(exp_tok, lineno)
        if not 1 <= k <= n:
            raise PresentationError(f"generator g{k} out of range", lineno)
        if k <= last:
            raise PresentationError(
                f"g{k} must have index above g{last} (normal form, higher generators)",
                lineno,
            )
        if not 1 <= x <= p - 1:
            raise PresentationError(f"exponent {x} out of range [1, {p - 1}]", lineno)
        e[k - 1] = x
        last = k
    return tuple(e)


def materialize_table(
    pres: PcPresentation, cap: int = DEFAULT_TABLE_CAP, check: bool = True
) -> TableGroup:
    """Full multiplication table of a consistent presentation.

    Elements are indexed by the base-p value of their exponent tuple
    (g1 most significant), so index 0 is the identity.
    """
    p, n = pres.prime, pres.ngens
    order = p**n
    if order > cap:
        raise PresentationError(f"group order {order} exceeds table cap {cap}")
    if check:
        ok, failure = pres.consistency_check()
        if not ok:
            raise PresentationError(f"inconsistent presentation: {failure}")

    words = list(_all_words(p, n))
    index = {w: i for i, w in enumerate(words)}
    # right multiplication by each generator, then extend along normal forms
    right = np.empty((n, order), dtype=np.int32)
    for x, w in enumerate(words):
        for k in range(n):
            e = list(w)
            pres._mul_gen(e, k)
            right[k, x] = index[tuple(e)]

    table = np.empty((order, order), dtype=np.int32)
    table[:, 0] = np.arange(order)
    for y in range(1, order):
        w = words[y]
        last = max(j for j, x in enumerate(w) if x)
        prev = list(w)
        prev[last] -= 1
        # y = prev * g_last because prev's tail beyond `last` is empty
        table[:, y] = right[last][table[:, index[tuple(prev)]]]
    return TableGroup(p, table, labels=words)


def _all_words(p: int, n: int):
    for idx in range(p**n):
        digits = []
        for _ in range(n):
            idx, r = divmod(idx, p)
            digits.append(r)
        yield tuple(reversed(digits))
