"""Finite abelian groups in invariant-factor form.

A group is stored as its invariant factors ``n_1 | n_2 | ... | n_r`` with
every ``n_i >= 2``; the trivial group is the empty list.  Elements are tuples
of residues, one per invariant factor.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from math import gcd, prod


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer by trial division."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``; raise if q is not a prime power."""
    f = factorize(q)
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, e), = f.items()
    return p, e


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def invariant_factors_from_orders(orders) -> list[int]:
    """Invariant factors of the direct sum of cyclic groups of the given orders."""
    by_prime: dict[int, list[int]] = {}
    for n in orders:
        n = int(n)
        if n < 1:
            raise ValueError(f"cyclic order must be positive, got {n}")
        for p, e in factorize(n).items():
            by_prime.setdefault(p, []).append(p ** e)
    if not by_prime:
        return []
    length = max(len(v) for v in by_prime.values())
    factors = [1] * length
    for p, powers in by_prime.items():
        powers.sort(reverse=True)
        for i, pe in enumerate(powers):
            factors[length - 1 - i] *= pe
    return [f for f in factors if f > 1]


@dataclass(frozen=True)
class FinAb:
    """Finite abelian group ``Z/n_1 + ... + Z/n_r`` with ``n_1 | ... | n_r``."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        inv = tuple(int(n) for n in self.invariant_factors)
        for n in inv:
            if n < 2:
                raise ValueError(f"invariant factors must be >= 2, got {inv}")
        for a, b in zip(inv, inv[1:]):
            if b % a:
                raise ValueError(f"divisibility chain broken in {inv}")
        object.__setattr__(self, "invariant_factors", inv)

    # construction ---------------------------------------------------------

    @classmethod
    def trivial(cls) -> "FinAb":
        return cls(())

    @classmethod
    def cyclic(cls, n: int) -> "FinAb":
        return cls.from_orders([n])

    @classmethod
    def free(cls, modulus: int, rank: int) -> "FinAb":
        """``(Z/modulus)^rank``."""
        return cls.from_orders([modulus] * rank)

    @classmethod
    def from_orders(cls, orders) -> "FinAb":
        return cls(tuple(invariant_factors_from_orders(orders)))

    # structure ------------------------------------------------------------

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        """Number of cyclic factors (minimal number of generators)."""
        return len(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def elementary_divisors(self) -> list[int]:
        """Prime-power cyclic orders, sorted by prime then exponent."""
        out = []
        for n in self.invariant_factors:
            out.extend(p ** e for p, e in factorize(n).items())
        return sorted(out, key=lambda pe: (min(factorize(pe)), pe))

    def is_elementary(self, p: int | None = None) -> bool:
        """True for a (possibly trivial) F_p-vector space."""
        if self.is_trivial():
            return True
        if p is None:
            p = self.invariant_factors[0]
        return all(n == p for n in self.invariant_factors) and is_prime(p)

    def direct_sum(self, *others: "FinAb") -> "FinAb":
        orders = list(self.invariant_factors)
        for o in others:
            orders.extend(o.invariant_factors)
        return FinAb.from_orders(orders)

    __add__ = direct_sum

    def power(self, k: int) -> "FinAb":
        return FinAb.from_orders(list(self.invariant_factors) * k)

    def p_torsion_count(self, p: int, k: int) -> int:
        """``|{x : p^k x = 0}|``."""
        return prod(gcd(n, p ** k) for n in self.invariant_factors)

    # elements -------------------------------------------------------------

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def add(self, x, y) -> tuple[int, ...]:
        return tuple((a + b) % n for a, b, n in zip(x, y, self.invariant_factors))

    def neg(self, x) -> tuple[int, ...]:
        return tuple((-a) % n for a, n in zip(x, self.invariant_factors))

    def scale(self, k: int, x) -> tuple[int, ...]:
        return tuple((k * a) % n for a, n in zip(x, self.invariant_factors))

    def normalize(self, x) -> tuple[int, ...]:
        if len(x) != self.rank:
            raise ValueError(f"element {x} has wrong length for {self}")
        return tuple(int(a) % n for a, n in zip(x, self.invariant_factors))

    def elements(self):
        return itertools.product(*(range(n) for n in self.invariant_factors))

    def element_index(self, x) -> int:
        idx = 0
        for a, n in zip(x, self.invariant_factors):
            idx = idx * n + a
        return idx

    def element_from_index(self, idx: int) -> tuple[int, ...]:
        out = []
        for n in reversed(self.invariant_factors):
            idx, a = divmod(idx, n)
            out.append(a)
        return tuple(reversed(out))

    # io -------------------------------------------------------------------

    def to_json(self) -> list[int]:
        return list(self.invariant_factors)

    @classmethod
    def from_json(cls, data) -> "FinAb":
        return cls(tuple(data))

    @classmethod
    def parse(cls, text: str) -> "FinAb":
        """Parse ``"0"``, ``"Z/4"``, ``"Z/2+Z/4"`` or ``"(Z/3)^2"``."""
        text = text.replace(" ", "")
        if text in ("0", ""):
            return cls.trivial()
        orders = []
        for term in text.split("+"):
            power = 1
            if term.startswith("(") and ")^" in term:
                term, power_txt = term[1:].split(")^")
                power = int(power_txt)
            if not term.startswith("Z/"):
                raise ValueError(f"cannot parse group term {term!r}")
            orders.extend([int(term[2:])] * power)
        return cls.from_orders(orders)

    def __str__(self) -> str:
        if self.is_trivial():
            return "0"
        counts = Counter(self.invariant_factors)
        parts = []
        for n in sorted(counts):
            c = counts[n]
            parts.append(f"Z/{n}" if c == 1 else f"(Z/{n})^{c}")
        return " + ".join(parts)


def structure_from_subgroup_counts(p: int, counts: list[int]) -> list[int]:
    """Recover p-group orders from ``counts[k] = |G[p^k]|`` for k = 0, 1, ...

    ``counts`` must be eventually constant (the group order).
    """
    # number of cyclic factors of order >= p^k is log_p(counts[k] / counts[k-1])
    ge = []
    for k in range(1, len(counts)):
        ratio = counts[k] // counts[k - 1]
        r = 0
        while ratio > 1:
            ratio //= p
            r += 1
        ge.append(r)
    ge.append(0)
    orders = []
    for k in range(len(ge) - 1):
        orders.extend([p ** (k + 1)] * (ge[k] - ge[k + 1]))
    return orders
