"""Graded coefficient groups ``Z/ell^nu (x) E^q`` for MU, KU, Morava K(n) and HZ.

Degrees are cohomological: ``MU^{-2i}`` is free of rank ``p(i)`` (the
number of partitions of ``i``), ``KU^q`` has rank one in even degrees,
``K(n)^q`` is ``Z/ell`` when ``2(ell^n - 1)`` divides ``q``, and ``HZ`` is
concentrated in degree 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import ParameterError
from .finab import FinAb, is_prime


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    """``p(n)`` by Euler's pentagonal-number recurrence."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    total, k = 0, 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > n:
            break
        sign = 1 if k % 2 else -1
        total += sign * partition_count(n - g1)
        g2 = k * (3 * k + 1) // 2
        if g2 <= n:
            total += sign * partition_count(n - g2)
        k += 1
    return total


def partitions(n: int, largest: int | None = None):
    """Yield the partitions of ``n`` as non-increasing tuples."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def mu_rank(q: int) -> int:
    """Rank of ``MU^q``: monomials in generators of degree ``-2i`` (``i >= 1``)."""
    if q > 0 or q % 2:
        return 0
    return partition_count(-q // 2)


THEORIES = ("MU", "KU", "MoravaK", "HZ")


@dataclass(frozen=True)
class GradedCoefficients:
    """``Z/ell^nu (x) E^*`` for one of the supported theories.

    For Morava K-theory ``height`` is ``n`` and the modulus is forced to ``ell``.
    """

    name: str
    ell: int
    nu: int = 1
    height: int = 1

    def __post_init__(self):
        if self.name not in THEORIES:
            raise ParameterError(f"unknown theory {self.name!r}; expected one of {THEORIES}")
        if not is_prime(self.ell):
            raise ParameterError(f"ell = {self.ell} is not prime")
        if self.nu < 1:
            raise ParameterError("nu must be >= 1")
        if self.name == "MoravaK":
            if self.height < 1:
                raise ParameterError("Morava K-theory needs height >= 1")
            object.__setattr__(self, "nu", 1)

    @classmethod
    def parse(cls, spec: str, ell: int, nu: int = 1) -> "GradedCoefficients":
        """``"MU"``, ``"KU"``, ``"HZ"``, ``"MoravaK(2)"`` or ``"K(2)"``."""
        s = spec.strip()
        for prefix in ("MoravaK", "K"):
            if s.startswith(prefix + "(") and s.endswith(")"):
                return cls("MoravaK", ell, 1, int(s[len(prefix) + 1:-1]))
        if s == "MoravaK":
            return cls("MoravaK", ell, 1, 1)
        return cls(s, ell, nu)

    @property
    def modulus(self) -> int:
        return self.ell ** self.nu

    @property
    def label(self) -> str:
        return f"MoravaK({self.height})" if self.name == "MoravaK" else self.name

    @property
    def period(self) -> int | None:
        """Periodicity of the rank function (``None`` for MU and HZ)."""
        if self.name == "KU":
            return 2
        if self.name == "MoravaK":
            return 2 * (self.ell ** self.height - 1)
        return None

    def rank(self, q: int) -> int:
        if self.name == "MU":
            return mu_rank(q)
        if self.name == "KU":
            return 1 if q % 2 == 0 else 0
        if self.name == "MoravaK":
            return 1 if q % self.period == 0 else 0
        return 1 if q == 0 else 0

    def group(self, q: int) -> FinAb:
        return FinAb.free(self.modulus, self.rank(q))

    def has_support_at_or_below(self, b: int) -> bool:
        """Whether ``rank(q) > 0`` for some ``q <= b``."""
        if self.name == "HZ":
            return b >= 0
        # MU is nonzero in every even degree <= 0; KU and K(n) are periodic
        return True

    def support(self, qmin: int, qmax: int) -> list[int]:
        return [q for q in range(qmin, qmax + 1) if self.rank(q)]

    def to_json(self) -> dict:
        return {"theory": self.label, "ell": self.ell, "nu": self.nu}


def coefficient_group(C: GradedCoefficients, q: int) -> FinAb:
    return C.group(q)
