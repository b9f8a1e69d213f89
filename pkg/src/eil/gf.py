"""Arithmetic in the prime field F_q on canonical residues.

Elements are plain ints in [0, q); every operation returns a canonical
residue. A FieldCtx carries the modulus and validates its inputs, so a
residue that escaped from a larger field is rejected at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError

# All desk-scale experiments use q <= 31; the cap keeps q^2 products far from
# any integer-width trouble in the numpy-backed bulk paths.
Q_LIMIT = 1 << 20


def is_prime(n: int) -> bool:
    """Trial-division primality check."""
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldCtx:
    """The prime field F_q."""

    q: int

    def __post_init__(self) -> None:
        if not isinstance(self.q, int):
            raise ParameterError(f"q must be an integer, got {self.q!r}")
        if self.q > Q_LIMIT:
            raise ParameterError(f"q must be <= 2^20, got {self.q}")
        if not is_prime(self.q):
            raise ParameterError(f"q must be prime, got {self.q}")

    def check(self, a: int) -> int:
        """Reject values that are not canonical residues of this field."""
        if not isinstance(a, int) or isinstance(a, bool) or not 0 <= a < self.q:
            raise ParameterError(f"{a!r} is not a canonical residue mod {self.q}")
        return a

    def add(self, a: int, b: int) -> int:
        return (self.check(a) + self.check(b)) % self.q

    def sub(self, a: int, b: int) -> int:
        return (self.check(a) - self.check(b)) % self.q

    def mul(self, a: int, b: int) -> int:
        return (self.check(a) * self.check(b)) % self.q

    def neg(self, a: int) -> int:
        return (-self.check(a)) % self.q

    def inv(self, a: int) -> int:
        """Multiplicative inverse via Fermat; a = 0 is rejected."""
        if self.check(a) == 0:
            raise ParameterError("0 has no multiplicative inverse")
        return pow(a, self.q - 2, self.q)

    def pow(self, a: int, e: int) -> int:
        """a^e by square-and-multiply; 0^0 = 1."""
        if e < 0:
            raise ParameterError(f"exponent must be nonnegative, got {e}")
        return pow(self.check(a), e, self.q)

    def elements(self) -> list[int]:
        """All field elements in increasing order."""
        return list(range(self.q))

    def subgroup_of_order(self, t: int) -> set[int]:
        """The multiplicative subgroup H = {x : x^t = 1} of order exactly t.

        Requires t >= 2 and t | q-1 (the multiplicative group is cyclic of
        order q-1, so those t give |H| = t exactly).
        """
        if t < 2:
            raise ParameterError(f"subgroup order must be >= 2, got {t}")
        if (self.q - 1) % t != 0:
            raise ParameterError(f"t = {t} does not divide q - 1 = {self.q - 1}")
        h = {x for x in range(1, self.q) if pow(x, t, self.q) == 1}
        assert len(h) == t
        return h
