"""Arithmetic over prime fields GF(q).

Message symbols, common-randomness symbols and answer symbols all live in a
prime field. Only prime moduli are supported; every scheme handled by this
package works with sums mod 2 or mod 3.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

MAX_MODULUS = 2**16


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeModulus(int):
    """An integer known to be a prime no larger than 2**16."""

    def __new__(cls, q: int) -> "PrimeModulus":
        if isinstance(q, bool) or int(q) != q:
            raise FieldError(f"modulus must be an integer, got {q!r}")
        q = int(q)
        if q > MAX_MODULUS:
            raise FieldError(f"modulus too large: {q} > {MAX_MODULUS}")
        if not is_prime(q):
            raise FieldError(f"modulus not prime: {q}")
        return super().__new__(cls, q)

    def __repr__(self) -> str:
        return f"PrimeModulus({int(self)})"


@dataclass(frozen=True)
class FieldElement:
    value: int
    modulus: PrimeModulus

    def __post_init__(self):
        if not isinstance(self.modulus, PrimeModulus):
            object.__setattr__(self, "modulus", PrimeModulus(self.modulus))
        if not 0 <= self.value < self.modulus:
            raise FieldError(f"value {self.value} outside [0, {int(self.modulus)})")

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.modulus != self.modulus:
            raise FieldError(
                f"modulus mismatch: {int(self.modulus)} vs {int(other.modulus)}"
            )

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement((self.value + other.value) % self.modulus, self.modulus)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement((self.value - other.value) % self.modulus, self.modulus)

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.value % self.modulus, self.modulus)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.value * other.value % self.modulus, self.modulus)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {int(self.modulus)})"


def element(value: int, q: int) -> FieldElement:
    """Reduce ``value`` mod ``q`` and wrap it."""
    q = PrimeModulus(q)
    return FieldElement(value % q, q)


def ff_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def ff_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def eval_affine(
    coeffs: Sequence[FieldElement],
    vars: Sequence[FieldElement],
    constant: FieldElement,
) -> FieldElement:
    """Return ``constant + sum(coeffs[i] * vars[i])`` over GF(q)."""
    if len(coeffs) != len(vars):
        raise FieldError(f"length mismatch: {len(coeffs)} coefficients, {len(vars)} variables")
    acc = constant
    for c, v in zip(coeffs, vars):
        acc = acc + c * v
    return acc


def inverse(a: int, q: int) -> int:
    if a % q == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {q}")
    return pow(a, -1, q)
