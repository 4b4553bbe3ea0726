"""Arithmetic modulo a large prime and lifting back to Q.

Heavy elimination runs over GF(p) in :mod:`axialforge.ffmat`; results are
lifted by rational reconstruction and then re-verified exactly by the caller.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt

PRIME = (1 << 61) - 1
# the first modulus is the Mersenne prime the fast kernels are tuned for; the
# fallbacks are below 2^31 so plain 64-bit products cannot overflow
PRIMES = [PRIME, 2147483629, 2147483587, 2147483579, 2147483563]


def to_mod(x: Fraction | int, p: int = PRIME) -> int:
    if isinstance(x, int):
        return x % p
    num, den = x.numerator, x.denominator
    if den % p == 0:
        raise ZeroDivisionError(f"denominator divisible by the modulus {p}")
    return num * pow(den, -1, p) % p


def rational_reconstruct(a: int, m: int) -> Fraction | None:
    """Find ``n/d`` with ``n = a d (mod m)`` and ``|n|, d <= sqrt(m/2)``."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    return Fraction(r1, s1)


def crt_pair(a1: int, m1: int, a2: int, m2: int) -> tuple[int, int]:
    t = (a2 - a1) * pow(m1, -1, m2) % m2
    return a1 + m1 * t, m1 * m2


class LiftError(ArithmeticError):
    pass


def lift_vector(residues_per_prime: list[list[int]], primes: list[int]) -> list[Fraction]:
    """CRT-combine residues over several primes and reconstruct rationals."""
    out = []
    for vals in zip(*residues_per_prime):
        a, m = vals[0], primes[0]
        for v, p in zip(vals[1:], primes[1:]):
            a, m = crt_pair(a, m, v, p)
        r = rational_reconstruct(a, m)
        if r is None:
            raise LiftError("rational reconstruction failed")
        out.append(r)
    return out
