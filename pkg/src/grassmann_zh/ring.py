"""Arithmetic in Z_h, its unit group, the ideals J_alpha and the CRT maps.

Elements are plain Python ints in ``[0, h)``.  A :class:`RingContext` carries
the factorization ``h = p_1^s_1 ... p_t^s_t`` (primes increasing) and the
precomputed CRT idempotents used to move between Z_h and the local rings
Z_{p_i^s_i}.  Prime indices are 0-based throughout the API.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, prod
from typing import Sequence

from .errors import InvalidModulus

MAX_MODULUS = 2**40

ExponentVector = tuple[int, ...]


@dataclass(frozen=True)
class RingContext:
    h: int
    primes: tuple[tuple[int, int], ...]
    # e_i with e_i = 1 mod p_i^s_i and 0 mod every other prime power
    idempotents: tuple[int, ...] = field(repr=False, compare=False)

    @property
    def t(self) -> int:
        return len(self.primes)

    @property
    def prime_powers(self) -> tuple[int, ...]:
        return tuple(p**s for p, s in self.primes)

    @property
    def exponents(self) -> ExponentVector:
        return tuple(s for _, s in self.primes)

    @property
    def is_local(self) -> bool:
        return len(self.primes) == 1

    def local(self, i: int) -> "RingContext":
        """Context of Z_{p_i^{s_i}}."""
        self._check_index(i)
        return factorize(self.prime_powers[i])

    def complement(self, i: int) -> "RingContext":
        """Context of Z_{h / p_i^{s_i}} (undefined when t = 1)."""
        self._check_index(i)
        if self.t == 1:
            raise InvalidModulus(
                f"h={self.h} is a prime power; Z_(h/p^s) is the zero ring")
        return factorize(self.h // self.prime_powers[i])

    def units(self) -> list[int]:
        return [x for x in range(1, self.h) if gcd(x, self.h) == 1]

    def unit_count(self) -> int:
        return prod((p - 1) * p ** (s - 1) for p, s in self.primes)

    def _check_index(self, i: int) -> None:
        if not 0 <= i < self.t:
            raise IndexError(f"prime index {i} out of range for t={self.t}")

    def __str__(self) -> str:
        return f"Z_{self.h}"


@lru_cache(maxsize=None)
def factorize(h: int) -> RingContext:
    """Trial-division factorization of ``h`` into a canonical RingContext."""
    if not isinstance(h, int) or h < 2:
        raise InvalidModulus(f"modulus must be an integer >= 2, got {h!r}")
    if h > MAX_MODULUS:
        raise InvalidModulus(f"modulus {h} exceeds the supported bound 2^40")
    primes = []
    rest, p = h, 2
    while p * p <= rest:
        if rest % p == 0:
            s = 0
            while rest % p == 0:
                rest //= p
                s += 1
            primes.append((p, s))
        p += 1 if p == 2 else 2
    if rest > 1:
        primes.append((rest, 1))
    idem = []
    for p, s in primes:
        q = p**s
        rest = h // q
        idem.append(rest * pow(rest, -1, q) % h)
    return RingContext(h, tuple(primes), tuple(idem))


def is_unit(ctx: RingContext, x: int) -> bool:
    return gcd(x % ctx.h, ctx.h) == 1


def inv(ctx: RingContext, x: int) -> int:
    return pow(x % ctx.h, -1, ctx.h)


def valuation(x: int, p: int, cap: int) -> int:
    """p-adic valuation of x, truncated at ``cap`` (so v(0) = cap)."""
    if x == 0:
        return cap
    v = 0
    while v < cap and x % p == 0:
        x //= p
        v += 1
    return v


def exponents_of(ctx: RingContext, x: int) -> ExponentVector:
    """The exponent vector of x: alpha_i = min(v_{p_i}(x), s_i)."""
    x %= ctx.h
    return tuple(valuation(x % p**s, p, s) for p, s in ctx.primes)


def ideal_generator(ctx: RingContext, alphas: Sequence[int]) -> int:
    """prod p_i^alpha_i reduced mod h."""
    _check_alphas(ctx, alphas)
    return prod(p**a for (p, _), a in zip(ctx.primes, alphas)) % ctx.h


@dataclass(frozen=True)
class UnitDecomposition:
    unit: int
    exponents: ExponentVector


def unit_decompose(ctx: RingContext, x: int) -> UnitDecomposition:
    """Write x = u * prod p_i^alpha_i with u the least unit that works.

    Zero decomposes as unit 1 with exponents (s_1, ..., s_t).
    """
    x %= ctx.h
    alphas = exponents_of(ctx, x)
    if x == 0:
        return UnitDecomposition(1, alphas)
    g = ideal_generator(ctx, alphas)
    # u is determined locally: pi_i(u) = pi_i(x) / p_i^alpha_i mod p_i^(s_i - alpha_i),
    # free modulo the rest; the least unit in the coset is found by walking it.
    local = []
    for (p, s), a in zip(ctx.primes, alphas):
        q = p ** (s - a)
        if q == 1:
            local.append((0, 1))
        else:
            local.append(((x % p**s) // p**a * pow(g % p**s // p**a, -1, q) % q, q))
    modulus = prod(q for _, q in local)
    base = _crt_pairs(local)
    u = base
    while gcd(u, ctx.h) != 1:
        u += modulus
    assert u * g % ctx.h == x
    return UnitDecomposition(u, alphas)


def pi(ctx: RingContext, x: int, i: int) -> int:
    ctx._check_index(i)
    return x % ctx.prime_powers[i]


def theta(ctx: RingContext, x: int, i: int) -> int:
    return x % ctx.complement(i).h


def crt_lift(ctx: RingContext, residues: Sequence[int]) -> int:
    """The unique x in Z_h with x = residues[i] mod p_i^s_i."""
    if len(residues) != ctx.t:
        raise ValueError(f"expected {ctx.t} residues, got {len(residues)}")
    for r, q in zip(residues, ctx.prime_powers):
        if not 0 <= r < q:
            raise ValueError(f"residue {r} not in [0, {q})")
    return sum(r * e for r, e in zip(residues, ctx.idempotents)) % ctx.h


def in_ideal(ctx: RingContext, x: int, alphas: Sequence[int]) -> bool:
    """Membership of x in J_alpha = (prod p_i^alpha_i)."""
    _check_alphas(ctx, alphas)
    return all(a <= e for a, e in zip(alphas, exponents_of(ctx, x)))


def _check_alphas(ctx: RingContext, alphas: Sequence[int]) -> None:
    if len(alphas) != ctx.t or any(
            not 0 <= a <= s for a, (_, s) in zip(alphas, ctx.primes)):
        raise ValueError(f"exponent vector {tuple(alphas)} invalid for {ctx}")


def _crt_pairs(pairs: Sequence[tuple[int, int]]) -> int:
    x, m = 0, 1
    for r, q in pairs:
        # solve x + m*k = r mod q
        k = (r - x) * pow(m, -1, q) % q if q > 1 else 0
        x, m = x + m * k, m * q
    return x % m
