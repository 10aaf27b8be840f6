"""Exact integer/modular helpers and precision-scoped complex arithmetic."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import mpmath


# --------------------------------------------------------------------------
# integers
# --------------------------------------------------------------------------

def factorize(n: int) -> dict[int, int]:
    """Trial-division factorisation of |n| (desk-scale inputs only)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
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


def prime_divisors(n: int) -> list[int]:
    return sorted(factorize(n))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    return all(n % d for d in range(3, r + 1, 2))


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def valuation(n: int, p: int) -> int:
    """Exponent of the prime p in n != 0."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def split_two(n: int) -> tuple[int, int]:
    """Return (lambda(n), n1) with n = n1 * 2**lambda(n), n1 odd.

    By convention 0 maps to (1, 1), as needed by the eta multiplier.
    """
    if n == 0:
        return 1, 1
    lam = valuation(n, 2)
    return lam, n >> lam


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    k = 1
    if v % 2 and a % 8 in (3, 5):
        k = -k
    if n < 0:
        n = -n
        if a < 0:
            k = -k
    # Jacobi symbol for odd positive n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                k = -k
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a %= n
    return k if n == 1 else 0


def crt(residues: list[int], moduli: list[int]) -> tuple[int, int]:
    """Combine pairwise coprime congruences; returns (x, lcm)."""
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        g = math.gcd(m, mi)
        if g != 1:
            raise ValueError("moduli must be pairwise coprime")
        t = ((r - x) * pow(m, -1, mi)) % mi
        x += m * t
        m *= mi
    return x % m, m


# --------------------------------------------------------------------------
# square roots modulo m
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus <= 0:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "value", self.value % self.modulus)

    def __int__(self) -> int:
        return self.value


def _tonelli(a: int, p: int) -> int | None:
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    if s == 1:
        return pow(a, (p + 1) // 4, p)
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def _roots_prime_power(a: int, p: int, k: int) -> list[int]:
    """All x mod p**k with x*x = a (mod p**k)."""
    r0 = _tonelli(a, p)
    if r0 is None:
        return []
    roots = sorted({r0 % p, (-r0) % p})
    pk = p
    for _ in range(1, k):
        nxt = set()
        for x in roots:
            if p != 2 and x % p:
                # simple root: unique Hensel lift
                inv = pow(2 * x, -1, pk * p)
                nxt.add((x - (x * x - a) * inv) % (pk * p))
            else:
                for j in range(p):
                    y = x + j * pk
                    if (y * y - a) % (pk * p) == 0:
                        nxt.add(y)
        roots = sorted(nxt)
        pk *= p
        if not roots:
            return []
    return roots


def sqrt_mod_all(a: int, m: int) -> list[int]:
    """Sorted list of all square roots of a modulo m."""
    if m < 1:
        raise ValueError("modulus must be positive")
    if m == 1:
        return [0]
    parts = []
    mods = []
    for p, k in factorize(m).items():
        rs = _roots_prime_power(a, p, k)
        if not rs:
            return []
        parts.append(rs)
        mods.append(p ** k)
    return sorted(crt(list(combo), mods)[0] for combo in product(*parts))


def sqrt_mod(a: int, m: int) -> Residue | None:
    """Smallest nonnegative B with B^2 = a (mod m), or None."""
    roots = sqrt_mod_all(a, m)
    return Residue(roots[0], m) if roots else None


# --------------------------------------------------------------------------
# roots of unity and precision contexts
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RootOfUnity24:
    """zeta_24**k, k kept in [0, 24); a sign -1 is folded in as +12."""

    k: int

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % 24)

    @classmethod
    def from_sign(cls, sign: int, k: int = 0) -> RootOfUnity24:
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return cls(k + (12 if sign == -1 else 0))

    def __mul__(self, other: RootOfUnity24) -> RootOfUnity24:
        return RootOfUnity24(self.k + other.k)

    def __pow__(self, e: int) -> RootOfUnity24:
        return RootOfUnity24(self.k * e)

    def inverse(self) -> RootOfUnity24:
        return RootOfUnity24(-self.k)

    def value(self, ctx):
        return ctx.expjpi(ctx.mpf(self.k) / 12)


@lru_cache(maxsize=None)
def context(prec: int) -> mpmath.ctx_mp.MPContext:
    """A private mpmath context fixed at `prec` bits.

    Contexts are never mutated after creation, so sharing them is safe.
    """
    if prec < 2:
        raise ValueError("precision must be at least 2 bits")
    ctx = mpmath.MPContext()
    ctx.prec = prec
    return ctx


def big_complex(re, im=0, prec: int = 53):
    ctx = context(prec)
    return ctx.mpc(re, im)


def snap_root_of_unity(x, order: int = 24) -> tuple[int, float]:
    """Nearest order-th root of unity to x: (k, distance)."""
    ctx = x.context
    k = int(ctx.nint(ctx.arg(x) * order / (2 * ctx.pi))) % order
    dist = abs(x - ctx.expjpi(ctx.mpf(2 * k) / order))
    return k, float(dist)
