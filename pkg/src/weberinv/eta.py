"""Dedekind eta, generalised Weber functions and class polynomials.

All functions take an explicit precision in bits; internally a few guard
bits are added and results are returned in the context of that precision.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .invariants import InvariantChoice, RealityClass
from .numeric import RootOfUnity24, context, kronecker, split_two
from .quadforms import Discriminant, NSystem, n_system, reduce, root_of

GUARD = 24


class RoundingError(ArithmeticError):
    pass


# --------------------------------------------------------------------------
# eta
# --------------------------------------------------------------------------

def normalise(a: int, b: int, c: int, d: int) -> tuple[int, int, int, int]:
    """Representative with c > 0, or c = 0 and d > 0, of +-M."""
    if c < 0 or (c == 0 and d < 0):
        return -a, -b, -c, -d
    return a, b, c, d


def epsilon_eta(a: int, b: int, c: int, d: int) -> RootOfUnity24:
    """Root of unity with eta(Mz) = eps(M) sqrt(cz + d) eta(z)."""
    if a * d - b * c != 1:
        raise ValueError("matrix must have determinant 1")
    a, b, c, d = normalise(a, b, c, d)
    lam, c1 = split_two(c)
    three_half = 3 * lam * (a * a - 1)
    if three_half % 2:
        raise AssertionError("a must be odd when c is even")
    k = a * b + c * (d * (1 - a * a) - a) + 3 * c1 * (a - 1) + three_half // 2
    return RootOfUnity24.from_sign(kronecker(a, c1), k)


def weber_multiplier(N: int, a: int, b: int, c: int, d: int) -> RootOfUnity24:
    """Root of unity eps with w_N(Mz) = eps * w_N(z) for M = [a, b; c, d] in Gamma^0(N)."""
    if a * d - b * c != 1:
        raise ValueError("matrix must have determinant 1")
    if b % N:
        raise ValueError(f"matrix is not in Gamma^0({N})")
    a, b, c, d = normalise(a, b, c, d)
    b0 = b // N
    lamN, N1 = split_two(N)
    _, c1 = split_two(c)
    k = (N - 1) * (-b0 * a + c * (d * (1 - a * a) - a))
    k += 6 * (c1 * (N1 - 1) * (a - 1) // 2)
    if lamN:
        k += 12 * (lamN * (a * a - 1) // 8)
    return RootOfUnity24.from_sign(kronecker(a, N1), k)


def _series(z, ctx):
    """q^(1/24) * sum_n (-1)^n q^(n(3n-1)/2) (pentagonal number theorem)."""
    q = ctx.expjpi(2 * z)
    eps = ctx.ldexp(1, -ctx.prec - 8)
    total = ctx.mpc(1)
    absq = abs(q)
    n = 1
    while absq ** (n * (3 * n - 1) // 2) > eps:
        term = q ** (n * (3 * n - 1) // 2) * (1 + q ** n)
        total += -term if n % 2 else term
        n += 1
    return ctx.expjpi(z / 12) * total


def fundamental_domain(z, ctx):
    """(z', (a, b, c, d)) with z' = (az + b)/(cz + d) in the standard fundamental domain."""
    a, b, c, d = 1, 0, 0, 1
    half = ctx.mpf(0.5)
    while True:
        n = int(ctx.nint(z.real))
        if n:
            z -= n
            a, b = a - n * c, b - n * d
        if abs(z) < 1 - ctx.ldexp(1, -ctx.prec // 2):
            z = -1 / z
            a, b, c, d = -c, -d, a, b
            continue
        if abs(z.real) <= half:
            return z, (a, b, c, d)


def eta(z, prec: int):
    """eta(z) via reduction to the fundamental domain and the sparse q-series."""
    ctx = context(prec + GUARD)
    z = ctx.mpc(z)
    if z.imag <= 0:
        raise ValueError("eta needs Im z > 0")
    w, (a, b, c, d) = fundamental_domain(z, ctx)
    a, b, c, d = normalise(a, b, c, d)
    eps = epsilon_eta(a, b, c, d)
    value = _series(w, ctx) / (eps.value(ctx) * ctx.sqrt(c * z + d))
    return context(prec).mpc(value)


def eta_direct(z, prec: int):
    """Series evaluation without argument reduction (slow for small Im z)."""
    ctx = context(prec)
    return _series(ctx.mpc(z), ctx)


def weber_w(N: int, e: int, z, prec: int):
    """(eta(z/N) / eta(z))^e."""
    ctx = context(prec + GUARD)
    z = ctx.mpc(z)
    val = (eta(z / N, prec + GUARD) / eta(z, prec + GUARD)) ** e
    return context(prec).mpc(val)


def j_invariant(z, prec: int):
    f = weber_w(2, 24, z, prec + GUARD)
    return context(prec).mpc((f + 16) ** 3 / f)


# --------------------------------------------------------------------------
# class polynomials
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraicPoly:
    """Monic polynomial over Z[omega]; coefficients (x, y) = x + y*omega, leading first."""

    D: Discriminant
    coeffs: tuple[tuple[int, int], ...]
    residual: float

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_rational(self) -> bool:
        return all(y == 0 for _, y in self.coeffs)

    def __str__(self) -> str:
        return format_poly(self.coeffs)


def _xpow(k: int) -> str:
    return "" if k == 0 else ("X" if k == 1 else f"X^{k}")


def format_poly(coeffs) -> str:
    """Text form, e.g. 'X^2 + (-1+2*w)*X - w - 1'."""
    n = len(coeffs) - 1
    out = []
    for i, (x, y) in enumerate(coeffs):
        k = n - i
        if x == 0 and y == 0:
            continue
        mono = _xpow(k)
        if y == 0 or x == 0 or k == 0:
            pieces = [(y, "w"), (x, "")] if k == 0 else [(x + y, "" if y == 0 else "w")]
            for val, sym in pieces:
                if val == 0:
                    continue
                body = "*".join(t for t in (sym, mono) if t)
                mag = abs(val)
                text = body if (mag == 1 and body) else "*".join(t for t in (str(mag), body) if t)
                out.append(("-" if val < 0 else "+", text))
        else:
            out.append(("+", f"({x}{y:+d}*w)*{mono}"))
    if not out:
        return "0"
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, t in out[1:]:
        text += f" {sign} {t}"
    return text


_TERM = re.compile(
    r"\s*([+-])?\s*(?:\((-?\d+)([+-]\d+)\*w\)|(\d+)\*w|(\d+)|(w))?\s*\*?\s*(X(?:\^(\d+))?)?"
)


def parse_poly(text: str) -> tuple[tuple[int, int], ...]:
    """Inverse of format_poly."""
    terms: dict[int, list[int]] = {}
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at {text[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        if m.group(2) is not None:
            x, y = int(m.group(2)), int(m.group(3))
        elif m.group(4) is not None:
            x, y = 0, int(m.group(4))
        elif m.group(5) is not None:
            x, y = int(m.group(5)), 0
        elif m.group(6):
            x, y = 0, 1
        else:
            x, y = 1, 0
        k = 0 if not m.group(7) else (int(m.group(8)) if m.group(8) else 1)
        acc = terms.setdefault(k, [0, 0])
        acc[0] += sign * x
        acc[1] += sign * y
        pos = m.end()
    n = max(terms)
    return tuple(tuple(terms.get(k, [0, 0])) for k in range(n, -1, -1))


def _mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def product_tree(roots, ctx):
    """Coefficients (leading first) of prod (X - r) by balanced splitting."""
    polys = [[ctx.mpc(1), -r] for r in roots]
    if not polys:
        return [ctx.mpc(1)]
    while len(polys) > 1:
        nxt = [_mul(polys[i], polys[i + 1]) for i in range(0, len(polys) - 1, 2)]
        if len(polys) % 2:
            nxt.append(polys[-1])
        polys = nxt
    return polys[0]


def height_factor_w(N: int, e: int):
    from .modular import height_factor

    return height_factor(("w", N, e))


def precision_estimate(choice: InvariantChoice, system: NSystem, sqrt_d: bool = False) -> int:
    """Working precision in bits for recovering H_D[w_N^e] exactly."""
    D = choice.D
    h = len(system.forms)
    c = float(height_factor_w(choice.N, choice.e))
    inv_a = sum(1 / reduce(f).A for f in system.forms)
    bits = c * math.pi * math.sqrt(-D) * inv_a / math.log(2)
    if sqrt_d:
        bits += h * math.log2(-D) / 2
    return math.ceil(bits) + math.ceil(3.5 * h) + 64


def _round(coeffs, disc: Discriminant, rational: bool, prec: int):
    ctx = context(prec)
    omega = disc.omega(prec)
    out, worst = [], 0.0
    for z in coeffs:
        if rational:
            x, y = int(ctx.nint(z.real)), 0
        else:
            y = int(ctx.nint(z.imag / omega.imag))
            x = int(ctx.nint(z.real - y * omega.real))
        worst = max(worst, float(abs(z - (x + y * omega))))
        out.append((x, y))
    return tuple(out), worst


def _rational_target(reality: RealityClass, sqrt_d: bool) -> bool:
    if sqrt_d:
        return reality is RealityClass.RATIONAL_AFTER_SQRT_D
    return reality is RealityClass.RATIONAL


def class_values(choice: InvariantChoice, system: NSystem, prec: int, sqrt_d: bool = False):
    ctx = context(prec)
    vals = [weber_w(choice.N, choice.e, root_of(f, prec + GUARD), prec) for f in system.forms]
    if sqrt_d:
        root_d = Discriminant.of(choice.D).sqrt(prec)
        vals = [root_d * v for v in vals]
    return [ctx.mpc(v) for v in vals]


def class_polynomial(
    choice: InvariantChoice,
    sqrt_d: bool = False,
    prec: int | None = None,
    threshold: float = 0.01,
    anchor: int | None = None,
) -> AlgebraicPoly:
    """H_D[f] for f = w_N^e (or sqrt(D) * w_N^e), rounded to Z or Z[omega].

    `anchor` overrides choice.B (e.g. -B, which conjugates the result).
    """
    disc = Discriminant.of(choice.D)
    B = choice.B if anchor is None else anchor
    system = n_system(disc, choice.level, B)
    if prec is None:
        prec = precision_estimate(choice, system, sqrt_d)
    rational = _rational_target(choice.reality, sqrt_d)
    for attempt in range(2):
        work = prec + GUARD
        ctx = context(work)
        coeffs = product_tree(class_values(choice, system, work, sqrt_d), ctx)
        rounded, residual = _round(coeffs, disc, rational, work)
        if residual < threshold:
            return AlgebraicPoly(disc, rounded, residual)
        prec *= 2
    raise RoundingError(
        f"H_{choice.D}[w_{choice.N}^{choice.e}]: residual {residual:.3g} after retry"
    )
