"""Cosets of Gamma^0(N), modular polynomial degrees, height factors, Phi_N^c."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .invariants import canonical_exponents
from .numeric import context, factorize, is_prime, valuation

Matrix = tuple[int, int, int, int]


# --------------------------------------------------------------------------
# cosets and degrees
# --------------------------------------------------------------------------

def psi(N: int) -> int:
    """Index of Gamma^0(N) in SL_2(Z): N * prod (1 + 1/p)."""
    out = N
    for p in factorize(N):
        out = out // p * (p + 1)
    return out


def mu(k: int, N: int) -> int:
    """Smallest m >= 1 with gcd(m*k - 1, N) = 1."""
    m = 1
    while math.gcd(m * k - 1, N) != 1:
        m += 1
    return m


@dataclass(frozen=True)
class CosetSet:
    N: int
    matrices: tuple[Matrix, ...]

    def __len__(self) -> int:
        return len(self.matrices)


def cosets(N: int) -> CosetSet:
    """Right coset representatives of Gamma^0(N) in SL_2(Z)."""
    if N < 2:
        raise ValueError("N must be at least 2")
    mats: list[Matrix] = [(1, v, 0, 1) for v in range(N)]
    mats.append((0, -1, 1, 0))
    for k in range(2, N):
        if math.gcd(k, N) > 1:
            mats.extend((k, k * kp - 1, 1, kp) for kp in range(mu(k, N)))
    return CosetSet(N, tuple(mats))


def equivalent(m1: Matrix, m2: Matrix, N: int) -> bool:
    """Whether m1 and m2 lie in the same coset Gamma^0(N) * m."""
    a1, b1 = m1[0], m1[1]
    a2, b2 = m2[0], m2[1]
    return (a2 * b1 - a1 * b2) % N == 0


def S_of_N(N: int) -> int:
    """The cusp correction sum over 1 < k < N with 1 < gcd(k, N) < sqrt(N)."""
    total = Fraction(0)
    for k in range(2, N):
        dk = math.gcd(k, N)
        if 1 < dk and dk * dk < N:
            total += mu(k, N) * (1 - Fraction(dk * dk, N))
    if total.denominator != 1:
        raise AssertionError(f"S({N}) = {total} is not integral")
    return int(total)


def S_closed_form(N: int) -> int | None:
    """Closed form of S(N) for prime powers and products of two primes."""
    f = factorize(N)
    if len(f) == 1:
        (l, n), = f.items()
        m, r = divmod(n - 1, 2)
        return (l ** m - 1) ** 2 if r == 0 else (l ** m - 1) * (l ** (m + 1) - 1)
    if len(f) == 2 and all(k == 1 for k in f.values()):
        p1, p2 = sorted(f)
        return p2 - p1
    return None


@dataclass(frozen=True)
class DegreeData:
    N: int
    s: int
    psi: int
    SN: int
    degJ: int


def degrees(N: int) -> DegreeData:
    s = canonical_exponents(N).s
    SN = S_of_N(N)
    closed = S_closed_form(N)
    if closed is not None and closed != SN:
        raise AssertionError(f"S({N}) = {SN} disagrees with closed form {closed}")
    num = s * (N - 1 + SN)
    if num % 24:
        raise AssertionError(f"deg_J for N={N} is not integral")
    return DegreeData(N, s, psi(N), SN, num // 24)


def conjugate_orders(N: int) -> list[Fraction]:
    """q-order at infinity of w_N^s o M for each coset matrix M, in coset order."""
    s = canonical_exponents(N).s
    out = [Fraction(-s * (N - 1), 24 * N)] * N
    out.append(Fraction(s * (N - 1), 24))
    for k in range(2, N):
        dk = math.gcd(k, N)
        if dk > 1:
            out.extend([Fraction(s, 24) * (Fraction(dk * dk, N) - 1)] * mu(k, N))
    return out


# --------------------------------------------------------------------------
# height factors and the comparison table
# --------------------------------------------------------------------------

def double_sigma(p1: int, p2: int) -> int:
    return 24 // math.gcd(24, (p1 - 1) * (p2 - 1))


def _check_descriptor(desc) -> None:
    kind = desc[0]
    if kind == "w" and len(desc) == 3 and desc[1] >= 2 and desc[2] >= 1:
        return
    if kind == "ww" and len(desc) == 4 and is_prime(desc[1]) and is_prime(desc[2]) and desc[3] >= 1:
        return
    raise ValueError(f"malformed descriptor {desc!r}")


def height_factor(desc) -> Fraction:
    """c(f) for ('w', N, e) = w_N^e or ('ww', p1, p2, e) = double eta quotient to the e."""
    _check_descriptor(desc)
    if desc[0] == "w":
        _, N, e = desc
        return Fraction(e * (N - 1 + S_of_N(N)), 24 * psi(N))
    _, p1, p2, e = desc
    if p1 == p2:
        return Fraction(e * (p1 - 1) ** 2, 12 * p1 * (p1 + 1))
    return Fraction(e * (p1 - 1) * (p2 - 1), 12 * (p1 + 1) * (p2 + 1))


def degree_in_j(desc) -> int:
    _check_descriptor(desc)
    if desc[0] == "w":
        return degrees(desc[1]).degJ
    _, p1, p2, _ = desc
    return double_sigma(p1, p2) * (p1 - 1) * (p2 - 1) // 12


def descriptor_name(desc) -> str:
    if desc[0] == "w":
        _, N, e = desc
        return f"w_{N}" + (f"^{e}" if e != 1 else "")
    _, p1, p2, e = desc
    return f"w_{p1},{p2}" + (f"^{e}" if e != 1 else "")


@dataclass(frozen=True)
class HeightEntry:
    descriptor: tuple
    gain: Fraction
    degJ: int

    def __str__(self) -> str:
        return f"{descriptor_name(self.descriptor)} {self.gain} {self.degJ}"


# Odd exponents of w_N for non-square N that the Gamma^0(N) conditions alone
# never yield (they come from the classical Weber-type results).
EXTRA_ODD_EXPONENTS = {2: (1, 3), 3: (3,), 6: (3,), 12: (3,)}


def achievable_exponents(N: int) -> set[int]:
    """Exponents e for which w_N^e is a class invariant for some discriminant."""
    ex = canonical_exponents(N)
    threes = [1] + ([3] if N % 3 != 1 else [])
    if N % 2:
        twos = [1, min(8, 2 * 2 ** valuation(N - 1, 2))]
    else:
        twos = [1, 2, 4] + ([8] if ex.is_square else [])
    out = set()
    for d3 in threes:
        for d2 in twos:
            d = math.lcm(24 // ex.s, d3, d2)
            e = 24 // math.gcd(24, d)
            if e % 2 and not ex.is_square:
                e *= 2
            out.add(e)
    out.update(EXTRA_ODD_EXPONENTS.get(N, ()))
    return out


def comparison_table(
    min_gain=13, max_degJ: int = 20, max_double_level: int | None = 200
) -> list[HeightEntry]:
    """All w_N^e and double eta quotients with gain >= min_gain and deg_J <= max_degJ.

    Double quotients are limited to p1 * p2 <= max_double_level (None: no limit).
    """
    min_gain = Fraction(min_gain)
    entries = []
    # deg_J >= (N - 1)/24 bounds N
    for N in range(2, 24 * max_degJ + 2):
        d = degrees(N)
        if d.degJ > max_degJ:
            continue
        for e in sorted(achievable_exponents(N)):
            desc = ("w", N, e)
            gain = 1 / height_factor(desc)
            if gain >= min_gain:
                entries.append(HeightEntry(desc, gain, d.degJ))
    # deg_J >= (p2 - 1)/12 bounds p2
    primes = [p for p in range(2, 12 * max_degJ + 2) if is_prime(p)]
    for i, p1 in enumerate(primes):
        for p2 in primes[i:]:
            if max_double_level is not None and p1 * p2 > max_double_level:
                continue
            sigma = double_sigma(p1, p2)
            desc = ("ww", p1, p2, sigma)
            dj = degree_in_j(desc)
            if dj > max_degJ:
                continue
            gain = 1 / height_factor(desc)
            if gain >= min_gain:
                entries.append(HeightEntry(desc, gain, dj))
    entries.sort(key=lambda h: (-h.gain, h.degJ))
    return entries


# --------------------------------------------------------------------------
# modular polynomials by interpolation
# --------------------------------------------------------------------------

MAX_MODPOLY_LEVEL = 8


class ModularPolynomialError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ModularPolynomial:
    """Phi(F, J) = sum coeffs[(i, k)] F^i J^k."""

    N: int
    coeffs: dict
    residual: float

    @property
    def degree_F(self) -> int:
        return max(i for i, _ in self.coeffs)

    @property
    def degree_J(self) -> int:
        return max(k for _, k in self.coeffs)

    def __call__(self, F, J):
        return sum(c * F ** i * J ** k for (i, k), c in self.coeffs.items())

    def __str__(self) -> str:
        return format_bivariate(self.coeffs)


def _jpoly(terms: dict[int, int]) -> str:
    parts = []
    for k in sorted(terms):
        c = terms[k]
        mono = "" if k == 0 else ("J" if k == 1 else f"J^{k}")
        if mono:
            body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
        else:
            body = str(abs(c))
        parts.append(("-" if c < 0 else "+", body))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return text + "".join(s + b for s, b in parts[1:])


def format_bivariate(coeffs: dict) -> str:
    """E.g. 'F^3+48*F^2+(768-J)*F+4096'."""
    by_f: dict[int, dict[int, int]] = {}
    for (i, k), c in coeffs.items():
        if c:
            by_f.setdefault(i, {})[k] = c
    out = ""
    for i in sorted(by_f, reverse=True):
        terms = by_f[i]
        mono = "" if i == 0 else ("F" if i == 1 else f"F^{i}")
        poly = _jpoly(terms)
        if len(terms) > 1:
            piece, sign = f"({poly})", "+"
            piece = piece + (f"*{mono}" if mono else "")
        else:
            sign = "-" if poly.startswith("-") else "+"
            body = poly.lstrip("-")
            if mono:
                piece = mono if body == "1" else f"{body}*{mono}"
            else:
                piece = body
        if not out:
            out = ("-" if sign == "-" else "") + piece
        else:
            out += sign + piece
    return out or "0"


def _apply(m: Matrix, z):
    a, b, c, d = m
    return (a * z + b) / (c * z + d)


def _elementary(values, ctx):
    """Coefficients of prod (F - v), constant term first."""
    poly = [ctx.mpc(1)]
    for v in values:
        nxt = [ctx.mpc(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] += c
            nxt[i] -= v * c
        poly = nxt
    return poly


def conjugates(N: int, z, prec: int):
    """w_N^s(M z) over the coset representatives M."""
    from .eta import weber_w

    s = canonical_exponents(N).s
    return [weber_w(N, s, _apply(m, z), prec) for m in cosets(N).matrices]


def modular_polynomial(N: int, prec: int = 512, y0: float = 1.1) -> ModularPolynomial:
    """Phi_N^c(F, J) = prod_M (F - w_N^s o M), fitted in J at sample points and rounded."""
    from .eta import j_invariant

    if not 2 <= N <= MAX_MODPOLY_LEVEL:
        raise ValueError(f"modular polynomial only for 2 <= N <= {MAX_MODPOLY_LEVEL}")
    deg = degrees(N)
    ctx = context(prec)
    for attempt in range(3):
        y = ctx.mpf(y0) + ctx.mpf(attempt) / 7
        npts = 2 * (deg.degJ + 1)
        zs = [ctx.mpc(ctx.mpf(k) / (2 * npts) - ctx.mpf(1) / 4, y) for k in range(npts)]
        js = [j_invariant(z, prec) for z in zs]
        cols = [_elementary(conjugates(N, z, prec), ctx) for z in zs]
        V = ctx.matrix([[jv ** k for k in range(deg.degJ + 1)] for jv in js])
        coeffs, worst = {}, 0.0
        try:
            for i in range(deg.psi + 1):
                rhs = ctx.matrix([col[i] for col in cols])
                sol, _ = ctx.qr_solve(V, rhs)
                for k in range(deg.degJ + 1):
                    val = sol[k]
                    r = int(ctx.nint(val.real))
                    worst = max(worst, float(abs(val - r)))
                    if r:
                        coeffs[(i, k)] = r
        except ZeroDivisionError:
            continue
        if worst < 0.01:
            return ModularPolynomial(N, coeffs, worst)
    raise ModularPolynomialError(f"Phi_{N}: rounding residual {worst:.3g}")
