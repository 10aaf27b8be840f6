"""Which powers w_N^e of generalised Weber functions give class invariants.

The divisibility criteria for the multiplier exponent theta are encoded as
proposition predicates (PROP30, PROP32, PROP21, PROP20, PROP44, PROP412,
PROP8).  A condition "r:R" on B stands for B^2 = D + 4rN (mod 4RN).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .numeric import (
    Residue,
    factorize,
    is_square,
    kronecker,
    prime_divisors,
    split_two,
    sqrt_mod,
    valuation,
)
from .quadforms import Discriminant, QuadForm


class Inadmissible(ValueError):
    """B^2 = D (mod 4N) has no solution; `prime` is the offending divisor of N."""

    def __init__(self, N: int, D: int, prime: int):
        super().__init__(f"D={D} inadmissible for N={N} at p={prime}")
        self.N, self.D, self.prime = N, D, prime


# --------------------------------------------------------------------------
# exponents
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentData:
    N: int
    t: int
    s: int
    is_square: bool


def canonical_exponents(N: int) -> ExponentData:
    if N < 2:
        raise ValueError("N must be at least 2")
    t = 24 // math.gcd(N - 1, 24)
    sq = is_square(N)
    s = 2 * t if (t % 2 and not sq) else t
    return ExponentData(N, t, s, sq)


# --------------------------------------------------------------------------
# admissibility and generic characters
# --------------------------------------------------------------------------

def local_obstruction(D: int, N: int) -> int | None:
    """First prime p | N violating the local square-root criterion, else None."""
    disc = Discriminant.of(D)
    for p in prime_divisors(N):
        chi = kronecker(disc.fundamental, p)
        vN = valuation(N, p)
        vc = valuation(disc.conductor, p)
        ok = (
            chi == 1
            or (chi == -1 and vN <= 2 * vc)
            or (chi == 0 and vN <= 2 * vc + 1)
        )
        if not ok:
            return p
    return None


def admissible(D: int, N: int) -> Residue | None:
    """Smallest B (mod 2N) with B^2 = D (mod 4N), or None."""
    root = sqrt_mod(D, 4 * N)
    local = local_obstruction(D, N)
    if (root is None) != (local is not None):
        raise AssertionError(f"local criterion disagrees with sqrt_mod for D={D}, N={N}")
    return None if root is None else Residue(root.value, 2 * N)


def generic_characters(D: int, p: int) -> list[int]:
    disc = Discriminant.of(D)
    if math.gcd(p, 2 * disc.conductor * D) != 1:
        raise ValueError(f"gcd({p}, 2cD) != 1")
    values = [kronecker(p, q) for q in prime_divisors(D) if q != 2]
    if D % 2 == 0:
        chi4, chi8 = kronecker(-1, p), kronecker(2, p)
        m = (D // 4) % 8
        if m in (3, 4, 7):
            values.append(chi4)
        elif m == 2:
            values.append(chi8)
        elif m == 6:
            values.append(chi4 * chi8)
        elif m == 0:
            values += [chi4, chi8]
    return values


# --------------------------------------------------------------------------
# theta
# --------------------------------------------------------------------------

def theta(N: int, form: QuadForm, u: int, v: int, conductor: int | None = None) -> int:
    """Exponent of zeta_24 picked up by w_N under the inverse Frobenius matrix.

    Only the branch p | u is handled; p = u(u - vB) + v^2 AC must be prime
    to 6Nc and Np must divide C.
    """
    A, B, C = form.A, form.B, form.C
    p = u * (u - v * B) + v * v * A * C
    if p <= 1:
        raise ValueError(f"norm p={p} is not a prime norm")
    if conductor is None:
        conductor = Discriminant.of(form.discriminant).conductor
    if math.gcd(p, 6 * N * conductor) != 1:
        raise ValueError(f"norm p={p} not prime to 6Nc")
    if u % p:
        raise ValueError(f"p={p} does not divide u={u}")
    if C % (N * p):
        raise ValueError(f"Np={N * p} does not divide C={C}")
    up = u - v * B
    lam_v, v1 = split_two(v)
    lam_a, a1 = split_two(A)
    lam_n, n1 = split_two(N)
    last = 3 * lam_n * (up * up - 1)
    if last % 2:
        raise ValueError("u' must be odd for even N")
    return (
        (N - 1) * v * (up * (C // (N * p)) + A * ((u // p) * (1 - up * up) - up))
        + 3 * v1 * a1 * (n1 - 1) * (up - 1)
        + last // 2
    )


# --------------------------------------------------------------------------
# conditions and proposition predicates
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BCondition:
    """Intersection of a 2-adic condition r2:R2 and a 3-adic one r3:R3."""

    r2: int = 0
    R2: int = 1
    r3: int = 0
    R3: int = 1

    @property
    def R(self) -> int:
        return self.R2 * self.R3

    @property
    def r(self) -> int:
        return next(x for x in range(self.R) if x % self.R2 == self.r2 and x % self.R3 == self.r3)

    def __str__(self) -> str:
        return f"{self.r}:{self.R}"

    def label(self) -> str:
        parts = []
        if self.R2 > 1:
            parts.append(f"{self.r2}:{self.R2}")
        if self.R3 > 1:
            parts.append(f"{self.r3}:{self.R3}")
        return " ∩ ".join(parts) if parts else "0:1"

    def holds(self, N: int, D: int, B: int) -> bool:
        return (B * B - D - 4 * self.r * N) % (4 * self.R * N) == 0


@dataclass(frozen=True)
class _Option:
    name: str        # e.g. "PROP44c"
    r: int
    R: int
    divisor: int     # divisibility of theta (for PROP21: of rho)
    forced: tuple[tuple[int, tuple[int, ...]], ...] = ()   # (modulus, allowed B residues)


def _three_adic_options(N: int, D: int) -> list[_Option]:
    if N % 3 == 0:
        if D % 3 == 0:
            return [_Option("PROP30a", 1, 3, 3, ((3, (0,)),))]
        if D % 3 == 1:
            return [_Option("PROP30b", 2, 3, 3, ((3, (1, 2)),))]
    elif N % 3 == 2 and D % 3 in (1, 2):
        return [_Option("PROP32", D % 3, 3, 3, ((3, (0,)),))]
    return []


def half_b_mod8(r: int, N: int, D: int) -> tuple[int, tuple[int, ...]] | None:
    """Row of the mod-8 square table: (modulus, allowed residues of B/2).

    Applies to B^2 = D + 4rN (mod 16N) with N even and D even; returns
    None when D fits no row (so the congruence is unsolvable).
    """
    rn = r * N % 8
    d32 = D % 32
    odd, even, zero4, two4 = (2, (1,)), (2, (0,)), (4, (0,)), (4, (2,))
    table = {
        0: [(d32 == 4, odd), (D % 16 == 0, even)],
        2: [(d32 == 24, zero4), (d32 == 28, odd), (d32 == 8, two4)],
        4: [(D % 16 == 0, even), (d32 == 20, odd)],
        # 8 || D splits: D/4 = 2 (mod 8) gives 0 mod 4, D/4 = 6 gives 2 mod 4
        6: [(d32 == 8, zero4), (d32 == 24, two4), (d32 == 12, odd)],
    }
    for cond, prop in table[rn]:
        if cond:
            return prop
    return None


def _half_b_consistent(r: int, N: int, D: int) -> bool:
    return D % 8 == 1 or (D % 2 == 0 and half_b_mod8(r, N, D) is not None)


def _two_adic_options(N: int, D: int) -> list[_Option]:
    out: list[_Option] = []
    if N % 2:
        if D % 2:
            out.append(_Option("PROP21", 0, 1, 2))
        return out
    lam_n = valuation(N, 2)
    vD = valuation(D, 2) if D else 99
    out.append(_Option("PROP20a", 1, 2, 2))
    if D % 8 == 1:
        out.append(_Option("PROP20b", 0, 2, 2))
    # theta divisible by 4
    if _half_b_consistent(1, N, D):
        if D % 8 == 1:
            out.append(_Option("PROP44a", 1, 4, 4))
        elif D % 16 == 0:
            out.append(_Option("PROP44b", 1, 4, 4))
        elif lam_n == 1 and vD == 2:
            out.append(_Option("PROP44c", 1, 4, 4))
    if _half_b_consistent(3, N, D):
        if D % 8 == 1:
            out.append(_Option("PROP412a", 3, 4, 4))
        elif vD == 3 and lam_n == 1:
            out.append(_Option("PROP412b", 3, 4, 4, ((4, (0,)),)))
        elif vD == 2 and lam_n >= 2:
            out.append(_Option("PROP412c", 3, 4, 4, ((4, (2,)),)))
    # theta divisible by 8, only for even squares
    if is_square(N):
        if D % 8 == 1:
            out += [_Option("PROP8a", 3, 8, 8), _Option("PROP8a", 7, 8, 8)]
        elif D % 32 == 0:
            out.append(_Option("PROP8b", 1, 8, 8, ((8, (4,) if lam_n == 2 else (0,)),)))
        elif vD == 4:
            out.append(_Option("PROP8c", 5, 8, 8, ((8, (0,) if lam_n == 2 else (4,)),)))
    return out


PROPOSITIONS = ("PROP30", "PROP32", "PROP21", "PROP20", "PROP44", "PROP412", "PROP8")


def _options(N: int, D: int) -> tuple[list[_Option], list[_Option]]:
    return _three_adic_options(N, D), _two_adic_options(N, D)


def _solutions(N: int, D: int, cond: BCondition, forced, modulus: int) -> list[int]:
    return [
        B for B in range(modulus)
        if cond.holds(N, D, B) and all(B % m in allowed for m, allowed in forced)
    ]


def prop_applies(name: str, N: int, D: int, condition: BCondition):
    """(theta divisor, forced B congruences) if `name` applies under `condition`, else None."""
    if name not in PROPOSITIONS:
        raise ValueError(f"unknown proposition {name}")
    three, two = _options(N, D)
    for opt in three + two:
        if not opt.name.startswith(name) or opt.name[len(name):] not in ("", "a", "b", "c"):
            continue
        if opt.R == 3:
            match = condition.R3 == 3 and condition.r3 == opt.r
        else:
            match = condition.R2 == opt.R and condition.r2 == opt.r
        if not match:
            continue
        if _solutions(N, D, condition, opt.forced, 2 * condition.R * N):
            return opt.divisor, opt.forced
    return None


def _exponent(N: int, ex: ExponentData, three: _Option | None, two: _Option | None) -> int:
    d = 24 // ex.s
    if three is not None:
        d = math.lcm(d, three.divisor)
    if two is not None:
        div = two.divisor
        if two.name == "PROP21":
            # theta = (N - 1) * rho (mod 8) with rho even
            div = min(8, 2 * 2 ** valuation(N - 1, 2))
        d = math.lcm(d, div)
    e = 24 // math.gcd(24, d)
    if e % 2 and not ex.is_square:
        e *= 2
    assert ex.s % e == 0
    return e


class RealityClass(str, enum.Enum):
    RATIONAL = "rationalPoly"
    RATIONAL_AFTER_SQRT_D = "rationalAfterSqrtD"
    COMPLEX = "complexQuadratic"


def classify_reality(N: int, D: int, e: int, B: int) -> RealityClass:
    s = canonical_exponents(N).s
    ratio = s // e
    M = ratio * N
    if D % N == 0 and B % M == 0:
        return RealityClass.RATIONAL
    if (N % 8 != 1 and D % N == 0 and ratio % 2 == 0
            and B % (ratio // 2 * N) == 0 and B % M != 0):
        return RealityClass.RATIONAL_AFTER_SQRT_D
    return RealityClass.COMPLEX


@dataclass(frozen=True)
class InvariantChoice:
    N: int
    D: int
    e: int
    s: int
    condition: BCondition
    B: int
    level: int
    propositions: tuple[str, ...] = field(default=())

    @property
    def reality(self) -> RealityClass:
        return classify_reality(self.N, self.D, self.e, self.B)


def _best(N: int, D: int, ex: ExponentData):
    """Minimal-exponent combination of at most one 3-adic and one 2-adic option."""
    three, two = _options(N, D)
    best = None
    for t3, t2 in product([None] + three, [None] + two):
        e = _exponent(N, ex, t3, t2)
        used = tuple(o for o in (t2, t3) if o is not None)
        # options that do not lower the exponent are dropped
        if any(_exponent(N, ex, *(None if o is x else o for o in (t3, t2))) == e for x in used):
            continue
        cond = BCondition(
            r2=t2.r if t2 else 0, R2=t2.R if t2 else 1,
            r3=t3.r if t3 else 0, R3=t3.R if t3 else 1,
        )
        forced = sum((o.forced for o in used), ())
        if not _solutions(N, D, cond, forced, 2 * cond.R * N):
            continue
        key = (e, cond.R, cond.r, len(used))
        if best is None or key < best[0]:
            best = (key, e, cond, forced, tuple(o.name for o in used))
    return best


def select_invariant(N: int, D: int) -> InvariantChoice:
    ex = canonical_exponents(N)
    Discriminant.of(D)
    if admissible(D, N) is None:
        raise Inadmissible(N, D, local_obstruction(D, N))
    _, e, cond, forced, names = _best(N, D, ex)
    M = ex.s // e * N
    sols = _solutions(N, D, cond, forced, 2 * M)
    divisible = [B for B in sols if B % M == 0]
    B = (divisible or sols)[0]
    return InvariantChoice(N, D, e, ex.s, cond, B, M, names)


# --------------------------------------------------------------------------
# condition tables
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TableRow:
    condition: BCondition
    residues: tuple[int, ...]
    e: int
    propositions: tuple[str, ...]


def table_modulus(N: int) -> int:
    R = 3 if N % 3 != 1 else 1
    if N % 2 == 0:
        R *= 8 if is_square(N) else 4
    return 4 * R * N


@lru_cache(maxsize=None)
def generate_condition_table(N: int) -> tuple[int, tuple[TableRow, ...]]:
    """(L, rows): every admissible class of D mod L with its minimal exponent."""
    ex = canonical_exponents(N)
    L = table_modulus(N)
    groups: dict[tuple, list[int]] = {}
    for d0 in range(L):
        if d0 % 4 not in (0, 1):
            continue
        D = d0 - L
        if sqrt_mod(D, 4 * N) is None:
            continue
        _, e, cond, _, names = _best(N, D, ex)
        groups.setdefault((cond, e, names), []).append(d0)
    rows = [TableRow(c, tuple(res), e, names) for (c, e, names), res in groups.items()]
    rows.sort(key=lambda row: (-row.e, row.condition.R, row.condition.r, row.residues))
    return L, tuple(rows)
