"""Binary quadratic forms of negative discriminant and N-systems."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .numeric import context, factorize


@dataclass(frozen=True)
class Discriminant:
    """D = c^2 * Delta with Delta fundamental."""

    D: int
    fundamental: int
    conductor: int

    @classmethod
    def of(cls, D: int) -> Discriminant:
        if D >= 0 or D % 4 not in (0, 1):
            raise ValueError(f"{D} is not a negative discriminant")
        s, q = 1, 1
        for p, k in factorize(D).items():
            s *= p ** (k // 2)
            q *= p ** (k % 2)
        if -q % 4 == 1:
            return cls(D, -q, s)
        return cls(D, -4 * q, s // 2)

    @property
    def omega_is_half_sqrt(self) -> bool:
        """True when omega = sqrt(Delta/4), else omega = (1 + sqrt(Delta))/2."""
        return self.fundamental % 4 == 0

    def omega(self, prec: int):
        ctx = context(prec)
        root = ctx.mpc(0, ctx.sqrt(-self.fundamental))
        return root / 2 if self.omega_is_half_sqrt else (1 + root) / 2

    def sqrt(self, prec: int):
        ctx = context(prec)
        return ctx.mpc(0, ctx.sqrt(-self.D))


@dataclass(frozen=True)
class QuadForm:
    """The form A X^2 + B X Y + C Y^2."""

    A: int
    B: int
    C: int

    @property
    def discriminant(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def is_primitive(self) -> bool:
        return math.gcd(math.gcd(self.A, self.B), self.C) == 1

    def __call__(self, x: int, y: int) -> int:
        return self.A * x * x + self.B * x * y + self.C * y * y

    def transform(self, x: int, z: int, y: int, w: int) -> QuadForm:
        """Substitute (X, Y) -> (xX + zY, yX + wY)."""
        A, B, C = self.A, self.B, self.C
        return QuadForm(
            self(x, y),
            2 * A * x * z + B * (x * w + y * z) + 2 * C * y * w,
            self(z, w),
        )

    def translate(self, k: int) -> QuadForm:
        """Substitute X -> X + kY, which shifts B by 2Ak."""
        return self.transform(1, k, 0, 1)

    def inverse(self) -> QuadForm:
        return QuadForm(self.A, -self.B, self.C)

    def is_reduced(self) -> bool:
        A, B, C = self.A, self.B, self.C
        if not (abs(B) <= A <= C):
            return False
        return B >= 0 if (abs(B) == A or A == C) else True

    def __str__(self) -> str:
        return f"[{self.A},{self.B},{self.C}]"


def reduce(f: QuadForm) -> QuadForm:
    """The unique reduced form properly equivalent to f."""
    if f.discriminant >= 0 or f.A <= 0:
        raise ValueError(f"{f} is not positive definite")
    if not f.is_primitive():
        raise ValueError(f"{f} is not primitive")
    A, B, C = f.A, f.B, f.C
    while True:
        if not (-A < B <= A):
            k = (A - B) // (2 * A)
            C = A * k * k + B * k + C
            B = B + 2 * A * k
        if A > C:
            A, B, C = C, -B, A
            continue
        if A == C and B < 0:
            B = -B
        return QuadForm(A, B, C)


def class_representatives(D: int | Discriminant) -> list[QuadForm]:
    """Reduced primitive forms of discriminant D, principal form first."""
    D = D.D if isinstance(D, Discriminant) else Discriminant.of(D).D
    forms = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            f = QuadForm(a, b, c)
            if c >= a and f.is_reduced() and f.is_primitive():
                forms.append(f)
        a += 1
    forms.sort(key=lambda f: (f.A, abs(f.B), -f.B))
    return forms


def class_number(D: int) -> int:
    return len(class_representatives(D))


@dataclass(frozen=True)
class NSystem:
    level: int
    anchor: int
    forms: tuple[QuadForm, ...]

    def check(self) -> None:
        D = self.forms[0].discriminant
        for f in self.forms:
            if f.discriminant != D or f.A <= 0 or not f.is_primitive():
                raise AssertionError(f"bad form {f}")
            if math.gcd(f.A, self.level) != 1:
                raise AssertionError(f"{f}: A not prime to {self.level}")
            if (f.B - self.anchor) % (2 * self.level):
                raise AssertionError(f"{f}: B not = {self.anchor} mod {2 * self.level}")


class NSystemError(RuntimeError):
    pass


def _coprime_value(f: QuadForm, modulus: int, bound: int) -> tuple[int, int, int, int]:
    """Unimodular (x, z, y, w) with f(x, y) > 0 minimal and prime to modulus."""
    best = None
    for r in range(1, bound + 1):
        for x in range(-r, r + 1):
            for y in (-r, r) if abs(x) != r else range(-r, r + 1):
                if math.gcd(x, y) != 1:
                    continue
                val = f(x, y)
                if math.gcd(val, modulus) == 1 and (best is None or val < best[0]):
                    best = (val, x, y)
        if best is not None:
            break
    if best is None:
        raise NSystemError(f"no value of {f} prime to {modulus} within bound {bound}")
    _, x, y = best
    # complete (x, y) to a matrix of determinant 1: x*w - z*y = 1
    g, s, t = _ext_gcd(x, y)
    w, z = s, -t
    assert x * w - z * y == 1
    return x, z, y, w


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, s, t = _ext_gcd(b, a % b)
    return g, t, s - (a // b) * t


def n_system(D: int | Discriminant, level: int, anchor: int, bound: int = 64) -> NSystem:
    """Representatives of all classes with gcd(A, level) = 1 and B = anchor mod 2*level.

    The principal class is anchored as [1, anchor, (anchor^2 - D)/4].
    """
    D = D.D if isinstance(D, Discriminant) else Discriminant.of(D).D
    if (anchor * anchor - D) % 4:
        raise ValueError(f"anchor {anchor} has the wrong parity for D={D}")
    M = level
    forms = []
    for red in class_representatives(D):
        if red.A == 1:
            f = QuadForm(1, anchor, (anchor * anchor - D) // 4)
        else:
            x, z, y, w = _coprime_value(red, M, bound)
            g = red.transform(x, z, y, w)
            k = ((anchor - g.B) // 2 * pow(g.A, -1, M)) % M if M > 1 else 0
            g = g.translate(k)
            # keep B small inside its class modulo lcm(2A, 2M)
            span = 2 * g.A * M
            shift = -((g.B + g.A * M) // span)
            f = g.translate(shift * M)
        forms.append(f)
    system = NSystem(M, anchor, tuple(forms))
    system.check()
    return system


def root_of(f: QuadForm, prec: int):
    """(-B + sqrt(D)) / (2A) in the upper half plane."""
    ctx = context(prec)
    return ctx.mpc(-f.B, ctx.sqrt(-f.discriminant)) / (2 * f.A)
