"""Acceptance suite: one verdict line per criterion (see the terminal summary).

Run directly with ``python3 tests/test_acceptance.py`` for the same lines
without pytest.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from fractions import Fraction

from acceptance_report import report
from oracles import brute_class_number, theta_instances

from weberinv.eta import (
    class_polynomial,
    epsilon_eta,
    eta,
    j_invariant,
    normalise,
    precision_estimate,
    weber_multiplier,
    weber_w,
)
from weberinv.invariants import generate_condition_table, select_invariant, theta
from weberinv.modular import (
    S_closed_form,
    S_of_N,
    comparison_table,
    degrees,
    modular_polynomial,
    psi,
)
from weberinv.numeric import context, factorize, kronecker, snap_root_of_unity, split_two
from weberinv.quadforms import QuadForm, class_number, n_system

# ---------------------------------------------------------------------------
# 1. known class polynomials; coefficients (x, y) = x + y*omega, leading first
# ---------------------------------------------------------------------------

KNOWN_POLYNOMIALS = [
    (5, -11, 2, ((1, 0), (-1, -1))),
    (7, -3, 2, ((1, 0), (1, -3))),
    (11, -39, 6, ((1, 0), (-73, 27), (-8914, 1656), (-139058, 7947), (1000693, -515016))),
    (3, -24, 12, ((1, 0), (-162, 0), (729, 0))),
    (6, -12, 24, ((1, 0), (186624, 0))),
    (6, -39, 6, ((1, 0), (-42, 3), (108, 486), (9072, -648), (-45198, 6561))),
    (4, -7, 1, ((1, 0), (0, -1))),
    (4, -128, 1, ((1, 0), (-4, -2), (0, 6), (8, -4), (-4, 0))),
    (16, -7, 1, ((1, 0), (-1, -1))),
    (9, -27, 1, ((1, 0), (-1, -1))),
    (21, -20, 2, ((1, 0), (-2, 4), (-19, -4))),
]


def test_criterion_1_known_polynomials():
    failures = []
    for N, D, e, expected in KNOWN_POLYNOMIALS:
        choice = select_invariant(N, D)
        poly = class_polynomial(choice)
        if choice.e != e or poly.coeffs != expected or not poly.residual < 0.01:
            failures.append(f"N={N} D={D}: e={choice.e} got {poly}")
    report(1, not failures, "; ".join(failures) or f"{len(KNOWN_POLYNOMIALS)} polynomials exact")
    assert not failures


# ---------------------------------------------------------------------------
# 2. sqrt(D) variants and reality
# ---------------------------------------------------------------------------

SQRT_D_CASES = [
    # (N, D, sqrt_d, expected); 6*sqrt(-51) = 12*omega - 6
    (2, -72, True, ((1, 0), (720, 0), (576, 0))),
    (3, -51, False, ((1, 0), (-6, 12), (-27, 0))),
    (3, -51, True, ((1, 0), (-306, 0), (1377, 0))),
]


def test_criterion_2_sqrt_d_suite():
    """Both anchors +-B are admissible witnesses (they give conjugate invariants)."""
    failures, notes = [], []
    for N, D, sqrt_d, expected in SQRT_D_CASES:
        choice = select_invariant(N, D)
        got = {}
        for anchor in (choice.B, -choice.B):
            got[anchor] = class_polynomial(choice, sqrt_d=sqrt_d, anchor=anchor)
        match = [b for b, p in got.items() if p.coeffs == expected]
        tag = f"{'sqrtD*' if sqrt_d else ''}w_{N}^{choice.e} D={D}"
        if match:
            notes.append(f"{tag} ok (B={match[0]})")
        else:
            failures.append(f"{tag}: got " + " | ".join(f"B={b}: {p}" for b, p in got.items()))
    report(2, not failures, "; ".join(failures + notes))
    assert not failures


# ---------------------------------------------------------------------------
# 3. condition tables
# ---------------------------------------------------------------------------

def _every(start: int, step: int, modulus: int) -> tuple[int, ...]:
    return tuple(range(start, modulus, step))


REFERENCE_TABLES = {
    3: (36, [
        ("0:1", (0, 12), 12),
        ("0:1", (9, 21), 6),
        ("1:3", (24,), 4),
        ("2:3", (4, 16, 28), 4),
        ("1:3", (33,), 2),
        ("2:3", (1, 13, 25), 2),
    ]),
    9: (108, [
        ("0:1", (9, 36), 3),
        ("1:3", (0, 45, 72, 81), 1),
        ("2:3", (1, 4, 13, 16, 25, 28, 37, 40, 49, 52, 61, 64, 73, 76, 85, 88, 97, 100), 1),
    ]),
    21: (252, [
        ("0:1", (0, 9, 21, 36, 57, 72, 81, 84, 93, 120, 144, 156, 165, 189, 225, 228), 6),
        ("1:3", (60, 105, 141, 168, 177, 204, 240, 249), 2),
        ("2:3", (1, 4, 16, 25, 28, 37, 49, 64, 85, 88, 100, 109, 112, 121, 133, 148,
                 169, 172, 184, 193, 196, 205, 217, 232), 2),
    ]),
    6: (288, [
        ("0:1", (0, 36, 96, 132, 144, 180, 240, 276), 24),
        ("1:2", (60, 252), 12),
        ("1:3", (48, 84, 192, 228), 8),
        ("2:3", (4, 16, 52, 64, 100, 112, 148, 160, 196, 208, 244, 256), 8),
        ("3:4", (24, 72, 168, 216), 6),
        ("1:4", (9, 33, 81, 105, 153, 177, 225, 249), 6),
        ("1:4", (108, 204), 6),
        ("1:2 ∩ 1:3", (156,), 4),
        ("1:2 ∩ 2:3", (28, 124, 220), 4),
        ("3:4 ∩ 1:3", (120, 264), 2),
        ("1:4 ∩ 1:3", (57, 129, 201, 273), 2),
        ("1:4 ∩ 1:3", (12,), 2),
        ("3:4 ∩ 2:3", (40, 88, 136, 184, 232, 280), 2),
        ("1:4 ∩ 2:3", (1, 25, 49, 73, 97, 121, 145, 169, 193, 217, 241, 265), 2),
        ("1:4 ∩ 2:3", (76, 172, 268), 2),
    ]),
    4: (128, [
        ("0:1", _every(4, 32, 128), 8),
        ("1:2", (16, 32, 80, 96), 4),
        ("3:4", _every(20, 32, 128), 2),
        ("1:4", (64,), 2),
        ("3:8", _every(1, 8, 128), 1),
        ("1:8", (0,), 1),
        ("5:8", _every(48, 64, 128), 1),
    ]),
    16: (512, [
        ("0:1", _every(16, 128, 512), 8),
        ("1:2", (64, 128, 320, 384), 4),
        ("3:4", _every(4, 32, 512), 2),
        ("1:4", (256,), 2),
        ("3:8", _every(1, 8, 512), 1),
        ("1:8", (0, 192, 448), 1),
        ("5:8", _every(80, 128, 512), 1),
    ]),
}


def test_criterion_3_condition_tables():
    failures = []
    for N, (modulus, expected) in REFERENCE_TABLES.items():
        L, rows = generate_condition_table(N)
        ours = Counter((r.condition.label(), tuple(sorted(r.residues)), r.e) for r in rows)
        theirs = Counter((c, tuple(sorted(res)), e) for c, res, e in expected)
        if L != modulus or ours != theirs:
            failures.append(f"N={N}: extra {dict(ours - theirs)} missing {dict(theirs - ours)}")
    report(3, not failures, "; ".join(failures) or f"tables for N in {sorted(REFERENCE_TABLES)} match")
    assert not failures


# ---------------------------------------------------------------------------
# 4. transformation certification
# ---------------------------------------------------------------------------

def random_gamma0(N: int, rng: random.Random):
    """Random [a, N*b0; c, d] of determinant 1."""
    while True:
        c = rng.randint(-40, 40)
        d = rng.randint(-40, 40)
        if c == 0:
            if abs(d) != 1:
                continue
            return d, N * rng.randint(-5, 5), 0, d
        if d == 0 or math.gcd(d, N * c) != 1:
            continue
        a = pow(d, -1, N * abs(c))
        b0 = (a * d - 1) // (N * c)
        assert a * d - N * b0 * c == 1
        return a, N * b0, c, d


def random_sl2(rng: random.Random):
    while True:
        c, d = rng.randint(-30, 30), rng.randint(-30, 30)
        if math.gcd(c, d) != 1:
            continue
        if c == 0:
            return d, rng.randint(-5, 5), 0, d
        a = pow(d, -1, abs(c)) if abs(c) > 1 else 0
        b = (a * d - 1) // c
        return a, b, c, d


def test_criterion_4_transformation_certification():
    rng = random.Random(20240404)
    prec = 128
    ctx = context(prec)
    worst, bad = 0.0, []
    for N in range(2, 17):
        for _ in range(100):
            a, b, c, d = random_gamma0(N, rng)
            z = ctx.mpc(rng.uniform(-0.5, 0.5), rng.uniform(0.4, 1.6))
            ratio = weber_w(N, 1, (a * z + b) / (c * z + d), prec) / weber_w(N, 1, z, prec)
            k, dist = snap_root_of_unity(ratio)
            worst = max(worst, dist)
            if dist >= 1e-10 or k != weber_multiplier(N, a, b, c, d).k:
                bad.append((N, (a, b, c, d), k, dist))
    for _ in range(300):
        a, b, c, d = random_sl2(rng)
        z = ctx.mpc(rng.uniform(-0.5, 0.5), rng.uniform(0.3, 1.6))
        a, b, c, d = normalise(a, b, c, d)
        ratio = eta((a * z + b) / (c * z + d), prec) / (ctx.sqrt(c * z + d) * eta(z, prec))
        k, dist = snap_root_of_unity(ratio)
        worst = max(worst, dist)
        if dist >= 1e-10 or k != epsilon_eta(a, b, c, d).k:
            bad.append(("eta", (a, b, c, d), k, dist))
    report(4, not bad, f"1500 Gamma^0(N) + 300 SL2 matrices, worst snap {worst:.1e}"
           + (f"; failures {bad[:3]}" if bad else ""))
    assert not bad


# ---------------------------------------------------------------------------
# 5. theta oracle
# ---------------------------------------------------------------------------

def test_criterion_5_theta_oracle():
    rng = random.Random(5)
    problems = []
    certified = 0
    hand = [theta(3, QuadForm(1, 9, 21), 7, 1), theta(3, QuadForm(1, 9, 21), 7, 2)]
    if hand != [-24, -552]:
        problems.append(f"hand instances gave {hand}")
    counts = {}
    for N in range(2, 17):
        inst = theta_instances(N, 200, rng)
        counts[N] = len(inst)
        if len(inst) < 200:
            problems.append(f"N={N}: only {len(inst)} instances")
        N1 = split_two(N)[1]
        for f, u, v, p in inst:
            up = u - v * f.B
            th = theta(N, f, u, v)
            mult = weber_multiplier(N, up, -v * f.C // p, v * f.A, u // p)
            sign = 12 if kronecker(up, N1) == -1 else 0
            if (th + sign) % 24 != mult.k:
                problems.append(f"N={N} {f} u={u} v={v}: theta={th} multiplier={mult.k}")
            choice = select_invariant(N, f.discriminant)
            if choice.condition.holds(N, f.discriminant, f.B):
                certified += 1
                if (choice.e * th) % 24:
                    problems.append(f"N={N} {f}: e={choice.e} theta={th}")
    report(5, not problems,
           f"{sum(counts.values())} instances, {certified} under the selected condition"
           + (f"; {problems[:3]}" if problems else ""))
    assert not problems
    assert certified > 0


# ---------------------------------------------------------------------------
# 6. degrees, S(N) and the comparison table
# ---------------------------------------------------------------------------

def _w(N, e=1):
    return ("w", N, e)


def _ww(p1, p2, e=1):
    return ("ww", p1, p2, e)


F = Fraction
REFERENCE_COMPARISON = [
    (_w(2), 72, 1), (_w(4), 48, 1), (_ww(2, 73), 37, 6), (_ww(2, 97), F(147, 4), 8),
    (_w(9), 36, 1), (_w(2, 2), 36, 1), (_w(16), 32, 6),
    (_w(25), 30, 1), (_ww(3, 13), 28, 2), (_w(49), 28, 2), (_w(81), 27, 12),
    (_w(121), F(132, 5), 5), (_w(169), 26, 7), (_w(289), F(51, 2), 12),
    (_ww(3, 37), F(76, 3), 6), (_w(361), F(76, 3), 15), (_ww(3, 61), F(124, 5), 10),
    (_ww(5, 7), 24, 2), (_w(2, 3), 24, 1), (_w(6, 2), 24, 6), (_w(4, 2), 24, 1),
    (_w(3, 2), 24, 1), (_ww(5, 13), 21, 4), (_ww(2, 13, 2), 21, 2), (_w(12, 2), F(144, 7), 14),
    (_ww(5, 19), 20, 6), (_ww(5, 31), F(96, 5), 10), (_ww(5, 37), 19, 12),
    (_ww(2, 37, 2), 19, 6), (_ww(7, 13), F(56, 3), 6), (_ww(2, 61, 2), F(93, 5), 10),
    (_ww(7, 17), 18, 8), (_w(15, 2), 18, 8), (_w(8, 2), 18, 8), (_w(2, 4), 18, 1),
    (_w(5, 2), 18, 1), (_w(10, 2), 18, 4), (_ww(11, 13), F(84, 5), 10), (_ww(3, 7, 2), 16, 2),
    (_w(35, 2), 16, 18), (_w(21, 2), 16, 6), (_w(40, 2), 16, 18),
    (_w(14, 2), 16, 18), (_w(16, 2), 16, 6), (_w(28, 2), 16, 12), (_w(7, 2), 16, 1),
    (_w(3, 3), 16, 1), (_w(6, 3), 16, 6), (_w(45, 2), F(108, 7), 14),
    (_ww(13, 13), F(91, 6), 12), (_w(55, 2), F(72, 5), 10), (_w(77, 2), F(72, 5), 20),
    (_w(22, 2), F(72, 5), 10), (_w(11, 2), F(72, 5), 5), (_w(33, 2), F(72, 5), 10),
    (_w(27, 2), F(72, 5), 15),
    (_w(91, 2), 14, 16), (_w(65, 2), 14, 18), (_w(13, 2), 14, 1), (_w(12, 3), F(96, 7), 14),
    (_ww(2, 17, 3), F(27, 2), 4), (_w(85, 2), F(27, 2), 8), (_w(34, 2), F(27, 2), 16),
    (_w(17, 2), F(27, 2), 4), (_ww(3, 19, 2), F(40, 3), 6), (_w(133, 2), F(40, 3), 12),
    (_w(57, 2), F(40, 3), 18), (_w(19, 2), F(40, 3), 3), (_w(23, 2), F(144, 11), 11),
]


def _closed_psi(N: int) -> int:
    f = factorize(N)
    if len(f) == 1:
        (l, n), = f.items()
        return l ** (n - 1) * (l + 1)
    p1, p2 = sorted(f)
    return (p1 + 1) * (p2 + 1)


def _closed_degJ(N: int, s: int) -> int:
    f = factorize(N)
    if len(f) == 2:
        p1, p2 = sorted(f)
        return s * (p2 - 1) * (p1 + 1) // 24
    (l, n), = f.items()
    if n == 1:
        return s * (l - 1) // 24
    if n == 2 and l > 3:
        return (l * l - 1) // 24
    return s * (N - 1 + S_closed_form(N)) // 24


def test_criterion_6_degrees_and_table():
    problems = []
    checked = 0
    for N in range(2, 201):
        f = factorize(N)
        if not (len(f) == 1 or (len(f) == 2 and all(k == 1 for k in f.values()))):
            continue
        checked += 1
        d = degrees(N)
        if d.psi != psi(N) or d.psi != _closed_psi(N):
            problems.append(f"psi({N})")
        if S_of_N(N) != S_closed_form(N):
            problems.append(f"S({N})")
        if d.degJ != _closed_degJ(N, d.s):
            problems.append(f"degJ({N}) = {d.degJ} vs {_closed_degJ(N, d.s)}")
    ours = Counter((h.descriptor, h.gain, h.degJ) for h in comparison_table())
    theirs = Counter((desc, F(g), dj) for desc, g, dj in REFERENCE_COMPARISON)
    if ours != theirs:
        problems.append(f"table extra {dict(ours - theirs)} missing {dict(theirs - ours)}")
    gains = [F(g) for _, g, _ in REFERENCE_COMPARISON]
    if gains != sorted(gains, reverse=True):
        problems.append("reference order not by decreasing gain")
    report(6, not problems,
           f"{checked} prime powers/semiprimes <= 200, {len(REFERENCE_COMPARISON)} table entries"
           + (f"; {problems[:3]}" if problems else ""))
    assert not problems


# ---------------------------------------------------------------------------
# 7. modular polynomials
# ---------------------------------------------------------------------------

def test_criterion_7_modular_polynomials():
    problems = []
    phi2 = modular_polynomial(2)
    expected = {(3, 0): 1, (2, 0): 48, (1, 0): 768, (1, 1): -1, (0, 0): 4096}
    if phi2.coeffs != expected:
        problems.append(f"Phi_2 = {phi2}")
    rng = random.Random(7)
    prec = 256
    ctx = context(prec)
    worst = 0.0
    for N in (3, 5, 6, 7):
        phi = modular_polynomial(N)
        d = degrees(N)
        if (phi.degree_F, phi.degree_J) != (d.psi, d.degJ):
            problems.append(f"N={N}: degrees {(phi.degree_F, phi.degree_J)} vs {(d.psi, d.degJ)}")
        for _ in range(10):
            z = ctx.mpc(rng.uniform(-0.5, 0.5), rng.uniform(0.9, 1.5))
            val = abs(phi(weber_w(N, d.s, z, prec), j_invariant(z, prec)))
            worst = max(worst, float(val))
            if not val < 1e-20:
                problems.append(f"N={N}: |Phi| = {float(val):.2e}")
    report(7, not problems, f"Phi_2 exact; N in 3,5,6,7 degrees ok, max |Phi| {worst:.1e}"
           + (f"; {problems[:3]}" if problems else ""))
    assert not problems


# ---------------------------------------------------------------------------
# 8. class numbers
# ---------------------------------------------------------------------------

def test_criterion_8_class_numbers():
    bad = [D for D in range(-3, -10000, -1)
           if D % 4 in (0, 1) and class_number(D) != brute_class_number(D)]
    report(8, not bad, "all D > -10^4 agree" if not bad else f"mismatch at {bad[:5]}")
    assert not bad


# ---------------------------------------------------------------------------
# 9. numerical identities and precision stability
# ---------------------------------------------------------------------------

def test_criterion_9_identities_and_stability():
    prec = 256
    ctx = context(prec)
    i = ctx.mpc(0, 1)
    err_j = float(abs(j_invariant(i, prec) - 1728))
    err_eta = float(abs(eta(2 * i, prec) - eta(i, prec) / ctx.power(2, ctx.mpf(3) / 8)))
    unstable = []
    for N, D, _, _ in KNOWN_POLYNOMIALS:
        choice = select_invariant(N, D)
        system = n_system(choice.D, choice.level, choice.B)
        base = precision_estimate(choice, system)
        if class_polynomial(choice, prec=base).coeffs != class_polynomial(choice, prec=base + 64).coeffs:
            unstable.append((N, D))
    ok = err_j < 1e-30 and err_eta < 1e-30 and not unstable
    report(9, ok, f"|j(i)-1728|={err_j:.1e}, eta(2i) err={err_eta:.1e}, +64 bits stable"
           + (f"; unstable {unstable}" if unstable else ""))
    assert ok


if __name__ == "__main__":
    import sys

    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
    sys.exit(0)
