"""Translation-invariant and period-two boundary laws for the hard-core model.

Translation-invariant laws are constant pairs (z1, z2) solving

    z_i = lambda * ((1 + z_i) / (z1 + z2)) ** k,    i = 1, 2.

Period-two laws alternate a diagonal pair between even and odd levels.
"""

from __future__ import annotations

import enum
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .gibbs import BoundaryLaw, ModelParams, Pair
from .padic import (
    Ball,
    HenselError,
    Kind,
    PadicNumber,
    PrecisionError,
    from_rational,
    hensel_lift,
    in_Ep,
    is_quadratic_residue,
    sqrt,
    sqrt_branch,
)

log = logging.getLogger(__name__)


class SolverError(RuntimeError):
    pass


class UnsolvableByMethod(SolverError):
    """The constructive method does not apply; says nothing about existence."""


class Precheck(enum.Enum):
    UNIQUE = "Unique"
    UNDETERMINED = "Undetermined"


class Verdict(enum.Enum):
    UNIQUE = "Unique"
    THREE_TI = "ThreeTI"
    UNKNOWN = "Unknown"


def uniqueness_precheck(p: int, k: int) -> Precheck:
    """Sufficient (not necessary) conditions for a unique TI measure."""
    if p == 2:
        return Precheck.UNIQUE if k % 4 == 0 else Precheck.UNDETERMINED
    return Precheck.UNIQUE if (k * k - 4) % p else Precheck.UNDETERMINED


def _require_k2_p_gt3(m: ModelParams) -> None:
    if m.k != 2 or m.p <= 3:
        raise ValueError(f"needs k = 2 and p > 3 (got k={m.k}, p={m.p})")


def wand_residuals(z1: PadicNumber, z2: PadicNumber, m: ModelParams) -> Pair:
    s = z1 + z2
    return (
        z1 - m.lam * ((1 + z1) / s) ** m.k,
        z2 - m.lam * ((1 + z2) / s) ** m.k,
    )


def diagonal_polynomial(m: ModelParams) -> list[PadicNumber]:
    """Coefficients (low to high) of 2^k t^(k+1) - lambda (1 + t)^k."""
    k = m.k
    coeffs = [-(m.lam * comb(k, j)) for j in range(k + 1)]
    coeffs.append(PadicNumber.from_int(2**k, m.p, m.prec))
    return coeffs


def solve_ti_diagonal(m: ModelParams, seed: int | PadicNumber = 1) -> PadicNumber:
    """The diagonal TI solution t* in E_p, by Newton lifting from t = 1."""
    try:
        t = hensel_lift(diagonal_polynomial(m), seed, p=m.p)
    except HenselError as exc:
        raise UnsolvableByMethod(f"diagonal root not liftable: {exc}") from exc
    if not in_Ep(t):
        raise UnsolvableByMethod("lifted diagonal root is not in E_p")
    return t


def solve_ti_offdiagonal(m: ModelParams) -> tuple[PadicNumber, PadicNumber] | None:
    """The pair (z+, z-) of off-diagonal TI solutions for k = 2, or None.

    Both (z+, z-) and (z-, z+) solve the fixed-point equations.
    """
    _require_k2_p_gt3(m)
    lam, p = m.lam, m.p
    s1 = sqrt_branch(lam, 1)
    s2 = sqrt_branch(lam + 8, 3)
    s = s1 * s2
    # z1 + z2 = (lam + s)/2 is the branch with |z1 + z2 - 2|_p < 1
    if not (((lam + s) / 2) - 2).valuation >= 1:
        raise SolverError("sum branch left the unit ball")
    d = 2 * (lam - 4 + s)
    if d.kind is Kind.EXACT_ZERO:
        return None
    if d.is_zero():
        raise PrecisionError("lambda too close to 1 to decide the off-diagonal branch")
    roots = sqrt(d)
    if roots is None:
        return None
    rd = roots[0]
    u = s1 + s2
    z_plus = u * (2 * s1 + rd) / 8
    z_minus = u * (2 * s1 - rd) / 8
    for z in (z_plus, z_minus):
        if not in_Ep(z):
            raise SolverError(f"off-diagonal root {z} is not in E_{p}")
    for r in wand_residuals(z_plus, z_minus, m):
        if not r.is_zero():
            raise SolverError(f"off-diagonal candidate has residual {r}")
    return z_plus, z_minus


def lambda_region_ti(lam: PadicNumber) -> bool:
    """lambda lies in some {x : |16x - 16 - 3a p^(2n)|_p < p^(-2n)}, a in M_p, n >= 1."""
    p = lam.p
    if p <= 3:
        raise ValueError("the region is defined for p > 3")
    d = 16 * lam - 16
    if d.kind is Kind.EXACT_ZERO:
        return False
    if d.is_zero():
        raise PrecisionError("lambda equals 1 to working precision")
    for n in range(1, d.val // 2 + 1):
        for a in range(1, p):
            if not is_quadratic_residue(a, p):
                continue
            ball = Ball(PadicNumber.from_int(3 * a * p ** (2 * n), p), Fraction(p) ** (-2 * n))
            if ball.contains(d):
                return True
    return False


def one_minus_lambda_is_square(lam: PadicNumber) -> bool:
    return sqrt(1 - lam) is not None


def sqrt_one_minus_lambda_region(lam: PadicNumber) -> bool:
    """Digit-pattern test for sqrt(1 - lambda) in Q_p.

    p odd: |x - 1 + a p^(2n)|_p < p^(-2n) for some a in M_p, n >= 1;
    p = 2: |x - 1 + 2^(2n)|_2 < 2^(-2n-2) for some n >= 1.
    """
    p = lam.p
    d = lam - 1
    if d.kind is Kind.EXACT_ZERO:
        raise ValueError("lambda = 1: 1 - lambda has no nonzero square root")
    if d.is_zero():
        raise PrecisionError("lambda equals 1 to working precision")
    for n in range(1, d.val // 2 + 1):
        if p == 2:
            ball = Ball(PadicNumber.from_int(-(4**n), 2), Fraction(2) ** (-2 * n - 2))
            if ball.contains(d):
                return True
            continue
        for a in range(1, p):
            if not is_quadratic_residue(a, p):
                continue
            ball = Ball(PadicNumber.from_int(-a * p ** (2 * n), p), Fraction(p) ** (-2 * n))
            if ball.contains(d):
                return True
    return False


@dataclass
class TIClassification:
    verdict: Verdict
    witnesses: list[Pair]
    precheck: Precheck
    region: bool | None = None
    note: str = ""


def classify_ti(m: ModelParams) -> TIClassification:
    """Unique diagonal law, or three TI laws when lambda is in the region (k=2, p>3)."""
    _require_k2_p_gt3(m)
    t = solve_ti_diagonal(m)
    witnesses: list[Pair] = [(t, t)]
    region = lambda_region_ti(m.lam)
    pair = solve_ti_offdiagonal(m)
    if region != (pair is not None):
        log.warning(
            "region predicate (%s) disagrees with direct squareness (%s); using the latter",
            region, pair is not None,
        )
    if pair is not None:
        witnesses += [pair, (pair[1], pair[0])]
    verdict = Verdict.THREE_TI if len(witnesses) == 3 else Verdict.UNIQUE
    return TIClassification(verdict, witnesses, uniqueness_precheck(m.p, m.k), region)


def classify(m: ModelParams) -> TIClassification:
    """classify_ti where it applies; otherwise the precheck plus a diagonal witness."""
    pre = uniqueness_precheck(m.p, m.k)
    if m.k == 2 and m.p > 3:
        return classify_ti(m)
    try:
        t = solve_ti_diagonal(m)
        witnesses: list[Pair] = [(t, t)]
        note = ""
    except UnsolvableByMethod as exc:
        witnesses, note = [], str(exc)
    verdict = Verdict.UNIQUE if pre is Precheck.UNIQUE else Verdict.UNKNOWN
    return TIClassification(verdict, witnesses, pre, None, note)


def periodic_map(z: PadicNumber, lam: PadicNumber) -> PadicNumber:
    """f(z) = lambda ((1 + z) / (2z))^2."""
    return lam * ((1 + z) / (2 * z)) ** 2


@dataclass
class PeriodicSolution:
    """Diagonal pairs (z+, z+) on even levels and (z-, z-) on odd levels."""

    z_plus: PadicNumber
    z_minus: PadicNumber
    lam: PadicNumber = field(repr=False)

    def law(self, gauge=None) -> BoundaryLaw:
        return BoundaryLaw.period_two(
            (self.z_plus, self.z_plus), (self.z_minus, self.z_minus), gauge=gauge
        )

    def swapped(self) -> PeriodicSolution:
        return PeriodicSolution(self.z_minus, self.z_plus, self.lam)

    def per_pairs(self) -> tuple[Pair, Pair]:
        return (self.z_plus, self.z_plus), (self.z_minus, self.z_minus)


def solve_periodic(m: ModelParams) -> PeriodicSolution | None:
    """Roots of lambda z^2 - 2(2 - lambda) z + lambda = 0, verified as a 2-cycle of f."""
    if m.k != 2:
        raise ValueError("period-two solutions are implemented for k = 2")
    lam = m.lam
    if (1 - lam).kind is Kind.EXACT_ZERO:
        return None
    region = sqrt_one_minus_lambda_region(lam)
    roots = sqrt(1 - lam)
    if region != (roots is not None):
        log.warning(
            "digit-pattern test (%s) disagrees with sqrt existence (%s); using the latter",
            region, roots is not None,
        )
    if roots is None:
        return None
    r = roots[0]
    z_plus = (2 - lam + 2 * r) / lam
    z_minus = (2 - lam - 2 * r) / lam
    for z in (z_plus, z_minus):
        if not in_Ep(z):
            raise SolverError(f"periodic root {z} is not in E_{m.p}")
    if not (periodic_map(z_plus, lam) == z_minus and periodic_map(z_minus, lam) == z_plus):
        raise SolverError("roots do not form a 2-cycle of f")
    if z_plus == z_minus:
        raise SolverError("periodic roots coincide (fixed point of f)")
    return PeriodicSolution(z_plus, z_minus, lam)


def F_map(z: Pair) -> Pair:
    """F_i(z) = (1 + z_i) / (z1 + z2)."""
    s = z[0] + z[1]
    return (1 + z[0]) / s, (1 + z[1]) / s


def F_inverse(w: Pair) -> Pair:
    """Solve (w1 - 1) z1 + w1 z2 = 1, w2 z1 + (w2 - 1) z2 = 1 by Cramer's rule."""
    w1, w2 = w
    det = 1 - w1 - w2
    if det.is_zero():
        raise ZeroDivisionError("singular system: w1 + w2 = 1")
    z1 = ((w2 - 1) - w1) / det
    z2 = ((w1 - 1) - w2) / det
    return z1, z2


def random_ep(p: int, rng: random.Random, prec: int) -> PadicNumber:
    """A random capped element of E_p."""
    shift = 2 if p == 2 else 1
    tail = rng.randrange(p ** (prec - shift))
    value = 1 + p**shift * tail
    return PadicNumber.from_int(value, p, prec).truncate(prec)


@dataclass
class InjectivityReport:
    p: int
    samples: int
    counterexamples: list[tuple[Pair, Pair]]
    inverse_failures: int

    @property
    def passed(self) -> bool:
        return not self.counterexamples and not self.inverse_failures


def F_injectivity_check(samples: int, p: int, seed: int = 0, prec: int = 64) -> InjectivityReport:
    """Random unequal z, t in E_p^2 must have F(z) != F(t); F is inverted on each sample."""
    rng = random.Random(seed)
    bad: list[tuple[Pair, Pair]] = []
    inverse_failures = 0
    for _ in range(samples):
        z = (random_ep(p, rng, prec), random_ep(p, rng, prec))
        t = (random_ep(p, rng, prec), random_ep(p, rng, prec))
        while t[0] == z[0] and t[1] == z[1]:
            t = (random_ep(p, rng, prec), random_ep(p, rng, prec))
        fz, ft = F_map(z), F_map(t)
        if fz[0] == ft[0] and fz[1] == ft[1]:
            bad.append((z, t))
        for orig, img in ((z, fz), (t, ft)):
            back = F_inverse(img)
            if not (back[0] == orig[0] and back[1] == orig[1]):
                inverse_failures += 1
    return InjectivityReport(p, samples, bad, inverse_failures)


@dataclass
class PerSystemReport:
    residuals: list[PadicNumber]
    max_residual_norm: Fraction
    inequality_norms: tuple[Fraction, Fraction]
    inequalities_hold: bool

    @property
    def passed(self) -> bool:
        return all(r.is_zero() for r in self.residuals) and self.inequalities_hold


def verify_per_system(sol: PeriodicSolution | tuple[Pair, Pair], m: ModelParams) -> PerSystemReport:
    """Substitute (z, t) into the four period-two equations and z_i != t_i."""
    z, t = sol.per_pairs() if isinstance(sol, PeriodicSolution) else sol
    lam, k = m.lam, m.k
    st, sz = t[0] + t[1], z[0] + z[1]
    residuals = [
        z[0] - lam * ((1 + t[0]) / st) ** k,
        z[1] - lam * ((1 + t[1]) / st) ** k,
        t[0] - lam * ((1 + z[0]) / sz) ** k,
        t[1] - lam * ((1 + z[1]) / sz) ** k,
    ]
    gaps = (z[0] - t[0], z[1] - t[1])
    return PerSystemReport(
        residuals,
        max(r.norm() for r in residuals),
        (gaps[0].norm(), gaps[1].norm()),
        not gaps[0].is_zero() and not gaps[1].is_zero(),
    )


def sample_lambdas(p: int, count: int, seed: int = 0, prec: int = 64) -> list[PadicNumber]:
    """lambda = 1 + p^j (c + p * tail), c a nonzero residue, j in 1..6 (2..7 for p = 2)."""
    rng = random.Random(seed)
    lo = 2 if p == 2 else 1
    out = []
    for i in range(count):
        j = lo + i % 6
        c = rng.randrange(1, p) if p > 2 else 1
        tail = rng.randrange(p**prec)
        value = 1 + p**j * (c + p * tail)
        out.append(PadicNumber.from_int(value, p, prec).truncate(prec))
    return out


def as_lambda(value: Fraction | int, p: int, prec: int = 64) -> PadicNumber:
    q = Fraction(value)
    return from_rational(q.numerator, q.denominator, p, prec)


def solutions_for_transition(m: ModelParams) -> tuple[list[Pair], list[PeriodicSolution]]:
    """TI witnesses and periodic solutions that the solvers can construct for m."""
    ti = classify(m).witnesses
    periodic: list[PeriodicSolution] = []
    if m.k == 2:
        sol = solve_periodic(m)
        if sol is not None:
            periodic.append(sol)
    return ti, periodic
