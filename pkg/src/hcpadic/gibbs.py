"""Finite-volume p-adic Gibbs distributions of the three-state hard-core model.

A configuration sigma on the ball V_n gets the weight

    lambda ** #sigma * prod_{x in W_n} z_{sigma(x), x}

with z_{0,x} the gauge and z_{i,x} = gauge * z'_{i,x} / lambda.  The family
of normalised distributions is consistent exactly when the boundary law z'
solves the tree recursion at every vertex.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .padic import (
    GUARD_DIGITS,
    Kind,
    PadicNumber,
    PrecisionError,
    in_Ep,
    log_p,
)
from .tree import (
    DEFAULT_ENUMERATION_CAP,
    Configuration,
    TreeLayout,
    build_tree,
    is_admissible,
    iter_admissible_states,
)

Pair = tuple[PadicNumber, PadicNumber]


class NotInEp(ValueError):
    pass


class CompatibilityError(ValueError):
    """The boundary law does not solve the recursion where it is required to."""


class DegeneratePartitionFunction(ZeroDivisionError):
    pass


def ep_failure(x: PadicNumber) -> str | None:
    """Why x is not in E_p, or None if it is."""
    p = x.p
    if x.is_zero() or x.val != 0:
        return f"|x|_{p} != 1"
    try:
        ok = in_Ep(x)
    except PrecisionError:
        return "too few digits to decide membership"
    if not ok:
        return f"x != 1 mod {4 if p == 2 else p}"
    return None


def require_ep(x: PadicNumber, what: str = "value") -> PadicNumber:
    reason = ep_failure(x)
    if reason is not None:
        raise NotInEp(f"{what} is not in E_{x.p}: {reason}")
    return x


@dataclass(frozen=True)
class ModelParams:
    """Activity lambda (lambda_0 = 1, lambda_1 = lambda_2 = lambda) and tree order."""

    lam: PadicNumber
    k: int = 2

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        require_ep(self.lam, "lambda")

    @property
    def p(self) -> int:
        return self.lam.p

    @property
    def prec(self) -> int:
        return self.lam.prec


@dataclass(frozen=True)
class BoundaryLaw:
    """Assignment x -> (z'_1x, z'_2x) in E_p^2 with an optional gauge z_0x.

    ``form`` is "ti" (one pair everywhere), "period2" (``even`` on even
    levels, ``odd`` on odd levels) or "table" (one pair per vertex index).
    """

    form: str
    even: Pair | None = None
    odd: Pair | None = None
    table: tuple[Pair, ...] | None = None
    gauge: PadicNumber | tuple[PadicNumber, ...] | None = field(default=None)

    def __post_init__(self):
        if self.form not in ("ti", "period2", "table"):
            raise ValueError(f"unknown law form {self.form!r}")
        for pair in self._pairs():
            for z in pair:
                require_ep(z, "boundary value")
        gauges = self.gauge if isinstance(self.gauge, tuple) else (self.gauge,)
        for g in gauges:
            if g is not None:
                require_ep(g, "gauge")

    def _pairs(self) -> list[Pair]:
        if self.form == "ti":
            return [self.even]
        if self.form == "period2":
            return [self.even, self.odd]
        return list(self.table)

    @classmethod
    def translation_invariant(cls, z1: PadicNumber, z2: PadicNumber, gauge=None) -> BoundaryLaw:
        return cls("ti", even=(z1, z2), gauge=gauge)

    @classmethod
    def period_two(cls, even: Pair, odd: Pair, gauge=None) -> BoundaryLaw:
        return cls("period2", even=tuple(even), odd=tuple(odd), gauge=gauge)

    @classmethod
    def from_table(cls, pairs: Sequence[Pair], gauge=None) -> BoundaryLaw:
        return cls("table", table=tuple(tuple(pr) for pr in pairs), gauge=gauge)

    @property
    def p(self) -> int:
        return self._pairs()[0][0].p

    def max_depth(self, k: int) -> int | None:
        """Deepest tree on which the law is defined (None: every depth)."""
        if self.form != "table":
            return None
        n, size = 0, 1
        while True:
            nxt = size + (k + 1) * k**n
            if nxt > len(self.table):
                return n
            n, size = n + 1, nxt

    def z_prime(self, layout: TreeLayout, x: int) -> Pair:
        if self.form == "ti":
            return self.even
        if self.form == "period2":
            return self.even if layout.level[x] % 2 == 0 else self.odd
        if x >= len(self.table):
            raise IndexError(f"law table has no entry for vertex {x}")
        return self.table[x]

    def gauge_at(self, x: int) -> PadicNumber:
        if self.gauge is None:
            return PadicNumber.one(self.p, self._pairs()[0][0].prec)
        if isinstance(self.gauge, tuple):
            return self.gauge[x]
        return self.gauge

    def map_pairs(self, fn) -> BoundaryLaw:
        if self.form == "ti":
            return replace(self, even=fn(self.even))
        if self.form == "period2":
            return replace(self, even=fn(self.even), odd=fn(self.odd))
        return replace(self, table=tuple(fn(pr) for pr in self.table))

    def perturbed(self) -> BoundaryLaw:
        """Multiply every z'_1 by 1 + p (1 + 4 when p = 2), staying inside E_p."""
        f = 5 if self.p == 2 else 1 + self.p
        return self.map_pairs(lambda pr: (pr[0] * f, pr[1]))

    def swapped(self) -> BoundaryLaw:
        return self.map_pairs(lambda pr: (pr[1], pr[0]))


@dataclass(frozen=True)
class MeasureValue:
    value: PadicNumber
    n: int


def boundary_value(m: ModelParams, b: BoundaryLaw, layout: TreeLayout, x: int) -> Pair:
    """z'_x.

    A TI or period-two law only lives on the non-root vertices, which all have
    k children.  The root has k + 1 children, so its value is the one the
    recursion induces from them.
    """
    if x != 0 or b.form == "table":
        return b.z_prime(layout, x)
    c1, c2 = b.even if b.form == "ti" else b.odd
    s = c1 + c2
    return m.lam * ((1 + c1) / s) ** (m.k + 1), m.lam * ((1 + c2) / s) ** (m.k + 1)


def vertex_weights(m: ModelParams, b: BoundaryLaw, layout: TreeLayout, x: int):
    """(z_0x, z_1x, z_2x)."""
    g = b.gauge_at(x)
    z1, z2 = boundary_value(m, b, layout, x)
    return g, g * z1 / m.lam, g * z2 / m.lam


def hamiltonian(c: Configuration, m: ModelParams) -> PadicNumber:
    """sum_x log_p(lambda_sigma(x)) = #sigma * log_p(lambda)."""
    occupied = sum(1 for s in c.values if s >= 1)
    return log_p(m.lam) * occupied


def unnormalized_weight(c: Configuration, m: ModelParams, b: BoundaryLaw) -> PadicNumber:
    if not is_admissible(c):
        raise ValueError("configuration is not admissible")
    layout = c.layout
    occupied = sum(1 for s in c.values if s >= 1)
    w = m.lam**occupied
    for x in layout.sphere(layout.depth):
        w = w * vertex_weights(m, b, layout, x)[c.values[x]]
    return w


Weights = list[tuple[tuple[int | None, ...], PadicNumber]]


def _weights(m: ModelParams, b: BoundaryLaw, n: int, cap: int, include_root: bool) -> Weights:
    if not include_root and n < 1:
        raise ValueError("without the root the volumes start at n = 1")
    layout = build_tree(m.k, n)
    if b.form == "table" and b.max_depth(m.k) < n:
        raise IndexError(f"law table does not cover V_{n}")
    powers = _lam_powers(m, layout.size)
    boundary = list(layout.sphere(n))
    zs = {x: vertex_weights(m, b, layout, x) for x in boundary}
    out = []
    for states in iter_admissible_states(layout, cap=cap, include_root=include_root):
        w = powers[sum(1 for s in states if s)]
        for x in boundary:
            w = w * zs[x][states[x]]
        out.append((states, w))
    return out


def _lam_powers(m: ModelParams, count: int) -> list[PadicNumber]:
    out = [PadicNumber.one(m.p, m.prec)]
    for _ in range(count):
        out.append(out[-1] * m.lam)
    return out


def _sum(values, p: int) -> PadicNumber:
    total = PadicNumber.exact_zero(p)
    for v in values:
        total = total + v
    return total


def _normalize(weights: Weights, p: int, n: int) -> dict[tuple[int | None, ...], PadicNumber]:
    z = _sum((w for _, w in weights), p)
    if z.is_zero():
        raise DegeneratePartitionFunction(f"Z_{n} is {z}")
    return {s: w / z for s, w in weights}


def partition_function(
    m: ModelParams,
    b: BoundaryLaw,
    n: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
    include_root: bool = True,
) -> PadicNumber:
    z = _sum((w for _, w in _weights(m, b, n, cap, include_root)), m.p)
    if z.is_zero():
        raise DegeneratePartitionFunction(f"Z_{n} is {z}")
    return z


def measures(
    m: ModelParams,
    b: BoundaryLaw,
    n: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
    include_root: bool = True,
) -> dict[tuple[int | None, ...], PadicNumber]:
    """mu^(n)(sigma) for every admissible sigma on V_n."""
    return _normalize(_weights(m, b, n, cap, include_root), m.p, n)


def measure(
    c: Configuration, m: ModelParams, b: BoundaryLaw, cap: int = DEFAULT_ENUMERATION_CAP
) -> MeasureValue:
    if not is_admissible(c):
        raise ValueError("configuration is not admissible")
    n = c.layout.depth
    z = partition_function(m, b, n, cap)
    return MeasureValue(unnormalized_weight(c, m, b) / z, n)


def _within(defect: PadicNumber, scale: Fraction, tol_digits: int) -> bool:
    if not defect.is_zero():
        return False
    return defect.norm() <= scale * Fraction(defect.p) ** (-tol_digits)


@dataclass
class ConsistencyReport:
    n: int
    checked: int
    max_defect_norm: Fraction
    max_is_bound: bool
    all_zero: bool
    tolerance: Fraction
    passed: bool


def check_consistency(
    m: ModelParams,
    b: BoundaryLaw,
    n: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
    tol_digits: int | None = None,
    include_root: bool = True,
) -> ConsistencyReport:
    """Marginalise mu^(n) over W_n and compare with mu^(n-1).

    A defect passes when it is zero to precision with bound at most
    p**-tol_digits times max|mu^(n-1)|_p / min(1, |Z_n|_p).
    """
    if n < (1 if include_root else 2):
        raise ValueError("consistency needs two volumes")
    if tol_digits is None:
        tol_digits = m.prec - GUARD_DIGITS
    fine_w = _weights(m, b, n, cap, include_root)
    fine = _normalize(fine_w, m.p, n)
    coarse = measures(m, b, n - 1, cap, include_root)
    z_n = _sum((w for _, w in fine_w), m.p)
    prefix = len(next(iter(coarse)))
    marg: dict[tuple[int | None, ...], PadicNumber] = {}
    for s, mu in fine.items():
        key = s[:prefix]
        marg[key] = marg[key] + mu if key in marg else mu
    # normalising by Z_n costs v_p(Z_n) digits once more on top of |mu|
    scale = max(mu.norm() for mu in coarse.values()) * max(Fraction(1), 1 / z_n.norm())
    worst, worst_bound, all_zero, passed = Fraction(0), False, True, True
    for s, mu in coarse.items():
        d = marg.get(s, PadicNumber.exact_zero(m.p)) - mu
        nrm, bound = d.norm_bound()
        all_zero &= d.is_zero()
        passed &= _within(d, scale, tol_digits)
        if nrm > worst or (nrm == worst and not bound):
            worst, worst_bound = nrm, bound
    tol = scale * Fraction(m.p) ** (-tol_digits)
    return ConsistencyReport(n, len(coarse), worst, worst_bound, all_zero, tol, passed)


def recursion_residual(
    m: ModelParams, b: BoundaryLaw, layout: TreeLayout, x: int, i: int
) -> PadicNumber:
    """z'_ix - lambda * prod_{y in S(x)} (1 + z'_iy) / (z'_1y + z'_2y)."""
    rhs = m.lam
    for y in layout.children[x]:
        z1, z2 = boundary_value(m, b, layout, y)
        denom = z1 + z2
        if denom.is_zero():
            raise ZeroDivisionError(f"z'_1 + z'_2 vanishes at vertex {y}")
        rhs = rhs * ((1 + (z1, z2)[i - 1]) / denom)
    return boundary_value(m, b, layout, x)[i - 1] - rhs


@dataclass
class CompatibilityReport:
    depth: int
    vertices: int
    max_residual_norm: Fraction
    all_zero: bool
    exact: bool
    passed: bool


def verify_compatibility(
    b: BoundaryLaw, m: ModelParams, depth: int, tol_digits: int | None = None
) -> CompatibilityReport:
    """Residuals of the recursion at every vertex of V_{depth-1}."""
    if tol_digits is None:
        tol_digits = m.prec - GUARD_DIGITS
    layout = build_tree(m.k, depth)
    worst, all_zero, exact, passed, count = Fraction(0), True, True, True, 0
    for x in range(layout.offsets[depth] if depth >= 1 else 0):
        count += 1
        for i in (1, 2):
            r = recursion_residual(m, b, layout, x, i)
            worst = max(worst, r.norm())
            all_zero &= r.is_zero()
            exact &= r.kind is Kind.EXACT_ZERO
            passed &= _within(r, Fraction(1), tol_digits)
    return CompatibilityReport(depth, count, worst, all_zero, exact, passed)


def local_factor(
    b: BoundaryLaw, m: ModelParams, layout: TreeLayout, x: int, tol_digits: int | None = None
) -> PadicNumber:
    """a_z(x) = prod_{y in S(x)} z_0y (z'_1y + z'_2y) / z_0x."""
    if tol_digits is None:
        tol_digits = m.prec - GUARD_DIGITS
    for i in (1, 2):
        r = recursion_residual(m, b, layout, x, i)
        if not _within(r, Fraction(1), tol_digits):
            raise CompatibilityError(f"recursion residual {r} at vertex {x}")
    a = PadicNumber.one(m.p, m.prec)
    for y in layout.children[x]:
        z1, z2 = boundary_value(m, b, layout, y)
        a = a * b.gauge_at(y) * (z1 + z2)
    return a / b.gauge_at(x)


@dataclass
class RecursionReport:
    n: int
    z_next: PadicNumber
    product: PadicNumber
    difference_norm: Fraction
    passed: bool


def verify_partition_recursion(
    m: ModelParams,
    b: BoundaryLaw,
    n: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
    tol_digits: int | None = None,
    include_root: bool = True,
) -> RecursionReport:
    """Z_{n+1} by enumeration against A_n * Z_n with A_n = prod_{x in W_n} a_z(x)."""
    if tol_digits is None:
        tol_digits = m.prec - GUARD_DIGITS
    z_next = partition_function(m, b, n + 1, cap, include_root)
    z_n = partition_function(m, b, n, cap, include_root)
    layout = build_tree(m.k, n + 1)
    a_n = PadicNumber.one(m.p, m.prec)
    for x in layout.sphere(n):
        a_n = a_n * local_factor(b, m, layout, x, tol_digits)
    product = a_n * z_n
    diff = z_next - product
    # every weight is a product of units, so the absolute scale is 1
    return RecursionReport(n, z_next, product, diff.norm(), _within(diff, Fraction(1), tol_digits))


@dataclass
class BoundednessReport:
    n: int
    znorm: Fraction
    munorm: Fraction
    bounded: bool
    closed_form_znorm: Fraction
    closed_form_munorm: Fraction
    matches_closed_form: bool


def closed_form_norms(
    p: int, k: int, n: int, include_root: bool = True
) -> tuple[Fraction, Fraction]:
    """(|Z_n|_p, |mu^(n)(sigma)|_p) as 1 for p != 2 and 2^(-k|V_(n-1)|) for p = 2."""
    if p != 2:
        return Fraction(1), Fraction(1)
    ball = sum((k + 1) * k ** (j - 1) for j in range(1, n))
    if include_root and n >= 1:
        ball += 1
    return Fraction(1, 2 ** (k * ball)), Fraction(2 ** (k * ball))


def boundedness_norms(
    m: ModelParams,
    b: BoundaryLaw,
    n: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
    include_root: bool = True,
) -> BoundednessReport:
    """|Z_n|_p and the common |mu^(n)(sigma)|_p.

    Within the enumeration cap every measure value is computed.  Beyond it
    Z_n is assembled from the smallest volume and the local factors a_z(x).
    """
    layout = build_tree(m.k, n)
    if layout.size - (0 if include_root else 1) <= cap:
        weights = _weights(m, b, n, cap, include_root)
        z = _sum((w for _, w in weights), m.p)
        norms = {mu.norm() for mu in _normalize(weights, m.p, n).values()}
        if len(norms) != 1:
            raise CompatibilityError(f"measure norms are not common: {sorted(norms)}")
        munorm = norms.pop()
    else:
        if include_root:
            z = partition_function(m, b, 0, cap)
            start = 0
        else:
            z = partition_function(m, b, 1, cap, include_root=False)
            start = 1
        for x in range(start, layout.offsets[n]):
            if start == 1 and layout.level[x] == 0:
                continue
            z = z * local_factor(b, m, layout, x)
        munorm = 1 / z.norm()
    zn = z.norm()
    cz, cm = closed_form_norms(m.p, m.k, n, include_root)
    return BoundednessReport(n, zn, munorm, m.p != 2, cz, cm, zn == cz and munorm == cm)


class Transition(enum.Enum):
    NONE = "none"
    QUASI = "quasi"


def count_measures(ti_solutions: Sequence, periodic_solutions: Sequence) -> int:
    """Each periodic solution contributes itself and its sublattice swap."""
    return len(ti_solutions) + 2 * len(periodic_solutions)


def detect_transition(
    m: ModelParams, ti_solutions: Sequence, periodic_solutions: Sequence
) -> Transition:
    """Quasi when at least two bounded Gibbs measures exist.

    Every measure of the model has the same norm profile, so a (strong) phase
    transition between a bounded and an unbounded measure never occurs.
    """
    if m.p == 2:
        return Transition.NONE
    if count_measures(ti_solutions, periodic_solutions) >= 2:
        return Transition.QUASI
    return Transition.NONE
