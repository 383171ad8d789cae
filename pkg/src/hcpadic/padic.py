"""Capped relative precision p-adic numbers.

A nonzero value is stored as ``unit * p**val`` where the unit is known modulo
``p**prec``.  Values built from integers (or rationals whose denominator is a
power of p) are *exact*: their unit is an ordinary integer and carries no
error.  ``prec`` on an exact value is only the working precision it falls back
to once an operation makes the result inexact.

Two kinds of zero are kept apart.  An exact zero is the number 0.  A
zero-to-precision ``O(p**A)`` is any value whose known digits all cancelled;
its ``val`` field holds the absolute bound ``A``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

DEFAULT_PRECISION = 64
GUARD_DIGITS = 8


class PadicError(ArithmeticError):
    pass


class PrecisionError(PadicError):
    """The operands do not carry enough digits to decide the answer."""


class DomainError(PadicError, ValueError):
    """Argument lies outside the domain of the function."""


class HenselError(PadicError):
    pass


class Kind(enum.Enum):
    EXACT_ZERO = "exact-zero"
    NONZERO = "nonzero"
    ZERO_TO_PRECISION = "zero-to-precision"


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _split(n: int, p: int) -> tuple[int, int]:
    v = valuation(n, p)
    return v, n // p**v


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


Coercible = Union["PadicNumber", int, Fraction]


@dataclass(frozen=True, eq=False)
class PadicNumber:
    p: int
    val: int
    unit: int
    prec: int
    exact: bool = False

    def __post_init__(self):
        if self.prec < 0:
            raise ValueError("negative precision")
        if self.unit != 0:
            if self.unit % self.p == 0:
                raise ValueError("unit divisible by p")
            if not self.exact and not 0 < self.unit < self.p**self.prec:
                raise ValueError("unit not reduced modulo p**prec")

    # -- construction -----------------------------------------------------

    @classmethod
    def exact_zero(cls, p: int, prec: int = DEFAULT_PRECISION) -> PadicNumber:
        return cls(p, 0, 0, prec, True)

    @classmethod
    def zero_to(cls, p: int, absprec: int, prec: int = DEFAULT_PRECISION) -> PadicNumber:
        """The indistinct value O(p**absprec)."""
        return cls(p, absprec, 0, prec, False)

    @classmethod
    def one(cls, p: int, prec: int = DEFAULT_PRECISION) -> PadicNumber:
        return cls(p, 0, 1, prec, True)

    @classmethod
    def from_int(cls, n: int, p: int, prec: int = DEFAULT_PRECISION) -> PadicNumber:
        if n == 0:
            return cls.exact_zero(p, prec)
        v, u = _split(n, p)
        return cls(p, v, u, prec, True)

    @classmethod
    def from_digits(
        cls, digits: Sequence[int], val: int, p: int, prec: int | None = None
    ) -> PadicNumber:
        """Capped value ``p**val * sum(d_j p**j)`` known to ``len(digits)`` digits.

        Leading zero digits move into the valuation and cost precision.
        """
        if any(not 0 <= d < p for d in digits):
            raise ValueError(f"digits must lie in [0, {p - 1}]")
        n = len(digits)
        if prec is None:
            prec = n
        u = sum(d * p**j for j, d in enumerate(digits))
        if u == 0:
            return cls.zero_to(p, val + n, prec)
        w, u = _split(u, p)
        return cls(p, val + w, u, n - w)

    def _coerce(self, other: Coercible) -> PadicNumber:
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise PadicError(f"prime mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, int):
            return PadicNumber.from_int(other, self.p, self.prec)
        if isinstance(other, Fraction):
            return from_rational(other.numerator, other.denominator, self.p, self.prec)
        return NotImplemented

    # -- inspection -------------------------------------------------------

    @property
    def kind(self) -> Kind:
        if self.unit != 0:
            return Kind.NONZERO
        return Kind.EXACT_ZERO if self.exact else Kind.ZERO_TO_PRECISION

    def is_zero(self) -> bool:
        """True for exact zero and for values indistinguishable from zero."""
        return self.unit == 0

    @property
    def abs_prec(self) -> int | None:
        """Absolute precision: the value is known modulo p**abs_prec (None if exact)."""
        if self.exact:
            return None
        if self.unit == 0:
            return self.val
        return self.val + self.prec

    @property
    def valuation(self) -> float | int:
        if self.unit == 0:
            return math.inf if self.exact else self.val
        return self.val

    def norm(self) -> Fraction:
        """|x|_p.  For a zero-to-precision value this is the upper bound p**-A."""
        if self.kind is Kind.EXACT_ZERO:
            return Fraction(0)
        return Fraction(self.p) ** (-self.val)

    def norm_bound(self) -> tuple[Fraction, bool]:
        """(norm, is_upper_bound)."""
        return self.norm(), self.kind is Kind.ZERO_TO_PRECISION

    def digits(self) -> list[int]:
        """Canonical digits x_0, x_1, ... of the unit, ``prec`` of them."""
        if self.unit == 0:
            return []
        u = self.unit % self.p**self.prec
        out = []
        for _ in range(self.prec):
            u, d = divmod(u, self.p)
            out.append(d)
        return out

    def residue(self, k: int = 1) -> int:
        """The integral value modulo p**k (requires |x|_p <= 1)."""
        if self.unit == 0:
            if not self.exact and self.val < k:
                raise PrecisionError(f"value O({self.p}^{self.val}) unknown modulo {self.p}^{k}")
            return 0
        if self.val < 0:
            raise DomainError("value is not a p-adic integer")
        if self.val >= k:
            return 0
        if not self.exact and self.val + self.prec < k:
            raise PrecisionError(f"only {self.val + self.prec} digits known, need {k}")
        return (self.unit * self.p**self.val) % self.p**k

    def to_fraction(self) -> Fraction:
        """Exact value; for a capped number the rational ``unit * p**val``."""
        if self.unit == 0:
            return Fraction(0)
        return self.unit * Fraction(self.p) ** self.val

    # -- precision handling -------------------------------------------------

    def with_abs_prec(self, absprec: int | None) -> PadicNumber:
        """Forget every digit at or beyond p**absprec."""
        if absprec is None:
            return self
        if self.unit == 0:
            bound = absprec if self.exact else min(self.val, absprec)
            return PadicNumber.zero_to(self.p, bound, self.prec)
        rel = min(absprec - self.val, self.prec)
        if rel <= 0:
            return PadicNumber.zero_to(self.p, absprec, self.prec)
        return PadicNumber(self.p, self.val, self.unit % self.p**rel, rel)

    def truncate(self, prec: int) -> PadicNumber:
        """Reduce relative precision to at most ``prec`` digits."""
        if self.unit == 0:
            if self.exact:
                return self
            return PadicNumber(self.p, self.val, 0, min(self.prec, prec))
        rel = prec if self.exact else min(prec, self.prec)
        return PadicNumber(self.p, self.val, self.unit % self.p**rel, rel)

    # -- arithmetic -----------------------------------------------------------

    def __neg__(self) -> PadicNumber:
        if self.unit == 0:
            return self
        if self.exact:
            return PadicNumber(self.p, self.val, -self.unit, self.prec, True)
        return PadicNumber(self.p, self.val, (-self.unit) % self.p**self.prec, self.prec)

    def __add__(self, other: Coercible) -> PadicNumber:
        y = self._coerce(other)
        if y is NotImplemented:
            return NotImplemented
        x, p = self, self.p
        if x.kind is Kind.EXACT_ZERO:
            return y
        if y.kind is Kind.EXACT_ZERO:
            return x
        cap = max(x.prec, y.prec)
        ax, ay = x.abs_prec, y.abs_prec
        if x.unit == 0 and y.unit == 0:
            return PadicNumber.zero_to(p, min(ax, ay), cap)
        if x.unit == 0:
            return y.with_abs_prec(ax)
        if y.unit == 0:
            return x.with_abs_prec(ay)
        v = min(x.val, y.val)
        s = x.unit * p ** (x.val - v) + y.unit * p ** (y.val - v)
        if ax is None and ay is None:
            if s == 0:
                return PadicNumber.exact_zero(p, cap)
            w, s = _split(s, p)
            return PadicNumber(p, v + w, s, cap, True)
        A = min(a for a in (ax, ay) if a is not None)
        if A <= v:
            return PadicNumber.zero_to(p, A, cap)
        s %= p ** (A - v)
        if s == 0:
            return PadicNumber.zero_to(p, A, cap)
        w, s = _split(s, p)
        rel = min(A - v - w, cap)
        return PadicNumber(p, v + w, s % p**rel, rel)

    __radd__ = __add__

    def __sub__(self, other: Coercible) -> PadicNumber:
        y = self._coerce(other)
        if y is NotImplemented:
            return NotImplemented
        return self + (-y)

    def __rsub__(self, other: Coercible) -> PadicNumber:
        y = self._coerce(other)
        if y is NotImplemented:
            return NotImplemented
        return y + (-self)

    def __mul__(self, other: Coercible) -> PadicNumber:
        y = self._coerce(other)
        if y is NotImplemented:
            return NotImplemented
        x, p = self, self.p
        if x.kind is Kind.EXACT_ZERO or y.kind is Kind.EXACT_ZERO:
            return PadicNumber.exact_zero(p, min(x.prec, y.prec))
        if x.unit == 0 or y.unit == 0:
            # O(p^A) times something of valuation v is O(p^(A+v))
            return PadicNumber.zero_to(p, x.val + y.val, max(x.prec, y.prec))
        v = x.val + y.val
        if x.exact and y.exact:
            return PadicNumber(p, v, x.unit * y.unit, min(x.prec, y.prec), True)
        rel = min(n.prec for n in (x, y) if not n.exact)
        return PadicNumber(p, v, (x.unit * y.unit) % p**rel, rel)

    __rmul__ = __mul__

    def __truediv__(self, other: Coercible) -> PadicNumber:
        y = self._coerce(other)
        if y is NotImplemented:
            return NotImplemented
        x, p = self, self.p
        if y.unit == 0:
            raise ZeroDivisionError("division by a p-adic zero")
        if x.kind is Kind.EXACT_ZERO:
            return x
        if x.unit == 0:
            return PadicNumber.zero_to(p, x.val - y.val, x.prec)
        v = x.val - y.val
        if x.exact and y.exact:
            q, r = divmod(x.unit, y.unit)
            if r == 0:
                return PadicNumber(p, v, q, min(x.prec, y.prec), True)
            rel = min(x.prec, y.prec)
        else:
            rel = min(n.prec for n in (x, y) if not n.exact)
        mod = p**rel
        return PadicNumber(p, v, (x.unit * pow(y.unit, -1, mod)) % mod, rel)

    def __rtruediv__(self, other: Coercible) -> PadicNumber:
        y = self._coerce(other)
        if y is NotImplemented:
            return NotImplemented
        return y / self

    def __pow__(self, e: int) -> PadicNumber:
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return PadicNumber.one(self.p, self.prec) / self**-e
        result = PadicNumber.one(self.p, self.prec)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        """Equality to the precision both operands carry."""
        if not isinstance(other, (PadicNumber, int, Fraction)):
            return NotImplemented
        try:
            return (self - other).is_zero()
        except PadicError:
            return False

    __hash__ = None  # type: ignore[assignment]

    def same_as(self, other: PadicNumber) -> bool:
        """Structural identity (same digits, valuation, precision and kind)."""
        return (
            self.p == other.p
            and self.kind is other.kind
            and self.exact == other.exact
            and (self.kind is Kind.EXACT_ZERO or self.val == other.val)
            and (self.unit == 0 or (self.exact and self.unit == other.unit) or
                 (not self.exact and self.prec == other.prec and self.unit == other.unit))
        )

    def __repr__(self) -> str:
        k = self.kind
        if k is Kind.EXACT_ZERO:
            return f"PadicNumber(0, p={self.p})"
        if k is Kind.ZERO_TO_PRECISION:
            return f"PadicNumber(O({self.p}^{self.val}))"
        if self.exact:
            return f"PadicNumber({self.unit}*{self.p}^{self.val}, exact)"
        return f"PadicNumber({self.unit}*{self.p}^{self.val} + O({self.p}^{self.val + self.prec}))"

    def __str__(self) -> str:
        k = self.kind
        if k is Kind.EXACT_ZERO:
            return "0"
        if k is Kind.ZERO_TO_PRECISION:
            return f"O({self.p}^{self.val})"
        if self.exact:
            return str(self.to_fraction())
        shown = self.digits()[:12]
        body = " ".join(str(d) for d in shown)
        more = " ..." if self.prec > len(shown) else ""
        return f"{self.p}^{self.val} * [{body}{more}] + O({self.p}^{self.val + self.prec})"

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        k = self.kind
        out = {
            "p": self.p,
            "kind": k.value,
            "valuation": None if k is Kind.EXACT_ZERO else self.val,
            "digits": self.digits(),
            "precision": self.prec,
            "exact": self.exact,
        }
        if self.exact and self.unit:
            out["unit"] = self.unit
        return out

    @classmethod
    def from_json(cls, data: dict) -> PadicNumber:
        p, prec = int(data["p"]), int(data["precision"])
        kind = Kind(data.get("kind", "nonzero"))
        if kind is Kind.EXACT_ZERO:
            return cls.exact_zero(p, prec)
        if kind is Kind.ZERO_TO_PRECISION:
            return cls.zero_to(p, int(data["valuation"]), prec)
        if data.get("exact"):
            return cls(p, int(data["valuation"]), int(data["unit"]), prec, True)
        return cls.from_digits([int(d) for d in data["digits"]], int(data["valuation"]), p)


# -- module level operations ------------------------------------------------


def from_rational(num: int, den: int, p: int, prec: int = DEFAULT_PRECISION) -> PadicNumber:
    """num/den in Q_p to ``prec`` relative digits.

    Exact when den is (up to sign) a power of p.
    """
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    if prec < 1:
        raise ValueError("precision must be positive")
    q = Fraction(num, den)
    if q == 0:
        return PadicNumber.exact_zero(p, prec)
    vn, n = _split(q.numerator, p)
    vd, d = _split(q.denominator, p)
    if d == 1:
        return PadicNumber(p, vn - vd, n, prec, True)
    mod = p**prec
    return PadicNumber(p, vn - vd, (n * pow(d, -1, mod)) % mod, prec)


def parse_rational(text: str) -> Fraction:
    """Parse "n/d" or "n"."""
    text = text.strip()
    if "/" in text:
        a, b = text.split("/", 1)
        return Fraction(int(a), int(b))
    return Fraction(int(text))


def norm(x: PadicNumber) -> Fraction:
    return x.norm()


def is_quadratic_residue(a: int, p: int) -> bool:
    """Euler's criterion for an odd prime p."""
    if p == 2:
        raise ValueError("p must be odd")
    if a % p == 0:
        raise ValueError(f"{p} divides {a}")
    return pow(a, (p - 1) // 2, p) == 1


def tonelli_shanks(a: int, p: int) -> int | None:
    """A square root of a modulo the odd prime p, or None."""
    a %= p
    if a == 0:
        return 0
    if not is_quadratic_residue(a, p):
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    if s == 1:
        return pow(a, (p + 1) // 4, p)
    z = 2
    while is_quadratic_residue(z, p):
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


def _sqrt_unit_odd(u: int, p: int, prec: int) -> int | None:
    r = tonelli_shanks(u, p)
    if r is None:
        return None
    k = 1
    while k < prec:
        k = min(2 * k, prec)
        mod = p**k
        # Newton step r <- (r + u/r) / 2
        r = (r + u * pow(r, -1, mod)) * pow(2, -1, mod) % mod
    return r


def _sqrt_unit_two(u: int, prec: int) -> int | None:
    if u % 8 != 1:
        return None
    r = 1
    for k in range(3, prec):
        if (r * r - u) % 2 ** (k + 1):
            r += 2 ** (k - 1)
    return r % 2 ** max(prec - 1, 1)


def sqrt(a: PadicNumber) -> tuple[PadicNumber, PadicNumber] | None:
    """Both square roots (r, -r) of a, or None when a is not a square in Q_p."""
    p = a.p
    if a.kind is Kind.EXACT_ZERO:
        return a, a
    if a.kind is Kind.ZERO_TO_PRECISION:
        raise PrecisionError("cannot take the square root of an indistinct zero")
    if a.val % 2:
        return None
    half = a.val // 2
    if a.exact and a.unit > 0:
        r = math.isqrt(a.unit)
        if r * r == a.unit:
            root = PadicNumber(p, half, r, a.prec, True)
            return root, -root
    u = a.unit
    if a.exact:
        prec = a.prec
        u %= p**prec
    else:
        prec = a.prec
    if p == 2:
        if prec < 3:
            raise PrecisionError("need the unit modulo 8 to decide a 2-adic square")
        r = _sqrt_unit_two(u, prec)
        rprec = prec - 1
    else:
        r = _sqrt_unit_odd(u, p, prec)
        rprec = prec
    if r is None:
        return None
    root = PadicNumber(p, half, r % p**rprec, rprec)
    return root, -root


def sqrt_branch(a: PadicNumber, residue: int, modulus: int | None = None) -> PadicNumber | None:
    """The square root of a congruent to ``residue`` modulo p (or ``modulus``)."""
    roots = sqrt(a)
    if roots is None:
        return None
    modulus = modulus or a.p
    for r in roots:
        if r.residue(valuation(modulus, a.p)) == residue % modulus:
            return r
    raise DomainError(f"no square root is congruent to {residue} mod {modulus}")


def _horner(coeffs: Sequence[PadicNumber], t: PadicNumber) -> PadicNumber:
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * t + c
    return acc


def _derivative(coeffs: Sequence[PadicNumber]) -> list[PadicNumber]:
    if len(coeffs) == 1:
        return [coeffs[0] * 0]
    return [c * j for j, c in enumerate(coeffs) if j > 0]


def hensel_lift(
    coeffs: Iterable[Coercible],
    a0: Coercible,
    p: int | None = None,
    max_iter: int = 200,
    prec: int | None = None,
) -> PadicNumber:
    """Newton-lift a0 to a root of ``sum(coeffs[j] * t**j)``.

    Requires integral coefficients and |F(a0)|_p < |F'(a0)|_p**2.  The root
    is unique in the ball |a - a0|_p < |F'(a0)|_p.  Iteration runs on
    integers modulo a fixed power of p; the returned precision is what the
    coefficients determine, at most ``prec`` relative digits.
    """
    coeffs = list(coeffs)
    if p is None:
        p = next(c.p for c in [*coeffs, a0] if isinstance(c, PadicNumber))
    ref = PadicNumber.one(p)
    cs = [ref._coerce(c) for c in coeffs]
    a = ref._coerce(a0)
    if any(c.unit and c.val < 0 for c in cs) or (a.unit and a.val < 0):
        raise HenselError("coefficients and seed must be p-adic integers")
    if prec is None:
        capped = [c.prec for c in [*cs, a] if not c.exact]
        prec = min(capped) if capped else DEFAULT_PRECISION
    dcs = _derivative(cs)
    fa, dfa = _horner(cs, a), _horner(dcs, a)
    if fa.kind is Kind.EXACT_ZERO:
        return a
    if dfa.is_zero():
        raise HenselError("F'(a0) vanishes")
    if not fa.valuation > 2 * dfa.val:
        raise HenselError(
            f"Hensel condition fails: v(F(a0))={fa.valuation}, v(F'(a0))={dfa.val}"
        )
    d = dfa.val
    known = [c.abs_prec for c in cs if c.abs_prec is not None]
    modulus_exp = prec + 2 * d + GUARD_DIGITS
    mod = p**modulus_exp
    ints = [c.unit * p**c.val % mod if c.unit else 0 for c in cs]
    dints = [j * c % mod for j, c in enumerate(ints)][1:]
    x = a.unit * p**a.val % mod if a.unit else 0

    def ev(poly: list[int], t: int) -> int:
        acc = 0
        for c in reversed(poly):
            acc = (acc * t + c) % mod
        return acc

    for _ in range(max_iter):
        fx = ev(ints, x)
        if fx == 0:
            break
        dx = ev(dints, x)
        # v(F(x)) > 2d and v(F'(x)) = d along the whole iteration
        u = pow(dx // p**d, -1, mod)
        x = (x - (fx // p**d) * u) % mod
    else:
        raise HenselError("Newton iteration did not converge")
    absprec = min([modulus_exp, *known]) - d
    if x == 0:
        return PadicNumber.zero_to(p, absprec, prec)
    v, u = _split(x, p)
    rel = min(absprec - v, prec)
    if rel <= 0:
        return PadicNumber.zero_to(p, absprec, prec)
    return PadicNumber(p, v, u % p**rel, rel)


def _floor_log(n: int, p: int) -> int:
    k = 0
    while n >= p:
        n //= p
        k += 1
    return k


def _term_cutoff_log(w: int, p: int, target: int) -> int:
    # n*w - floor(log_p n) is increasing, and bounds the valuation of (x-1)^n/n
    n = 1
    while n * w - _floor_log(n, p) < target:
        n += 1
    return n


def log_p(x: PadicNumber) -> PadicNumber:
    """p-adic logarithm, defined for |x - 1|_p < 1."""
    p = x.p
    y = x - 1
    if y.kind is Kind.EXACT_ZERO:
        return y
    if y.val < 1:
        raise DomainError("log_p needs |x - 1|_p < 1")
    if y.unit == 0:
        return y
    w, u = y.val, y.unit
    cap = x.prec
    target = y.abs_prec if not y.exact else w + cap + GUARD_DIGITS
    mod = p**target
    u %= mod
    total = 0
    last = _term_cutoff_log(w, p, target)
    upow = 1
    for n in range(1, last + 1):
        upow = upow * u % mod
        e, n_unit = _split(n, p)
        shift = n * w - e
        if shift >= target:
            continue
        term = upow * pow(n_unit, -1, mod) * p**shift
        total += term if n % 2 else -term
    total %= mod
    if total == 0:
        return PadicNumber.zero_to(p, target, cap)
    r, s = _split(total, p)
    rel = min(cap, target - r)
    return PadicNumber(p, r, s % p**rel, rel)


def exp_domain_ok(x: PadicNumber) -> bool:
    """|x|_p < p**(-1/(p-1)), as an integer condition on the valuation."""
    need = 2 if x.p == 2 else 1
    if x.kind is Kind.EXACT_ZERO:
        return True
    return x.val >= need


def exp_p(x: PadicNumber) -> PadicNumber:
    """p-adic exponential, defined for |x|_p < p**(-1/(p-1))."""
    p = x.p
    cap = x.prec
    if x.kind is Kind.EXACT_ZERO:
        return PadicNumber.one(p, cap)
    if not exp_domain_ok(x):
        raise DomainError("exp_p needs |x|_p < p^(-1/(p-1))")
    if x.unit == 0:
        return PadicNumber.one(p, cap).with_abs_prec(x.val).truncate(cap)
    v, u = x.val, x.unit
    target = x.abs_prec if not x.exact else cap + GUARD_DIGITS
    mod = p**target
    u %= mod
    total = 1
    term_unit, term_val = 1, 0
    n = 0
    while True:
        n += 1
        # stop once every remaining term has valuation >= target
        if (p - 1) * n * v - (n - 1) >= (p - 1) * target:
            break
        e, n_unit = _split(n, p)
        term_unit = term_unit * u * pow(n_unit, -1, mod) % mod
        term_val += v - e
        if term_val < target:
            total += term_unit * p**term_val
    total %= mod
    rel = min(cap, target)
    return PadicNumber(p, 0, total % p**rel, rel)


def in_Ep(x: PadicNumber) -> bool:
    """x is a unit with |x - 1|_p < p**(-1/(p-1))."""
    p = x.p
    k = 2 if p == 2 else 1
    if x.kind is Kind.EXACT_ZERO:
        return False
    if x.unit == 0:
        if x.val >= 1:
            return False
        raise PrecisionError("value too imprecise to decide membership in E_p")
    if x.val != 0:
        return False
    return x.residue(k) == 1


def is_integral(x: PadicNumber) -> bool:
    """x in Z_p."""
    return x.unit == 0 or x.val >= 0


def is_unit(x: PadicNumber) -> bool:
    """x in Z_p^*, i.e. |x|_p = 1."""
    return x.unit != 0 and x.val == 0


@dataclass(frozen=True)
class Ball:
    """Open ball B(center, r) = {x : |x - center|_p < r}.

    ``radius=None`` stands for the exponential radius p**(-1/(p-1)).
    """

    center: PadicNumber
    radius: Fraction | None = None

    def contains(self, x: PadicNumber) -> bool:
        p = self.center.p
        d = x - self.center
        if self.radius is None:
            need = 2 if p == 2 else 1
            if d.kind is Kind.EXACT_ZERO:
                return True
            if d.unit == 0 and d.val < need:
                raise PrecisionError("difference too imprecise to decide membership")
            return d.val >= need
        nrm, bound = d.norm_bound()
        if nrm < self.radius:
            return True
        if bound:
            raise PrecisionError("difference too imprecise to decide membership")
        return False
