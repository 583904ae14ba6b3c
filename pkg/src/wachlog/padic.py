"""p-adic scalars with explicit absolute precision.

A scalar is a rational representative whose denominator is a power of p,
together with the number of known digits: the represented p-adic number is
only determined modulo p**abs_precision.  Exact integers are stored at the
working precision of the caller.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DomainError, InvalidUnitError, PrecisionExhaustedError

Number = Union[int, Fraction]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def check_odd_prime(p: int) -> int:
    if not isinstance(p, int) or p == 2 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")
    return p


def vp_int(n: int, p: int, cap: int = 10**9) -> int:
    """Valuation of an integer, returning cap for zero."""
    if n == 0:
        return cap
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(x: Number, p: int, cap: int = 10**9) -> int:
    if isinstance(x, int):
        return vp_int(x, p, cap)
    if x == 0:
        return cap
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def split_fraction(x: Number, p: int) -> tuple[int, int, int]:
    """Write x = p**e * a / b with a, b integers and p not dividing b.

    Returns (a, b, e); a may still be divisible by p only when x == 0.
    """
    x = Fraction(x)
    if x == 0:
        return 0, 1, 0
    num, den = x.numerator, x.denominator
    e = 0
    while num % p == 0:
        num //= p
        e += 1
    while den % p == 0:
        den //= p
        e -= 1
    return num, den, e


def reduce_fraction(x: Number, p: int, prec: int) -> Fraction:
    """Canonical representative of x modulo p**prec with p-power denominator."""
    a, b, e = split_fraction(x, p)
    if a == 0 or e >= prec:
        return Fraction(0)
    mod = p ** (prec - e)
    unit = a * pow(b, -1, mod) % mod
    if e >= 0:
        return Fraction(unit * p**e)
    return Fraction(unit, p ** (-e))


def log_p_floor(m: int, p: int) -> int:
    """floor(log_p(m)) for m >= 1."""
    k = 0
    while p ** (k + 1) <= m:
        k += 1
    return k


@dataclass(frozen=True)
class PrecisionProfile:
    digits: int = 20
    pi_degree: int = 200
    x_degree: int = 32

    def __post_init__(self) -> None:
        if self.digits < 1 or self.pi_degree < 1 or self.x_degree < 1:
            raise ValueError("profile entries must be positive")
        if self.pi_degree < self.x_degree:
            raise ValueError("profile needs pi_degree >= x_degree")

    @property
    def N(self) -> int:
        return self.digits

    @property
    def D(self) -> int:
        return self.pi_degree

    @property
    def DX(self) -> int:
        return self.x_degree

    @classmethod
    def parse(cls, text: str) -> "PrecisionProfile":
        parts = [s.strip() for s in str(text).split(",")]
        if len(parts) != 3:
            raise ValueError(f"malformed profile {text!r}; expected N,D,DX")
        try:
            n, d, dx = (int(s) for s in parts)
        except ValueError:
            raise ValueError(f"malformed profile {text!r}") from None
        return cls(n, d, dx)

    def __str__(self) -> str:
        return f"{self.digits},{self.pi_degree},{self.x_degree}"


class PadicScalar:
    """An element of Q_p known modulo p**abs_precision."""

    __slots__ = ("prime", "value", "abs_precision")

    def __init__(self, prime: int, value: Number, abs_precision: int):
        object.__setattr__(self, "prime", prime)
        object.__setattr__(self, "abs_precision", int(abs_precision))
        object.__setattr__(self, "value", reduce_fraction(value, prime, abs_precision))

    def __setattr__(self, name, value):
        raise AttributeError("PadicScalar is immutable")

    @property
    def valuation(self) -> int:
        return min(vp(self.value, self.prime), self.abs_precision)

    @property
    def relative_precision(self) -> int:
        return self.abs_precision - self.valuation

    def is_zero(self) -> bool:
        return self.valuation >= self.abs_precision

    def _coerce(self, other) -> "PadicScalar":
        if isinstance(other, PadicScalar):
            if other.prime != self.prime:
                raise DomainError("mixed primes")
            return other
        if isinstance(other, (int, Fraction)):
            vo = vp(other, self.prime, 0)
            prec = self.abs_precision + abs(self.valuation) + abs(vo) + 1
            return PadicScalar(self.prime, other, prec)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PadicScalar(self.prime, self.value + o.value, min(self.abs_precision, o.abs_precision))

    __radd__ = __add__

    def __neg__(self):
        return PadicScalar(self.prime, -self.value, self.abs_precision)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PadicScalar(self.prime, self.value - o.value, min(self.abs_precision, o.abs_precision))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prec = min(self.valuation + o.abs_precision, o.valuation + self.abs_precision)
        return PadicScalar(self.prime, self.value * o.value, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("division by a p-adic zero")
        rel = min(self.relative_precision, o.relative_precision)
        return PadicScalar(self.prime, self.value / o.value, self.valuation - o.valuation + rel)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return PadicScalar(self.prime, 1, self.abs_precision) / (self ** (-n))
        if n == 0:
            return PadicScalar(self.prime, 1, self.abs_precision)
        result = self
        base = self
        n -= 1
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def integer_value(self) -> int:
        """Non-negative integer representative modulo p**abs_precision (needs valuation >= 0)."""
        if self.value.denominator != 1:
            raise DomainError("scalar is not p-integral")
        return int(self.value) % (self.prime ** max(self.abs_precision, 0))

    def digits(self) -> list[int]:
        """Little-endian p-adic digits from the valuation up to the precision."""
        if self.is_zero():
            return []
        v = self.valuation
        x = self.value / Fraction(self.prime) ** v
        n = int(x) % self.prime ** (self.abs_precision - v)
        out = []
        for _ in range(self.abs_precision - v):
            out.append(n % self.prime)
            n //= self.prime
        return out

    def to_json(self) -> dict:
        return {"val": str(self.value), "prec": self.abs_precision, "p": self.prime}

    @classmethod
    def from_json(cls, data: dict) -> "PadicScalar":
        return cls(int(data["p"]), Fraction(data["val"]), int(data["prec"]))

    def __repr__(self) -> str:
        return f"PadicScalar({self.value} + O({self.prime}^{self.abs_precision}))"


def scalar(p: int, value: Number, prec: int) -> PadicScalar:
    return PadicScalar(p, value, prec)


def _digits_of(profile_or_n) -> int:
    if isinstance(profile_or_n, PrecisionProfile):
        return profile_or_n.digits
    return int(profile_or_n)


def teichmuller(a: int, p: int, profile: PrecisionProfile | int) -> PadicScalar:
    """The (p-1)-st root of unity congruent to a mod p."""
    n = _digits_of(profile)
    if a % p == 0:
        raise InvalidUnitError(f"{a} is not a unit mod {p}")
    mod = p**n
    x = a % mod
    while True:
        y = pow(x, p, mod)
        if y == x:
            break
        x = y
    return PadicScalar(p, x, n)


def padic_binom(a: PadicScalar, m: int) -> PadicScalar:
    """a(a-1)...(a-m+1)/m!.

    For p-integral a the map a -> binom(a, m) is 1-Lipschitz up to a loss of
    floor(log_p m) digits (Vandermonde), so only that much precision is lost.
    Non-integral a loses v_p(m!) digits.
    """
    if m < 0:
        raise DomainError("m must be non-negative")
    p = a.prime
    if m == 0:
        return PadicScalar(p, 1, a.abs_precision)
    num = Fraction(1)
    x = a.value
    for j in range(m):
        num *= x - j
    fact = 1
    for j in range(2, m + 1):
        fact *= j
    if a.valuation >= 0:
        loss = log_p_floor(m, p)
    else:
        loss = vp_int(fact, p) - m * a.valuation
    prec = a.abs_precision - loss
    if prec <= 0:
        raise PrecisionExhaustedError(f"binomial of order {m} exhausts precision")
    return PadicScalar(p, num / fact, prec)


def log_one_unit(x: PadicScalar, profile: PrecisionProfile | int) -> PadicScalar:
    """p-adic logarithm of a 1-unit via its defining series."""
    p = x.prime
    n_digits = _digits_of(profile)
    y = x - 1
    vy = y.valuation
    if x.valuation != 0 or vy < 1:
        raise DomainError("log_one_unit needs x = 1 mod p")
    prec = min(n_digits, x.abs_precision)
    if y.is_zero():
        return PadicScalar(p, 0, prec)
    guard = prec + 2 * log_p_floor(prec * 4 + 8, p) + 4
    mod = p**guard
    yv = int(y.value) % mod
    total = Fraction(0)
    power = 1
    n = 1
    while True:
        power = power * yv % mod
        if n * vy - log_p_floor(n, p) >= prec + 1 and n > 1:
            break
        total += Fraction((-1) ** (n + 1) * power, n)
        n += 1
    return PadicScalar(p, total, prec)
