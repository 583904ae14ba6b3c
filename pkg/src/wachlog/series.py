"""Truncated power series over Q_p in pi and in X.

Coefficients are stored as integer numerators over a common denominator
p**den, together with an absolute precision per coefficient.  Precisions
are kept non-increasing in the degree, which lets products be bounded in
linear time.  Degrees above the top are unknown, not zero.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    CompositionDomainError,
    DomainError,
    InexactDivisionError,
    NonUnitError,
    NotDivisibleError,
)
from .padic import Number, PadicScalar, split_fraction, vp_int

BIG = 10**9


def _prefix_min(xs: Sequence[int]) -> list[int]:
    out = []
    m = BIG
    for x in xs:
        if x < m:
            m = x
        out.append(m)
    return out


def kron_mul(a: Sequence[int], b: Sequence[int], length: int) -> list[int]:
    """Product of two non-negative integer polynomials, first `length` terms."""
    a = a[:length]
    b = b[:length]
    if not a or not b:
        return [0] * length
    ma = max(a)
    mb = max(b)
    if ma == 0 or mb == 0:
        return [0] * length
    bits = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 1
    nbytes = (bits + 7) // 8
    pa = int.from_bytes(b"".join(x.to_bytes(nbytes, "little") for x in a), "little")
    pb = int.from_bytes(b"".join(x.to_bytes(nbytes, "little") for x in b), "little")
    prod = pa * pb
    raw = prod.to_bytes(max(nbytes * length, (prod.bit_length() + 7) // 8), "little")
    return [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") for i in range(length)]


class Series:
    """Shared machinery of PiSeries and XSeries."""

    ring = ""
    __slots__ = ("prime", "low", "nums", "den", "precs", "_vals")

    def __init__(self, prime: int, nums: Sequence[int], precs: Sequence[int],
                 den: int = 0, low: int = 0):
        if len(nums) != len(precs) or not nums:
            raise ValueError("series needs matching non-empty numerators and precisions")
        precs = _prefix_min(precs)
        nums = list(nums)
        pw = {}
        for i, (n, pr) in enumerate(zip(nums, precs)):
            e = pr + den
            if e <= 0:
                nums[i] = 0
            else:
                m = pw.get(e)
                if m is None:
                    m = pw[e] = prime**e
                nums[i] = n % m
        # shrink the common denominator when possible
        if den > 0:
            shift = den
            for n in nums:
                if n:
                    v = vp_int(n, prime, shift)
                    if v < shift:
                        shift = v
                        if shift == 0:
                            break
            if shift:
                q = prime**shift
                nums = [n // q for n in nums]
                den -= shift
        self.prime = prime
        self.low = low
        self.nums = nums
        self.den = den
        self.precs = precs
        self._vals = None

    # ----- construction helpers -------------------------------------------------
    @classmethod
    def from_coeffs(cls, p: int, coeffs: Iterable[Number | PadicScalar], prec: int | Sequence[int],
                    low: int = 0):
        coeffs = list(coeffs)
        if isinstance(prec, int):
            precs = [prec] * len(coeffs)
        else:
            precs = list(prec)
        fracs = []
        for i, c in enumerate(coeffs):
            if isinstance(c, PadicScalar):
                precs[i] = min(precs[i], c.abs_precision)
                c = c.value
            fracs.append(Fraction(c))
        den = 0
        for c in fracs:
            d = c.denominator
            k = 0
            while d % p == 0:
                d //= p
                k += 1
            den = max(den, k)
        nums = []
        for c, pr in zip(fracs, precs):
            if c == 0:
                nums.append(0)
                continue
            a, b, e = split_fraction(c, p)
            mod = p ** max(pr + den, 1)
            nums.append(a * pow(b, -1, mod) * p ** (e + den) % mod)
        return cls(p, nums, precs, den, low)

    @classmethod
    def zero(cls, p: int, top: int, prec: int, low: int = 0):
        return cls(p, [0] * (top - low + 1), [prec] * (top - low + 1), 0, low)

    @classmethod
    def constant(cls, p: int, c: Number | PadicScalar, top: int, prec: int):
        return cls.from_coeffs(p, [c] + [0] * top, prec)

    @classmethod
    def gen(cls, p: int, top: int, prec: int):
        """The variable itself (pi or X)."""
        coeffs = [0] * (top + 1)
        if top >= 1:
            coeffs[1] = 1
        return cls.from_coeffs(p, coeffs, prec)

    def _new(self, nums, precs, den, low):
        return type(self)(self.prime, nums, precs, den, low)

    # ----- basic accessors ------------------------------------------------------
    @property
    def top(self) -> int:
        return self.low + len(self.nums) - 1

    def __len__(self) -> int:
        return len(self.nums)

    def valuations(self) -> list[int]:
        """Guaranteed valuation lower bound of every stored coefficient."""
        if self._vals is None:
            p = self.prime
            out = []
            for n, pr in zip(self.nums, self.precs):
                if n == 0:
                    out.append(pr)
                else:
                    out.append(min(vp_int(n, p) - self.den, pr))
            self._vals = out
        return self._vals

    def coeff_fraction(self, degree: int) -> Fraction:
        i = degree - self.low
        if i < 0:
            return Fraction(0)
        if i >= len(self.nums):
            raise IndexError(f"degree {degree} is above the truncation")
        return Fraction(self.nums[i], self.prime**self.den)

    def coeff(self, degree: int) -> PadicScalar:
        i = degree - self.low
        if i < 0:
            return PadicScalar(self.prime, 0, self.precs[0])
        return PadicScalar(self.prime, self.coeff_fraction(degree), self.precs[i])

    def __getitem__(self, degree: int) -> PadicScalar:
        return self.coeff(degree)

    def coefficients(self) -> list[PadicScalar]:
        return [self.coeff(self.low + i) for i in range(len(self.nums))]

    def precision_at(self, degree: int) -> int:
        return self.precs[degree - self.low]

    def min_precision(self, upto: int | None = None) -> int:
        if upto is None:
            return self.precs[-1]
        return self.precs[min(upto, self.top) - self.low]

    def valuation(self) -> int:
        return min(self.valuations())

    def is_zero(self) -> bool:
        return all(n == 0 for n in self.nums)

    def is_integral(self) -> bool:
        return all(v >= 0 for v in self.valuations())

    # ----- arithmetic -----------------------------------------------------------
    def _check(self, other: "Series") -> None:
        if type(other) is not type(self):
            raise DomainError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.prime != self.prime:
            raise DomainError("mixed primes")

    def _aligned(self, den: int, low: int, top: int) -> tuple[list[int], list[int]]:
        """Numerators rescaled to denominator p**den on degrees low..top."""
        scale = self.prime ** (den - self.den)
        nums = []
        precs = []
        last = self.precs[-1]
        for d in range(low, top + 1):
            i = d - self.low
            if i < 0:
                nums.append(0)
                precs.append(self.precs[0] if self.precs else BIG)
            else:
                nums.append(self.nums[i] * scale)
                precs.append(self.precs[i] if i < len(self.precs) else last)
        return nums, precs

    def _addsub(self, other, sign: int):
        if not isinstance(other, Series):
            other = type(self).constant(self.prime, other, self.top, self.precs[0] + 64)
        self._check(other)
        low = min(self.low, other.low)
        top = min(self.top, other.top)
        den = max(self.den, other.den)
        a, pa = self._aligned(den, low, top)
        b, pb = other._aligned(den, low, top)
        nums = [x + sign * y for x, y in zip(a, b)]
        precs = [min(x, y) for x, y in zip(pa, pb)]
        return self._new(nums, precs, den, low)

    def __add__(self, other):
        return self._addsub(other, 1)

    def __radd__(self, other):
        return self._addsub(other, 1)

    def __sub__(self, other):
        return self._addsub(other, -1)

    def __rsub__(self, other):
        return (-self)._addsub(other, 1)

    def __neg__(self):
        return self._new([-n for n in self.nums], self.precs, self.den, self.low)

    def scale(self, c: Number | PadicScalar):
        """Multiply by a scalar."""
        p = self.prime
        if isinstance(c, PadicScalar):
            cv, cprec = c.value, c.abs_precision
            cval = c.valuation
        else:
            cv, cprec = Fraction(c), None
            cval = None
        a, b, e = split_fraction(cv, p)
        if a == 0:
            if cprec is None:
                pr = [x + 64 for x in self.precs]
            else:
                pr = [cprec + v for v in self.valuations()]
            return self._new([0] * len(self.nums), pr, 0, self.low)
        if cval is None:
            cval = e
        vals = self.valuations()
        precs = []
        for pr, v in zip(self.precs, vals):
            x = pr + cval
            if cprec is not None:
                x = min(x, cprec + v)
            precs.append(x)
        den = self.den + max(0, -e)
        maxmod = p ** (max(precs) + den + 1) if precs else 1
        mult = a * pow(b, -1, maxmod) * p ** max(e, 0)
        return self._new([n * mult for n in self.nums], precs, den, self.low)

    def __mul__(self, other):
        if not isinstance(other, Series):
            return self.scale(other)
        self._check(other)
        p = self.prime
        low = self.low + other.low
        top = min(self.top + other.low, other.top + self.low)
        length = top - low + 1
        if length <= 0:
            raise DomainError("product has no known coefficients")
        va = _prefix_min(self.valuations())
        vb = _prefix_min(other.valuations())
        pa, pb = self.precs, other.precs
        la, lb = len(pa), len(pb)
        precs = []
        for n in range(length):
            ia = min(n, la - 1)
            ib = min(n, lb - 1)
            precs.append(min(va[ia] + pb[ib], vb[ib] + pa[ia]))
        den = self.den + other.den
        # reduce inputs to what the output precision needs
        target = max(precs) + den
        if target <= 0:
            return self._new([0] * length, precs, 0, low)
        mod = p**target
        a = [x % mod for x in self.nums[:length]]
        b = [x % mod for x in other.nums[:length]]
        nums = kron_mul(a, b, length)
        return self._new(nums, precs, den, low)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return invert(self) ** (-n)
        if n == 0:
            return type(self).constant(self.prime, 1, self.top, self.precs[0] + 64)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate(self, top: int):
        if top >= self.top:
            return self
        k = top - self.low + 1
        return self._new(self.nums[:k], self.precs[:k], self.den, self.low)

    def shift(self, k: int):
        """Multiply by var**k (k may be negative)."""
        return self._new(self.nums, self.precs, self.den, self.low + k)

    def cap(self, prec: int):
        """Forget digits beyond absolute precision prec."""
        return self._new(self.nums, [min(x, prec) for x in self.precs], self.den, self.low)

    def with_precisions(self, precs: Sequence[int]):
        return self._new(self.nums, [min(a, b) for a, b in zip(self.precs, precs)], self.den, self.low)

    def equals(self, other: "Series") -> bool:
        """Agreement on the common represented degrees at guaranteed precision."""
        return (self - other).is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, Series):
            if type(other) is not type(self):
                return False
            return self.equals(other)
        if isinstance(other, (int, Fraction, PadicScalar)):
            return self.equals(type(self).constant(self.prime, other, self.top, self.precs[0] + 64))
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def agreement_digits(self, other: "Series", upto: int | None = None) -> int:
        """Smallest valuation of the difference over degrees <= upto (capped by precision)."""
        diff = self - other
        vals = diff.valuations()
        if upto is not None:
            vals = vals[: max(0, upto - diff.low + 1)]
        return min(vals) if vals else BIG

    def evaluate(self, x: PadicScalar) -> PadicScalar:
        """Sum of the represented terms at x (tail ignored; see callers)."""
        total = self.coeff(self.top)
        for d in range(self.top - 1, self.low - 1, -1):
            total = total * x + self.coeff(d)
        if self.low < 0:
            total = total * x ** self.low
        elif self.low > 0:
            total = total * x ** self.low
        return total

    def to_json(self) -> dict:
        return {
            "ring": self.ring,
            "low": self.low,
            "coeffs": [c.to_json() for c in self.coefficients()],
        }

    @classmethod
    def from_json(cls, data: dict):
        coeffs = [PadicScalar.from_json(c) for c in data["coeffs"]]
        p = coeffs[0].prime
        return cls.from_coeffs(p, coeffs, [c.abs_precision for c in coeffs], data.get("low", 0))

    def pretty(self, terms: int = 8) -> str:
        var = "pi" if self.ring == "pi" else "X"
        parts = []
        for i in range(min(terms, len(self.nums))):
            c = self.coeff_fraction(self.low + i)
            if c != 0:
                parts.append(f"({c})*{var}^{self.low + i}")
        body = " + ".join(parts) if parts else "0"
        vals = self.valuations()[:terms]
        return f"{body} + ...  [valuations {vals}, precision {self.precs[-1]}]"

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.pretty(4)})"


class PiSeries(Series):
    ring = "pi"
    __slots__ = ()


class XSeries(Series):
    ring = "x"
    __slots__ = ()


# ----- operations ---------------------------------------------------------------

def compose(f: Series, g: Series) -> Series:
    """f(g) for g with vanishing constant term."""
    if type(f) is not type(g):
        raise DomainError("compose needs series in the same ring")
    if f.low < 0 or g.low < 0:
        raise CompositionDomainError("composition of Laurent series is not supported")
    if g.low == 0 and g.nums[0] != 0:
        raise CompositionDomainError("inner series has non-zero constant term")
    top = min(f.top, g.top)
    p = f.prime
    if f.low == 0 and g.den == 0:
        return _compose_integral(f, g, top)
    # g with exactly zero constant term; its precision at degree 0 stays in the bound
    gg = g.truncate(top)
    if gg.low == 0:
        nums = list(gg.nums)
        nums[0] = 0
        gg = type(g)(p, nums, gg.precs, gg.den, 0)
    ff = f.truncate(top)
    acc = type(f).constant(p, ff.coeff(top), top, ff.precs[-1]) if ff.low == 0 else None
    if ff.low > 0:
        ff = type(f)(p, [0] * ff.low + ff.nums, [ff.precs[0]] * ff.low + ff.precs, ff.den, 0)
        acc = type(f).constant(p, ff.coeff(top), top, ff.precs[-1])
    for n in range(top - 1, -1, -1):
        acc = acc * gg
        c = type(f)(p, [ff.nums[n]] + [0] * top, [ff.precs[n]] + [BIG // 2] * top, ff.den, 0)
        acc = acc + c
    return acc


def _compose_integral(f: Series, g: Series, top: int) -> Series:
    """Horner evaluation on raw numerators for a p-integral inner series.

    Precision bound: an error of p**e in g_j changes f(g) at degree m by
    at least min_n v(f_n) + e, and errors in f_n survive unchanged since
    g**n is integral.
    """
    p = f.prime
    fv = _prefix_min(f.valuations()[: top + 1])
    gp = g.precs
    precs = []
    for m in range(top + 1):
        precs.append(min(f.precs[m], fv[m] + gp[min(m, len(gp) - 1)]))
    target = max(precs) + f.den
    if target <= 0:
        return type(f)(p, [0] * (top + 1), precs, 0, 0)
    mod = p**target
    gn = [x % mod for x in g.nums[: top + 1]]
    gn[0] = 0
    length = top + 1
    bits = 2 * mod.bit_length() + length.bit_length() + 1
    nbytes = (bits + 7) // 8
    gpacked = int.from_bytes(b"".join(x.to_bytes(nbytes, "little") for x in gn), "little")
    fn = [x % mod for x in f.nums[: top + 1]]
    acc = [fn[top]] + [0] * top
    for n in range(top - 1, -1, -1):
        packed = int.from_bytes(b"".join(x.to_bytes(nbytes, "little") for x in acc), "little")
        prod = packed * gpacked
        raw = prod.to_bytes(max(nbytes * length * 2, (prod.bit_length() + 7) // 8), "little")
        acc = [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") % mod for i in range(length)]
        acc[0] = (acc[0] + fn[n]) % mod
    return type(f)(p, acc, precs, f.den, 0)


def tail_valuation_estimate(f: Series) -> int:
    """Heuristic lower bound for the valuations of the unrepresented tail.

    Taken as the smallest valuation among the top quarter of the stored
    coefficients, minus one; exact for polynomials padded with zeros.
    """
    vals = f.valuations()
    k = max(1, len(vals) // 4)
    return min(vals[-k:]) - 1


def div_linear(f: XSeries, c: PadicScalar | Number, tail_valuation: int | None = None) -> XSeries:
    """Exact quotient of f by (X - c) for c in the maximal ideal with f(c) = 0."""
    p = f.prime
    if not isinstance(c, PadicScalar):
        c = PadicScalar(p, c, max(f.precs) + 64)
    if f.low != 0:
        raise DomainError("div_linear needs a power series")
    vc = c.valuation
    if vc < 1:
        raise DomainError("root must lie in the maximal ideal")
    top = f.top
    if tail_valuation is None:
        tail_valuation = tail_valuation_estimate(f)
    coeffs = f.coefficients()
    h: list[PadicScalar] = [None] * top  # type: ignore[list-item]
    acc = coeffs[top]
    for n in range(top, 0, -1):
        # h_{n-1} = f_n + c h_n, with the unknown tail contributing c^(top+1-n)*tail
        tail_prec = (top + 1 - n) * vc + tail_valuation
        h[n - 1] = PadicScalar(p, acc.value, min(acc.abs_precision, tail_prec))
        acc = coeffs[n - 1] + c * h[n - 1]
    remainder = acc
    r_prec = min(remainder.abs_precision, (top + 1) * vc + tail_valuation)
    rem = PadicScalar(p, remainder.value, r_prec)
    if not rem.is_zero():
        raise InexactDivisionError(f"non-zero remainder of valuation {rem.valuation}")
    if top == 0:
        raise DomainError("nothing left after division")
    return XSeries.from_coeffs(p, h, [x.abs_precision for x in h])


def invert(f: Series) -> Series:
    """Multiplicative inverse of a series with non-zero constant term."""
    p = f.prime
    if f.low != 0:
        raise NonUnitError("Laurent inversion is not supported")
    vals = f.valuations()
    v0 = vals[0]
    if f.nums[0] == 0 or v0 >= f.precs[0]:
        raise NonUnitError("constant term vanishes")
    top = f.top
    # F = f / f0 has F_0 = 1; slope bound s with v(F_i) >= -s*i
    slope = Fraction(0)
    for i in range(1, top + 1):
        if f.nums[i]:
            s = Fraction(v0 - vals[i], i)
            if s > slope:
                slope = s
    B = -((-slope * top).numerator // (slope * top).denominator) if slope else 0

    def ceil_slope(n: int) -> int:
        x = slope * n
        return -((-x.numerator) // x.denominator)

    rel0 = f.precs[0] - v0
    prec_in = [min(pr - v0, rel0) for pr in f.precs]
    target = max(prec_in) + 4
    K = 2 * B + target
    mod = p**K
    # f_i = nums_i / p^den ; f_0 = p^v0 * w
    n0 = f.nums[0]
    w_num = n0 // p ** (v0 + f.den) if v0 + f.den >= 0 else n0
    w_inv = pow(w_num % p ** (K + 1), -1, p ** (K + 1))
    shift = B - f.den - v0  # F_i * p^B = nums_i * w_inv * p^shift
    Fs = [0] * (top + 1)
    for i in range(1, top + 1):
        x = f.nums[i] * w_inv
        if shift >= 0:
            Fs[i] = x * p**shift % mod
        else:
            q = p ** (-shift)
            x %= p ** (K - shift)
            Fs[i] = (x // q) % mod
    pB = p**B
    G = [0] * (top + 1)
    G[0] = pB % mod
    for n in range(1, top + 1):
        acc = 0
        for i in range(1, n + 1):
            fi = Fs[i]
            if fi:
                acc += fi * G[n - i]
        acc %= mod
        G[n] = (-(acc // pB)) % mod
    # g = G / f0 = (G_n p^B) * w_inv / p^(B + v0)
    nums = [x * w_inv for x in G]
    den = B + v0
    pm = _prefix_min(prec_in)
    precs = [min(pm[n] - ceil_slope(n), target) - v0 for n in range(top + 1)]
    if den < 0:
        nums = [x * p ** (-den) for x in nums]
        den = 0
    return type(f)(p, nums, precs, den, 0)


def divide(f: Series, g: Series) -> Series:
    """f / g for g with non-vanishing constant term."""
    return f * invert(g)


def pi_power_divide(f: Series, k: int) -> Series:
    """f / var**k, requiring the coefficients below degree k to vanish."""
    vals = f.valuations()
    for d in range(f.low, min(k, f.top + 1)):
        i = d - f.low
        if f.nums[i] != 0:
            raise NotDivisibleError(f"coefficient of degree {d} has valuation {vals[i]}")
    start = max(k - f.low, 0)
    if start >= len(f.nums):
        raise NotDivisibleError("no coefficients left after division")
    nums = f.nums[start:]
    precs = f.precs[start:]
    return type(f)(f.prime, nums, precs, f.den, f.low + start - k)


# ----- distinguished elements ------------------------------------------------------

def log_series(cls, p: int, top: int, prec: int) -> Series:
    """log(1 + var)."""
    coeffs = [Fraction(0)] + [Fraction((-1) ** (n + 1), n) for n in range(1, top + 1)]
    return cls.from_coeffs(p, coeffs, prec)


def t_series(p: int, top: int, prec: int) -> PiSeries:
    return log_series(PiSeries, p, top, prec)


def q_series(p: int, top: int, prec: int) -> PiSeries:
    """phi(pi)/pi = ((1+pi)^p - 1)/pi."""
    from math import comb

    coeffs = [comb(p, n + 1) if n + 1 <= p else 0 for n in range(top + 1)]
    return PiSeries.from_coeffs(p, coeffs, prec)


def binomial_series(cls, p: int, a: int, top: int, prec: int) -> Series:
    """(1 + var)**a for an integer a."""
    from math import comb

    if a >= 0:
        coeffs = [comb(a, m) for m in range(top + 1)]
    else:
        coeffs = [(-1) ** m * comb(-a + m - 1, m) for m in range(top + 1)]
    return cls.from_coeffs(p, coeffs, prec)
