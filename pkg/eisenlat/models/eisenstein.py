"""
eisenlat - Eisenstein arithmetic
Exact elements of Z[w] (w^2 = -1 - w), of its fraction field Q(w),
and of the residue field F4 = Z[w]/2Z[w].
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

_TERM_RE = re.compile(r"[+-]?[^+-]+")


class EisInt:
    """An Eisenstein integer a + b*w."""

    __slots__ = ("_a", "_b")

    def __init__(self, a: int = 0, b: int = 0) -> None:
        self._a = int(a)
        self._b = int(b)

    @property
    def a(self) -> int:
        return self._a

    @property
    def b(self) -> int:
        return self._b

    @classmethod
    def coerce(cls, x: int | EisInt) -> EisInt:
        if isinstance(x, EisInt):
            return x
        if isinstance(x, int):
            return cls(x, 0)
        raise TypeError(f"cannot coerce {type(x).__name__} to EisInt")

    # ---------- text codec ----------

    def __repr__(self) -> str:
        return f"EisInt({self._a}, {self._b})"

    def __str__(self) -> str:
        if self._b == 0:
            return str(self._a)
        return f"{self._a}{self._b:+d}*w"

    @classmethod
    def parse(cls, text: str) -> EisInt:
        """Parse "a+b*w", "a-b*w", "b*w", "w", "-w" or a plain integer."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty Eisenstein integer")
        a = b = 0
        for term in _TERM_RE.findall(s):
            if term.endswith("w"):
                coef = term[:-1].rstrip("*")
                if coef in ("", "+"):
                    b += 1
                elif coef == "-":
                    b -= 1
                else:
                    b += int(coef)
            else:
                a += int(term)
        return cls(a, b)

    # ---------- comparison ----------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self._b == 0 and self._a == other
        if isinstance(other, EisInt):
            return self._a == other._a and self._b == other._b
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._a, self._b))

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def key(self) -> tuple[int, int]:
        return (self._a, self._b)

    # ---------- ring operations ----------

    def __add__(self, other: int | EisInt) -> EisInt:
        if isinstance(other, int):
            return EisInt(self._a + other, self._b)
        if isinstance(other, EisInt):
            return EisInt(self._a + other._a, self._b + other._b)
        return NotImplemented

    def __radd__(self, other: int) -> EisInt:
        return self + other

    def __neg__(self) -> EisInt:
        return EisInt(-self._a, -self._b)

    def __sub__(self, other: int | EisInt) -> EisInt:
        if isinstance(other, (int, EisInt)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other: int) -> EisInt:
        return (-self) + other

    def __mul__(self, other: int | EisInt) -> EisInt:
        if isinstance(other, int):
            return EisInt(self._a * other, self._b * other)
        if isinstance(other, EisInt):
            a, b, c, d = self._a, self._b, other._a, other._b
            bd = b * d
            return EisInt(a * c - bd, a * d + b * c - bd)
        return NotImplemented

    def __rmul__(self, other: int) -> EisInt:
        return self * other

    def __pow__(self, n: int) -> EisInt:
        if n < 0:
            if not self.is_unit():
                raise ZeroDivisionError("only units have negative powers in Z[w]")
            return self.conj() ** (-n)
        result = EisInt(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> EisInt:
        return EisInt(self._a - self._b, -self._b)

    def norm(self) -> int:
        return self._a * self._a - self._a * self._b + self._b * self._b

    def trace(self) -> int:
        """z + conj(z) = 2a - b."""
        return 2 * self._a - self._b

    def is_unit(self) -> bool:
        return self.norm() == 1

    # ---------- Euclidean structure ----------

    def __divmod__(self, other: int | EisInt) -> tuple[EisInt, EisInt]:
        y = EisInt.coerce(other)
        n = y.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[w]")
        # self/y = self*conj(y)/N(y) = (p + q*w)/n
        t = self * y.conj()
        a0, b0 = t._a // n, t._b // n
        best: tuple[int, tuple[int, int]] | None = None
        for qa in (a0, a0 + 1):
            for qb in (b0, b0 + 1):
                r = self - EisInt(qa, qb) * y
                cand = (r.norm(), (qa, qb))
                if best is None or cand < best:
                    best = cand
        assert best is not None
        q = EisInt(*best[1])
        return q, self - q * y

    def __floordiv__(self, other: int | EisInt) -> EisInt:
        return divmod(self, other)[0]

    def __mod__(self, other: int | EisInt) -> EisInt:
        return divmod(self, other)[1]

    def exact_div(self, other: int | EisInt) -> EisInt:
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{self} is not divisible by {other}")
        return q

    def canonical_associate(self) -> tuple[EisInt, EisInt]:
        """Return (u*self, u) with u the unit putting u*self in the sector 0 <= b < a."""
        if not self:
            return self, EisInt(1)
        for u in UNITS:
            z = u * self
            if 0 <= z._b < z._a:
                return z, u
        raise AssertionError(f"no canonical associate for {self!r}")


def eis_norm(z: EisInt) -> int:
    return z.norm()


def eis_divmod(x: EisInt, y: EisInt) -> tuple[EisInt, EisInt]:
    """Nearest-point Euclidean division; ties go to the smallest quotient (a, b)."""
    return divmod(x, y)


OMEGA = EisInt(0, 1)
OMEGA2 = EisInt(-1, -1)
SQRT_M3 = EisInt(1, 2)
UNITS: tuple[EisInt, ...] = (
    EisInt(1), EisInt(-1), OMEGA, -OMEGA, OMEGA2, -OMEGA2,
)


def eis_units() -> list[EisInt]:
    return list(UNITS)


def eis_gcd(x: EisInt, y: EisInt) -> EisInt:
    while y:
        x, y = y, x % y
    return x.canonical_associate()[0]


def eis_xgcd(x: EisInt, y: EisInt) -> tuple[EisInt, EisInt, EisInt]:
    """Return (g, s, t) with s*x + t*y = g and g a canonical gcd."""
    r0, r1 = x, y
    s0, s1 = EisInt(1), EisInt(0)
    t0, t1 = EisInt(0), EisInt(1)
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    g, u = r0.canonical_associate()
    return g, u * s0, u * t0


class EisRat:
    """An element num/den of Q(w), den a positive integer, stored in lowest terms."""

    __slots__ = ("_num", "_den")

    def __init__(self, num: int | EisInt = 0, den: int = 1) -> None:
        num = EisInt.coerce(num)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = gcd(num.a, num.b, den)
        if g > 1:
            num = EisInt(num.a // g, num.b // g)
            den //= g
        self._num = num
        self._den = den

    @property
    def num(self) -> EisInt:
        return self._num

    @property
    def den(self) -> int:
        return self._den

    @classmethod
    def coerce(cls, x: int | Fraction | EisInt | EisRat | str) -> EisRat:
        if isinstance(x, EisRat):
            return x
        if isinstance(x, (int, EisInt)):
            return cls(x, 1)
        if isinstance(x, Fraction):
            return cls(x.numerator, x.denominator)
        if isinstance(x, str):
            return cls.parse(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to EisRat")

    def __repr__(self) -> str:
        return f"EisRat({self._num!r}, {self._den})"

    def __str__(self) -> str:
        if self._den == 1:
            return str(self._num)
        if self._num.b == 0:
            return f"{self._num.a}/{self._den}"
        return f"({self._num})/{self._den}"

    @classmethod
    def parse(cls, text: str) -> EisRat:
        """Parse "(a+b*w)/d", "a/d", or any EisInt text."""
        s = text.replace(" ", "")
        den = 1
        if "/" in s:
            s, d = s.rsplit("/", 1)
            den = int(d)
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        return cls(EisInt.parse(s), den)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, EisInt)):
            return self._den == 1 and self._num == other
        if isinstance(other, EisRat):
            return self._num == other._num and self._den == other._den
        if isinstance(other, Fraction):
            return self == EisRat.coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._num.a, self._num.b, self._den))

    def __bool__(self) -> bool:
        return bool(self._num)

    def key(self) -> tuple[Fraction, Fraction]:
        return (Fraction(self._num.a, self._den), Fraction(self._num.b, self._den))

    def __add__(self, other: int | EisInt | EisRat) -> EisRat:
        o = _as_rat(other)
        if o is None:
            return NotImplemented
        if self._den == o._den:
            return EisRat(self._num + o._num, self._den)
        return EisRat(self._num * o._den + o._num * self._den, self._den * o._den)

    def __radd__(self, other: int | EisInt) -> EisRat:
        return self + other

    def __neg__(self) -> EisRat:
        return EisRat(-self._num, self._den)

    def __sub__(self, other: int | EisInt | EisRat) -> EisRat:
        o = _as_rat(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: int | EisInt) -> EisRat:
        return (-self) + other

    def __mul__(self, other: int | EisInt | EisRat) -> EisRat:
        o = _as_rat(other)
        if o is None:
            return NotImplemented
        return EisRat(self._num * o._num, self._den * o._den)

    def __rmul__(self, other: int | EisInt) -> EisRat:
        return self * other

    def inverse(self) -> EisRat:
        n = self._num.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        # den/num = den*conj(num)/N(num)
        return EisRat(self._num.conj() * self._den, n)

    def __truediv__(self, other: int | EisInt | EisRat) -> EisRat:
        o = _as_rat(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: int | EisInt) -> EisRat:
        return EisRat.coerce(other) * self.inverse()

    def conj(self) -> EisRat:
        return EisRat(self._num.conj(), self._den)

    def norm(self) -> Fraction:
        return Fraction(self._num.norm(), self._den * self._den)

    def trace(self) -> Fraction:
        return Fraction(self._num.trace(), self._den)

    def is_integral(self) -> bool:
        return self._den == 1

    def is_real(self) -> bool:
        return self._num.b == 0

    def to_eisint(self) -> EisInt:
        if self._den != 1:
            raise ValueError(f"{self} is not an Eisenstein integer")
        return self._num

    def to_fraction(self) -> Fraction:
        if self._num.b != 0:
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num.a, self._den)


def _as_rat(x: object) -> EisRat | None:
    if isinstance(x, EisRat):
        return x
    if isinstance(x, (int, EisInt)):
        return EisRat(x, 1)
    if isinstance(x, Fraction):
        return EisRat(x.numerator, x.denominator)
    return None


def common_denominator(values: list[EisRat]) -> int:
    return reduce(lcm, (v.den for v in values), 1)


# ==================== F4 ====================

# c0 + c1*w encoded as c0 | (c1 << 1): 0, 1, w = 2, w2 = w + 1 = 3
_F4_NAMES = ("0", "1", "w", "w2")
_F4_LOG = {1: 0, 2: 1, 3: 2}
_F4_EXP = (1, 2, 3)


class F4Elem:
    """Element of F4 = {0, 1, w, w2} with w2 = w + 1."""

    __slots__ = ("_code",)

    def __init__(self, code: int) -> None:
        if code not in (0, 1, 2, 3):
            raise ValueError(f"bad F4 code {code}")
        self._code = code

    @property
    def code(self) -> int:
        return self._code

    @classmethod
    def parse(cls, text: str) -> F4Elem:
        t = text.strip().replace("^", "")
        if t not in _F4_NAMES:
            raise ValueError(f"bad F4 element {text!r}")
        return cls(_F4_NAMES.index(t))

    def __str__(self) -> str:
        return _F4_NAMES[self._code]

    def __repr__(self) -> str:
        return f"F4Elem({_F4_NAMES[self._code]!r})"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, F4Elem):
            return self._code == other._code
        if isinstance(other, int) and other in (0, 1):
            return self._code == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("F4", self._code))

    def __bool__(self) -> bool:
        return self._code != 0

    def __add__(self, other: F4Elem) -> F4Elem:
        return F4Elem(self._code ^ other._code)

    __sub__ = __add__

    def __neg__(self) -> F4Elem:
        return self

    def __mul__(self, other: F4Elem) -> F4Elem:
        if not self._code or not other._code:
            return F4_ZERO
        return F4Elem(_F4_EXP[(_F4_LOG[self._code] + _F4_LOG[other._code]) % 3])

    def __pow__(self, n: int) -> F4Elem:
        if not self._code:
            if n <= 0:
                raise ZeroDivisionError("0 has no inverse in F4")
            return F4_ZERO
        return F4Elem(_F4_EXP[(_F4_LOG[self._code] * n) % 3])

    def inverse(self) -> F4Elem:
        return self ** -1

    def frobenius(self) -> F4Elem:
        return self ** 2

    def lift(self) -> EisInt:
        """Representative in {0, 1, w, 1+w}."""
        return EisInt(self._code & 1, self._code >> 1)


F4_ZERO = F4Elem(0)
F4_ONE = F4Elem(1)
F4_W = F4Elem(2)
F4_W2 = F4Elem(3)
F4_ELEMENTS: tuple[F4Elem, ...] = (F4_ZERO, F4_ONE, F4_W, F4_W2)


def f4_reduce(z: EisInt | EisRat) -> F4Elem:
    """The ring map Z[w] -> Z[w]/2 = F4."""
    if isinstance(z, EisRat):
        if z.den % 2 == 0:
            raise ValueError(f"{z} has even denominator")
        # den is odd, hence 1 mod 2
        z = z.num
    return F4Elem((z.a & 1) | ((z.b & 1) << 1))
