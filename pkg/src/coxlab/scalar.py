"""Exact real numbers from Coxeter labels.

Every scalar lives in a real cyclotomic field K_L = Q(c_L) where
c_L = 2cos(pi/L).  Elements are stored as rational polynomials in c_L,
reduced modulo the minimal polynomial, so the coordinates are canonical
and the zero test is exact.  Signs are decided by interval evaluation
(python-flint's arb) at increasing precision after the exact zero test,
which makes the sign oracle terminate.

A second type, QuadExt, holds a + b*sqrt(delta) over such a field.  It
is used for the roots of quadratic polynomials.
"""
from fractions import Fraction
from functools import lru_cache
from math import gcd

from flint import arb, ctx, fmpq, fmpq_poly, fmpz_poly


class InvalidLabel(ValueError):
    pass


# ---------------------------------------------------------------------
# field data

@lru_cache(maxsize=None)
def _cyclotomic(n):
    """The n-th cyclotomic polynomial, by division of x^n - 1."""
    poly = fmpz_poly([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            poly = poly // _cyclotomic(d)
    return poly


@lru_cache(maxsize=None)
def _lucas(k):
    """C_k with C_k(z + 1/z) = z^k + z^-k."""
    if k == 0:
        return fmpq_poly([2])
    if k == 1:
        return fmpq_poly([0, 1])
    x = fmpq_poly([0, 1])
    return x * _lucas(k - 1) - _lucas(k - 2)


@lru_cache(maxsize=None)
def minimal_polynomial(L):
    """Minimal polynomial over Q of c_L = 2cos(pi/L).

    The polynomial is obtained from the cyclotomic polynomial of order
    2L, which is palindromic of even degree 2m: writing
    z^-m Phi(z) = sum_k a_k (z^k + z^-k) and substituting C_k gives
    a polynomial in z + 1/z.
    """
    if L < 1:
        raise InvalidLabel("conductor must be positive")
    if L == 1:
        return fmpq_poly([2, 1])
    coeffs = _cyclotomic(2 * L).coeffs()
    m = (len(coeffs) - 1) // 2
    result = fmpq_poly([coeffs[m]])
    for k in range(1, m + 1):
        result += int(coeffs[m + k]) * _lucas(k)
    return result


def field_degree(L):
    return minimal_polynomial(L).degree()


@lru_cache(maxsize=None)
def _generator_image(small, big):
    """c_small written in K_big, where small divides big."""
    return _lucas(big // small) % minimal_polynomial(big)


def _embed(poly, small, big):
    if small == big or poly.degree() <= 0:
        return poly
    image = _generator_image(small, big)
    modulus = minimal_polynomial(big)
    out = fmpq_poly()
    for c in reversed(poly.coeffs()):
        out = (out * image + c) % modulus
    return out


@lru_cache(maxsize=4096)
def _theta(L, prec):
    with ctx.workprec(prec + 20):
        if L == 1:
            return arb(-2)
        return 2 * arb(fmpq(1, L)).cos_pi()


def _eval_arb(poly, L, prec):
    theta = _theta(L, prec)
    with ctx.workprec(prec):
        acc = arb(0)
        for c in reversed(poly.coeffs()):
            acc = acc * theta + arb(c)
        return acc


def _to_fraction(q):
    return Fraction(int(q.p), int(q.q))


def _lcm(a, b):
    return a * b // gcd(a, b)


# ---------------------------------------------------------------------
# AlgScalar

class AlgScalar:
    """An exact element of Q(2cos(pi/L)).

    Rational values are always stored at conductor 1, which keeps the
    common case (integer matrix entries, lambda values) cheap.
    """
    __slots__ = ("conductor", "poly")

    def __init__(self, value=0, conductor=1):
        if isinstance(value, fmpq_poly):
            poly = value % minimal_polynomial(conductor)
        elif isinstance(value, (list, tuple)):
            poly = fmpq_poly([fmpq(Fraction(c).numerator, Fraction(c).denominator)
                              for c in value]) % minimal_polynomial(conductor)
        else:
            f = Fraction(value)
            poly = fmpq_poly([fmpq(f.numerator, f.denominator)])
        if poly.degree() <= 0:
            conductor = 1
        self.conductor = conductor
        self.poly = poly

    @classmethod
    def _raw(cls, poly, conductor):
        obj = cls.__new__(cls)
        obj.conductor = 1 if poly.degree() <= 0 else conductor
        obj.poly = poly
        return obj

    # -- structure ---------------------------------------------------
    @property
    def coords(self):
        """Coordinates in the power basis 1, c_L, c_L^2, ..."""
        n = field_degree(self.conductor)
        cs = [_to_fraction(c) for c in self.poly.coeffs()]
        return tuple(cs + [Fraction(0)] * (n - len(cs)))

    def is_zero(self):
        return self.poly.is_zero()

    def is_rational(self):
        return self.poly.degree() <= 0

    def to_fraction(self):
        if not self.is_rational():
            raise ValueError("not a rational number")
        return _to_fraction(self.poly[0])

    def embed(self, conductor):
        if conductor % self.conductor:
            raise ValueError("field of conductor %d does not contain conductor %d"
                             % (conductor, self.conductor))
        return AlgScalar._raw(_embed(self.poly, self.conductor, conductor), conductor)

    # -- arithmetic ----------------------------------------------------
    def _common(self, other):
        if self.conductor == other.conductor or other.conductor == 1:
            return self.conductor, self.poly, other.poly
        if self.conductor == 1:
            return other.conductor, self.poly, other.poly
        L = _lcm(self.conductor, other.conductor)
        return (L, _embed(self.poly, self.conductor, L),
                _embed(other.poly, other.conductor, L))

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if isinstance(other, QuadExt):
            return QuadExt.lift(self, other.radicand) + other
        L, a, b = self._common(other)
        return AlgScalar._raw(a + b, L)

    __radd__ = __add__

    def __neg__(self):
        return AlgScalar._raw(-self.poly, self.conductor)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if isinstance(other, QuadExt):
            return other * self
        L, a, b = self._common(other)
        prod = a * b
        if prod.degree() >= field_degree(L):
            prod = prod % minimal_polynomial(L)
        return AlgScalar._raw(prod, L)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("division by exact zero")
        if self.is_rational():
            return AlgScalar._raw(fmpq_poly([1 / self.poly[0]]), 1)
        g, s, _ = self.poly.xgcd(minimal_polynomial(self.conductor))
        return AlgScalar._raw(s / g[0], self.conductor)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if isinstance(other, QuadExt):
            return QuadExt.lift(self, other.radicand) / other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison ----------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        if isinstance(other, QuadExt):
            return other == self
        return (self - other).is_zero()

    def __hash__(self):
        # equal values may sit in different fields, so only rationals
        # get a discriminating hash
        if self.is_rational():
            return hash(self.to_fraction())
        return 0x5eed

    def __lt__(self, other):
        return sign(self - other) < 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    # -- numerics ------------------------------------------------------
    def enclosure(self, prec):
        """An arb ball containing the value, at working precision prec."""
        if self.is_rational():
            with ctx.workprec(prec):
                return arb(self.poly[0]) if not self.is_zero() else arb(0)
        return _eval_arb(self.poly, self.conductor, prec)

    def __float__(self):
        return float(self.enclosure(80).mid())

    def __str__(self):
        return expression(self)

    def __repr__(self):
        return "AlgScalar(%s)" % expression(self)


ZERO = AlgScalar(0)
ONE = AlgScalar(1)


def _coerce(x):
    if isinstance(x, (AlgScalar, QuadExt)):
        return x
    if isinstance(x, (int, Fraction)):
        return AlgScalar(x)
    if isinstance(x, fmpq):
        return AlgScalar(_to_fraction(x))
    return NotImplemented


def as_scalar(x):
    """Coerce ints and Fractions to AlgScalar; pass exact values through."""
    y = _coerce(x)
    if y is NotImplemented:
        raise TypeError("cannot make an exact scalar from %r" % (x,))
    return y


def two_cos_pi_over(m):
    """Exact 2cos(pi/m) for an integer m >= 2."""
    if not isinstance(m, int) or m < 2:
        raise InvalidLabel("label must be an integer >= 2, got %r" % (m,))
    return AlgScalar._raw(fmpq_poly([0, 1]) % minimal_polynomial(m), m)


def cos_squared_pi_over(m):
    c = two_cos_pi_over(m)
    return c * c / 4


# ---------------------------------------------------------------------
# QuadExt

class QuadExt:
    """a + b*sqrt(radicand) with a, b, radicand in a cyclotomic field."""
    __slots__ = ("a", "b", "radicand")

    def __init__(self, a, b, radicand):
        a, b, radicand = as_scalar(a), as_scalar(b), as_scalar(radicand)
        if not isinstance(radicand, AlgScalar):
            raise TypeError("radicand must lie in the base field")
        if sign(radicand) < 0:
            raise ValueError("radicand must be nonnegative")
        if radicand.is_zero():
            b = ZERO
        self.a, self.b, self.radicand = a, b, radicand

    @classmethod
    def lift(cls, x, radicand):
        return cls(x, ZERO, radicand)

    def _match(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if isinstance(other, AlgScalar):
            return QuadExt.lift(other, self.radicand)
        if other.radicand != self.radicand:
            if other.b.is_zero():
                return QuadExt.lift(other.a, self.radicand)
            if self.b.is_zero():
                raise _Swap()
            raise ValueError("incompatible radicands")
        return other

    def __add__(self, other):
        try:
            o = self._match(other)
        except _Swap:
            return _coerce(other) + self.a
        if o is NotImplemented:
            return o
        return QuadExt(self.a + o.a, self.b + o.b, self.radicand)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.radicand)

    def __sub__(self, other):
        return self + (-as_scalar(other))

    def __rsub__(self, other):
        return as_scalar(other) + (-self)

    def __mul__(self, other):
        try:
            o = self._match(other)
        except _Swap:
            return _coerce(other) * self.a
        if o is NotImplemented:
            return o
        a = self.a * o.a + self.b * o.b * self.radicand
        b = self.a * o.b + self.b * o.a
        return QuadExt(a, b, self.radicand)

    __rmul__ = __mul__

    def conjugate(self):
        return QuadExt(self.a, -self.b, self.radicand)

    def norm(self):
        return self.a * self.a - self.b * self.b * self.radicand

    def is_zero(self):
        sa, sb = sign(self.a), sign(self.b)
        return sa * sb <= 0 and self.norm().is_zero()

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("division by exact zero")
        n = self.norm()
        if n.is_zero():
            # the conjugate vanishes, so sqrt(radicand) = a/b up to sign
            # and the value collapses into the base field
            return QuadExt.lift(2 * self.a, self.radicand).inverse()
        ninv = n.inverse()
        return QuadExt(self.a * ninv, -self.b * ninv, self.radicand)

    def __truediv__(self, other):
        o = as_scalar(other)
        if isinstance(o, AlgScalar):
            return QuadExt(self.a / o, self.b / o, self.radicand)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return as_scalar(other) * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadExt.lift(ONE, self.radicand)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def __lt__(self, other):
        return sign(self - other) < 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    def enclosure(self, prec):
        if self.b.is_zero():
            return self.a.enclosure(prec)
        # the radicand is exactly positive here; refine until its ball is too
        p = prec
        r = self.radicand.enclosure(p)
        while not r > 0:
            p *= 2
            r = self.radicand.enclosure(p)
        with ctx.workprec(prec):
            return self.a.enclosure(prec) + self.b.enclosure(prec) * r.sqrt()

    def __float__(self):
        return float(self.enclosure(80).mid())

    def __str__(self):
        return expression(self)

    def __repr__(self):
        return "QuadExt(%s)" % expression(self)


class _Swap(Exception):
    pass


# ---------------------------------------------------------------------
# sign and printing

def sign(x):
    """Exact sign of an AlgScalar, QuadExt, int or Fraction."""
    if isinstance(x, (int, Fraction)):
        return (x > 0) - (x < 0)
    if isinstance(x, QuadExt):
        sa, sb = sign(x.a), sign(x.b)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 * radicand
        return sa * sign(x.norm())
    if x.is_zero():
        return 0
    if x.is_rational():
        return 1 if x.poly[0] > 0 else -1
    prec = 64
    while True:
        ball = x.enclosure(prec)
        if ball > 0:
            return 1
        if ball < 0:
            return -1
        prec *= 2


def _bounds(ball):
    lo_m, lo_e = ball.lower().man_exp()
    hi_m, hi_e = ball.upper().man_exp()
    lo = Fraction(int(lo_m)) * Fraction(2) ** int(lo_e)
    hi = Fraction(int(hi_m)) * Fraction(2) ** int(hi_e)
    return lo, hi


def _fixed(n, digits):
    neg = n < 0
    n = abs(n)
    whole, frac = divmod(n, 10 ** digits)
    text = "%d.%0*d" % (whole, digits, frac) if digits else "%d" % whole
    return ("-" if neg and n else "") + text


def to_float(x, digits=6):
    """Fixed-point decimal string rounded half-even to `digits` places.

    The rounding is correct: the interval enclosure is refined until both
    ends round to the same value, and a potential exact tie is settled
    with an exact comparison.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    x = as_scalar(x)
    scale = 10 ** digits
    if isinstance(x, AlgScalar) and x.is_rational():
        return _fixed(round(x.to_fraction() * scale), digits)
    prec = 64 + 4 * digits
    checked_tie = False
    while True:
        lo, hi = _bounds(x.enclosure(prec))
        rlo, rhi = round(lo * scale), round(hi * scale)
        if rlo == rhi:
            return _fixed(rlo, digits)
        if not checked_tie and rhi - rlo == 1:
            tie = Fraction(2 * rlo + 1, 2 * scale)
            if sign(x - tie) == 0:
                return _fixed(round(tie * scale), digits)
            checked_tie = True
        prec *= 2


def expression(x):
    """Exact text form.  cL stands for 2cos(pi/L); r for sqrt(radicand)."""
    if isinstance(x, QuadExt):
        if x.b.is_zero():
            return expression(x.a)
        return "(%s) + (%s)*sqrt(%s)" % (expression(x.a), expression(x.b),
                                        expression(x.radicand))
    if x.is_rational():
        return str(x.to_fraction())
    name = "c%d" % x.conductor
    terms = []
    for k, c in enumerate(x.poly.coeffs()):
        c = _to_fraction(c)
        if c == 0:
            continue
        mono = "" if k == 0 else (name if k == 1 else "%s^%d" % (name, k))
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = "%s*%s" % (abs(c), mono)
        terms.append(("-" if c < 0 else "+", body))
    text = ""
    for i, (s, body) in enumerate(terms):
        if i == 0:
            text = body if s == "+" else "-" + body
        else:
            text += " %s %s" % (s, body)
    return text


def to_json(x):
    """Exact value as a JSON-friendly dict."""
    x = as_scalar(x)
    if isinstance(x, QuadExt):
        return {"a": to_json(x.a), "b": to_json(x.b), "radicand": to_json(x.radicand)}
    return {"conductor": x.conductor, "coords": [str(c) for c in x.coords]}
