"""Exact coefficient arithmetic.

Everything downstream works over one of four rings:

* ``Z``  -- integer Laurent polynomials Z[t, t^-1]  (:class:`Laurent`);
* ``K``  -- the rational function field Q(t)        (:class:`RatFun`);
* ``Q_e`` -- Q[t, t^-1] localized at the ideal generated by the cyclotomic
  polynomial Phi_{2e}(t)                            (:class:`LocalScalar`);
* ``k_e`` -- the residue field Q[t]/(Phi_{2e}(t))   (:class:`CycloScalar`).

The localization is a discrete valuation ring with uniformizer Phi_{2e};
:meth:`LocalScalar.valuation` is the Phi-adic valuation.

Polynomials render to and parse from one canonical string form, e.g.
``3*t^-2 + 1 + t^4`` (ascending exponents).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


class Laurent:
    """An integer Laurent polynomial in t.

    >>> t = Laurent.t()
    >>> p = 3 * t**-2 + 1 + t**4
    >>> str(p)
    '3*t^-2 + 1 + t^4'
    >>> p == Laurent.parse('3*t^-2 + 1 + t^4')
    True
    >>> str(p.bar())
    't^-4 + 1 + 3*t^2'
    """

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        # mapping exponent -> nonzero integer coefficient
        self.c = {}
        if coeffs:
            for e, a in coeffs.items():
                if a:
                    self.c[int(e)] = int(a)

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "Laurent":
        return Laurent()

    @staticmethod
    def one() -> "Laurent":
        return Laurent({0: 1})

    @staticmethod
    def t(exp: int = 1, coeff: int = 1) -> "Laurent":
        return Laurent({exp: coeff})

    @staticmethod
    def const(n: int) -> "Laurent":
        return Laurent({0: n})

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.c == {0: 1}

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Laurent.const(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = Laurent.const(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        c = dict(self.c)
        for e, a in other.c.items():
            s = c.get(e, 0) + a
            if s:
                c[e] = s
            elif e in c:
                del c[e]
        out = Laurent.__new__(Laurent)
        out.c = c
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Laurent.__new__(Laurent)
        out.c = {e: -a for e, a in self.c.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, int):
            other = Laurent.const(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return Laurent()
            out = Laurent.__new__(Laurent)
            out.c = {e: a * other for e, a in self.c.items()}
            return out
        if not isinstance(other, Laurent):
            return NotImplemented
        c = {}
        for e1, a1 in self.c.items():
            for e2, a2 in other.c.items():
                e = e1 + e2
                s = c.get(e, 0) + a1 * a2
                if s:
                    c[e] = s
                elif e in c:
                    del c[e]
        out = Laurent.__new__(Laurent)
        out.c = c
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.c) == 1:
                ((e, a),) = self.c.items()
                if a == 1:
                    return Laurent({e * n: 1})
                if a == -1:
                    return Laurent({e * n: (-1) ** (-n)})
            raise ValueError("negative power of a non-unit Laurent polynomial")
        out = Laurent.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- structure ----------------------------------------------------

    def degree(self):
        """Largest exponent with nonzero coefficient (None when zero)."""
        return max(self.c) if self.c else None

    def valuation_t(self):
        """Smallest exponent with nonzero coefficient (None when zero)."""
        return min(self.c) if self.c else None

    def coeff(self, e: int) -> int:
        return self.c.get(e, 0)

    def bar(self) -> "Laurent":
        """The involution t -> t^-1."""
        out = Laurent.__new__(Laurent)
        out.c = {-e: a for e, a in self.c.items()}
        return out

    def shift(self, k: int) -> "Laurent":
        """Multiply by t^k."""
        out = Laurent.__new__(Laurent)
        out.c = {e + k: a for e, a in self.c.items()}
        return out

    def content(self) -> int:
        """Positive gcd of the coefficients (0 for the zero polynomial)."""
        import math

        g = 0
        for a in self.c.values():
            g = math.gcd(g, a)
        return g

    def subs_t2(self) -> "Laurent":
        """Substitute t -> t^2 (used to view polynomials in q = t^2)."""
        out = Laurent.__new__(Laurent)
        out.c = {2 * e: a for e, a in self.c.items()}
        return out

    # -- evaluation ---------------------------------------------------

    def eval_mod(self, theta: int, p: int) -> int:
        """Evaluate at t = theta modulo the prime p (theta invertible)."""
        if not self.c:
            return 0
        inv = None
        acc = 0
        for e, a in self.c.items():
            if e >= 0:
                acc += a * pow(theta, e, p)
            else:
                if inv is None:
                    inv = pow(theta, -1, p)
                acc += a * pow(inv, -e, p)
        return acc % p

    def eval_rational(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for e, a in self.c.items():
            acc += a * x**e
        return acc

    # -- division -----------------------------------------------------

    def divexact(self, other: "Laurent") -> "Laurent":
        """Exact division; raises ValueError if not divisible.

        >>> t = Laurent.t()
        >>> (t**2 - 1).divexact(t - 1) == t + 1
        True
        """
        q, r = _laurent_divmod(self, other)
        if not r.is_zero():
            raise ValueError("not divisible")
        return q

    def divides(self, other: "Laurent") -> bool:
        _, r = _laurent_divmod(other, self)
        return r.is_zero()

    # -- rendering ----------------------------------------------------

    def __str__(self) -> str:
        return render_poly(self)

    def __repr__(self) -> str:
        return f"Laurent({render_poly(self)!r})"

    @staticmethod
    def parse(s: str) -> "Laurent":
        return parse_poly(s)


def _laurent_divmod(a: Laurent, b: Laurent):
    """Division with remainder, treating both as polynomials after a t-shift.

    Works whenever leading-coefficient division stays integral at each step
    (always the case for the monic/±1-leading divisors used here); otherwise
    the remainder simply comes back nonzero-or-raises via non-integrality.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if a.is_zero():
        return Laurent.zero(), Laurent.zero()
    sa, sb = a.valuation_t(), b.valuation_t()
    # shift so both are honest polynomials
    a2, b2 = a.shift(-sa), b.shift(-sb)
    db = b2.degree()
    lead = b2.coeff(db)
    q = {}
    r = dict(a2.c)

    def deg(cc):
        return max(cc) if cc else None

    while r and deg(r) >= db:
        dr = deg(r)
        c = r[dr]
        if c % lead:
            # non-integral quotient step: report as a remainder
            break
        f = c // lead
        q[dr - db] = f
        for e, v in b2.c.items():
            ee = e + dr - db
            s = r.get(ee, 0) - f * v
            if s:
                r[ee] = s
            elif ee in r:
                del r[ee]
    qq = Laurent(q).shift(sa - sb)
    rr = Laurent(r).shift(sa)
    return qq, rr


# ---------------------------------------------------------------------------
# canonical rendering / parsing
# ---------------------------------------------------------------------------


def render_poly(p: Laurent) -> str:
    """Canonical string form: ascending exponents, ``3*t^-2 + 1 + t^4``."""
    if p.is_zero():
        return "0"
    parts = []
    for e in sorted(p.c):
        a = p.c[e]
        mag = abs(a)
        if e == 0:
            body = str(mag)
        else:
            te = "t" if e == 1 else f"t^{e}"
            body = te if mag == 1 else f"{mag}*{te}"
        if not parts:
            parts.append(("-" if a < 0 else "") + body)
        else:
            parts.append(("- " if a < 0 else "+ ") + body)
    return " ".join(parts)


_TERM_RE = re.compile(r"^(?:(\d+)\*?)?(t)(?:\^(-?\d+))?$|^(\d+)$")


def parse_poly(s: str) -> Laurent:
    """Parse the canonical polynomial form (the inverse of render_poly).

    >>> parse_poly('-t^-1 + 2 - 3*t^2') == Laurent({-1: -1, 0: 2, 2: -3})
    True
    >>> parse_poly('0').is_zero()
    True
    """
    s = s.strip()
    if not s:
        raise ValueError("empty polynomial string")
    tokens = re.split(r"\s*(?<!\^)([+-])\s*", s)
    # tokens: optional leading '', sign/term alternation
    out = {}
    sign = 1
    expect_term = True
    it = iter(tokens)
    first = next(it)
    pending = None
    if first == "":
        pending = None  # leading sign follows
    else:
        pending = first
    stream = []
    if pending is not None:
        stream.append(pending)
    stream.extend(x for x in it)
    i = 0
    sign = 1
    seen_any = False
    while i < len(stream):
        tok = stream[i]
        if tok in "+-":
            sign = 1 if tok == "+" else -1
            i += 1
            if i >= len(stream):
                raise ValueError(f"dangling sign in {s!r}")
            tok = stream[i]
        m = _TERM_RE.match(tok.replace(" ", ""))
        if not m:
            raise ValueError(f"bad term {tok!r} in {s!r}")
        if m.group(4) is not None:
            coeff, exp = int(m.group(4)), 0
        else:
            coeff = int(m.group(1)) if m.group(1) else 1
            exp = int(m.group(3)) if m.group(3) else 1
        out[exp] = out.get(exp, 0) + sign * coeff
        sign = 1
        seen_any = True
        i += 1
    if not seen_any:
        raise ValueError(f"no terms in {s!r}")
    return Laurent(out)


# ---------------------------------------------------------------------------
# rational-coefficient polynomial helpers (ascending coefficient lists)
# ---------------------------------------------------------------------------


def _trim(cs):
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _pdivmod(a, b):
    """divmod of Fraction coefficient lists (ascending)."""
    a = list(a)
    if not _trim(list(b)):
        raise ZeroDivisionError
    b = _trim(list(b))
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = Fraction(1) / b[-1]
    r = _trim(a)
    while len(r) >= len(b):
        f = r[-1] * inv
        d = len(r) - len(b)
        q[d] = f
        for i, bc in enumerate(b):
            r[i + d] -= f * bc
        _trim(r)
    return q, r


def _pgcd(a, b):
    """Monic gcd of Fraction coefficient lists."""
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, _trim(r)
    if a:
        inv = Fraction(1) / a[-1]
        a = [x * inv for x in a]
    return a


def _pxgcd(a, b):
    """Extended gcd: returns (g, u, v) with u*a + v*b = g, g monic."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    r0, r1 = _trim(list(a)), _trim(list(b))
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]

    def padd(x, y):
        n = max(len(x), len(y))
        return _trim([(x[i] if i < len(x) else 0) + (y[i] if i < len(y) else 0) for i in range(n)])

    def pmul(x, y):
        if not x or not y:
            return []
        out = [Fraction(0)] * (len(x) + len(y) - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    out[i + j] += xi * yj
        return _trim(out)

    def pneg(x):
        return [-c for c in x]

    while r1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, _trim(r)
        s0, s1 = s1, padd(s0, pneg(pmul(q, s1)))
        t0, t1 = t1, padd(t0, pneg(pmul(q, t1)))
    if r0:
        inv = Fraction(1) / r0[-1]
        r0 = [c * inv for c in r0]
        s0 = [c * inv for c in s0]
        t0 = [c * inv for c in t0]
    return r0, s0, t0


def laurent_to_list(p: Laurent):
    """(shift, ascending Fraction list) with list[0] != 0 unless p == 0."""
    if p.is_zero():
        return 0, []
    v = p.valuation_t()
    d = p.degree()
    return v, [Fraction(p.coeff(e)) for e in range(v, d + 1)]


def list_to_laurent(shift, cs) -> Laurent:
    """Inverse of laurent_to_list for integer-valued lists."""
    out = {}
    for i, c in enumerate(cs):
        if c:
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError("non-integer coefficient")
                c = c.numerator
            out[shift + i] = int(c)
    return Laurent(out)


# ---------------------------------------------------------------------------
# cyclotomic polynomials
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> Laurent:
    """The n-th cyclotomic polynomial Phi_n(t) in Z[t].

    Computed by exact division of t^n - 1 by the product of Phi_d over
    proper divisors d of n.

    >>> str(cyclotomic(2))
    '1 + t'
    >>> str(cyclotomic(6))
    '1 - t + t^2'
    >>> str(cyclotomic(12))
    '1 - t^2 + t^4'
    """
    if n < 1:
        raise ValueError("n must be positive")
    t = Laurent.t()
    num = t**n - 1
    for d in range(1, n):
        if n % d == 0:
            num = num.divexact(cyclotomic(d))
    return num


def phi_for_e(e: int) -> Laurent:
    """The uniformizer Phi_{2e}(t) of the localization Q_e."""
    if e < 1:
        raise ValueError("e must be a positive integer")
    return cyclotomic(2 * e)


# ---------------------------------------------------------------------------
# the residue field k_e = Q[t]/(Phi_{2e})
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _phi_list(e: int):
    _, cs = laurent_to_list(phi_for_e(e))
    return tuple(cs)


@lru_cache(maxsize=None)
def _t_inverse_coeffs(e: int):
    # t is a unit mod Phi_{2e}: find its inverse via extended gcd
    phi = list(_phi_list(e))
    g, u, _ = _pxgcd([Fraction(0), Fraction(1)], phi)
    if len(g) != 1:
        raise ArithmeticError("t not invertible mod Phi (impossible)")
    return tuple(u)


@dataclass(frozen=True)
class CycloScalar:
    """An element of the field k_e = Q[t]/(Phi_{2e}(t)).

    Stored as a tuple of Fractions of length deg Phi_{2e} (ascending powers
    of the image of t).

    >>> x = CycloScalar.from_laurent(Laurent.t(2), 3)   # t^2 mod Phi_6
    >>> str(x)
    '-1 + t'
    >>> CycloScalar.from_laurent(cyclotomic(6), 3).is_zero()
    True
    """

    e: int
    v: tuple

    @staticmethod
    def _reduce(e: int, cs):
        phi = list(_phi_list(e))
        d = len(phi) - 1
        cs = [Fraction(x) for x in cs]
        if len(cs) >= len(phi):
            _, cs = _pdivmod(cs, phi)
        cs = list(cs) + [Fraction(0)] * (d - len(cs))
        return tuple(cs[:d])

    @staticmethod
    def zero(e: int) -> "CycloScalar":
        d = len(_phi_list(e)) - 1
        return CycloScalar(e, tuple([Fraction(0)] * d))

    @staticmethod
    def one(e: int) -> "CycloScalar":
        d = len(_phi_list(e)) - 1
        return CycloScalar(e, tuple([Fraction(1)] + [Fraction(0)] * (d - 1)))

    @staticmethod
    def from_laurent(p: Laurent, e: int) -> "CycloScalar":
        d = len(_phi_list(e)) - 1
        tinv = list(_t_inverse_coeffs(e))
        acc = [Fraction(0)] * d
        # split into nonnegative part and t^-1 powers
        neg = {}
        pos = []
        for exp, a in p.c.items():
            if exp >= 0:
                if exp >= len(pos):
                    pos.extend([Fraction(0)] * (exp + 1 - len(pos)))
                pos[exp] += a
            else:
                neg[-exp] = neg.get(-exp, 0) + a
        cur = CycloScalar(e, CycloScalar._reduce(e, pos))
        if neg:
            ti = CycloScalar(e, CycloScalar._reduce(e, tinv))
            mx = max(neg)
            powv = CycloScalar.one(e)
            table = {}
            for k in range(1, mx + 1):
                powv = powv * ti
                if k in neg:
                    table[k] = powv
            for k, a in neg.items():
                cur = cur + table[k].scale(a)
        return cur

    @staticmethod
    def from_fraction(x, e: int) -> "CycloScalar":
        d = len(_phi_list(e)) - 1
        return CycloScalar(e, tuple([Fraction(x)] + [Fraction(0)] * (d - 1)))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.v)

    def scale(self, a) -> "CycloScalar":
        a = Fraction(a)
        return CycloScalar(self.e, tuple(x * a for x in self.v))

    def __add__(self, other):
        self._chk(other)
        return CycloScalar(self.e, tuple(x + y for x, y in zip(self.v, other.v)))

    def __sub__(self, other):
        self._chk(other)
        return CycloScalar(self.e, tuple(x - y for x, y in zip(self.v, other.v)))

    def __neg__(self):
        return CycloScalar(self.e, tuple(-x for x in self.v))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._chk(other)
        a, b = list(self.v), list(other.v)
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return CycloScalar(self.e, CycloScalar._reduce(self.e, out))

    __rmul__ = __mul__

    def inverse(self) -> "CycloScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of 0 in k_e")
        g, u, _ = _pxgcd(list(self.v), list(_phi_list(self.e)))
        if len(g) != 1:
            raise ArithmeticError("non-unit in a field (impossible)")
        return CycloScalar(self.e, CycloScalar._reduce(self.e, u))

    def _chk(self, other):
        if not isinstance(other, CycloScalar) or other.e != self.e:
            raise TypeError("mixed residue fields")

    def eval_mod(self, theta: int, p: int) -> int:
        """Image in F_p sending t to theta (a root of Phi_{2e} mod p)."""
        acc = 0
        for i, x in enumerate(self.v):
            if x:
                acc += x.numerator * pow(x.denominator, -1, p) * pow(theta, i, p)
        return acc % p

    def __str__(self):
        terms = []
        for i, x in enumerate(self.v):
            if x == 0:
                continue
            mag = abs(x)
            if i == 0:
                body = str(mag)
            else:
                te = "t" if i == 1 else f"t^{i}"
                body = te if mag == 1 else f"{mag}*{te}"
            if not terms:
                terms.append(("-" if x < 0 else "") + body)
            else:
                terms.append(("- " if x < 0 else "+ ") + body)
        return " ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# rational functions and the localization Q_e
# ---------------------------------------------------------------------------


def _laurent_from_fraclist(cs):
    """Fraction list (ascending) -> (Laurent numerator, positive int denominator)."""
    den = 1
    for c in cs:
        if isinstance(c, Fraction):
            den = den * c.denominator // _gcd(den, c.denominator)
    out = {}
    for i, c in enumerate(cs):
        v = int(Fraction(c) * den)
        if v:
            out[i] = v
    return Laurent(out), den


def _gcd(a, b):
    import math

    return math.gcd(a, b)


class RatFun:
    """An element of K = Q(t): a normalized quotient of integer polynomials.

    Normalization: gcd(num, den) = 1 over Q[t], den an honest polynomial with
    nonzero constant term (t-powers pulled into num), primitive, positive
    leading coefficient.

    >>> t = Laurent.t()
    >>> x = RatFun(t**2 - 1, t - 1)
    >>> str(x)
    '(1 + t)/(1)'
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Laurent, den: Laurent = None):
        if den is None:
            den = Laurent.one()
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = Laurent.zero(), Laurent.one()
            return
        sn, ln = laurent_to_list(num)
        sd, ld = laurent_to_list(den)
        g = _pgcd(ln, ld)
        if len(g) > 1:
            qn, _ = _pdivmod(ln, g)
            qd, _ = _pdivmod(ld, g)
        else:
            qn, qd = [Fraction(x) for x in ln], [Fraction(x) for x in ld]
        pn, dn = _laurent_from_fraclist(qn)
        pd, dd = _laurent_from_fraclist(qd)
        # num/den = (pn/dn) / (pd/dd) * t^(sn - sd)
        num2 = pn * dd
        den2 = pd * dn
        cn, cd = num2.content(), den2.content()
        g2 = _gcd(cn, cd)
        if g2 > 1:
            num2 = Laurent({e: a // g2 for e, a in num2.c.items()})
            den2 = Laurent({e: a // g2 for e, a in den2.c.items()})
        if den2.coeff(den2.degree()) < 0:
            num2, den2 = -num2, -den2
        self.num = num2.shift(sn - sd)
        self.den = den2

    @staticmethod
    def zero():
        return RatFun(Laurent.zero())

    @staticmethod
    def one():
        return RatFun(Laurent.one())

    def is_zero(self):
        return self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            other = RatFun(Laurent.const(other))
        if not isinstance(other, RatFun):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        if isinstance(other, int):
            other = RatFun(Laurent.const(other))
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        r = RatFun.__new__(RatFun)
        r.num, r.den = -self.num, self.den
        return r

    def __sub__(self, other):
        if isinstance(other, int):
            other = RatFun(Laurent.const(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = RatFun(Laurent.const(other))
        elif isinstance(other, Laurent):
            other = RatFun(other)
        if not isinstance(other, RatFun):
            return NotImplemented
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError
        return RatFun(self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, (int, Laurent)):
            other = RatFun(other if isinstance(other, Laurent) else Laurent.const(other))
        return self * other.inverse()

    def __str__(self):
        return f"({render_poly(self.num)})/({render_poly(self.den)})"

    __repr__ = __str__


def phi_valuation(p: Laurent, e: int) -> int:
    """Multiplicity of Phi_{2e} in a nonzero Laurent polynomial."""
    if p.is_zero():
        raise ValueError("valuation of zero")
    phi = phi_for_e(e)
    v = 0
    while True:
        q, r = _laurent_divmod(p, phi)
        if not r.is_zero():
            return v
        p = q
        v += 1


class LocalScalar:
    """An element of Q_e: a rational function with denominator prime to Phi_{2e}.

    >>> t = Laurent.t()
    >>> x = LocalScalar.from_laurent(cyclotomic(6) * cyclotomic(6), 3)
    >>> x.valuation()
    2
    >>> LocalScalar.from_laurent(t + 3, 3).valuation()
    0
    """

    __slots__ = ("e", "f")

    def __init__(self, f: RatFun, e: int):
        if not f.is_zero() and phi_valuation(f.den, e) != 0:
            raise ValueError("denominator not invertible in the localization")
        self.f = f
        self.e = e

    @staticmethod
    def from_laurent(p: Laurent, e: int) -> "LocalScalar":
        return LocalScalar(RatFun(p), e)

    @staticmethod
    def zero(e: int):
        return LocalScalar(RatFun.zero(), e)

    @staticmethod
    def one(e: int):
        return LocalScalar(RatFun.one(), e)

    def is_zero(self):
        return self.f.is_zero()

    def valuation(self):
        """Phi-adic valuation (math.inf for zero)."""
        import math

        if self.f.is_zero():
            return math.inf
        return phi_valuation(self.f.num, self.e)

    def is_unit(self):
        return (not self.f.is_zero()) and self.valuation() == 0

    def _wrap(self, f):
        return LocalScalar(f, self.e)

    def __add__(self, other):
        self._chk(other)
        return self._wrap(self.f + other.f)

    def __sub__(self, other):
        self._chk(other)
        return self._wrap(self.f - other.f)

    def __neg__(self):
        return self._wrap(-self.f)

    def __mul__(self, other):
        if isinstance(other, int):
            return self._wrap(self.f * other)
        self._chk(other)
        return self._wrap(self.f * other.f)

    __rmul__ = __mul__

    def inverse(self):
        if not self.is_unit():
            raise ZeroDivisionError("non-unit in the localization")
        return self._wrap(self.f.inverse())

    def __eq__(self, other):
        if isinstance(other, int):
            return self.f == other
        if not isinstance(other, LocalScalar) or other.e != self.e:
            return NotImplemented
        return self.f == other.f

    def __hash__(self):
        return hash((self.e, self.f))

    def _chk(self, other):
        if not isinstance(other, LocalScalar) or other.e != self.e:
            raise TypeError("mixed localizations")

    def reduce(self) -> CycloScalar:
        """Image in the residue field k_e (requires valuation >= 0)."""
        if self.f.is_zero():
            return CycloScalar.zero(self.e)
        num = CycloScalar.from_laurent(self.f.num, self.e)
        den = CycloScalar.from_laurent(self.f.den, self.e)
        return num * den.inverse()

    def __str__(self):
        return str(self.f)

    __repr__ = __str__


def reduce_mod(x, e: int) -> CycloScalar:
    """Reduction to k_e of a Laurent polynomial or a LocalScalar.

    >>> str(reduce_mod(Laurent.t(2), 3))
    '-1 + t'
    >>> reduce_mod(phi_for_e(3), 3).is_zero()
    True
    """
    if isinstance(x, Laurent):
        return CycloScalar.from_laurent(x, e)
    if isinstance(x, LocalScalar):
        if x.e != e:
            raise ValueError("mismatched e")
        return x.reduce()
    raise TypeError(f"cannot reduce {type(x).__name__}")


def bar(x: Laurent) -> Laurent:
    """The involution t -> t^-1 on Z[t, t^-1]."""
    return x.bar()
