"""Exact arithmetic in cyclotomic fields Q(zeta_N).

An element is stored in the power basis 1, z, ..., z^(phi(N)-1) of Q(zeta_N),
reduced modulo the N-th cyclotomic polynomial, as an integer coefficient
vector over a common positive denominator.  This representation is canonical
per conductor: two values over the same conductor are equal iff their
normalized (num, den) pairs are equal.  Values are immutable.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi needs n >= 1")
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divmod_int(num: tuple[int, ...], den: tuple[int, ...]) -> tuple[int, ...]:
    """Quotient of an exact division of integer polynomials (monic-ish divisor).

    Used only for x^n - 1 divided by products of cyclotomic polynomials, where
    the division is exact over the integers.
    """
    num_l = list(num)
    q = [0] * (len(num_l) - len(den) + 1)
    lead = den[-1]
    for i in range(len(q) - 1, -1, -1):
        c = num_l[i + len(den) - 1]
        if c % lead != 0:
            raise ArithmeticError("inexact cyclotomic division")
        q[i] = c // lead
        if q[i]:
            for j, dj in enumerate(den):
                num_l[i + j] -= q[i] * dj
    if any(num_l[: len(den) - 1]):
        raise ArithmeticError("nonzero remainder in cyclotomic division")
    return tuple(q)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (constant term first) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("conductor must be positive")
    if n == 1:
        return (-1, 1)
    # (x^n - 1) / prod_{d | n, d < n} Phi_d, exact integer arithmetic.
    num = tuple([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            num = _poly_divmod_int(num, cyclotomic_polynomial(d))
    return num


@lru_cache(maxsize=None)
def _reduction_rows(n: int) -> tuple[tuple[int, ...], ...]:
    """Integer vectors of x^k mod Phi_n for k = phi(n) .. 2*phi(n) - 2."""
    phi = euler_phi(n)
    rows = []
    cur = [0] * phi
    # x^phi = -(lower coefficients of Phi_n) since Phi_n is monic.
    base = [-c for c in cyclotomic_polynomial(n)[:phi]]
    cur = base[:]
    rows.append(tuple(cur))
    for _ in range(phi - 2):
        # multiply current vector by x and reduce once
        carry = cur[-1]
        cur = [0] + cur[:-1]
        if carry:
            cur = [c + carry * b for c, b in zip(cur, base)]
        rows.append(tuple(cur))
    return tuple(rows)


def _reduce_vector(vec: list[int], n: int) -> list[int]:
    """Reduce an integer coefficient vector of length <= 2*phi-1 mod Phi_n."""
    phi = euler_phi(n)
    if len(vec) <= phi:
        return vec + [0] * (phi - len(vec))
    rows = _reduction_rows(n)
    out = vec[:phi]
    for k in range(phi, len(vec)):
        c = vec[k]
        if c:
            row = rows[k - phi]
            for i in range(phi):
                if row[i]:
                    out[i] += c * row[i]
    return out


def _content_gcd(nums: tuple[int, ...], den: int) -> int:
    g = den
    for c in nums:
        if c:
            g = math.gcd(g, c)
            if g == 1:
                return 1
    return g


class CycNum:
    """An element of Q(zeta_n) in the reduced power basis."""

    __slots__ = ("n", "num", "den")

    def __init__(self, n: int, num, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        phi = euler_phi(n)
        vec = list(num)
        if len(vec) > phi:
            vec = _reduce_long_vector(vec, n, phi)
        elif len(vec) < phi:
            vec = vec + [0] * (phi - len(vec))
        if den < 0:
            den = -den
            vec = [-c for c in vec]
        if all(c == 0 for c in vec):
            object.__setattr__(self, "n", n)
            object.__setattr__(self, "num", (0,) * phi)
            object.__setattr__(self, "den", 1)
            return
        g = _content_gcd(tuple(vec), den)
        if g > 1:
            vec = [c // g for c in vec]
            den //= g
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "num", tuple(vec))
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("CycNum is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_int(cls, k: int, n: int = 1) -> CycNum:
        return cls(n, [k])

    @classmethod
    def from_fraction(cls, q, n: int = 1) -> CycNum:
        q = Fraction(q)
        return cls(n, [q.numerator], q.denominator)

    @classmethod
    def zero(cls, n: int = 1) -> CycNum:
        return cls(n, [])

    @classmethod
    def one(cls, n: int = 1) -> CycNum:
        return cls(n, [1])

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.num)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.num[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number: %s" % (self,))
        return Fraction(self.num[0], self.den)

    def to_conductor(self, m: int) -> CycNum:
        """Embed into Q(zeta_m) for a multiple m of the conductor."""
        if m == self.n:
            return self
        if m % self.n != 0:
            raise ValueError("conductor %d does not divide %d" % (self.n, m))
        step = m // self.n
        phi_m = euler_phi(m)
        vec = [0] * (len(self.num) * step)
        for i, c in enumerate(self.num):
            vec[i * step] = c
        vec = _reduce_long_vector(vec, m, phi_m)
        return CycNum(m, vec, self.den)

    def reduce(self) -> CycNum:
        """Rewrite over the smallest conductor whose field contains the value."""
        if self.is_rational():
            return CycNum(1, [self.num[0]], self.den) if self.n != 1 else self
        for d in _divisors(self.n):
            if d == self.n:
                break
            down = _project_to_subfield(self, d)
            if down is not None:
                return down
        return self

    # -- arithmetic --------------------------------------------------------

    def _pair(self, other):
        if isinstance(other, CycNum):
            if self.n == other.n:
                return self, other
            m = _lcm(self.n, other.n)
            return self.to_conductor(m), other.to_conductor(m)
        if isinstance(other, int):
            return self, CycNum(self.n, [other])
        if isinstance(other, Fraction):
            return self, CycNum(self.n, [other.numerator], other.denominator)
        return None, None

    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        da, db = a.den, b.den
        if da == db:
            return CycNum(a.n, [x + y for x, y in zip(a.num, b.num)], da)
        g = math.gcd(da, db)
        ma, mb = db // g, da // g
        return CycNum(a.n, [x * ma + y * mb for x, y in zip(a.num, b.num)], da * ma)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.n, [-c for c in self.num], self.den)

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        phi = len(a.num)
        out = [0] * (2 * phi - 1)
        for i, x in enumerate(a.num):
            if x:
                for j, y in enumerate(b.num):
                    if y:
                        out[i + j] += x * y
        return CycNum(a.n, _reduce_vector(out, a.n), a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> CycNum:
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(zeta_%d)" % self.n)
        if self.is_rational():
            return CycNum(self.n, [self.den] + [0] * (len(self.num) - 1), self.num[0])
        # Extended Euclid in Q[x]: u * self_poly + v * Phi_n = 1.
        phi_poly = [Fraction(c) for c in cyclotomic_polynomial(self.n)]
        a = [Fraction(c, self.den) for c in self.num]
        inv = _poly_modinv(a, phi_poly)
        den = 1
        for c in inv:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return CycNum(self.n, [int(c * den) for c in inv], den)

    def __truediv__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycNum.one(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            if not self.is_rational():
                return False
            return self.as_fraction() == other
        if not isinstance(other, CycNum):
            return NotImplemented
        if self.n == other.n:
            return self.num == other.num and self.den == other.den
        a, b = self._pair(other)
        return a.num == b.num and a.den == b.den

    def __hash__(self):
        return hash(self.canonical_key())

    def canonical_key(self) -> bytes:
        """Injective byte key, stable across conductors representing the value."""
        r = self.reduce()
        return b"%d:%d:%s" % (r.n, r.den, repr(r.num).encode())

    def root_of_unity_order(self):
        """Multiplicative order if the value is a root of unity, else None."""
        if self.is_zero():
            return None
        bound = self.n if self.n % 2 == 0 else 2 * self.n
        p = self ** bound
        if not (p.is_rational() and p.as_fraction() == 1):
            return None
        for d in sorted(_divisors(bound)):
            q = self ** d
            if q.is_rational() and q.as_fraction() == 1:
                return d
        return None

    def __repr__(self):
        return "CycNum(%r)" % scalar_to_str(self)

    def __str__(self):
        return scalar_to_str(self)


def root_of_unity(k: int, power: int = 1) -> CycNum:
    """zeta_k ** power as an element of Q(zeta_k)."""
    if k < 1:
        raise ValueError("order of the root must be positive")
    power %= k
    g = math.gcd(power, k) if power else k
    # zeta_k^power is a primitive (k/g)-th root; build it there directly.
    if power == 0:
        return CycNum.one(1)
    kk = k // g
    pp = (power // g) % kk
    vec = [0] * (pp + 1)
    vec[pp] = 1
    return CycNum(kk, vec)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


@lru_cache(maxsize=None)
def _divisors(n: int) -> tuple[int, ...]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return tuple(sorted(out))


def _reduce_long_vector(vec: list[int], n: int, phi: int) -> list[int]:
    """Reduce a vector of arbitrary length mod Phi_n using x^n = 1 first."""
    if len(vec) > n:
        folded = [0] * n
        for i, c in enumerate(vec):
            folded[i % n] += c
        vec = folded
    # then reduce degrees phi..n-1 by long division with Phi_n
    phi_poly = cyclotomic_polynomial(n)
    vec = vec + [0] * max(0, phi + 1 - len(vec))
    for k in range(len(vec) - 1, phi - 1, -1):
        c = vec[k]
        if c:
            vec[k] = 0
            for j in range(phi):
                vec[k - phi + j] -= c * phi_poly[j]
    return vec[:phi]


def _poly_modinv(a: list[Fraction], mod: list[Fraction]) -> list[Fraction]:
    """Inverse of a modulo mod in Q[x] via the extended Euclidean algorithm."""

    def trim(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    def polydiv(p, q):
        p = p[:]
        quo = [Fraction(0)] * max(1, len(p) - len(q) + 1)
        while len(p) >= len(q) and trim(p):
            c = p[-1] / q[-1]
            k = len(p) - len(q)
            quo[k] = c
            for i, qi in enumerate(q):
                p[i + k] -= c * qi
            trim(p)
        return quo, p

    r0, r1 = mod[:], trim(a[:])
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while True:
        q, r = polydiv(r0, r1)
        r = trim(r)
        if not r:
            break
        # s = s0 - q * s1
        prod = [Fraction(0)] * (len(q) + len(s1) - 1)
        for i, qi in enumerate(q):
            if qi:
                for j, sj in enumerate(s1):
                    prod[i + j] += qi * sj
        s = [x - y for x, y in zip(s0 + [Fraction(0)] * len(prod), prod + [Fraction(0)] * len(s0))]
        r0, r1 = r1, r
        s0, s1 = s1, trim(s) or [Fraction(0)]
    if len(r1) != 1:
        raise ZeroDivisionError("element is a zero divisor mod Phi_n")
    c = r1[0]
    return [si / c for si in s1]


@lru_cache(maxsize=None)
def _subfield_basis(n: int, d: int):
    """Power basis of Q(zeta_d) embedded in Q(zeta_n), as integer row vectors."""
    rows = []
    step = n // d
    phi_n = euler_phi(n)
    for j in range(euler_phi(d)):
        vec = [0] * (j * step + 1)
        vec[j * step] = 1
        rows.append(tuple(_reduce_long_vector(vec, n, phi_n)))
    return tuple(rows)


def _project_to_subfield(x: CycNum, d: int):
    """Rewrite x over conductor d | n if the value lies in Q(zeta_d)."""
    n = x.n
    basis = _subfield_basis(n, d)
    phi_n = euler_phi(n)
    phi_d = len(basis)
    # Solve sum_j c_j * basis[j] = num over Q by Gaussian elimination.
    cols = list(range(phi_d))
    mat = [[Fraction(basis[j][i]) for j in cols] + [Fraction(x.num[i])] for i in range(phi_n)]
    piv_rows = []
    row = 0
    for col in range(phi_d):
        sel = None
        for r in range(row, phi_n):
            if mat[r][col] != 0:
                sel = r
                break
        if sel is None:
            return None
        mat[row], mat[sel] = mat[sel], mat[row]
        pv = mat[row][col]
        for r in range(phi_n):
            if r != row and mat[r][col] != 0:
                f = mat[r][col] / pv
                for cc in range(col, phi_d + 1):
                    mat[r][cc] -= f * mat[row][cc]
        piv_rows.append((row, col))
        row += 1
    for r in range(row, phi_n):
        if mat[r][phi_d] != 0:
            return None
    coeffs = [Fraction(0)] * phi_d
    for r, c in piv_rows:
        coeffs[c] = mat[r][phi_d] / mat[r][c]
    scale = 1
    for q in coeffs:
        scale = _lcm(scale, q.denominator)
    return CycNum(d, [int(q * scale) for q in coeffs], x.den * scale)


# -- scalar text syntax ----------------------------------------------------

_TOKEN = re.compile(r"\s*(\d+|z\d+|[()+\-*/^]|\Z)")


class ScalarSyntaxError(ValueError):
    def __init__(self, message, pos):
        super().__init__("%s at position %d" % (message, pos))
        self.pos = pos


class _ScalarParser:
    """Recursive-descent parser for the scalar grammar.

    Atoms: integers, fractions a/b, z<k> and z<k>^<j>; combined with
    + - * / ( ) and unary minus.
    """

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.group(1) == "":
                if text[pos:].strip():
                    raise ScalarSyntaxError("unexpected character %r" % text[pos], pos)
                break
            self.tokens.append((m.group(1), m.start(1)))
            pos = m.end()
        self.tokens.append(("", len(text)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> CycNum:
        v = self.expr()
        if self.peek() != "":
            raise ScalarSyntaxError("trailing input", self.tokens[self.i][1])
        return v

    def expr(self) -> CycNum:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.next()[0] == "-":
                sign = -sign
        v = self.term() * sign
        while self.peek() in ("+", "-"):
            op = self.next()[0]
            t = self.term()
            v = v + t if op == "+" else v - t
        return v

    def term(self) -> CycNum:
        v = self.factor()
        while self.peek() in ("*", "/"):
            op = self.next()[0]
            f = self.factor()
            if op == "*":
                v = v * f
            else:
                if f.is_zero():
                    raise ScalarSyntaxError("division by zero", self.tokens[self.i - 1][1])
                v = v / f
        return v

    def factor(self) -> CycNum:
        tok, pos = self.next()
        if tok == "-":
            return -self.factor()
        if tok == "(":
            v = self.expr()
            if self.peek() != ")":
                raise ScalarSyntaxError("missing ')'", self.tokens[self.i][1])
            self.next()
            return self._maybe_power(v)
        if tok.isdigit():
            return self._maybe_power(CycNum.from_int(int(tok)))
        if tok.startswith("z"):
            k = int(tok[1:])
            if k < 1:
                raise ScalarSyntaxError("root order must be positive", pos)
            power = 1
            if self.peek() == "^":
                self.next()
                power = self._exponent()
            return root_of_unity(k, power)
        raise ScalarSyntaxError("expected scalar atom, got %r" % tok, pos)

    def _maybe_power(self, v: CycNum) -> CycNum:
        if self.peek() == "^":
            self.next()
            return v ** self._exponent()
        return v

    def _exponent(self) -> int:
        sign = 1
        if self.peek() == "-":
            self.next()
            sign = -1
        tok, pos = self.next()
        if not tok.isdigit():
            raise ScalarSyntaxError("expected integer exponent", pos)
        return sign * int(tok)


def parse_scalar(text: str) -> CycNum:
    """Parse the scalar text syntax, e.g. '(1+2*z3)' or '3/4*z8^3'."""
    return _ScalarParser(text).parse()


def scalar_to_str(x: CycNum) -> str:
    """Canonical text form, parseable by parse_scalar."""
    r = x.reduce()
    if r.is_rational():
        f = r.as_fraction()
        return str(f.numerator) if f.denominator == 1 else "%d/%d" % (f.numerator, f.denominator)
    parts = []
    for k, c in enumerate(r.num):
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag) if r.den == 1 else "%d/%d" % (mag, r.den)
        else:
            z = "z%d" % r.n if k == 1 else "z%d^%d" % (r.n, k)
            if mag == 1 and r.den == 1:
                body = z
            elif r.den == 1:
                body = "%d*%s" % (mag, z)
            else:
                body = "%d/%d*%s" % (mag, r.den, z)
        parts.append(("-" if c < 0 else "+") + body)
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s
