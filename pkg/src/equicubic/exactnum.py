"""Exact arithmetic in Q and in the cyclotomic fields Q(zeta_n).

Scalars are represented in the power basis 1, z, ..., z^(phi(n)-1) of
Q(zeta_n) = Q[x]/(Phi_n), with Phi_n the n-th cyclotomic polynomial.
Internally a value is an integer coefficient vector plus a positive common
denominator, kept in lowest terms, so equality and hashing are structural.
No floating point is used anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

BigRational = Fraction


class DomainError(ValueError):
    """Raised when an operation is called outside its domain."""


class ArithmeticFailure(ZeroDivisionError):
    """Raised on division by zero and 0**negative."""


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _poly_divmod_exact(num, den):
    """Divide integer polynomials exactly (den monic); returns quotient.

    Raises if the division leaves a remainder.
    """
    num = list(num)
    dn = len(den) - 1
    if den[-1] != 1:
        raise DomainError("divisor must be monic")
    q = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            q[i - dn] = c
            for j, dj in enumerate(den):
                num[i - dn + j] -= c * dj
    if any(num):
        raise ArithmeticError("non-exact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Coefficients (low to high) of the n-th cyclotomic polynomial over Z.

    Computed by exact division of x^n - 1 by the product of Phi_d over the
    proper divisors d of n.
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError("cyclotomic polynomial needs a positive integer order")
    if n > 2000:
        raise DomainError("cyclotomic order out of supported range (<= 2000)")
    if n == 1:
        return (-1, 1)
    xn1 = [0] * (n + 1)
    xn1[0] = -1
    xn1[n] = 1
    prod = [1]
    for d in range(1, n):
        if n % d == 0:
            prod = _poly_mul(prod, cyclotomic_polynomial(d))
    return tuple(_poly_divmod_exact(xn1, prod))


def euler_phi(n: int) -> int:
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


class CycloField:
    """The cyclotomic field Q(zeta_n), shared and memoized per order n."""

    _cache: dict = {}

    def __new__(cls, n: int):
        fld = cls._cache.get(n)
        if fld is not None:
            return fld
        fld = super().__new__(cls)
        fld._init(n)
        cls._cache[n] = fld
        return fld

    def _init(self, n: int):
        if not isinstance(n, int) or n < 1:
            raise DomainError("field order must be a positive integer")
        self.n = n
        self.modulus = cyclotomic_polynomial(n)
        self.degree = len(self.modulus) - 1
        assert self.degree == euler_phi(n)
        phi = self.degree
        # rewrite rows: x^(phi+i) mod Phi_n as integer vectors, i = 0..phi-2
        rows = []
        self._red_rows = rows
        cur = [-c for c in self.modulus[:-1]]  # x^phi
        rows.append(tuple(cur))
        # rows cover x^phi .. x^max(2*phi-2, n-1): products of reduced values
        # need 2*phi-2, bare root-of-unity powers need n-1
        for _ in range(max(2 * phi - 2, n - 1) - phi):
            cur = self._shift_reduce(cur)
            rows.append(tuple(cur))
        self._root_cache = {}
        self._inv_cache = {}
        self.zero = CycNum(self, (0,) * phi, 1, _raw=True)
        self.one = CycNum(self, (1,) + (0,) * (phi - 1), 1, _raw=True)

    def _shift_reduce(self, vec):
        # multiply by x and reduce once using the x^phi row
        phi = self.degree
        out = [0] + list(vec[:-1])
        top = vec[-1]
        if top:
            row = self._red_rows[0]
            for i, r in enumerate(row):
                if r:
                    out[i] += top * r
        return out

    def __repr__(self):
        return f"Q(zeta_{self.n})"

    def __reduce__(self):
        return (CycloField, (self.n,))

    def reduce_int_vec(self, vec):
        """Reduce an integer coefficient vector of length < 2*phi mod Phi_n."""
        phi = self.degree
        out = list(vec[:phi]) + [0] * (phi - min(phi, len(vec)))
        for k in range(len(vec) - 1, phi - 1, -1):
            c = vec[k]
            if c:
                row = self._red_rows[k - phi]
                for i, r in enumerate(row):
                    if r:
                        out[i] += c * r
        return out

    def from_fraction(self, q) -> "CycNum":
        q = Fraction(q)
        vec = (q.numerator,) + (0,) * (self.degree - 1)
        return CycNum(self, vec, q.denominator, _raw=True)

    def from_coeffs(self, coeffs) -> "CycNum":
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) != self.degree:
            raise DomainError("coefficient vector has wrong length")
        den = 1
        for c in coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        vec = tuple(c.numerator * (den // c.denominator) for c in coeffs)
        return CycNum(self, vec, den)

    def root_of_unity(self, k: int, j: int = 1) -> "CycNum":
        """zeta_k^j realized inside this field; requires k | n."""
        if k < 1 or self.n % k:
            raise DomainError(f"{k} does not divide the field order {self.n}")
        e = (self.n // k) * (j % k) % self.n
        val = self._root_cache.get(e)
        if val is None:
            phi = self.degree
            if e < phi:
                vec = [0] * phi
                vec[e] = 1
            else:
                raw = [0] * (e + 1)
                raw[e] = 1
                vec = self.reduce_int_vec(raw)
            val = CycNum(self, tuple(vec), 1, _raw=True)
            self._root_cache[e] = val
        return val

    def zeta(self, j: int = 1) -> "CycNum":
        return self.root_of_unity(self.n, j)

    def sqrt3(self) -> "CycNum":
        """sqrt(3) = zeta_12 + zeta_12^-1; requires 12 | n."""
        return self.root_of_unity(12, 1) + self.root_of_unity(12, 11)

    def imag_unit(self) -> "CycNum":
        return self.root_of_unity(4, 1)


class CycNum:
    """An element of a CycloField: immutable, canonically reduced."""

    __slots__ = ("field", "_num", "_den", "_hash")

    def __init__(self, field, num, den=1, _raw=False):
        self.field = field
        if _raw:
            self._num = tuple(num)
            self._den = den
        else:
            g = den
            for c in num:
                g = gcd(g, c)
                if g == 1:
                    break
            if den < 0:
                g = -g
            if g not in (0, 1):
                num = tuple(c // g for c in num)
                den = den // g
            if den == 0:
                raise ArithmeticFailure("zero denominator")
            self._num = tuple(num)
            self._den = 1 if not any(num) else den
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def rational(field, q):
        return field.from_fraction(q)

    # -- structure ---------------------------------------------------------

    @property
    def coeffs(self):
        """Coordinates in the power basis as Fractions."""
        d = self._den
        return tuple(Fraction(c, d) for c in self._num)

    def is_zero(self):
        return not any(self._num)

    def is_one(self):
        return self._den == 1 and self._num[0] == 1 and not any(self._num[1:])

    def is_rational(self):
        return not any(self._num[1:])

    def as_fraction(self):
        if not self.is_rational():
            raise DomainError("value is not rational")
        return Fraction(self._num[0], self._den)

    def sort_key(self):
        return (self._den, self._num)

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash((self.field.n, self._num, self._den))
        return h

    def __eq__(self, other):
        if isinstance(other, CycNum):
            return (
                self.field is other.field
                and self._num == other._num
                and self._den == other._den
            )
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return self.is_rational() and self.as_fraction() == q
        return NotImplemented

    def __bool__(self):
        return any(self._num)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_fraction(other)
        elif not isinstance(other, CycNum):
            return None
        if other.field is not self.field:
            raise DomainError("operands live in different cyclotomic fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        da, db = self._den, other._den
        if da == db:
            vec = [x + y for x, y in zip(self._num, other._num)]
            return CycNum(self.field, vec, da)
        g = gcd(da, db)
        ma, mb = db // g, da // g
        vec = [x * ma + y * mb for x, y in zip(self._num, other._num)]
        return CycNum(self.field, vec, da * ma)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.field, tuple(-c for c in self._num), self._den, _raw=True)

    def __sub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        a, b = self._num, other._num
        if not any(a) or not any(b):
            return self.field.zero
        if not any(b[1:]):  # rational right factor
            c = b[0]
            return CycNum(self.field, [x * c for x in a], self._den * other._den)
        if not any(a[1:]):
            c = a[0]
            return CycNum(self.field, [x * c for x in b], self._den * other._den)
        phi = self.field.degree
        out = [0] * (2 * phi - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] += ai * bj
        vec = self.field.reduce_int_vec(out)
        return CycNum(self.field, vec, self._den * other._den)

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse via the extended Euclidean algorithm."""
        if not any(self._num):
            raise ArithmeticFailure("division by zero in Q(zeta_n)")
        cache = self.field._inv_cache
        key = (self._num, self._den)
        inv = cache.get(key)
        if inv is not None:
            return inv
        # work over Q[x]: r0 = Phi_n, r1 = representative of self
        mod = [Fraction(c) for c in self.field.modulus]
        r0, r1 = mod, [Fraction(c, self._den) for c in self._num]
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while any(r1):
            # degree of r1
            d1 = max(i for i, c in enumerate(r1) if c)
            d0 = max((i for i, c in enumerate(r0) if c), default=-1)
            if d0 < d1:
                r0, r1, s0, s1 = r1, r0, s1, s0
                continue
            coef = r0[d0] / r1[d1]
            shift = d0 - d1
            for i in range(d1 + 1):
                r0[i + shift] -= coef * r1[i]
            if len(s0) < len(s1) + shift:
                s0 = s0 + [Fraction(0)] * (len(s1) + shift - len(s0))
            for i in range(len(s1)):
                s0[i + shift] -= coef * s1[i]
            r0, r1, s0, s1 = r1, r0, s1, s0
        # now r0 = gcd (a nonzero constant), s0 its Bezout cofactor
        d0 = max(i for i, c in enumerate(r0) if c)
        if d0 != 0:
            raise ArithmeticFailure("element is a zero divisor (not coprime to Phi_n)")
        c = r0[0]
        # the cofactor may exceed degree phi-1; reduce it mod Phi_n first
        phi = self.field.degree
        modF = [Fraction(m) for m in self.field.modulus]
        for k in range(len(s0) - 1, phi - 1, -1):
            ck = s0[k]
            if ck:
                for j in range(phi + 1):
                    s0[k - phi + j] -= ck * modF[j]
        coeffs = [(s0[i] / c) if i < len(s0) else Fraction(0) for i in range(phi)]
        inv = self.field.from_coeffs(coeffs)
        cache[key] = inv
        return inv

    def __truediv__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e == 0:
            return self.field.one
        base = self
        if e < 0:
            base = self.inverse()
            e = -e
        result = self.field.one
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- text form ---------------------------------------------------------

    def __repr__(self):
        return f"CycNum({self!s}, n={self.field.n})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mon = "z" if i == 1 else f"z^{i}"
                if c == 1:
                    terms.append(mon)
                elif c == -1:
                    terms.append(f"-{mon}")
                else:
                    terms.append(f"{c}*{mon}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out


def arith(a: CycNum, b: CycNum, kind: str) -> CycNum:
    """Dispatch a single exact field operation; kind in {add, sub, mul, div}."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise DomainError(f"unknown operation kind {kind!r}")


def root_of_unity(field: CycloField, k: int, j: int = 1) -> CycNum:
    return field.root_of_unity(k, j)


def multiplicative_order(a: CycNum, bound: int = 10000) -> int:
    cur = a
    for k in range(1, bound + 1):
        if cur.is_one():
            return k
        cur = cur * a
    raise ArithmeticError("order exceeds search bound")


# ---------------------------------------------------------------------------
# textual serialization: polynomial in z with rational coefficients
# ---------------------------------------------------------------------------

def cycnum_to_str(a: CycNum) -> str:
    return str(a)


def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*/^()":
            tokens.append(ch)
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and (text[j].isdigit() or text[j] == "/"):
                # a slash inside a number only counts when followed by a digit
                if text[j] == "/" and not (j + 1 < len(text) and text[j + 1].isdigit()):
                    break
                j += 1
            tokens.append(text[i:j])
            i = j
        elif ch.isalpha():
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(text[i:j])
            i = j
        else:
            raise DomainError(f"bad character {ch!r} in scalar text")
    return tokens


def cycnum_from_str(field: CycloField, text: str) -> CycNum:
    """Parse a scalar like "1/2*z^20 - 3" back into Q(zeta_n); exact round trip."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def parse_atom():
        nonlocal pos
        tok = peek()
        if tok == "(":
            take()
            v = parse_sum()
            if take() != ")":
                raise DomainError("unbalanced parenthesis in scalar text")
        elif tok == "z":
            take()
            v = field.zeta()
        elif tok is not None and tok[0].isdigit():
            take()
            v = field.from_fraction(Fraction(tok))
        else:
            raise DomainError(f"unexpected token {tok!r} in scalar text")
        if peek() == "^":
            take()
            sign = 1
            if peek() == "-":
                take()
                sign = -1
            v = v ** (sign * int(take()))
        return v

    def parse_product():
        v = parse_atom()
        while peek() in ("*", "/"):
            op = take()
            w = parse_atom()
            v = v * w if op == "*" else v / w
        return v

    def parse_sum():
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        v = parse_product()
        if sign < 0:
            v = -v
        while peek() in ("+", "-"):
            op = take()
            w = parse_product()
            v = v + w if op == "+" else v - w
        return v

    value = parse_sum()
    if pos != len(tokens):
        raise DomainError("trailing garbage in scalar text")
    return value
