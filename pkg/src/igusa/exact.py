"""Exact arithmetic: rationals, sparse multivariate polynomials, quadratic
extension scalars and fraction-free linear algebra.

Polynomials are stored sparsely as ``{exponent tuple: coefficient}`` with
``gmpy2.mpq`` coefficients.  Zero coefficients are never stored, so the zero
polynomial is the empty dict.  Nothing here ever rounds.
"""

from __future__ import annotations

import itertools
import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import gmpy2
from gmpy2 import mpq, mpz

Rational = mpq
Monomial = tuple  # tuple[int, ...]


class RingMismatch(ValueError):
    """Operands live in different polynomial rings."""


def QQ(x, den=None) -> mpq:
    """Coerce ``x`` (int, str, Fraction, mpq) to an exact rational."""
    if den is not None:
        return mpq(x, den)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact scalars")
    return mpq(x)


def _is_scalar(x) -> bool:
    return isinstance(x, (int, type(mpq(0)), type(mpz(0)), Fraction))


def is_rational_square(q) -> bool:
    q = QQ(q)
    if q < 0:
        return False
    return gmpy2.is_square(q.numerator) and gmpy2.is_square(q.denominator)


def rational_sqrt(q) -> mpq:
    q = QQ(q)
    if not is_rational_square(q):
        raise ValueError(f"{q} is not the square of a rational")
    return mpq(gmpy2.isqrt(q.numerator), gmpy2.isqrt(q.denominator))


# ---------------------------------------------------------------------------
# Rings and polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolyRing:
    """Variable list of a polynomial ring over Q.

    ``grading`` optionally assigns every variable to a factor (0, 1, ...), so
    that forms on products of projective spaces report a multidegree.
    """

    names: tuple
    grading: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        if self.grading is not None:
            object.__setattr__(self, "grading", tuple(self.grading))
            if len(self.grading) != len(self.names):
                raise ValueError("grading must assign a factor to every variable")

    @classmethod
    def of(cls, spec: str | Sequence[str], grading=None) -> PolyRing:
        if isinstance(spec, str):
            spec = spec.replace(",", " ").split()
        return cls(tuple(spec), grading)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, var) -> int:
        if isinstance(var, int):
            if not 0 <= var < self.nvars:
                raise IndexError(var)
            return var
        try:
            return self.names.index(var)
        except ValueError:
            raise KeyError(f"{var!r} is not a variable of {self.names}") from None

    def zero(self) -> MultiPoly:
        return MultiPoly(self, {}, _clean=True)

    def one(self) -> MultiPoly:
        return self.const(1)

    def const(self, c) -> MultiPoly:
        c = QQ(c)
        if c == 0:
            return self.zero()
        return MultiPoly(self, {(0,) * self.nvars: c}, _clean=True)

    def gen(self, var) -> MultiPoly:
        i = self.index(var)
        e = [0] * self.nvars
        e[i] = 1
        return MultiPoly(self, {tuple(e): mpq(1)}, _clean=True)

    def gens(self) -> list[MultiPoly]:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=1) -> MultiPoly:
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError("exponent vector has wrong length")
        return MultiPoly(self, {exps: QQ(coeff)})

    def linear_form(self, coeffs) -> MultiPoly:
        coeffs = list(coeffs)
        if len(coeffs) != self.nvars:
            raise ValueError("need one coefficient per variable")
        return sum((QQ(c) * g for c, g in zip(coeffs, self.gens())), self.zero())

    def parse(self, text: str) -> MultiPoly:
        return parse_poly(text, self)

    def monomials_of_degree(self, d: int, variables=None) -> list[tuple]:
        """All exponent vectors of total degree ``d`` (in grevlex-descending order)."""
        idx = range(self.nvars) if variables is None else [self.index(v) for v in variables]
        idx = list(idx)
        out = []
        for combo in itertools.combinations_with_replacement(idx, d):
            e = [0] * self.nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
        out = sorted(set(out), key=grevlex_key, reverse=True)
        return out

    def __str__(self):
        return "Q[" + ",".join(self.names) + "]"


def var_names(prefix: str, n: int, start: int = 1) -> tuple:
    return tuple(f"{prefix}{i}" for i in range(start, start + n))


def grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


class MultiPoly:
    """Sparse polynomial with exact rational coefficients.

    Instances are treated as immutable: every operation returns a new object.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms=None, *, _clean=False):
        self.ring = ring
        if terms is None:
            terms = {}
        elif not _clean:
            n = ring.nvars
            clean = {}
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != n:
                    raise ValueError(f"exponent {m} does not match {n} variables")
                c = QQ(c)
                if c:
                    clean[m] = clean.get(m, 0) + c
            terms = {m: c for m, c in clean.items() if c}
        self.terms = terms
        self._hash = None

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if _is_scalar(other):
            return self.ring.const(other)
        return NotImplemented

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.terms:
            return self
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return MultiPoly(self.ring, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {m: -c for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> MultiPoly:
        c = QQ(c)
        if not c:
            return self.ring.zero()
        return MultiPoly(self.ring, {m: v * c for m, v in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict = {}
        get = out.get
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple([a + b for a, b in zip(m1, m2)])
                out[m] = get(m, 0) + c1 * c2
        return MultiPoly(self.ring, {m: c for m, c in out.items() if c}, _clean=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_scalar(other):
            other = QQ(other)
            if not other:
                raise ZeroDivisionError("polynomial division by zero")
            return self.scale(1 / other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.terms == other.terms
        if _is_scalar(other):
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # -- structure --------------------------------------------------------

    def total_degree(self) -> int:
        """Maximum total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def homogeneous_degree(self) -> int | None:
        """Degree if the polynomial is a nonzero form, otherwise None."""
        degs = {sum(m) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def multidegree(self) -> tuple | None:
        """Degree in each factor of the ring's grading, or None if not multihomogeneous."""
        g = self.ring.grading
        if g is None:
            raise ValueError("ring has no grading")
        k = max(g) + 1
        seen = set()
        for m in self.terms:
            d = [0] * k
            for e, f in zip(m, g):
                d[f] += e
            seen.add(tuple(d))
        return seen.pop() if len(seen) == 1 else None

    def degree_in(self, var) -> int:
        i = self.ring.index(var)
        return max((m[i] for m in self.terms), default=-1)

    def variables(self) -> list[str]:
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return [self.ring.names[i] for i in sorted(used)]

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_coeff(self) -> mpq:
        return self.terms.get((0,) * self.ring.nvars, mpq(0))

    def coeff(self, exps) -> mpq:
        return self.terms.get(tuple(exps), mpq(0))

    def sorted_terms(self, key=grevlex_key) -> list:
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self, key=grevlex_key):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def monic(self, key=grevlex_key) -> MultiPoly:
        if not self.terms:
            return self
        return self.scale(1 / self.leading_term(key)[1])

    def content(self) -> mpq:
        """Positive rational c with ``self / c`` integral and primitive."""
        if not self.terms:
            return mpq(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gmpy2.gcd(num, c.numerator)
            den = gmpy2.lcm(den, c.denominator)
        return mpq(num, den)

    def primitive(self, key=grevlex_key) -> MultiPoly:
        """Integral primitive associate with positive leading coefficient."""
        if not self.terms:
            return self
        p = self.scale(1 / self.content())
        if p.leading_term(key)[1] < 0:
            p = -p
        return p

    # -- calculus and evaluation -----------------------------------------

    def diff(self, var) -> MultiPoly:
        i = self.ring.index(var)
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = list(m)
                mm[i] = e - 1
                out[tuple(mm)] = c * e
        return MultiPoly(self.ring, out, _clean=True)

    def gradient(self) -> list[MultiPoly]:
        return [self.diff(i) for i in range(self.ring.nvars)]

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = point[0]
        return self.evaluate(point)

    def evaluate(self, point):
        """Exact value at ``point``; scalars may be rationals or QuadExtScalar."""
        point = list(point)
        if len(point) != self.ring.nvars:
            raise ValueError(f"expected {self.ring.nvars} coordinates, got {len(point)}")
        cache: dict = {}

        def power(i, e):
            key = (i, e)
            v = cache.get(key)
            if v is None:
                v = point[i] ** e if e > 1 else point[i]
                cache[key] = v
            return v

        total = 0
        for m, c in self.terms.items():
            t = None
            for i, e in enumerate(m):
                if e:
                    p = power(i, e)
                    t = p if t is None else t * p
            total = total + (c if t is None else t * c)
        if isinstance(total, int):
            total = mpq(total)
        return total

    def subs(self, images, ring: PolyRing | None = None) -> MultiPoly:
        """Substitute ``images[i]`` for variable ``i``.

        Images are polynomials over a common target ring (or scalars).  The
        result lives in ``ring`` (default: the images' ring).
        """
        images = list(images)
        if len(images) != self.ring.nvars:
            raise ValueError(f"need {self.ring.nvars} images, got {len(images)}")
        if ring is None:
            ring = next((g.ring for g in images if isinstance(g, MultiPoly)), self.ring)
        imgs = []
        for g in images:
            if isinstance(g, MultiPoly):
                if g.ring != ring:
                    raise RingMismatch(f"image in {g.ring}, expected {ring}")
                imgs.append(g)
            else:
                imgs.append(ring.const(g))
        cache: dict = {}

        def power(i, e):
            key = (i, e)
            v = cache.get(key)
            if v is None:
                v = imgs[i] if e == 1 else power(i, e - 1) * imgs[i]
                cache[key] = v
            return v

        acc: dict = {}
        for m, c in self.terms.items():
            t = None
            for i, e in enumerate(m):
                if e:
                    p = power(i, e)
                    t = p if t is None else t * p
            if t is None:
                t = ring.one()
            for mm, cc in t.terms.items():
                acc[mm] = acc.get(mm, 0) + cc * c
        return MultiPoly(ring, {m: c for m, c in acc.items() if c}, _clean=True)

    def rename(self, ring: PolyRing) -> MultiPoly:
        """Re-embed into ``ring`` by variable name (every used variable must exist there)."""
        used = set(self.variables())
        perm = [ring.index(n) if n in used else -1 for n in self.ring.names]
        out = {}
        for m, c in self.terms.items():
            mm = [0] * ring.nvars
            for i, e in enumerate(m):
                if e:
                    mm[perm[i]] += e
            out[tuple(mm)] = c
        return MultiPoly(ring, out, _clean=True)

    # -- univariate view ----------------------------------------------------

    def univariate_coeffs(self, var=None) -> list:
        """Coefficients (low to high) of a polynomial that involves one variable only."""
        if var is None:
            used = self.variables()
            if len(used) > 1:
                raise ValueError(f"polynomial involves {used}")
            var = used[0] if used else 0
        i = self.ring.index(var)
        out: list = []
        for m, c in self.terms.items():
            if any(e for j, e in enumerate(m) if j != i):
                raise ValueError("polynomial involves other variables")
            while len(out) <= m[i]:
                out.append(mpq(0))
            out[m[i]] = c
        return out

    @classmethod
    def from_univariate(cls, ring: PolyRing, coeffs, var=0) -> MultiPoly:
        i = ring.index(var)
        out = {}
        for k, c in enumerate(coeffs):
            c = QQ(c)
            if c:
                e = [0] * ring.nvars
                e[i] = k
                out[tuple(e)] = c
        return cls(ring, out, _clean=True)

    # -- text ---------------------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r})"


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def _format_monomial(names, m) -> str:
    parts = []
    for n, e in zip(names, m):
        if e == 1:
            parts.append(n)
        elif e > 1:
            parts.append(f"{n}^{e}")
    return "*".join(parts)


def format_poly(p: MultiPoly) -> str:
    """Render as e.g. ``3*z1^2*z2 - 1/4*z3^4`` (grevlex-descending terms)."""
    if not p.terms:
        return "0"
    out = []
    for k, (m, c) in enumerate(p.sorted_terms()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = _format_monomial(p.ring.names, m)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if k == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class PolyParseError(ValueError):
    pass


def _natural_key(name):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


def parse_poly(text: str, ring: PolyRing | None = None) -> MultiPoly:
    """Parse the human-readable polynomial format (inverse of ``format_poly``).

    Without a ring, variables are collected from the text in natural order.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise PolyParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, name, op = mt.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            tokens.append(("var", name))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = mt.end()
    if ring is None:
        names = sorted({v for k, v in tokens if k == "var"}, key=_natural_key)
        ring = PolyRing(tuple(names) or ("x",))
    toks = tokens + [("end", None)]
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        t = toks[i]
        i += 1
        return t

    def expr():
        if peek() == ("op", "-"):
            take()
            val = -term()
        else:
            if peek() == ("op", "+"):
                take()
            val = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = factor()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            rhs = factor()
            if op == "*":
                val = val * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise PolyParseError("division only by nonzero constants")
                val = val / rhs.constant_coeff()
        return val

    def factor():
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, e = take()
            if kind != "num":
                raise PolyParseError("exponent must be a non-negative integer")
            base = base ** e
        return base

    def atom():
        kind, v = take()
        if kind == "num":
            return ring.const(v)
        if kind == "var":
            return ring.gen(v)
        if (kind, v) == ("op", "("):
            val = expr()
            if take() != ("op", ")"):
                raise PolyParseError("missing ')'")
            return val
        if (kind, v) == ("op", "-"):
            return -factor()
        raise PolyParseError(f"unexpected token {v!r}")

    result = expr()
    if peek()[0] != "end":
        raise PolyParseError(f"trailing input near token {peek()[1]!r}")
    return result


# ---------------------------------------------------------------------------
# Quadratic extensions
# ---------------------------------------------------------------------------


def _strip_small_squares(n: int) -> tuple[int, int]:
    """Write n = s^2 * r with r free of squares of small primes; returns (s, r)."""
    s = 1
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        while n % (p * p) == 0:
            n //= p * p
            s *= p
    return s, n


class QuadExtScalar:
    """The number a + b*sqrt(d) with rational a, b and non-square d."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d):
        a, b, d = QQ(a), QQ(b), QQ(d)
        if is_rational_square(d):
            raise ValueError(f"{d} is a rational square; the extension is trivial")
        # sqrt(n/m) = sqrt(n*m)/m, then pull out small square factors
        if d.denominator != 1:
            b = b / d.denominator
            d = mpq(d.numerator * d.denominator)
        s, r = _strip_small_squares(int(d.numerator))
        self.a = a
        self.b = b * s
        self.d = mpq(r)

    @classmethod
    def sqrt(cls, d) -> QuadExtScalar | mpq:
        """sqrt(d) exactly: a rational when d is a square, else an extension element."""
        d = QQ(d)
        if is_rational_square(d):
            return rational_sqrt(d)
        return cls(0, 1, d)

    def _lift(self, other):
        if isinstance(other, QuadExtScalar):
            if other.d == self.d:
                return other
            ratio = self.d * other.d
            if other.b == 0:
                return QuadExtScalar(other.a, 0, self.d)
            if self.b == 0:
                return None
            if is_rational_square(ratio):
                # sqrt(d2) = sqrt(d1*d2)/d1 * sqrt(d1)
                return QuadExtScalar(other.a, other.b * rational_sqrt(ratio) / self.d, self.d)
            raise ValueError(f"incompatible quadratic fields Q(sqrt({self.d})) and Q(sqrt({other.d}))")
        if _is_scalar(other):
            return QuadExtScalar(QQ(other), 0, self.d)
        return NotImplemented

    def _pair(self, other):
        o = self._lift(other)
        if o is None:  # self is rational-valued, other genuinely irrational
            return other._lift(self), other
        return self, o

    def __add__(self, other):
        if not isinstance(other, QuadExtScalar) and not _is_scalar(other):
            return NotImplemented
        x, y = self._pair(other)
        return QuadExtScalar(x.a + y.a, x.b + y.b, x.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtScalar(-self.a, -self.b, self.d)

    def __sub__(self, other):
        if not isinstance(other, QuadExtScalar) and not _is_scalar(other):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            c = QQ(other)
            return QuadExtScalar(self.a * c, self.b * c, self.d)
        if not isinstance(other, QuadExtScalar):
            return NotImplemented
        x, y = self._pair(other)
        return QuadExtScalar(x.a * y.a + x.d * x.b * y.b, x.a * y.b + x.b * y.a, x.d)

    __rmul__ = __mul__

    def conjugate(self) -> QuadExtScalar:
        return QuadExtScalar(self.a, -self.b, self.d)

    def norm(self) -> mpq:
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> QuadExtScalar:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic extension")
        return QuadExtScalar(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if _is_scalar(other):
            c = QQ(other)
            if c == 0:
                raise ZeroDivisionError("division by zero")
            return QuadExtScalar(self.a / c, self.b / c, self.d)
        if not isinstance(other, QuadExtScalar):
            return NotImplemented
        x, y = self._pair(other)
        return x * y.inverse()

    def __rtruediv__(self, other):
        return QuadExtScalar(QQ(other), 0, self.d) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadExtScalar(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def __eq__(self, other):
        if _is_scalar(other):
            return self.b == 0 and self.a == QQ(other)
        if not isinstance(other, QuadExtScalar):
            return NotImplemented
        if self.b == 0 or other.b == 0:
            return self.b == other.b and self.a == other.a
        try:
            x, y = self._pair(other)
        except ValueError:
            return False
        return x.a == y.a and x.b == y.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        return f"QuadExtScalar({self.a}, {self.b}, {self.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.d})"


def scalar_to_json(x):
    if isinstance(x, QuadExtScalar):
        return {"a": str(x.a), "b": str(x.b), "d": str(x.d)}
    return str(QQ(x))


# ---------------------------------------------------------------------------
# Univariate helpers (coefficient lists, low degree first)
# ---------------------------------------------------------------------------


def _utrim(p: list) -> list:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def udeg(p) -> int:
    return len(_utrim(p)) - 1


def umul(p, q) -> list:
    if not p or not q:
        return []
    out = [mpq(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _utrim(out)


def usub(p, q) -> list:
    n = max(len(p), len(q))
    return _utrim([(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)])


def udivmod(p, q) -> tuple[list, list]:
    p = [QQ(c) for c in _utrim(p)]
    q = [QQ(c) for c in _utrim(q)]
    if not q:
        raise ZeroDivisionError("univariate division by zero")
    quot = [mpq(0)] * max(len(p) - len(q) + 1, 0)
    lc = q[-1]
    while len(p) >= len(q) and p:
        k = len(p) - len(q)
        c = p[-1] / lc
        quot[k] = c
        for i, b in enumerate(q):
            p[i + k] -= c * b
        p = _utrim(p)
    return _utrim(quot), p


def umonic(p) -> list:
    p = _utrim(p)
    if not p:
        return p
    lc = p[-1]
    return [QQ(c) / lc for c in p]


def ugcd(p, q) -> list:
    p, q = _utrim(p), _utrim(q)
    while q:
        p, q = q, udivmod(p, q)[1]
    return umonic(p)


def uderiv(p) -> list:
    return _utrim([c * i for i, c in enumerate(p)][1:])


def usquarefree(p) -> list:
    """p / gcd(p, p'), made integral and primitive."""
    p = _utrim(p)
    if len(p) <= 1:
        return [mpq(1)] if p else []
    g = ugcd(p, uderiv(p))
    q, r = udivmod(p, g)
    assert not r
    return uprimitive(q)


def uprimitive(p) -> list:
    p = [QQ(c) for c in _utrim(p)]
    if not p:
        return p
    num = 0
    den = 1
    for c in p:
        num = gmpy2.gcd(num, c.numerator)
        den = gmpy2.lcm(den, c.denominator)
    s = mpq(den, num)
    if p[-1] < 0:
        s = -s
    return [c * s for c in p]


def usquarefree_decomposition(p) -> list[tuple[list, int]]:
    """Yun's algorithm: monic squarefree factors with multiplicities."""
    p = umonic(p)
    if len(p) <= 1:
        return []
    out = []
    dp = uderiv(p)
    a = ugcd(p, dp)
    b = udivmod(p, a)[0]
    c = udivmod(dp, a)[0]
    d = usub(c, uderiv(b))
    i = 1
    while udeg(b) > 0:
        a = ugcd(b, d)
        if udeg(a) > 0:
            out.append((a, i))
        b = udivmod(b, a)[0]
        c = udivmod(d, a)[0]
        d = usub(c, uderiv(b))
        i += 1
    return out


def ueval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def udiscriminant_quadratic(p) -> mpq:
    c, b, a = (list(p) + [0, 0, 0])[:3]
    return QQ(b) * b - 4 * QQ(a) * c


def _divisors(n: int, limit: int = 10**14) -> list[int]:
    n = abs(int(n))
    if n == 0:
        return [0]
    if n > limit:
        raise ValueError(f"refusing to enumerate divisors of a {n.bit_length()}-bit integer")
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return small + large[::-1]


def rational_roots(p) -> list[mpq]:
    """Distinct rational roots of a univariate polynomial (rational root test)."""
    p = _utrim([QQ(c) for c in p])
    roots = []
    if not p:
        raise ValueError("zero polynomial has every root")
    while p and p[0] == 0:
        if mpq(0) not in roots:
            roots.append(mpq(0))
        p = p[1:]
    if len(p) <= 1:
        return roots
    if len(p) == 2:
        roots.append(-p[0] / p[1])
        return roots
    if len(p) == 3:
        disc = udiscriminant_quadratic(p)
        if is_rational_square(disc):
            r = rational_sqrt(disc)
            for s in {r, -r}:
                roots.append((-p[1] + s) / (2 * p[2]))
        return roots
    ints = uprimitive(usquarefree(p))
    a0, an = int(ints[0]), int(ints[-1])
    for q in _divisors(an):
        for pp in _divisors(a0):
            for cand in (mpq(pp, q), mpq(-pp, q)):
                if cand not in roots and ueval(ints, cand) == 0:
                    roots.append(cand)
    return roots


def quadratic_roots(p) -> list:
    """Both roots of a degree-2 polynomial, as rationals or QuadExtScalar."""
    c, b, a = [QQ(x) for x in (list(p) + [0, 0, 0])[:3]]
    if a == 0:
        raise ValueError("not a quadratic")
    disc = b * b - 4 * a * c
    if is_rational_square(disc):
        r = rational_sqrt(disc)
        return [(-b + r) / (2 * a), (-b - r) / (2 * a)]
    s = QuadExtScalar(0, 1, disc)
    return [(s - b) / (2 * a), (-s - b) / (2 * a)]


# ---------------------------------------------------------------------------
# Square analysis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SquareAnalysis:
    is_square: bool
    sqrt: MultiPoly | None
    squarefree_part: MultiPoly | None


def _univariate_is_square(coeffs) -> bool:
    coeffs = _utrim(coeffs)
    if not coeffs:
        return True
    if not is_rational_square(coeffs[-1]):
        return False
    return all(m % 2 == 0 for _, m in usquarefree_decomposition(coeffs))


def _term_sqrt(p: MultiPoly) -> MultiPoly | None:
    """Polynomial long square root; returns q with q*q == p or None."""
    order = grevlex_key
    m0, c0 = p.leading_term(order)
    if any(e % 2 for e in m0) or not is_rational_square(c0):
        return None
    lead = MultiPoly(p.ring, {tuple(e // 2 for e in m0): rational_sqrt(c0)}, _clean=True)
    q = lead
    r = p - q * q
    n = p.ring.nvars
    cap = math.comb(n + p.total_degree() // 2, n) + 1
    twice = lead.scale(2)
    lm, lc = next(iter(twice.terms.items()))
    for _ in range(cap):
        if r.is_zero():
            return q
        m, c = r.leading_term(order)
        if any(a < b for a, b in zip(m, lm)):
            return None
        t = MultiPoly(p.ring, {tuple(a - b for a, b in zip(m, lm)): c / lc}, _clean=True)
        if order(next(iter(t.terms))) >= order(next(iter(lead.terms))):
            return None
        r = r - (q.scale(2) + t) * t
        q = q + t
    return q if r.is_zero() else None


def random_line_restriction(p: MultiPoly, rng: random.Random, bound: int = 50) -> list:
    """Coefficients in tau of p(a + tau*b) for random integer vectors a, b."""
    a = [rng.randint(-bound, bound) for _ in range(p.ring.nvars)]
    b = [rng.randint(-bound, bound) for _ in range(p.ring.nvars)]
    t = PolyRing(("tau",))
    tau = t.gen(0)
    img = [tau.scale(bi) + ai for ai, bi in zip(a, b)]
    return p.subs(img, t).univariate_coeffs(0)


def square_analysis(p: MultiPoly, rng: random.Random | None = None) -> SquareAnalysis:
    """Decide whether p is the square of a polynomial over Q.

    The squarefree part is p / gcd(p, all partials), made primitive.
    """
    if p.is_zero():
        raise ValueError("square analysis of the zero polynomial")
    rng = rng or random.Random(0)
    used = p.variables()
    if len(used) <= 1:
        var = used[0] if used else 0
        coeffs = p.univariate_coeffs(var)
        sf = MultiPoly.from_univariate(p.ring, usquarefree(coeffs), var)
        if not _univariate_is_square(coeffs):
            return SquareAnalysis(False, None, sf)
        q = _term_sqrt(p)
        return SquareAnalysis(q is not None, q, sf)
    sf = multivariate_squarefree_part(p)
    if not _univariate_is_square(random_line_restriction(p, rng)):
        return SquareAnalysis(False, None, sf)
    q = _term_sqrt(p)
    if q is None or q * q != p:
        return SquareAnalysis(False, None, sf)
    return SquareAnalysis(True, q, sf)


def multivariate_squarefree_part(p: MultiPoly) -> MultiPoly:
    from .groebner import poly_gcd  # local import: groebner builds on this module

    g = p
    for d in p.gradient():
        if d.is_zero():
            continue
        g = poly_gcd(g, d)
        if g.is_constant():
            break
    q, r = poly_divmod_exact(p, g)
    return q.primitive()


def poly_divmod_exact(p: MultiPoly, g: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """Multivariate division by a single divisor (grevlex); returns (quotient, remainder)."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    gm, gc = g.leading_term()
    q = {}
    rem = {}
    r = dict(p.terms)
    gterms = list(g.terms.items())
    while r:
        m = max(r, key=grevlex_key)
        c = r[m]
        if all(a >= b for a, b in zip(m, gm)):
            qm = tuple(a - b for a, b in zip(m, gm))
            qc = c / gc
            q[qm] = q.get(qm, 0) + qc
            for mm, cc in gterms:
                k = tuple(a + b for a, b in zip(mm, qm))
                v = r.get(k, 0) - qc * cc
                if v:
                    r[k] = v
                else:
                    r.pop(k, None)
        else:
            rem[m] = c
            del r[m]
    return MultiPoly(p.ring, {m: c for m, c in q.items() if c}, _clean=True), MultiPoly(p.ring, rem, _clean=True)


def exact_quotient(p: MultiPoly, g: MultiPoly) -> MultiPoly:
    q, r = poly_divmod_exact(p, g)
    if not r.is_zero():
        raise ValueError("division is not exact")
    return q


# ---------------------------------------------------------------------------
# Linear algebra
# ---------------------------------------------------------------------------


def _all_rational(rows) -> bool:
    return all(_is_scalar(x) for row in rows for x in row)


def _integer_rows(rows) -> list[list[int]]:
    out = []
    for row in rows:
        row = [QQ(x) for x in row]
        den = 1
        for x in row:
            den = gmpy2.lcm(den, x.denominator)
        out.append([mpz(x * den) for x in row])
    return out


def bareiss_rank(rows) -> int:
    """Rank by fraction-free (Bareiss) elimination over the integers."""
    m = _integer_rows(rows)
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = mpz(1)
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, nrows):
            f = m[r][col]
            row_r, row_p = m[r], m[rank]
            for c in range(col, ncols):
                row_r[c] = (row_r[c] * p - f * row_p[c]) // prev
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def bareiss_det(rows) -> mpq:
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return mpq(1)
    dens = []
    for row in rows:
        d = 1
        for x in row:
            d = gmpy2.lcm(d, QQ(x).denominator)
        dens.append(d)
    m = _integer_rows(rows)
    sign = 1
    prev = mpz(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if piv is None:
                return mpq(0)
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    total = mpz(1)
    for d in dens:
        total *= d
    return mpq(sign * m[n - 1][n - 1], total)


def rref(rows) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over any exact field (rationals or one quadratic field)."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col] if not _is_scalar(m[r][col]) else 1 / QQ(m[r][col])
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    if _all_rational(rows):
        return bareiss_rank(rows)
    return len(rref(rows)[1])


def kernel(rows, ncols: int | None = None) -> list[list]:
    """Basis of {v : rows * v = 0}, one vector per free column."""
    rows = [list(r) for r in rows]
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(rows[0])
    if not rows:
        return [[mpq(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    if not _all_rational(rows):
        R, piv = rref(rows)
    else:
        R, piv = rref([[QQ(x) for x in r] for r in rows])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [mpq(0)] * ncols
        v[f] = mpq(1)
        for row, pc in zip(R, piv):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def det(rows):
    rows = [list(r) for r in rows]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    if _all_rational(rows):
        return bareiss_det(rows)
    m = [list(r) for r in rows]
    total = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            total = -total
        total = total * m[k][k]
        inv = 1 / m[k][k]
        for i in range(k + 1, n):
            if m[i][k]:
                f = m[i][k] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[k])]
    return total


@dataclass(frozen=True)
class RationalMatrix:
    """Dense matrix of exact rationals."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(QQ(x) for x in r) for r in self.entries)
        if len({len(r) for r in rows}) > 1:
            raise ValueError("ragged matrix")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows) -> RationalMatrix:
        return cls(tuple(tuple(r) for r in rows))

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def rows(self) -> list[list]:
        return [list(r) for r in self.entries]

    def transpose(self) -> RationalMatrix:
        return RationalMatrix(tuple(zip(*self.entries)))

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.entries))
        return RationalMatrix(tuple(tuple(sum((a * b for a, b in zip(r, c)), mpq(0)) for c in cols) for r in self.entries))

    def rank(self) -> int:
        return bareiss_rank(self.rows()) if self.entries else 0

    def kernel(self) -> list[list]:
        return kernel(self.rows(), self.ncols)

    def det(self) -> mpq:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        return bareiss_det(self.rows())

    def rref(self) -> tuple[list[list], list[int]]:
        return rref(self.rows())


def poly_det(matrix) -> MultiPoly:
    """Determinant of a square matrix of polynomials (Laplace expansion with memo)."""
    n = len(matrix)
    if any(len(r) != n for r in matrix):
        raise ValueError("determinant of a non-square matrix")
    ring = next(x.ring for r in matrix for x in r if isinstance(x, MultiPoly))
    M = [[x if isinstance(x, MultiPoly) else ring.const(x) for x in r] for r in matrix]
    memo: dict = {}

    def minor(row: int, cols: tuple) -> MultiPoly:
        if row == n:
            return ring.one()
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = ring.zero()
        for k, c in enumerate(cols):
            entry = M[row][c]
            if entry.is_zero():
                continue
            sub = minor(row + 1, cols[:k] + cols[k + 1:])
            term = entry * sub
            total = total - term if k % 2 else total + term
        memo[key] = total
        return total

    return minor(0, tuple(range(n)))


def hessian(f: MultiPoly) -> list[list[MultiPoly]]:
    g = f.gradient()
    return [[gi.diff(j) for j in range(f.ring.nvars)] for gi in g]


def hessian_rank_at(f: MultiPoly, point) -> int:
    H = hessian(f)
    return rank([[h.evaluate(point) for h in row] for row in H])
