"""Exact arithmetic substrate.

Everything alpha-dependent is expressed through the indeterminate A with
alpha = A^2, so that half-integer powers of alpha stay polynomial.  The
module provides

* ``LaurentA`` -- sparse Laurent polynomials in A over Fraction coefficients,
  with ``GAMMA = -A + 1/A`` as a ready-made constant;
* ``RationalFunctionA`` -- the fraction field of LaurentA, needed by the
  symbolic Gram-Schmidt orthogonalization;
* symmetric functions (``SymFun``) in the monomial and power-sum bases with
  exact basis conversion, and the alpha-deformed inner product
  <p_lam, p_mu> = delta * z_lam * alpha^{ell(lam)};
* generic exact Gaussian elimination over any field-like scalar type.

Rational scalars are plain ``fractions.Fraction``; it already provides exact
canonical arbitrary-precision arithmetic, there is nothing to reimplement.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .partitions import Partition, enumerate_partitions, z_factor

Rational = Fraction


class LaurentA:
    """Sparse Laurent polynomial in A: dict exponent -> Fraction, no zeros."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        c: dict[int, Fraction] = {}
        if coeffs:
            for e, q in coeffs.items():
                q = Fraction(q)
                if q != 0:
                    c[int(e)] = q
        object.__setattr__(self, "c", c)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentA is immutable")

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def const(q) -> "LaurentA":
        return LaurentA({0: Fraction(q)})

    @staticmethod
    def monomial(exp: int, q=1) -> "LaurentA":
        return LaurentA({exp: Fraction(q)})

    # -- structure -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.c

    def min_exp(self) -> int:
        return min(self.c) if self.c else 0

    def max_exp(self) -> int:
        return max(self.c) if self.c else 0

    def coeff(self, exp: int) -> Fraction:
        return self.c.get(exp, Fraction(0))

    def is_polynomial_in_alpha(self) -> bool:
        """True iff only nonnegative even powers of A occur."""
        return all(e >= 0 and e % 2 == 0 for e in self.c)

    # -- ring operations ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        c = dict(self.c)
        for e, q in other.c.items():
            s = c.get(e, Fraction(0)) + q
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        return _wrap(c)

    __radd__ = __add__

    def __neg__(self):
        return _wrap({e: -q for e, q in self.c.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        c: dict[int, Fraction] = {}
        for e1, q1 in self.c.items():
            for e2, q2 in other.c.items():
                e = e1 + e2
                s = c.get(e, Fraction(0)) + q1 * q2
                if s:
                    c[e] = s
                else:
                    c.pop(e, None)
        return _wrap(c)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers only for monomials")
        out = LaurentA.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, other):
        """Division by a scalar or by a monomial (unit of the Laurent ring)."""
        if isinstance(other, LaurentA):
            if len(other.c) == 1:
                (e, q), = other.c.items()
                return _wrap({e1 - e: q1 / q for e1, q1 in self.c.items()})
            raise TypeError("use RationalFunctionA for non-unit division")
        q = Fraction(other)
        return _wrap({e: v / q for e, v in self.c.items()})

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def __bool__(self):
        return bool(self.c)

    # -- evaluation and io -------------------------------------------------------

    def substitute(self, a):
        """Evaluate at A = a > 0; exact for Fraction input, float otherwise."""
        if not (a > 0):
            raise ValueError("A must be positive")
        if isinstance(a, (int, Fraction)):
            a = Fraction(a)
            return sum((q * a ** e for e, q in self.c.items()), Fraction(0))
        return float(sum(float(q) * float(a) ** e for e, q in self.c.items()))

    def to_json(self) -> str:
        return json.dumps({str(e): str(q) for e, q in sorted(self.c.items())})

    @staticmethod
    def from_json(text: str) -> "LaurentA":
        return LaurentA({int(e): Fraction(q) for e, q in json.loads(text).items()})

    def __repr__(self):
        if not self.c:
            return "LaurentA(0)"
        terms = []
        for e in sorted(self.c):
            q = self.c[e]
            if e == 0:
                terms.append(str(q))
            elif e == 1:
                terms.append("%s*A" % q)
            else:
                terms.append("%s*A^%d" % (q, e))
        return "LaurentA(%s)" % " + ".join(terms)


def _wrap(c: dict) -> LaurentA:
    out = LaurentA()
    object.__setattr__(out, "c", {e: q for e, q in c.items() if q})
    return out


def _coerce(x):
    if isinstance(x, LaurentA):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentA.const(x)
    return NotImplemented


ZERO = LaurentA()
ONE = LaurentA.const(1)
A = LaurentA.monomial(1)
ALPHA = LaurentA.monomial(2)
GAMMA = LaurentA({-1: Fraction(1), 1: Fraction(-1)})


def substitute(x, a):
    """Evaluation homomorphism at A = a for LaurentA or plain scalars."""
    if isinstance(x, LaurentA):
        return x.substitute(a)
    if not (a > 0):
        raise ValueError("A must be positive")
    return x


# ---------------------------------------------------------------------------
# Fraction field of LaurentA (used by the symbolic Gram-Schmidt)
# ---------------------------------------------------------------------------


def _as_poly(x: LaurentA) -> tuple[int, list[Fraction]]:
    """Split a Laurent polynomial into A^shift * (dense coefficient list)."""
    if x.is_zero():
        return 0, []
    lo, hi = x.min_exp(), x.max_exp()
    return lo, [x.coeff(e) for e in range(lo, hi + 1)]


def _poly_mod(u: list[Fraction], v: list[Fraction]) -> list[Fraction]:
    u = u[:]
    dv = len(v) - 1
    lead = v[-1]
    while len(u) - 1 >= dv and any(u):
        while u and u[-1] == 0:
            u.pop()
        if len(u) - 1 < dv:
            break
        f = u[-1] / lead
        off = len(u) - 1 - dv
        for i in range(dv + 1):
            u[off + i] -= f * v[i]
        u.pop()
    while u and u[-1] == 0:
        u.pop()
    return u


def _poly_gcd(u: list[Fraction], v: list[Fraction]) -> list[Fraction]:
    while v:
        u, v = v, _poly_mod(u, v)
        # keep coefficients small: make the new divisor monic
        if v:
            lead = v[-1]
            v = [q / lead for q in v]
    if u:
        lead = u[-1]
        u = [q / lead for q in u]
    return u


def laurent_gcd(x: LaurentA, y: LaurentA) -> LaurentA:
    """Monic gcd of the polynomial parts; unit factors A^k are ignored."""
    if x.is_zero():
        return _monic_poly_part(y)
    if y.is_zero():
        return _monic_poly_part(x)
    _, u = _as_poly(x)
    _, v = _as_poly(y)
    g = _poly_gcd(u, v)
    return LaurentA({i: q for i, q in enumerate(g)})


def _monic_poly_part(x: LaurentA) -> LaurentA:
    if x.is_zero():
        return ZERO
    lo, coeffs = _as_poly(x)
    lead = coeffs[-1]
    return LaurentA({i: q / lead for i, q in enumerate(coeffs)})


def laurent_divexact(x: LaurentA, d: LaurentA) -> LaurentA:
    """Exact division x / d; raises if the division leaves a remainder."""
    if d.is_zero():
        raise ZeroDivisionError
    if x.is_zero():
        return ZERO
    lo_x, u = _as_poly(x)
    lo_d, v = _as_poly(d)
    q: list[Fraction] = [Fraction(0)] * (len(u) - len(v) + 1)
    u = u[:]
    dv = len(v) - 1
    lead = v[-1]
    while len(u) - 1 >= dv and any(u):
        while u and u[-1] == 0:
            u.pop()
        if len(u) - 1 < dv:
            break
        f = u[-1] / lead
        q[len(u) - 1 - dv] = f
        off = len(u) - 1 - dv
        for i in range(dv + 1):
            u[off + i] -= f * v[i]
        u.pop()
    while u and u[-1] == 0:
        u.pop()
    if u:
        raise ValueError("division is not exact")
    return LaurentA({i + lo_x - lo_d: c for i, c in enumerate(q)})


class RationalFunctionA:
    """Quotient of Laurent polynomials in A, gcd-reduced.

    The denominator is normalized to a monic polynomial with nonzero constant
    term (unit factors A^k are pushed into the numerator).
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=ONE):
        num = num if isinstance(num, LaurentA) else LaurentA.const(num)
        den = den if isinstance(den, LaurentA) else LaurentA.const(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not num.is_zero():
            g = laurent_gcd(num, den)
            if g.max_exp() > 0 or g.coeff(0) != 1:
                num = laurent_divexact(num, g)
                den = laurent_divexact(den, g)
        lo = den.min_exp()
        lead = den.coeff(den.max_exp())
        unit = LaurentA.monomial(lo, lead)
        den = laurent_divexact(den, unit)
        num = num / unit
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunctionA is immutable")

    def is_zero(self):
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den == ONE

    def as_laurent(self) -> LaurentA:
        if not self.is_laurent():
            raise ValueError("not a Laurent polynomial: %r" % self)
        return self.num

    def __add__(self, other):
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunctionA(self.num * other.den + other.num * self.den,
                                 self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunctionA(-self.num, self.den)

    def __sub__(self, other):
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce_rf(other) - self

    def __mul__(self, other):
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunctionA(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError
        return RationalFunctionA(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _coerce_rf(other) / self

    def __eq__(self, other):
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def __bool__(self):
        return not self.num.is_zero()

    def substitute(self, a):
        return self.num.substitute(a) / self.den.substitute(a)

    def __repr__(self):
        if self.is_laurent():
            return repr(self.num)
        return "(%r)/(%r)" % (self.num, self.den)


def _coerce_rf(x):
    if isinstance(x, RationalFunctionA):
        return x
    if isinstance(x, LaurentA):
        return RationalFunctionA(x)
    if isinstance(x, (int, Fraction)):
        return RationalFunctionA(LaurentA.const(x))
    return NotImplemented


# ---------------------------------------------------------------------------
# Exact linear algebra over a field-like scalar type
# ---------------------------------------------------------------------------


def solve_linear_system(rows: list[list], rhs: list, zero, one):
    """Solve the (possibly overdetermined) exact system rows * x = rhs.

    Scalars only need +, -, *, / and truthiness for zero tests.  Returns the
    unique solution or raises ``SingularSystemError`` / ``InconsistentSystemError``.
    """
    m = len(rows)
    if m == 0:
        raise SingularSystemError("empty system")
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_rows: list[int] = []
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, m):
            if aug[r][col]:
                piv = r
                break
        if piv is None:
            raise SingularSystemError("rank deficient at column %d" % col)
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = one / aug[row][col]
        aug[row] = [v * inv for v in aug[row]]
        for r in range(m):
            if r != row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
        piv_rows.append(row)
        row += 1
    for r in range(row, m):
        if aug[r][ncols]:
            raise InconsistentSystemError("inconsistent equation %d" % r)
    return [aug[r][ncols] for r in piv_rows]


class SingularSystemError(ValueError):
    pass


class InconsistentSystemError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Symmetric functions in the m- and p-bases
# ---------------------------------------------------------------------------


class SymFun:
    """Homogeneous symmetric function: basis tag plus Partition -> LaurentA map."""

    __slots__ = ("basis", "degree", "coeffs")

    def __init__(self, basis: str, degree: int, coeffs: dict):
        if basis not in ("m", "p"):
            raise ValueError("basis must be 'm' or 'p'")
        clean = {}
        for lam, c in coeffs.items():
            if lam.size != degree:
                raise ValueError("non-homogeneous term %r in degree %d" % (lam, degree))
            c = c if isinstance(c, LaurentA) else LaurentA.const(c)
            if not c.is_zero():
                clean[lam] = c
        self.basis = basis
        self.degree = degree
        self.coeffs = clean

    def coeff(self, lam: Partition) -> LaurentA:
        return self.coeffs.get(lam, ZERO)

    def __eq__(self, other):
        return (isinstance(other, SymFun) and self.basis == other.basis
                and self.degree == other.degree and self.coeffs == other.coeffs)

    def __repr__(self):
        terms = ", ".join("%s_%s: %r" % (self.basis, list(l.parts), c)
                          for l, c in sorted(self.coeffs.items(), key=lambda t: t[0].parts))
        return "SymFun(%s, deg=%d, {%s})" % (self.basis, self.degree, terms)


@lru_cache(maxsize=None)
def power_in_monomial(n: int) -> dict[Partition, dict[Partition, int]]:
    """Expansion p_pi = sum_mu R[pi][mu] m_mu, integer coefficients.

    Built by iterating the rule: the coefficient of m_mu in p_r * m_lam is the
    multiplicity in mu of the part that was created (v + r for a bumped part v,
    or r for a freshly inserted part).
    """
    parts_n = enumerate_partitions(n)
    table: dict[Partition, dict[Partition, int]] = {}
    for pi in parts_n:
        expansion: dict[Partition, int] = {Partition(): 1}
        for r in pi.parts:
            nxt: dict[Partition, int] = {}
            for lam, coef in expansion.items():
                for mu, mult in _p_times_m(r, lam):
                    nxt[mu] = nxt.get(mu, 0) + coef * mult
            expansion = nxt
        table[pi] = expansion
    return table


def _p_times_m(r: int, lam: Partition) -> list[tuple[Partition, int]]:
    out = []
    seen = set()
    for v in dict.fromkeys(lam.parts):
        if v in seen:
            continue
        seen.add(v)
        parts = list(lam.parts)
        parts.remove(v)
        mu = Partition(sorted(parts + [v + r], reverse=True))
        out.append((mu, mu.multiplicity(v + r)))
    mu = Partition(sorted(lam.parts + (r,), reverse=True))
    out.append((mu, mu.multiplicity(r)))
    return out


@lru_cache(maxsize=None)
def monomial_in_power(n: int) -> dict[Partition, dict[Partition, Fraction]]:
    """Inverse table: m_mu = sum_pi M[mu][pi] p_pi, rational coefficients."""
    parts_n = enumerate_partitions(n)
    idx = {lam: i for i, lam in enumerate(parts_n)}
    k = len(parts_n)
    fwd = power_in_monomial(n)
    mat = [[Fraction(fwd[pi].get(mu, 0)) for mu in parts_n] for pi in parts_n]
    inv = _invert_rational_matrix(mat)
    out: dict[Partition, dict[Partition, Fraction]] = {}
    for mu in parts_n:
        col = {}
        for pi in parts_n:
            v = inv[idx[mu]][idx[pi]]
            if v:
                col[pi] = v
        out[mu] = col
    return out


def _invert_rational_matrix(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    k = len(mat)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(k)] for i, row in enumerate(mat)]
    for col in range(k):
        piv = next(r for r in range(col, k) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(k):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[k:] for row in aug]


def m_to_p(f: SymFun) -> SymFun:
    if f.basis != "m":
        raise ValueError("expected m-basis input")
    table = monomial_in_power(f.degree)
    out: dict[Partition, LaurentA] = {}
    for mu, c in f.coeffs.items():
        for pi, q in table[mu].items():
            out[pi] = out.get(pi, ZERO) + c * q
    return SymFun("p", f.degree, out)


def p_to_m(f: SymFun) -> SymFun:
    if f.basis != "p":
        raise ValueError("expected p-basis input")
    table = power_in_monomial(f.degree)
    out: dict[Partition, LaurentA] = {}
    for pi, c in f.coeffs.items():
        for mu, q in table[pi].items():
            out[mu] = out.get(mu, ZERO) + c * q
    return SymFun("m", f.degree, out)


def inner_product(f: SymFun, g: SymFun) -> LaurentA:
    """alpha-deformed Hall product: <p_lam, p_mu> = delta * z_lam * A^{2 ell}."""
    if f.degree != g.degree:
        raise ValueError("inner product needs equal degrees")
    fp = f if f.basis == "p" else m_to_p(f)
    gp = g if g.basis == "p" else m_to_p(g)
    total = ZERO
    for pi, c in fp.coeffs.items():
        d = gp.coeffs.get(pi)
        if d is not None:
            total = total + c * d * LaurentA.monomial(2 * pi.length, z_factor(pi))
    return total
