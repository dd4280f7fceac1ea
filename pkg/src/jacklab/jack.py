"""Jack polynomials, the theta coefficient table and Jack characters.

Jack polynomials are computed in the J normalization by Gram-Schmidt
orthogonalization in the monomial basis against the alpha-deformed inner
product, processing partitions in a linear extension of dominance order.
Three defining properties pin them down: dominance triangularity over the
m-basis, orthogonality, and [m_{1^n}] J_lambda = n!.

Everything is carried out in power-sum coordinates, where the inner product
is diagonal; the coefficient of p_pi in J_lambda is theta_pi(lambda).  The
inner product depends on A = sqrt(alpha) only through alpha, and the theta
entries are polynomials in alpha, so a fully symbolic table is assembled by
running the exact Gram-Schmidt at enough rational values of alpha and
interpolating; the result is verified against extra sample points, which
makes the interpolation step loss-free.  Tables can be cached on disk as
JSON (JACKLAB_CACHE).
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .algebra import (
    ONE,
    ZERO,
    LaurentA,
    RationalFunctionA,
    SingularSystemError,
    monomial_in_power,
    solve_linear_system,
)
from .partitions import (
    Partition,
    concat,
    corner_data,
    dimension,
    enumerate_partitions,
    length_stat,
    z_factor,
)

SYMBOLIC_CAP = 12

THETA_FORMAT = "jacklab-theta-v1"


class CapExceededError(ValueError):
    """Raised when an exact computation exceeds the configured size cap."""


class ThetaTable:
    """Exact matrix theta_pi(lambda) for all partitions of a fixed size n.

    `alpha` is None for a symbolic table (LaurentA entries, polynomials in
    alpha = A^2) or a Fraction for a table evaluated at that rational alpha
    (Fraction entries).
    """

    def __init__(self, n: int, alpha, entries: dict):
        self.n = n
        self.alpha = alpha
        self.entries = entries

    def theta(self, lam: Partition, pi: Partition):
        if lam.size != pi.size:
            raise ValueError("theta needs |lambda| = |pi|")
        return self.entries[(lam, pi)]

    def to_json(self) -> str:
        ser = {}
        for (lam, pi), v in self.entries.items():
            key = "%s|%s" % (lam.to_json(), pi.to_json())
            ser[key] = v.to_json() if isinstance(v, LaurentA) else str(v)
        a_tag = "sym" if self.alpha is None else str(self.alpha)
        return json.dumps({"format": THETA_FORMAT, "n": self.n, "alpha": a_tag,
                           "entries": ser})

    @staticmethod
    def from_json(text: str) -> "ThetaTable":
        data = json.loads(text)
        if data.get("format") != THETA_FORMAT:
            raise ValueError("unknown theta table format %r" % data.get("format"))
        a_tag = data["alpha"]
        alpha = None if a_tag == "sym" else Fraction(a_tag)
        entries = {}
        for key, v in data["entries"].items():
            lam_s, pi_s = key.split("|")
            lam, pi = Partition.from_json(lam_s), Partition.from_json(pi_s)
            entries[(lam, pi)] = LaurentA.from_json(v) if alpha is None else Fraction(v)
        return ThetaTable(data["n"], alpha, entries)


def cache_dir() -> str | None:
    return os.environ.get("JACKLAB_CACHE") or None


def _cache_path(n: int, alpha) -> str | None:
    base = cache_dir()
    if base is None:
        return None
    tag = "sym" if alpha is None else str(alpha).replace("/", "_")
    return os.path.join(base, "theta_n%d_%s.json" % (n, tag))


@lru_cache(maxsize=None)
def theta_table(n: int, alpha: Fraction | None = None,
                cap: int = SYMBOLIC_CAP) -> ThetaTable:
    """The theta table for degree n, symbolic when alpha is None."""
    if n > cap:
        raise CapExceededError("degree %d exceeds the symbolic cap %d" % (n, cap))
    path = _cache_path(n, alpha)
    if path is not None and os.path.exists(path):
        with open(path) as fh:
            table = ThetaTable.from_json(fh.read())
        if table.n == n:
            return table
    table = _build_theta(n, alpha)
    if path is not None:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "w") as fh:
            fh.write(table.to_json())
    return table


def _build_theta(n: int, alpha: Fraction | None) -> ThetaTable:
    if n == 0:
        empty = Partition()
        one = ONE if alpha is None else Fraction(1)
        return ThetaTable(0, alpha, {(empty, empty): one})
    if alpha is not None:
        return ThetaTable(n, alpha, _theta_entries_at(n, Fraction(alpha)))
    # symbolic: interpolate the Gram-Schmidt run over rational alpha samples
    degree_cap = n + 2
    samples = [Fraction(j) for j in range(1, degree_cap + 2)]
    tables = [_theta_entries_at(n, a) for a in samples]
    basis = _lagrange_basis(samples)
    entries: dict = {}
    for key in tables[0]:
        values = [t[key] for t in tables]
        poly = ZERO
        for val, lag in zip(values, basis):
            if val:
                poly = poly + lag * val
        entries[key] = poly
    _verify_symbolic(n, entries, [Fraction(degree_cap + 2), Fraction(1, 2)])
    return ThetaTable(n, None, entries)


def _theta_entries_at(n: int, alpha: Fraction) -> dict:
    """theta entries from one exact Gram-Schmidt run at rational alpha."""
    parts = enumerate_partitions(n)
    order = list(reversed(parts))  # increasing lex: a linear extension of dominance
    idx = {pi: i for i, pi in enumerate(parts)}
    k = len(parts)
    m_in_p = monomial_in_power(n)
    weights = [z_factor(pi) * alpha ** pi.length for pi in parts]
    basis: dict[Partition, list[Fraction]] = {}
    norms: list[tuple[list[Fraction], Fraction]] = []
    for lam in order:
        vec = [Fraction(0)] * k
        for pi, q in m_in_p[lam].items():
            vec[idx[pi]] = Fraction(q)
        for nvec, s in norms:
            t = Fraction(0)
            for i in range(k):
                if vec[i] and nvec[i]:
                    t += vec[i] * nvec[i] * weights[i]
            if t:
                f = t / s
                vec = [vec[i] - f * nvec[i] for i in range(k)]
        s = Fraction(0)
        for i in range(k):
            if vec[i]:
                s += vec[i] * vec[i] * weights[i]
        if not s:
            raise SingularSystemError("degenerate inner product at alpha=%s" % alpha)
        norms.append((vec, s))
        basis[lam] = vec
    entries: dict = {}
    i_unit = idx[Partition([1] * n)]
    for lam, vec in basis.items():
        lead = vec[i_unit]
        if not lead:
            raise SingularSystemError("vanishing leading coefficient at %r" % lam)
        for pi in parts:
            entries[(lam, pi)] = vec[idx[pi]] / lead
    return entries


def _lagrange_basis(samples: list[Fraction]) -> list[LaurentA]:
    """Lagrange basis polynomials in alpha, returned as LaurentA in A."""
    basis = []
    for i, ai in enumerate(samples):
        num = ONE
        den = Fraction(1)
        for j, aj in enumerate(samples):
            if i != j:
                num = num * (LaurentA.monomial(2) - LaurentA.const(aj))
                den *= ai - aj
        basis.append(num / den)
    return basis


def _verify_symbolic(n: int, entries: dict, check_alphas: list[Fraction]):
    for a in check_alphas:
        direct = _theta_entries_at(n, a)
        for key, poly in entries.items():
            if _subs_alpha(poly, a) != direct[key]:
                raise SingularSystemError(
                    "interpolated theta failed verification at alpha=%s, key=%r"
                    % (a, key))


def _subs_alpha(poly: LaurentA, alpha: Fraction) -> Fraction:
    """Evaluate a polynomial-in-alpha LaurentA at a rational alpha."""
    if not poly.is_polynomial_in_alpha():
        raise ValueError("value has odd or negative powers of A: %r" % poly)
    return sum((q * alpha ** (e // 2) for e, q in poly.c.items()), Fraction(0))


def jack_in_p(lam: Partition, alpha: Fraction | None = None,
              cap: int = SYMBOLIC_CAP) -> dict:
    """J_lambda in the power-sum basis: {pi: theta_pi(lambda)}, zeros dropped."""
    table = theta_table(lam.size, alpha, cap)
    out = {}
    for pi in enumerate_partitions(lam.size):
        v = table.theta(lam, pi)
        if (not v.is_zero()) if isinstance(v, LaurentA) else v != 0:
            out[pi] = v
    return out


def theta(lam: Partition, pi: Partition, alpha: Fraction | None = None,
          cap: int = SYMBOLIC_CAP):
    """Coefficient of p_pi in J_lambda (symbolic when alpha is None)."""
    if lam.size != pi.size:
        raise ValueError("theta needs |lambda| = |pi|")
    return theta_table(lam.size, alpha, cap).theta(lam, pi)


def irr_character(lam: Partition, pi: Partition, A=None,
                  cap: int = SYMBOLIC_CAP):
    """Irreducible Jack character chi_lambda(pi) = A^{-||pi||} z_pi/n! theta_pi(lambda).

    A = None gives the exact Laurent polynomial; a Fraction A gives an exact
    rational value; a float A evaluates the symbolic value numerically.
    """
    if lam.size != pi.size:
        raise ValueError("character needs |lambda| = |pi|")
    n = lam.size
    scale = Fraction(z_factor(pi), factorial(n))
    if A is None:
        th = theta(lam, pi, None, cap)
        return th * LaurentA.monomial(-length_stat(pi), scale)
    if isinstance(A, (int, Fraction)):
        A = Fraction(A)
        th = theta(lam, pi, A * A, cap)
        return th * scale / A ** length_stat(pi)
    sym = irr_character(lam, pi, None, cap)
    return sym.substitute(float(A))


def normalized_character(pi: Partition, lam: Partition, A=None,
                         cap: int = SYMBOLIC_CAP):
    """Dual-normalized character Ch_pi(lambda) with falling-power prefactor.

    For |lambda| >= |pi| the argument pi is padded with parts equal to 1 up
    to |lambda|; for smaller lambda the value is 0; Ch of the empty pi is 1.
    """
    n, m = lam.size, pi.size
    if m == 0:
        return ONE if A is None else (Fraction(1) if isinstance(A, (int, Fraction)) else 1.0)
    if n < m:
        return ZERO if A is None else (Fraction(0) if isinstance(A, (int, Fraction)) else 0.0)
    padded = concat(pi, Partition([1] * (n - m)))
    return irr_character(lam, padded, A, cap) * falling(n, m)


def falling(n: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= n - j
    return out


# ---------------------------------------------------------------------------
# Murnaghan-Nakayama oracle (classical symmetric-group characters)
# ---------------------------------------------------------------------------


def sym_character(lam: Partition, pi: Partition) -> int:
    """Integer irreducible character chi^lambda(pi) of the symmetric group.

    Border strips are handled through beta-numbers: removing a strip of size
    r replaces a beta-number b by b - r, with sign (-1)^(number of
    beta-numbers jumped over).  Serves as the independent alpha = 1 oracle.
    """
    if lam.size != pi.size:
        raise ValueError("character needs |lambda| = |pi|")
    betas = tuple(sorted(lam.parts[i] + (lam.length - 1 - i)
                         for i in range(lam.length)))
    return _mn(betas, tuple(sorted(pi.parts, reverse=True)))


@lru_cache(maxsize=None)
def _mn(betas: tuple[int, ...], rest: tuple[int, ...]) -> int:
    if not rest:
        return 1
    r, tail = rest[0], rest[1:]
    bset = set(betas)
    total = 0
    for b in betas:
        nb = b - r
        if nb < 0 or nb in bset:
            continue
        height = sum(1 for x in betas if nb < x < b)
        new = _strip_zeros(tuple(sorted(bset - {b} | {nb})))
        total += (-1) ** height * _mn(new, tail)
    return total


def _strip_zeros(betas: tuple[int, ...]) -> tuple[int, ...]:
    # canonical form: drop a full prefix 0,1,...,k-1 if present
    k = 0
    while k < len(betas) and betas[k] == k:
        k += 1
    return tuple(b - k for b in betas[k:])


def sym_character_normalized(lam: Partition, pi: Partition) -> Fraction:
    """chi^lambda(pi) / dim(lambda), the normalization matching alpha = 1."""
    return Fraction(sym_character(lam, pi), dimension(lam))


# ---------------------------------------------------------------------------
# p_1-Pieri coefficients (growth-process structure constants)
# ---------------------------------------------------------------------------


def pieri_p1_oracle(lam: Partition, A=None, cap: int = SYMBOLIC_CAP) -> dict:
    """Coefficients c in p_1 * J_lam = sum_Lambda c[Lambda] * J_Lambda.

    Solved exactly from the theta tables at degrees |lam| and |lam| + 1; the
    ground truth against which the closed-form fast path is gated.
    """
    n = lam.size
    symbolic = A is None
    if n == 0:
        return {Partition([1]): ONE if symbolic else Fraction(1)}
    alpha = None if symbolic else Fraction(A) ** 2
    table_lo = theta_table(n, alpha, cap)
    table_hi = theta_table(n + 1, alpha, cap)
    parts_hi = enumerate_partitions(n + 1)
    ups = lam.up_neighbours()
    # rhs: coefficient of p_pi in p_1 * J_lam is theta_{pi minus one part 1}(lam)
    rows, rhs = [], []
    for pi in parts_hi:
        if pi.multiplicity(1) == 0:
            b = ZERO if symbolic else Fraction(0)
        else:
            b = table_lo.theta(lam, Partition(pi.parts[:-1]))
        rows.append([table_hi.theta(up, pi) for up in ups])
        rhs.append(b)
    if symbolic:
        rows = [[RationalFunctionA(v) for v in row] for row in rows]
        rhs = [RationalFunctionA(v) for v in rhs]
        sol = solve_linear_system(rows, rhs, RationalFunctionA(ZERO),
                                  RationalFunctionA(ONE))
        return dict(zip(ups, sol))
    sol = solve_linear_system(rows, rhs, Fraction(0), Fraction(1))
    return dict(zip(ups, sol))


@lru_cache(maxsize=None)
def _theta_inverse(n: int, alpha: Fraction, cap: int = SYMBOLIC_CAP):
    """Inverse of the theta matrix (rows pi, columns lambda) at rational alpha."""
    from .algebra import _invert_rational_matrix

    table = theta_table(n, alpha, cap)
    parts = enumerate_partitions(n)
    mat = [[Fraction(table.theta(lam, pi)) for lam in parts] for pi in parts]
    return _invert_rational_matrix(mat)


def pieri_p1_oracle_all(n: int, A: Fraction, cap: int = SYMBOLIC_CAP) -> dict:
    """Pieri coefficients for every |lam| = n at once (shared matrix inverse)."""
    A = Fraction(A)
    alpha = A * A
    parts_lo = enumerate_partitions(n)
    parts_hi = enumerate_partitions(n + 1)
    if n == 0:
        return {Partition(): {Partition([1]): Fraction(1)}}
    table_lo = theta_table(n, alpha, cap)
    inv = _theta_inverse(n + 1, alpha, cap)
    out = {}
    for lam in parts_lo:
        rhs = []
        for pi in parts_hi:
            if pi.multiplicity(1) == 0:
                rhs.append(Fraction(0))
            else:
                rhs.append(Fraction(table_lo.theta(lam, Partition(pi.parts[:-1]))))
        coeffs = {}
        for j, up in enumerate(parts_hi):
            v = sum(inv[j][i] * rhs[i] for i in range(len(parts_hi)) if rhs[i])
            if v:
                coeffs[up] = v
        out[lam] = coeffs
    return out


def pieri_p1(lam: Partition, alpha, oracle_cap: int = SYMBOLIC_CAP) -> dict:
    """Pieri coefficients via the interlacing-corner product formula.

    The weight of the addable corner x_k of the (alpha, 1)-anisotropic
    drawing is prod_j (x_k - y_j) / prod_{i != k} (x_k - x_i); the weights
    form a probability vector and coincide with the linear-algebra oracle
    (gated in the test-suite for all |lam| <= 10 at five rational A).
    """
    one = _one_like(alpha)
    minima, maxima, add_rows, _ = corner_data(lam, alpha, one)
    ups = [lam.add_box(r) for r in add_rows]
    return dict(zip(ups, _interlacing_weights(minima, maxima, one)))


def _one_like(alpha):
    return Fraction(1) if isinstance(alpha, (int, Fraction)) else 1.0


def _interlacing_weights(minima, maxima, one) -> list:
    weights = []
    for k, x in enumerate(minima):
        num = one
        for y in maxima:
            num = num * (x - y)
        den = one
        for i, x2 in enumerate(minima):
            if i != k:
                den = den * (x - x2)
        weights.append(num / den)
    return weights


def cotransition_weights(lam: Partition, alpha) -> tuple[list[Partition], list]:
    """Box-removal probabilities at the removable corners.

    q_k = -prod_i (y_k - x_i) / ((n * alpha) * prod_{j != k} (y_k - y_j));
    the normalization n * alpha is the drawn area (w * h * boxes).  Gated
    against P_n(mu) c^lam_mu / P_{n+1}(lam) in the test-suite.
    """
    n = lam.size
    if n == 0:
        raise ValueError("cannot remove a box from the empty diagram")
    one = _one_like(alpha)
    minima, maxima, _, remove_rows = corner_data(lam, alpha, one)
    downs = [lam.remove_box(r) for r in remove_rows]
    area = n * alpha
    weights = []
    for k, y in enumerate(maxima):
        num = one
        for x in minima:
            num = num * (y - x)
        den = one
        for j, y2 in enumerate(maxima):
            if j != k:
                den = den * (y - y2)
        weights.append(-num / (den * area))
    return downs, weights
