"""Shape functionals S_k, free cumulants R_k and the diagram moment identities.

S_k is (k-1) times the integral of (A x - y/A)^{k-2} over the French drawing
of the diagram with unit boxes; row-by-row antidifferentiation gives the
closed form

    S_k = -(1/k) sum_r [ (A L_r - r/A)^k - (A L_r - (r-1)/A)^k
                         - (-r/A)^k + (-(r-1)/A)^k ]

with L_r the r-th row length, which is exact in the Laurent ring (and fast in
floats for the Monte Carlo path).  Free cumulants are the triangular
transforms of the S_k; the two directions are mutually inverse.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .algebra import GAMMA, LaurentA, ZERO
from .partitions import Partition

__all__ = [
    "s_functional",
    "s_functional_numeric",
    "s_vector",
    "free_cumulants",
    "s_to_r",
    "r_to_s",
    "plambda_moments",
    "fluctuation_Y",
]


def s_functional(lam: Partition, k: int, A: Fraction | None = None):
    """Exact S_k of the diagram; LaurentA for symbolic A, Fraction otherwise."""
    if k < 2:
        raise ValueError("S_k is defined for k >= 2")
    if A is None:
        total = ZERO
        for r, L in enumerate(lam.parts, start=1):
            total = (total
                     + _binom_pow(L, -r, k)
                     - _binom_pow(L, -(r - 1), k)
                     - _binom_pow(0, -r, k)
                     + _binom_pow(0, -(r - 1), k))
        return total * Fraction(-1, k)
    A = Fraction(A)
    total = Fraction(0)
    for r, L in enumerate(lam.parts, start=1):
        total += ((A * L - Fraction(r) / A) ** k
                  - (A * L - Fraction(r - 1) / A) ** k
                  - (-Fraction(r) / A) ** k
                  + (-Fraction(r - 1) / A) ** k)
    return total * Fraction(-1, k)


@lru_cache(maxsize=None)
def _binom_pow(a: int, b: int, k: int) -> LaurentA:
    """(a*A + b/A)^k expanded binomially in the Laurent ring."""
    coeffs: dict[int, Fraction] = {}
    for j in range(k + 1):
        c = Fraction(comb(k, j) * a ** j * b ** (k - j))
        if c:
            e = 2 * j - k
            coeffs[e] = coeffs.get(e, Fraction(0)) + c
    return LaurentA(coeffs)


def s_functional_numeric(rows: np.ndarray, k: int, alpha: float) -> float:
    """Float S_k from the array of row lengths (Monte Carlo path)."""
    if k < 2:
        raise ValueError("S_k is defined for k >= 2")
    A = np.sqrt(alpha)
    r = np.arange(1, len(rows) + 1, dtype=float)
    L = np.asarray(rows, dtype=float)
    total = ((A * L - r / A) ** k - (A * L - (r - 1) / A) ** k
             - (-r / A) ** k + (-(r - 1) / A) ** k).sum()
    return -total / k


def s_vector(lam: Partition, K: int, A=None) -> dict[int, object]:
    """S_k for 2 <= k <= K as a dict."""
    return {k: s_functional(lam, k, A) for k in range(2, K + 1)}


def _compositions(total: int, parts: int):
    """Ordered tuples (k_1, ..., k_parts), all k_j >= 2, summing to total."""
    if parts == 1:
        if total >= 2:
            yield (total,)
        return
    for first in range(2, total - 2 * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _falling(x: int, j: int) -> int:
    out = 1
    for t in range(j):
        out *= x - t
    return out


def r_to_s(R: dict[int, object]) -> dict[int, object]:
    """S_l = sum_i (1/i!) (l-1)^(falling i-1) sum_{k_1+..+k_i=l} R_{k_1}..R_{k_i}."""
    K = max(R) if R else 1
    _check_range(R, K)
    S: dict[int, object] = {}
    for l in range(2, K + 1):
        total = None
        fact = 1
        for i in range(1, l // 2 + 1):
            fact *= i
            coef = Fraction(_falling(l - 1, i - 1), fact)
            for ks in _compositions(l, i):
                term = coef
                for k in ks:
                    term = term * R[k]
                total = term if total is None else total + term
        S[l] = total
    return S


def s_to_r(S: dict[int, object]) -> dict[int, object]:
    """R_l = sum_i (1/i!) (-l+1)^(i-1) sum_{k_1+..+k_i=l} S_{k_1}..S_{k_i}."""
    K = max(S) if S else 1
    _check_range(S, K)
    R: dict[int, object] = {}
    for l in range(2, K + 1):
        total = None
        fact = 1
        for i in range(1, l // 2 + 1):
            fact *= i
            coef = Fraction((-l + 1) ** (i - 1), fact)
            for ks in _compositions(l, i):
                term = coef
                for k in ks:
                    term = term * S[k]
                total = term if total is None else total + term
        R[l] = total
    return R


def _check_range(v: dict, K: int):
    missing = [k for k in range(2, K + 1) if k not in v]
    if missing:
        raise ValueError("missing entries for k = %s" % missing)


def free_cumulants(lam: Partition, K: int, A=None) -> dict[int, object]:
    """R_k(lambda) for 2 <= k <= K through the shape functionals."""
    return s_to_r(s_vector(lam, K, A))


def plambda_moments(lam: Partition, n: int, alpha, K: int) -> list[float]:
    """Moments int u^k dP of the unit-area scaled diagram, k = 0 .. K-2.

    int u^k dP = S_{k+2}(lambda) / ((k+1) n^{(k+2)/2}) under the scaling
    T_{sqrt(alpha/n), 1/sqrt(alpha n)}.
    """
    if lam.size != n:
        raise ValueError("lambda has %d boxes, expected n = %d" % (lam.size, n))
    rows = np.array(lam.parts, dtype=float)
    out = []
    for k in range(0, K - 1):
        sk = s_functional_numeric(rows, k + 2, float(alpha))
        out.append(sk / ((k + 1) * float(n) ** ((k + 2) / 2.0)))
    return out


def vector_to_csv(vec: dict[int, object]) -> str:
    """`k,value` rows; exact LaurentA entries serialize as their JSON form."""
    lines = ["k,value"]
    for k in sorted(vec):
        v = vec[k]
        if isinstance(v, LaurentA):
            lines.append('%d,"%s"' % (k, v.to_json().replace('"', '""')))
        else:
            lines.append("%d,%s" % (k, v))
    return "\n".join(lines) + "\n"


def fluctuation_Y(lam: Partition, k: int, alpha, s_ref: float) -> float:
    """Y_k = sqrt(n) (n^{-k/2} S_k(lambda) - s_ref), the CLT test functional."""
    n = lam.size
    rows = np.array(lam.parts, dtype=float)
    sk = s_functional_numeric(rows, k, float(alpha))
    return float(np.sqrt(n) * (sk / float(n) ** (k / 2.0) - s_ref))
