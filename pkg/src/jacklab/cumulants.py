"""Cumulants of characters, the four finite-n diagnostic sequences, and the
double-scaling constant transforms.

Cumulants come in three flavours here: partition cumulants k_ell of a
character over the concatenation semigroup, classical cumulants kappa_ell of
random variables under the induced measure (pointwise products, evaluated by
full enumeration of Y_n), and disjoint cumulants kappa_bullet_ell whose
moments multiply by concatenation.  All three reduce to the same
set-partition Moebius formula over their respective moment functionals:

    k_ell(x_1, .., x_ell) = sum_{set partitions s} (-1)^{|s|-1} (|s|-1)!
                            prod_{blocks B} moment(x_B).

The four scaled sequences of the equivalence theorem and the least-squares
rate fits are reported with their grids and residuals, so that every
"exists and is finite" claim remains inspectable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kerov
from .algebra import GAMMA
from .jack import SYMBOLIC_CAP, falling, normalized_character
from .measures import CharacterSpec, MeasureOnYn, measure_from_character
from .partitions import Partition, concat
from .shape import free_cumulants, s_functional, _compositions, _falling

__all__ = [
    "set_partitions",
    "partition_cumulant",
    "classical_cumulant",
    "disjoint_cumulant",
    "PolyFun",
    "CharacterFamily",
    "regular_family",
    "AFPReport",
    "cond_A_sequence",
    "cond_B_sequence",
    "cond_C_sequence",
    "cond_D_sequence",
    "enhanced_afp_fit",
    "fit_rate",
    "constant_transforms",
]


@lru_cache(maxsize=None)
def set_partitions(ell: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """All set partitions of {0, .., ell-1}, blocks as sorted tuples."""
    if ell == 0:
        return ((),)
    out = []
    for smaller in set_partitions(ell - 1):
        item = ell - 1
        out.append(tuple(sorted(smaller + ((item,),))))
        for i in range(len(smaller)):
            blocks = list(smaller)
            blocks[i] = tuple(sorted(blocks[i] + (item,)))
            out.append(tuple(sorted(blocks)))
    return tuple(out)


def cumulant_from_moments(items: list, moment) -> object:
    """Moebius formula over set partitions; `moment` maps a tuple of items."""
    ell = len(items)
    total = None
    for sp in set_partitions(ell):
        term = Fraction((-1) ** (len(sp) - 1) * math.factorial(len(sp) - 1))
        for block in sp:
            term = term * moment(tuple(items[i] for i in block))
        total = term if total is None else total + term
    return total


def partition_cumulant(chi: CharacterSpec, *pis: Partition):
    """k_ell of the character over the partition semigroup.

    Moments of a block are chi evaluated on the concatenation of its
    partitions (the padding convention extends chi below size n).
    """
    total = sum(pi.size for pi in pis)
    if total > chi.n:
        raise ValueError("sum |pi_i| = %d exceeds n = %d" % (total, chi.n))

    def moment(block):
        prod = Partition()
        for pi in block:
            prod = concat(prod, pi)
        return chi.value(prod)

    return cumulant_from_moments(list(pis), moment)


def classical_cumulant(measure: MeasureOnYn, *funcs):
    """kappa_ell of random variables under the measure, by full enumeration.

    Each func is a callable on partitions (use PolyFun for the standard
    alpha-polynomial functions).
    """

    def moment(block):
        return measure.expectation(lambda lam: _prod(f(lam) for f in block))

    return cumulant_from_moments(list(funcs), moment)


def _prod(values):
    out = None
    for v in values:
        out = v if out is None else out * v
    return out if out is not None else 1


def disjoint_cumulant(chi: CharacterSpec, *pis: Partition):
    """kappa_bullet_ell with Ch_pi arguments, products by concatenation.

    Block moments are E[Ch_{pi_1 . pi_2 ...}] = n^(falling |pi|) chi(pi);
    they vanish when the concatenation outgrows n.
    """
    n = chi.n

    def moment(block):
        prod = Partition()
        for pi in block:
            prod = concat(prod, pi)
        if prod.size > n:
            return Fraction(0)
        return falling(n, prod.size) * chi.value(prod)

    return cumulant_from_moments(list(pis), moment)


# ---------------------------------------------------------------------------
# alpha-polynomial test functions with their filtration degrees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolyFun:
    """One of the functions Ch_l, S_k, R_k or the constant gamma.

    Degrees follow the filtration deg Ch_l = l + 1, deg S_k = deg R_k = k,
    deg gamma = 1.
    """

    kind: str  # "Ch" | "S" | "R" | "gamma"
    index: int = 0

    @property
    def degree(self) -> int:
        if self.kind == "Ch":
            return self.index + 1
        if self.kind in ("S", "R"):
            return self.index
        if self.kind == "gamma":
            return 1
        raise ValueError(self.kind)

    def evaluator(self, A, cap: int = SYMBOLIC_CAP):
        """Callable lambda -> value at the given rational (or float) A."""
        if self.kind == "Ch":
            pi = Partition([self.index])
            return lambda lam: normalized_character(pi, lam, A, cap)
        if self.kind == "S":
            return lambda lam: s_functional(lam, self.index, A)
        if self.kind == "R":
            return lambda lam: free_cumulants(lam, self.index, A)[self.index]
        if self.kind == "gamma":
            g = GAMMA.substitute(A)
            return lambda lam: g
        raise ValueError(self.kind)

    def __repr__(self):
        return "gamma" if self.kind == "gamma" else "%s_%d" % (self.kind, self.index)


# ---------------------------------------------------------------------------
# Character families over an n-grid
# ---------------------------------------------------------------------------


class CharacterFamily:
    """A sequence n -> character plus the alpha(n) rule.

    The rule is either a constant alpha or the double-scaling recipe: given
    (g, g'), gamma_n = g sqrt(n) + g' and alpha(n) solves
    -sqrt(alpha) + 1/sqrt(alpha) = gamma_n, so the defining expansion holds
    with o(1/sqrt n) error identically zero.
    """

    def __init__(self, generator, alpha=None, g=None, gprime=None, label=""):
        if (alpha is None) == (g is None):
            raise ValueError("give either a constant alpha or (g, gprime)")
        self.generator = generator
        self.alpha_const = alpha
        self.g = g
        self.gprime = gprime if gprime is not None else 0.0
        self.label = label

    def character(self, n: int) -> CharacterSpec:
        return self.generator(n)

    def alpha(self, n: int):
        if self.alpha_const is not None:
            return self.alpha_const
        gam = self.g * math.sqrt(n) + self.gprime
        # positive root of A^2 + gam*A - 1 = 0, alpha = A^2
        A = (-gam + math.sqrt(gam * gam + 4.0)) / 2.0
        return A * A

    def A(self, n: int):
        a = self.alpha(n)
        if isinstance(a, (int, Fraction)):
            root = _exact_sqrt(Fraction(a))
            if root is not None:
                return root
        return math.sqrt(float(a))

    def __repr__(self):
        rule = ("alpha=%s" % (self.alpha_const,) if self.alpha_const is not None
                else "g=%s, g'=%s" % (self.g, self.gprime))
        return "CharacterFamily(%s, %s)" % (self.label, rule)


def _exact_sqrt(q: Fraction) -> Fraction | None:
    sp, sr = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if sp * sp == q.numerator and sr * sr == q.denominator:
        return Fraction(sp, sr)
    return None


def regular_family(alpha=None, g=None, gprime=None) -> CharacterFamily:
    from .measures import regular_character

    return CharacterFamily(regular_character, alpha=alpha, g=g, gprime=gprime,
                           label="regular")


@dataclass
class AFPReport:
    """One diagnostic sequence with its scaling, grid and fitted rate."""

    condition: str
    indices: tuple
    n_grid: list[int]
    raw: list
    scaled: list[float]
    fit: dict = field(default_factory=dict)

    def finite(self) -> bool:
        return all(math.isfinite(v) for v in self.scaled)

    def to_json(self) -> str:
        import json

        return json.dumps({
            "condition": self.condition,
            "indices": [repr(i) for i in self.indices],
            "n_grid": self.n_grid,
            "raw": [str(v) for v in self.raw],
            "scaled": self.scaled,
            "fit": self.fit,
        })


def fit_rate(n_grid: list[int], values: list[float]) -> dict:
    """Least squares on const1 + const2 / sqrt(n); returns fit and residuals."""
    if len(n_grid) < 2 or len(set(n_grid)) < 2:
        raise ValueError("degenerate grid %r" % (n_grid,))
    design = np.array([[1.0, 1.0 / math.sqrt(n)] for n in n_grid])
    y = np.array([float(v) for v in values])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    return {"const1": float(coef[0]), "const2": float(coef[1]),
            "residual": float(np.sqrt((resid ** 2).sum()))}


def _scaled_report(condition, indices, n_grid, raw, exponents) -> AFPReport:
    scaled = [float(v) * float(n) ** e for v, n, e in zip(raw, n_grid, exponents)]
    report = AFPReport(condition, indices, list(n_grid), list(raw), scaled)
    if len(set(n_grid)) >= 2:
        report.fit = fit_rate(n_grid, scaled)
    return report


def cond_A_sequence(fam: CharacterFamily, ls: tuple[int, ...],
                    n_grid: list[int]) -> AFPReport:
    """k_ell(l_1..l_ell) n^{(sum l + ell - 2)/2} over the grid (condition A)."""
    ell = len(ls)
    pis = [Partition([l]) for l in ls]
    raw = [partition_cumulant(fam.character(n), *pis) for n in n_grid]
    e = (sum(ls) + ell - 2) / 2.0
    return _scaled_report("A", tuple(ls), n_grid, raw, [e] * len(n_grid))


def cond_B_sequence(fam: CharacterFamily, ls: tuple[int, ...],
                    n_grid: list[int], cap: int = SYMBOLIC_CAP) -> AFPReport:
    """kappa_ell(Ch_{l_1}, ..) n^{-(sum deg - 2(ell-1))/2} (condition B)."""
    funcs = [PolyFun("Ch", l) for l in ls]
    return cond_C_sequence(fam, funcs, n_grid, cap, condition="B")


def cond_C_sequence(fam: CharacterFamily, funcs: list[PolyFun],
                    n_grid: list[int], cap: int = SYMBOLIC_CAP,
                    condition: str = "C") -> AFPReport:
    """kappa_ell(x_1, ..) n^{-(sum deg - 2(ell-1))/2} for x_i in P (condition C)."""
    ell = len(funcs)
    raw = []
    for n in n_grid:
        A = fam.A(n)
        measure = measure_from_character(fam.character(n), A, cap)
        raw.append(classical_cumulant(measure,
                                      *[f.evaluator(A, cap) for f in funcs]))
    e = -(sum(f.degree for f in funcs) - 2 * (ell - 1)) / 2.0
    return _scaled_report(condition, tuple(funcs), n_grid, raw,
                          [e] * len(n_grid))


def cond_D_sequence(fam: CharacterFamily, ls: tuple[int, ...],
                    n_grid: list[int]) -> AFPReport:
    """kappa_bullet_ell(Ch_{l_1}, ..) with the condition-B scaling (condition D)."""
    ell = len(ls)
    pis = [Partition([l]) for l in ls]
    raw = [disjoint_cumulant(fam.character(n), *pis) for n in n_grid]
    e = -(sum(l + 1 for l in ls) - 2 * (ell - 1)) / 2.0
    return _scaled_report("D", tuple(ls), n_grid, raw, [e] * len(n_grid))


def enhanced_afp_fit(fam: CharacterFamily, l_range: range | list[int],
                     n_grid: list[int]) -> dict:
    """(a_{l+1}, b_{l+1}) estimates from chi_n(l) n^{(l-1)/2} rate fits.

    Returns per-l fits plus the growth statistics sup_l |a_l|^{1/l} / l^m for
    m in {1, 2}.
    """
    if len(n_grid) < 3:
        raise ValueError("need a grid of at least 3 sizes")
    a_est: dict[int, float] = {}
    b_est: dict[int, float] = {}
    fits = {}
    for l in l_range:
        if l < 2:
            raise ValueError("enhanced fits need l >= 2")
        seq = [float(fam.character(n).value(Partition([l])))
               * float(n) ** ((l - 1) / 2.0) for n in n_grid]
        fit = fit_rate(n_grid, seq)
        fits[l] = fit
        a_est[l + 1] = fit["const1"]
        b_est[l + 1] = fit["const2"]
    growth = {}
    for m in (1, 2):
        sup = 0.0
        for l, a in a_est.items():
            if a:
                sup = max(sup, abs(a) ** (1.0 / l) / float(l) ** m)
        growth[m] = sup
    return {"a": a_est, "b": b_est, "fits": fits, "growth": growth,
            "n_grid": list(n_grid)}


# ---------------------------------------------------------------------------
# Constant transforms between the a/b, a'/b', a''/b'' sequences
# ---------------------------------------------------------------------------


def constant_transforms(a: dict[int, object], b: dict[int, object], g,
                        gprime) -> dict:
    """From character constants (a_l), (b_l) to the free-cumulant constants
    (a'_l), (b'_l) and the shape constants (a''_l), (b''_l).

    For g = 0 the relations are a' = a, b' = b (the gamma-proportional
    correction vanishes at g = 0) and the triangular composition sums below;
    for g != 0 the primed sequences solve the expander-sum relations
    triangularly in l (unit diagonal, so the solve cannot degenerate).
    """
    K = max(a) if a else 1
    if sorted(a) != list(range(2, K + 1)) or sorted(b) != sorted(a):
        raise ValueError("sequences must cover indices 2..K")
    if g == 0:
        aprime = dict(a)
        bprime = dict(b)
    else:
        if K - 1 > kerov.CLASS_CAP:
            raise kerov.CapExceededError(
                "expander enumeration needs l = %d > %d" % (K - 1, kerov.CLASS_CAP))
        aprime, bprime = _invert_expander_relations(a, b, g, gprime, K)
    return {
        "a_prime": aprime,
        "b_prime": bprime,
        "a_dblprime": _r_to_s_constants(aprime, K),
        "b_dblprime": _b_dblprime(aprime, bprime, K),
    }


def expander_sum(l: int, weights: dict[int, object], g) -> object:
    """sum over classes of X_l of g^v sum over expanders of prod weights[q(c)]."""
    total = Fraction(0)
    for pair in kerov.transitive_pair_classes(l):
        v = l + 1 - kerov.num_cycles(pair.sigma1) - kerov.num_cycles(pair.sigma2)
        for q in kerov.expanders_for_pair(pair.sigma1, pair.sigma2):
            term = g ** v
            for k in q.values():
                term = term * weights[k]
            total = total + term
    return total


def _expander_sum_b(l: int, aprime: dict, bprime: dict, g, gprime) -> object:
    """The two-term expander relation for b_{l+1} (double-scaling variant)."""
    total = Fraction(0)
    for pair in kerov.transitive_pair_classes(l):
        v = l + 1 - kerov.num_cycles(pair.sigma1) - kerov.num_cycles(pair.sigma2)
        for q in kerov.expanders_for_pair(pair.sigma1, pair.sigma2):
            qs = list(q.values())
            prod_a = Fraction(1)
            for k in qs:
                prod_a = prod_a * aprime[k]
            if v >= 1:
                total = total + v * gprime * g ** (v - 1) * prod_a
            for c_idx, k in enumerate(qs):
                term = g ** v * bprime[k]
                for j, k2 in enumerate(qs):
                    if j != c_idx:
                        term = term * aprime[k2]
                total = total + term
    return total


def _invert_expander_relations(a, b, g, gprime, K):
    """Solve a_{l+1} = expander_sum(aprime) and its b analogue, triangularly."""
    aprime: dict[int, object] = {}
    bprime: dict[int, object] = {}
    for l in range(1, K):
        target = l + 1
        aprime[target] = a[target]
        bprime[target] = b[target]
        # subtract all class contributions except the identity class, whose
        # single expander is q = (l+1) and contributes aprime[l+1] itself
        correction_a = expander_sum(l, {**aprime, target: Fraction(0)}, g)
        correction_b = _expander_sum_b(l, {**aprime, target: Fraction(0)},
                                       {**bprime, target: Fraction(0)}, g, gprime)
        aprime[target] = a[target] - correction_a
        bprime[target] = b[target] - correction_b
    return aprime, bprime


def _r_to_s_constants(aprime: dict, K: int) -> dict:
    """a''_l = sum_i (1/i!) (l-1)^(falling i-1) sum_{k_1+..+k_i=l} a'_{k_1}..a'_{k_i}."""
    out = {}
    for l in range(2, K + 1):
        total = Fraction(0)
        fact = 1
        for i in range(1, l // 2 + 1):
            fact *= i
            coef = Fraction(_falling(l - 1, i - 1), fact)
            for ks in _compositions(l, i):
                term = coef
                for k in ks:
                    term = term * aprime[k]
                total = total + term
        out[l] = total
    return out


def _b_dblprime(aprime: dict, bprime: dict, K: int) -> dict:
    """b''_l = sum_i (1/(i-1)!) (l-1)^(falling i-1)
               sum_{k_1+..+k_i=l} b'_{k_1} a'_{k_2} .. a'_{k_i}."""
    out = {}
    for l in range(2, K + 1):
        total = Fraction(0)
        fact = 1
        for i in range(1, l // 2 + 1):
            if i > 1:
                fact *= i - 1
            coef = Fraction(_falling(l - 1, i - 1), fact)
            for ks in _compositions(l, i):
                term = coef * bprime[ks[0]]
                for k in ks[1:]:
                    term = term * aprime[k]
                total = total + term
        out[l] = total
    return out
