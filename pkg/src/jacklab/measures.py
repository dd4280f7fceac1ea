"""Probability measures on Young diagrams driven by Jack characters.

A reducible character chi on partitions of n expands over the irreducible
Jack characters with nonnegative coefficients; those coefficients are the
measure P_chi.  The regular character gives the Jack-Plancherel measure,
which also has a hook-product closed form (a fast path that the test-suite
gates against the linear solve).  Growth (add one box) and removal kernels
realize the measure dynamically; their closed-form corner weights are gated
against the exact p_1-Pieri oracle and the coherence identities.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from . import jack
from .algebra import solve_linear_system
from .jack import (
    CapExceededError,
    SYMBOLIC_CAP,
    cotransition_weights,
    falling,
    irr_character,
    pieri_p1,
    sym_character_normalized,
    theta_table,
)
from .partitions import Partition, concat, enumerate_partitions

__all__ = [
    "NonReducibleError",
    "CharacterSpec",
    "regular_character",
    "table_character",
    "rectangle_removal_character",
    "MeasureOnYn",
    "measure_from_character",
    "jack_plancherel",
    "GrowthKernel",
    "up_kernel",
    "down_kernel",
    "sample_exact",
    "sample_growth",
    "sample_rectangle_removal",
    "growth_marginal_exact",
    "removal_measure_exact",
]


class NonReducibleError(ValueError):
    """The character is not reducible: some expansion coefficient is negative."""

    def __init__(self, lam: Partition, weight):
        self.lam = lam
        self.weight = weight
        super().__init__("negative weight %s at %r" % (weight, lam))


# ---------------------------------------------------------------------------
# Character specifications
# ---------------------------------------------------------------------------


class CharacterSpec:
    """A normalized character chi on partitions of n with chi(1^n) = 1.

    Values on partitions of size below n follow the padding convention
    chi(pi) = chi(pi, 1, ..., 1).  `kind` is one of "regular", "table" or
    "rectangle-removal".
    """

    def __init__(self, n: int, kind: str, evaluator, label: str):
        self.n = n
        self.kind = kind
        self._evaluator = evaluator
        self.label = label

    def value(self, pi: Partition):
        if pi.size > self.n:
            raise ValueError("|pi| = %d exceeds n = %d" % (pi.size, self.n))
        return self._evaluator(pi)

    def __repr__(self):
        return "CharacterSpec(n=%d, %s)" % (self.n, self.label)


def regular_character(n: int) -> CharacterSpec:
    """chi_reg: equal to 1 on 1^n and 0 elsewhere (before padding)."""

    def ev(pi: Partition):
        return Fraction(int(all(p == 1 for p in pi.parts)))

    return CharacterSpec(n, "regular", ev, "regular")


def table_character(n: int, table: dict) -> CharacterSpec:
    """Explicit character table pi -> value over all partitions of n."""
    table = {pi: Fraction(v) for pi, v in table.items()}
    missing = [pi for pi in enumerate_partitions(n) if pi not in table]
    if missing:
        raise ValueError("table does not cover %r" % missing[0])
    unit = Partition([1] * n)
    if table[unit] != 1:
        raise ValueError("chi(1^n) must be 1, got %s" % table[unit])

    def ev(pi: Partition):
        padded = concat(pi, Partition([1] * (n - pi.size)))
        return table[padded]

    return CharacterSpec(n, "table", ev, "table")


def rectangle_removal_character(i: int, alpha: int,
                                cap: int = SYMBOLIC_CAP) -> CharacterSpec:
    """The reducible character of the box-removal ensemble of Example-type.

    Start from the rectangle (i^{alpha*i}) with n' = alpha*i^2 boxes (n' must
    be even), remove n'/2 boxes by the removal kernel, and read off
    chi(pi) = E[chi_lambda(pi)] under the resulting measure on Y_{n'/2}.
    Exact for alpha = 1 (classical characters) at any size, otherwise through
    theta tables, hence capped.
    """
    alpha = int(alpha)
    nprime = alpha * i * i
    if nprime % 2:
        raise ValueError("alpha * i^2 must be even")
    n = nprime // 2
    weights = removal_measure_exact(i, alpha)
    A = None
    if alpha != 1:
        if n > cap:
            raise CapExceededError(
                "rectangle-removal character needs theta at n=%d > cap %d"
                % (n, cap))
        A = _rational_sqrt(Fraction(alpha))
        if A is None:
            raise ValueError("alpha must be a perfect square for exact values")

    @lru_cache(maxsize=None)
    def ev(pi: Partition):
        padded = concat(pi, Partition([1] * (n - pi.size)))
        total = Fraction(0)
        for lam, w in weights.items():
            if alpha == 1:
                total += w * sym_character_normalized(lam, padded)
            else:
                total += w * irr_character(lam, padded, A, cap)
        return total

    return CharacterSpec(n, "rectangle-removal", ev,
                         "rectangle-removal(i=%d, alpha=%d)" % (i, alpha))


def _rational_sqrt(q: Fraction) -> Fraction | None:
    from math import isqrt

    p, r = q.numerator, q.denominator
    sp, sr = isqrt(p), isqrt(r)
    if sp * sp == p and sr * sr == r:
        return Fraction(sp, sr)
    return None


# ---------------------------------------------------------------------------
# Measures
# ---------------------------------------------------------------------------


class MeasureOnYn:
    """Probability assignment on the partitions of n, exact or numeric."""

    def __init__(self, n: int, weights: dict, exact: bool, label: str = ""):
        self.n = n
        self.weights = weights
        self.exact = exact
        self.label = label
        total = sum(weights.values())
        if exact:
            if total != 1:
                raise ValueError("weights sum to %s, not 1" % total)
        elif abs(total - 1.0) > 1e-12:
            raise ValueError("weights sum to %r, not 1" % total)

    def prob(self, lam: Partition):
        return self.weights.get(lam, Fraction(0) if self.exact else 0.0)

    def support(self):
        return [lam for lam in enumerate_partitions(self.n)
                if lam in self.weights and self.weights[lam]]

    def expectation(self, f):
        """E[f] by full enumeration; f maps Partition to a scalar."""
        return sum(w * f(lam) for lam, w in self.weights.items())

    def to_csv(self) -> str:
        lines = ["partition_json,weight"]
        for lam in enumerate_partitions(self.n):
            if lam in self.weights:
                w = self.weights[lam]
                lines.append('"%s",%s' % (lam.to_json(), w))
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return "MeasureOnYn(n=%d, %s, %d atoms)" % (
            self.n, "exact" if self.exact else "numeric", len(self.weights))


def measure_from_character(chi: CharacterSpec, A, cap: int = SYMBOLIC_CAP,
                           require_reducible: bool = True) -> MeasureOnYn:
    """Solve chi = sum_lambda P(lambda) chi_lambda for the weight vector.

    A rational A gives an exact solve over Fractions; a float A solves in
    double precision.  The theta matrix is invertible, so the solution is
    unique; a negative weight raises NonReducibleError (or is kept, with
    `measure.reducible = False`, when `require_reducible` is off).
    """
    n = chi.n
    if n == 0:
        return MeasureOnYn(0, {Partition(): Fraction(1)}, True, chi.label)
    if n > cap:
        raise CapExceededError("n=%d exceeds cap %d" % (n, cap))
    parts = enumerate_partitions(n)
    exact = isinstance(A, (int, Fraction))
    if exact:
        A = Fraction(A)
        rows = [[irr_character(lam, pi, A, cap) for lam in parts] for pi in parts]
        rhs = [Fraction(chi.value(pi)) for pi in parts]
        sol = solve_linear_system(rows, rhs, Fraction(0), Fraction(1))
    else:
        mat = np.array([[float(irr_character(lam, pi, float(A), cap))
                         for lam in parts] for pi in parts])
        rhs = np.array([float(chi.value(pi)) for pi in parts])
        sol = np.linalg.solve(mat, rhs)
    weights = dict(zip(parts, sol))
    reducible = True
    for lam, w in weights.items():
        if (w < 0 and exact) or ((not exact) and w < -1e-12):
            reducible = False
            if require_reducible:
                raise NonReducibleError(lam, w)
    measure = MeasureOnYn(n, weights, exact, chi.label)
    measure.reducible = reducible
    return measure


def jack_plancherel(n: int, alpha) -> MeasureOnYn:
    """Jack-Plancherel measure by the hook products.

    P(lambda) = alpha^n n! / (c_lambda(alpha) c'_lambda(alpha)) with
    c = prod(alpha a + l + 1) and c' = prod(alpha (a + 1) + l); agrees with
    measure_from_character(chi_reg) (gated exactly for n <= 8).
    """
    exact = isinstance(alpha, (int, Fraction))
    alpha = Fraction(alpha) if exact else float(alpha)
    weights = {}
    for lam in enumerate_partitions(n):
        weights[lam] = _jack_plancherel_weight(lam, alpha)
    return MeasureOnYn(n, weights, exact, "jack-plancherel")


def _jack_plancherel_weight(lam: Partition, alpha):
    c = cprime = alpha ** 0
    for (r, col) in lam.boxes():
        a, l = lam.arm(r, col), lam.leg(r, col)
        c = c * (alpha * a + l + 1)
        cprime = cprime * (alpha * (a + 1) + l)
    return alpha ** lam.size * factorial(lam.size) / (c * cprime)


# ---------------------------------------------------------------------------
# Growth and removal kernels
# ---------------------------------------------------------------------------


class GrowthKernel:
    """Markov kernel on the Young lattice: one box up or one box down."""

    def __init__(self, direction: str, alpha):
        if direction not in ("up", "down"):
            raise ValueError("direction must be 'up' or 'down'")
        if not (alpha > 0):
            raise ValueError("alpha must be positive")
        self.direction = direction
        self.alpha = alpha

    def transitions(self, lam: Partition) -> dict:
        if self.direction == "up":
            return pieri_p1(lam, self.alpha)
        downs, weights = cotransition_weights(lam, self.alpha)
        return dict(zip(downs, weights))

    def __repr__(self):
        return "GrowthKernel(%s, alpha=%s)" % (self.direction, self.alpha)


def up_kernel(alpha) -> GrowthKernel:
    return GrowthKernel("up", alpha)


def down_kernel(alpha) -> GrowthKernel:
    return GrowthKernel("down", alpha)


def down_transition_from_measures(lam: Partition, alpha) -> dict:
    """Reference cotransition q(lam, mu) = P_n(mu) c^lam_mu / P_{n+1}(lam).

    The slow route through the Jack-Plancherel weights and the Pieri
    coefficients; used to gate the corner closed form.
    """
    n = lam.size
    p_top = _jack_plancherel_weight(lam, Fraction(alpha))
    out = {}
    for mu in lam.down_neighbours():
        c = pieri_p1(mu, Fraction(alpha))[lam]
        out[mu] = _jack_plancherel_weight(mu, Fraction(alpha)) * c / p_top
    return out


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------


def sample_exact(measure: MeasureOnYn, rng) -> Partition:
    """Draw one partition by CDF inversion in the canonical order."""
    u = rng.random()
    acc = 0.0
    parts = enumerate_partitions(measure.n)
    for lam in parts:
        acc += float(measure.prob(lam))
        if u < acc:
            return lam
    return parts[-1]


class _DiagramState:
    """Mutable distinct-part representation for the fast samplers.

    vals[j] are the distinct part values (decreasing) and cum[j] the
    cumulative row counts, cum[0] = 0; block j occupies rows
    cum[j]+1 .. cum[j+1].
    """

    __slots__ = ("vals", "cum")

    def __init__(self, vals=None, cum=None):
        self.vals = vals if vals is not None else []
        self.cum = cum if cum is not None else [0]

    @staticmethod
    def from_partition(lam: Partition) -> "_DiagramState":
        from .partitions import distinct_parts

        vals, counts = distinct_parts(lam)
        cum = [0]
        for c in counts:
            cum.append(cum[-1] + c)
        return _DiagramState(list(vals), cum)

    def to_partition(self) -> Partition:
        parts = []
        for j, v in enumerate(self.vals):
            parts.extend([v] * (self.cum[j + 1] - self.cum[j]))
        return Partition(parts)

    def boxes(self) -> int:
        return sum(v * (self.cum[j + 1] - self.cum[j])
                   for j, v in enumerate(self.vals))

    # -- corner weights (float, log-stabilized) -----------------------------

    def corner_arrays(self, alpha: float):
        d = len(self.vals)
        x = np.empty(d + 1)
        y = np.empty(d)
        for j in range(d):
            base = alpha * self.vals[j]
            x[j] = base - self.cum[j]
            y[j] = base - self.cum[j + 1]
        x[d] = -self.cum[d]
        return x, y

    def grow_weights(self, alpha: float) -> np.ndarray:
        x, y = self.corner_arrays(alpha)
        d = len(self.vals)
        if d == 0:
            return np.ones(1)
        logw = np.log(np.abs(x[:, None] - y[None, :])).sum(axis=1)
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, 1.0)
        logw -= np.log(np.abs(diff)).sum(axis=1)
        logw -= logw.max()
        w = np.exp(logw)
        return w / w.sum()

    def shrink_weights(self, alpha: float) -> np.ndarray:
        x, y = self.corner_arrays(alpha)
        d = len(self.vals)
        if d == 1:
            return np.ones(1)
        logw = np.log(np.abs(y[:, None] - x[None, :])).sum(axis=1)
        diff = y[:, None] - y[None, :]
        np.fill_diagonal(diff, 1.0)
        logw -= np.log(np.abs(diff)).sum(axis=1)
        logw -= logw.max()
        w = np.exp(logw)
        return w / w.sum()

    # -- in-place moves -------------------------------------------------------

    def add_at(self, k: int):
        """Add a box at inner corner k (extend first row of block k)."""
        vals, cum = self.vals, self.cum
        d = len(vals)
        if k < d:
            v = vals[k]
            if k > 0 and vals[k - 1] == v + 1:
                cum[k] += 1
                if cum[k] == cum[k + 1]:
                    vals.pop(k)
                    cum.pop(k + 1)
            else:
                vals.insert(k, v + 1)
                cum.insert(k + 1, cum[k] + 1)
                if cum[k + 2] == cum[k + 1]:
                    vals.pop(k + 1)
                    cum.pop(k + 2)
        else:
            if vals and vals[-1] == 1:
                cum[-1] += 1
            else:
                vals.append(1)
                cum.append(cum[-1] + 1)

    def remove_at(self, j: int):
        """Remove a box at outer corner j (shorten last row of block j)."""
        vals, cum = self.vals, self.cum
        v = vals[j]
        last_of_next = j + 1 < len(vals) and vals[j + 1] == v - 1
        single_row = cum[j + 1] - cum[j] == 1
        if v == 1:
            cum[j + 1] -= 1
            if single_row:
                vals.pop(j)
                cum.pop(j + 1)
            return
        if single_row:
            if last_of_next:
                vals.pop(j)
                cum.pop(j + 1)
            else:
                vals[j] = v - 1
        else:
            if last_of_next:
                cum[j + 1] -= 1
            else:
                vals.insert(j + 1, v - 1)
                cum.insert(j + 1, cum[j + 1] - 1)


def _choose(w: np.ndarray, rng) -> int:
    c = np.cumsum(w)
    return min(int(np.searchsorted(c, rng.random() * c[-1])), len(w) - 1)


def sample_growth(n: int, alpha, rng) -> Partition:
    """Run n growth steps from the empty diagram (Jack-Plancherel sample)."""
    if not (alpha > 0):
        raise ValueError("alpha must be positive")
    state = _DiagramState()
    a = float(alpha)
    for _ in range(n):
        w = state.grow_weights(a)
        state.add_at(_choose(w, rng))
    return state.to_partition()


def sample_rectangle_removal(i: int, alpha: int, rng) -> Partition:
    """Remove half of the boxes of the rectangle (i^{alpha i}) by the kernel."""
    nprime = alpha * i * i
    if nprime % 2:
        raise ValueError("alpha * i^2 must be even")
    state = _DiagramState([i], [0, alpha * i])
    a = float(alpha)
    for _ in range(nprime // 2):
        w = state.shrink_weights(a)
        state.remove_at(_choose(w, rng))
    return state.to_partition()


# ---------------------------------------------------------------------------
# Exact path-enumeration oracles (small n)
# ---------------------------------------------------------------------------


def growth_marginal_exact(n: int, alpha) -> MeasureOnYn:
    """Marginal law of the growth chain after n steps, by exact DP."""
    alpha = Fraction(alpha)
    dist = {Partition(): Fraction(1)}
    for _ in range(n):
        nxt: dict[Partition, Fraction] = {}
        for lam, p in dist.items():
            for up, c in pieri_p1(lam, alpha).items():
                nxt[up] = nxt.get(up, Fraction(0)) + p * c
        dist = nxt
    return MeasureOnYn(n, dist, True, "growth-marginal")


def removal_measure_exact(i: int, alpha: int) -> dict:
    """Distribution after removing alpha*i^2/2 boxes from the rectangle, exact DP."""
    alpha = int(alpha)
    nprime = alpha * i * i
    if nprime % 2:
        raise ValueError("alpha * i^2 must be even")
    start = Partition([i] * (alpha * i))
    dist = {start: Fraction(1)}
    a = Fraction(alpha)
    for _ in range(nprime // 2):
        nxt: dict[Partition, Fraction] = {}
        for lam, p in dist.items():
            downs, weights = cotransition_weights(lam, a)
            for mu, q in zip(downs, weights):
                nxt[mu] = nxt.get(mu, Fraction(0)) + p * q
        dist = nxt
    return dist
