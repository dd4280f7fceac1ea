"""Kerov-polynomial machinery and auxiliary counting lemmas.

The expansion of the character Ch_l over monomials gamma^a R_{k_1}...R_{k_j}
is obtained two independent ways: a closed top-degree formula summing over
conjugation classes of transitive permutation pairs weighted by `expander'
cycle labellings, and an evaluation oracle that samples (lambda, A) pairs,
evaluates Ch_l, gamma and the free cumulants exactly, and solves the linear
system for the coefficients.  The oracle is the ground truth; the displayed
formulas are validated against it.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from functools import lru_cache

from .algebra import (
    InconsistentSystemError,
    SingularSystemError,
    solve_linear_system,
)
from .jack import SYMBOLIC_CAP, CapExceededError, normalized_character
from .partitions import Partition, enumerate_partitions
from .shape import free_cumulants

CLASS_CAP = 7
ORACLE_CAP = 6

__all__ = [
    "PermutationPair",
    "transitive_pair_classes",
    "is_expander",
    "expanders_for_pair",
    "GradedPolynomial",
    "top_degree_formula",
    "kerov_expansion_oracle",
    "permutation_length_census",
    "carleman_check",
    "free_cumulant_growth_check",
]


# ---------------------------------------------------------------------------
# Permutations as tuples: sigma[i] is the image of point i (0-indexed)
# ---------------------------------------------------------------------------


def identity(l: int) -> tuple[int, ...]:
    return tuple(range(l))

def compose(a, b):
    """a after b."""
    return tuple(a[b[i]] for i in range(len(a)))

def inverse(a):
    inv = [0] * len(a)
    for i, j in enumerate(a):
        inv[j] = i
    return tuple(inv)

def conjugate_perm(p, s):
    """p s p^{-1}."""
    return compose(compose(p, s), inverse(p))

def cycles(sigma) -> list[tuple[int, ...]]:
    seen = [False] * len(sigma)
    out = []
    for start in range(len(sigma)):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        j = sigma[start]
        while j != start:
            cyc.append(j)
            seen[j] = True
            j = sigma[j]
        out.append(tuple(cyc))
    return out

def num_cycles(sigma) -> int:
    return len(cycles(sigma))

def perm_length(sigma) -> int:
    """||sigma|| = l - #cycles, the transposition length."""
    return len(sigma) - num_cycles(sigma)

def is_transitive(s1, s2) -> bool:
    # forward reachability suffices: a finite set closed under a bijection
    # is closed under its inverse as well
    l = len(s1)
    seen = [False] * l
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        i = stack.pop()
        for j in (s1[i], s2[i]):
            if not seen[j]:
                seen[j] = True
                count += 1
                stack.append(j)
    return count == l


class PermutationPair:
    """A pair (sigma1, sigma2) of permutations of [l] with a transitivity flag."""

    __slots__ = ("sigma1", "sigma2", "transitive")

    def __init__(self, sigma1, sigma2):
        self.sigma1 = tuple(sigma1)
        self.sigma2 = tuple(sigma2)
        self.transitive = is_transitive(self.sigma1, self.sigma2)

    def __eq__(self, other):
        return (self.sigma1, self.sigma2) == (other.sigma1, other.sigma2)

    def __hash__(self):
        return hash((self.sigma1, self.sigma2))

    def __repr__(self):
        return "PermutationPair(%r, %r)" % (self.sigma1, self.sigma2)


# ---------------------------------------------------------------------------
# Conjugation classes of transitive pairs
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def transitive_pair_classes(l: int) -> list[PermutationPair]:
    """Representatives of X_l / S_{l-1}, conjugation acting coordinatewise.

    Class representatives carry sigma2 in block-cycle form: cycles are
    intervals of consecutive points, the cycle containing the last point l
    comes last, the other cycle lengths are sorted decreasingly.
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    if l > CLASS_CAP:
        raise CapExceededError("class enumeration capped at l = %d" % CLASS_CAP)
    reps: list[PermutationPair] = []
    for sigma2, stab in _canonical_sigma2(l):
        seen: set[tuple[int, ...]] = set()
        for sigma1 in itertools.permutations(range(l)):
            if sigma1 in seen:
                continue
            pair = PermutationPair(sigma1, sigma2)
            if not pair.transitive:
                continue
            orbit = {conjugate_perm(p, sigma1) for p in stab}
            seen.update(orbit)
            reps.append(pair)
    return reps


def _canonical_sigma2(l: int):
    """Canonical sigma2 representatives with their S_{l-1} stabilizers.

    One representative per (multiset of cycle lengths, length of the cycle
    containing the last point): blocks of consecutive points, non-last blocks
    sorted decreasingly, the block containing point l-1 (0-indexed) last.
    """
    out = []
    for last_len in range(1, l + 1):
        rest = l - last_len
        for mu in _partitions_tuple(rest):
            blocks = list(mu) + [last_len]
            sigma2 = _blocks_to_perm(blocks)
            out.append((sigma2, _stabilizer(blocks, l)))
    return out


@lru_cache(maxsize=None)
def _partitions_tuple(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(p.parts) for p in enumerate_partitions(n))


def _blocks_to_perm(blocks: list[int]) -> tuple[int, ...]:
    sigma = []
    start = 0
    for b in blocks:
        for off in range(b):
            sigma.append(start + (off + 1) % b)
        start += b
    return tuple(sigma)


def _stabilizer(blocks: list[int], l: int) -> list[tuple[int, ...]]:
    """All pi in S_{l-1} commuting with the block permutation.

    Generated by rotations of the non-last blocks and swaps of equal-length
    non-last blocks; the last block contains the fixed point l-1, so only its
    trivial rotation survives.
    """
    starts = []
    s = 0
    for b in blocks:
        starts.append(s)
        s += b
    nb = len(blocks) - 1  # non-last blocks
    rotation_choices = [range(blocks[i]) for i in range(nb)]
    by_len: dict[int, list[int]] = {}
    for i in range(nb):
        by_len.setdefault(blocks[i], []).append(i)
    swap_groups = [list(itertools.permutations(ix)) for ix in by_len.values()]
    group_keys = list(by_len.values())
    out = []
    for rots in itertools.product(*rotation_choices) if nb else [()]:
        for swaps in itertools.product(*swap_groups) if swap_groups else [()]:
            target = list(range(nb))
            for keys, perm in zip(group_keys, swaps):
                for src, dst in zip(keys, perm):
                    target[src] = dst
            pi = list(range(l))
            for i in range(nb):
                b = blocks[i]
                for off in range(b):
                    pi[starts[i] + off] = starts[target[i]] + (off + rots[i]) % b
            out.append(tuple(pi))
    return out


def transitive_pair_classes_bruteforce(l: int) -> int:
    """Orbit count by direct BFS over all transitive pairs (test oracle)."""
    gens = []
    if l >= 2:
        base = list(range(l))
        t = base[:]
        t[0], t[1] = t[1], t[0]
        gens.append(tuple(t))
        if l >= 3:
            c = tuple(list(range(1, l - 1)) + [0, l - 1])
            gens.append(c)
    seen: set = set()
    count = 0
    for s1 in itertools.permutations(range(l)):
        for s2 in itertools.permutations(range(l)):
            if (s1, s2) in seen or not is_transitive(s1, s2):
                continue
            count += 1
            stack = [(s1, s2)]
            seen.add((s1, s2))
            while stack:
                a, b = stack.pop()
                for g in gens:
                    nxt = (conjugate_perm(g, a), conjugate_perm(g, b))
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
    return count


# ---------------------------------------------------------------------------
# Expanders and the top-degree formula
# ---------------------------------------------------------------------------


def is_expander(sigma1, sigma2, q: dict) -> bool:
    """Check the expander conditions for q: cycles(sigma2) -> {2, 3, ...}.

    Cycle keys are frozensets of points.  Requires (i) sum q = #cycles(s1) +
    #cycles(s2) and (ii) for every proper nonempty subset A of the cycles of
    sigma2, more cycles of sigma1 meet union(A) than sum_{d in A} (q(d) - 1).
    """
    c1 = [frozenset(c) for c in cycles(sigma1)]
    c2 = [frozenset(c) for c in cycles(sigma2)]
    if set(q) != set(c2):
        raise ValueError("q must be defined exactly on the cycles of sigma2")
    if any(q[c] < 2 for c in c2):
        return False
    if sum(q[c] for c in c2) != len(c1) + len(c2):
        return False
    m = len(c2)
    for mask in range(1, (1 << m) - 1):
        chosen = [c2[i] for i in range(m) if mask >> i & 1]
        union = frozenset().union(*chosen)
        meets = sum(1 for c in c1 if c & union)
        if meets <= sum(q[d] - 1 for d in chosen):
            return False
    return True


def expanders_for_pair(sigma1, sigma2) -> list[dict]:
    """All expander labellings q for the pair."""
    c1 = cycles(sigma1)
    c2 = [frozenset(c) for c in cycles(sigma2)]
    total = len(c1) + len(c2)
    m = len(c2)
    out = []
    for combo in _compositions_at_least_2(total, m):
        q = dict(zip(c2, combo))
        if is_expander(sigma1, sigma2, q):
            out.append(q)
    return out


def _compositions_at_least_2(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(2, total - 2 * (parts - 1) + 1):
        for rest in _compositions_at_least_2(total - first, parts - 1):
            yield (first,) + rest


class GradedPolynomial:
    """Polynomial in gamma and the free cumulants R_2, R_3, ...

    Monomials are keyed by (gamma_power, tuple of R indices sorted
    decreasingly); the degree of a monomial is gamma_power + sum(indices).
    """

    def __init__(self, coeffs: dict | None = None):
        self.coeffs = {k: Fraction(v) for k, v in (coeffs or {}).items()
                       if Fraction(v) != 0}

    def add_term(self, gamma_power: int, ks: tuple[int, ...], coef):
        key = (gamma_power, tuple(sorted(ks, reverse=True)))
        cur = self.coeffs.get(key, Fraction(0)) + Fraction(coef)
        if cur:
            self.coeffs[key] = cur
        else:
            self.coeffs.pop(key, None)

    def degree_part(self, d: int) -> "GradedPolynomial":
        return GradedPolynomial({k: v for k, v in self.coeffs.items()
                                 if k[0] + sum(k[1]) == d})

    def max_degree(self) -> int:
        return max((k[0] + sum(k[1]) for k in self.coeffs), default=0)

    def gamma_part(self, power: int) -> "GradedPolynomial":
        return GradedPolynomial({k: v for k, v in self.coeffs.items()
                                 if k[0] == power})

    def evaluate(self, gamma_value, r_values: dict):
        total = None
        for (a, ks), c in self.coeffs.items():
            term = c * gamma_value ** a
            for k in ks:
                term = term * r_values[k]
            total = term if total is None else total + term
        return total if total is not None else Fraction(0)

    def to_json(self) -> str:
        items = [{"gamma_power": a, "r_parts": list(ks), "coefficient": str(c)}
                 for (a, ks), c in sorted(self.coeffs.items())]
        return json.dumps(items)

    @staticmethod
    def from_json(text: str) -> "GradedPolynomial":
        poly = GradedPolynomial()
        for item in json.loads(text):
            poly.add_term(item["gamma_power"], tuple(item["r_parts"]),
                          Fraction(item["coefficient"]))
        return poly

    def __eq__(self, other):
        return isinstance(other, GradedPolynomial) and self.coeffs == other.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "GradedPolynomial(0)"
        bits = []
        for (a, ks), c in sorted(self.coeffs.items()):
            mono = []
            if a:
                mono.append("g^%d" % a if a > 1 else "g")
            mono.extend("R%d" % k for k in ks)
            bits.append("%s %s" % (c, " ".join(mono) if mono else "1"))
        return "GradedPolynomial(%s)" % " + ".join(bits)


def top_degree_formula(l: int) -> GradedPolynomial:
    """Degree-(l+1) part of Ch_l: sum over pair classes and expanders.

    Each class [(s1, s2)] contributes gamma^{l+1-|C(s1)|-|C(s2)|} times
    prod_c R_{q(c)} over its expanders; every monomial has degree l+1.
    """
    poly = GradedPolynomial()
    for pair in transitive_pair_classes(l):
        v = l + 1 - num_cycles(pair.sigma1) - num_cycles(pair.sigma2)
        for q in expanders_for_pair(pair.sigma1, pair.sigma2):
            poly.add_term(v, tuple(q.values()), 1)
    return poly


# ---------------------------------------------------------------------------
# Evaluation / linear-solve oracle for the full Kerov expansion
# ---------------------------------------------------------------------------


def kerov_monomials(max_degree: int) -> list[tuple[int, tuple[int, ...]]]:
    """All (gamma_power, R-index partition with parts >= 2) of degree <= cap."""
    out = []
    for d in range(max_degree + 1):
        for s in range(d + 1):
            a = d - s
            for mu in enumerate_partitions(s):
                if all(p >= 2 for p in mu.parts):
                    out.append((a, tuple(mu.parts)))
    return out


def kerov_expansion_oracle(l: int, degree_cap: int | None = None,
                           cap: int = SYMBOLIC_CAP) -> GradedPolynomial:
    """Expansion of Ch_l over gamma^a R_{k_1}...R_{k_j}, degree <= l+1.

    Evaluates Ch_l, gamma and the R_k exactly on partitions of sizes l+1 and
    l+2 at five rational values of A and solves the linear system; on rank
    deficiency the evaluation set is enlarged (more A values, then larger
    partitions) before giving up.
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    if l > ORACLE_CAP:
        raise CapExceededError("expansion oracle capped at l = %d" % ORACLE_CAP)
    if degree_cap is None:
        degree_cap = l + 1
    monomials = kerov_monomials(degree_cap)
    a_pool = [Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2), Fraction(5),
              Fraction(7), Fraction(1, 3), Fraction(11), Fraction(2, 5),
              Fraction(13), Fraction(3, 7), Fraction(17)]
    # monomials gamma^a R_2^j depend on (A, |lambda|) only: a grid must offer
    # at least degree_cap+1 gamma values and degree_cap//2 + 1 distinct sizes
    n_a = max(5, degree_cap + 1)
    n_sizes = max(2, degree_cap // 2 + 1)
    a_values = a_pool[:n_a]
    sizes = [l + 1 + j for j in range(n_sizes)]
    while True:
        if max(sizes) > cap:
            raise CapExceededError(
                "oracle for l=%d needs theta tables beyond the cap %d" % (l, cap))
        try:
            sol = _solve_kerov(l, monomials, sizes, a_values, cap)
            poly = GradedPolynomial()
            for (mono, c) in zip(monomials, sol):
                if c:
                    poly.add_term(mono[0], mono[1], c)
            return poly
        except SingularSystemError:
            if len(a_values) < len(a_pool):
                a_values = a_pool[:len(a_values) + 2]
            sizes = sizes + [max(sizes) + 1]


def _solve_kerov(l, monomials, sizes, a_values, cap):
    pi_l = Partition([l])
    rows, rhs = [], []
    for n in sizes:
        for lam in enumerate_partitions(n):
            r_cache = {}
            for A in a_values:
                gam = Fraction(1) / A - A
                rv = r_cache.get(A)
                if rv is None:
                    rv = free_cumulants(lam, l + 1, A)
                    r_cache[A] = rv
                row = []
                for (a, ks) in monomials:
                    term = gam ** a
                    for k in ks:
                        term = term * rv[k]
                    row.append(term)
                rows.append(row)
                rhs.append(Fraction(normalized_character(pi_l, lam, A, cap)))
    return solve_linear_system(rows, rhs, Fraction(0), Fraction(1))


# ---------------------------------------------------------------------------
# Counting and growth lemmas
# ---------------------------------------------------------------------------


def permutation_length_census(l: int, r: int) -> tuple[int, float, bool]:
    """(#permutations of [l] with length r, bound l^{2r}/r!, count <= bound)."""
    if l > 8:
        raise CapExceededError("census capped at l = 8")
    from math import factorial

    count = sum(1 for p in itertools.permutations(range(l))
                if perm_length(p) == r)
    bound = l ** (2 * r) / factorial(r)
    return count, bound, count <= bound


def carleman_check(moments: list, support: str, C) -> bool:
    """Moment-growth test: |m_l| <= C^l l^{2l} (half lines) or C^l l^l (line).

    A diagnostic for the moment-determinacy criteria; moments are indexed
    from l = 1.
    """
    if support not in ("half-line-right", "half-line-left", "full-line"):
        raise ValueError("unknown support %r" % support)
    power = 2 if support.startswith("half-line") else 1
    for l, m in enumerate(moments, start=1):
        if abs(m) > C ** l * float(l) ** (power * l):
            return False
    return True


def free_cumulant_growth_check(r_estimates: dict[int, float], m: int,
                               tol: float = 1e-6) -> dict:
    """Smallest C with |r_l| <= C^l l^{ml} over the supplied range.

    Also reports whether r_2 is 1 within `tol` (it must be, since S_2 = n).
    """
    if 2 not in r_estimates:
        raise ValueError("r_2 estimate required")
    best = 0.0
    for l, r in r_estimates.items():
        if r:
            best = max(best, (abs(r) / float(l) ** (m * l)) ** (1.0 / l))
    return {
        "C": best,
        "m": m,
        "r2_ok": abs(r_estimates[2] - 1.0) <= tol,
        "r_estimates": dict(r_estimates),
    }
