"""Integer partitions / Young diagrams and their geometry.

Partitions are the universal index type of the package: weakly decreasing
tuples of positive integers.  This module also provides the drawing
conventions (French coordinates, anisotropic box scaling, Russian profiles)
and the probability density obtained by projecting the uniform measure on a
unit-area diagram to the u = x - y axis.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from math import sqrt
from typing import Iterable, Iterator, Sequence


class Partition:
    """A weakly decreasing tuple of positive integers.

    Immutable and hashable; the empty partition is ``Partition()``.
    """

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        for i, p in enumerate(parts):
            if p < 1:
                raise ValueError("parts must be positive, got %r" % (parts,))
            if i > 0 and parts[i - 1] < p:
                raise ValueError("parts must be weakly decreasing, got %r" % (parts,))
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, name, value):
        raise AttributeError("Partition is immutable")

    # -- basic statistics ----------------------------------------------------

    @property
    def size(self) -> int:
        """Number of boxes |lambda|."""
        return sum(self.parts)

    @property
    def length(self) -> int:
        """Number of parts ell(lambda)."""
        return len(self.parts)

    def multiplicity(self, i: int) -> int:
        return sum(1 for p in self.parts if p == i)

    def multiplicities(self) -> dict[int, int]:
        mult: dict[int, int] = {}
        for p in self.parts:
            mult[p] = mult.get(p, 0) + 1
        return mult

    def conjugate(self) -> "Partition":
        if not self.parts:
            return Partition()
        cols = [0] * self.parts[0]
        for p in self.parts:
            for c in range(p):
                cols[c] += 1
        return Partition(cols)

    # -- box statistics (boxes are 1-indexed (row, col)) ----------------------

    def boxes(self) -> Iterator[tuple[int, int]]:
        for r, p in enumerate(self.parts, start=1):
            for c in range(1, p + 1):
                yield (r, c)

    def arm(self, r: int, c: int) -> int:
        return self.parts[r - 1] - c

    def leg(self, r: int, c: int) -> int:
        return self.conjugate().parts[c - 1] - r

    def hook(self, r: int, c: int) -> int:
        return self.arm(r, c) + self.leg(r, c) + 1

    # -- order and containment ------------------------------------------------

    def dominates(self, other: "Partition") -> bool:
        """True iff self >= other in dominance order (both of the same size)."""
        if self.size != other.size:
            raise ValueError("dominance order compares partitions of equal size")
        s = t = 0
        for i in range(max(self.length, other.length)):
            s += self.parts[i] if i < self.length else 0
            t += other.parts[i] if i < other.length else 0
            if s < t:
                return False
        return True

    def contains(self, other: "Partition") -> bool:
        if other.length > self.length:
            return False
        return all(other.parts[i] <= self.parts[i] for i in range(other.length))

    # -- neighbours in the Young lattice --------------------------------------

    def add_box(self, row: int) -> "Partition":
        """Return the diagram with one box appended to 1-indexed `row`."""
        parts = list(self.parts)
        if row == self.length + 1:
            parts.append(1)
        else:
            parts[row - 1] += 1
        return Partition(parts)

    def remove_box(self, row: int) -> "Partition":
        parts = list(self.parts)
        parts[row - 1] -= 1
        if parts[row - 1] == 0:
            parts.pop(row - 1)
        return Partition(parts)

    def up_neighbours(self) -> list["Partition"]:
        rows = [r for r in range(1, self.length + 1)
                if r == 1 or self.parts[r - 1] < self.parts[r - 2]]
        rows.append(self.length + 1)
        return [self.add_box(r) for r in rows]

    def down_neighbours(self) -> list["Partition"]:
        rows = [r for r in range(1, self.length + 1)
                if r == self.length or self.parts[r] < self.parts[r - 1]]
        return [self.remove_box(r) for r in rows]

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(list(self.parts))

    @staticmethod
    def from_json(text: str) -> "Partition":
        return Partition(json.loads(text))

    # -- dunder ---------------------------------------------------------------

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __eq__(self, other):
        return isinstance(other, Partition) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return "Partition(%s)" % (list(self.parts),)


EMPTY = Partition()


def enumerate_partitions(n: int) -> list[Partition]:
    """All partitions of n, in reverse lexicographic order, (n) first.

    This fixed order makes matrices indexed by partitions reproducible.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    return [Partition(p) for p in _static_partitions(n)]


@lru_cache(maxsize=None)
def _static_partitions(n: int) -> tuple[tuple[int, ...], ...]:
    out: list[tuple[int, ...]] = []

    def rec(remaining: int, cap: int, prefix: tuple[int, ...]):
        if remaining == 0:
            out.append(prefix)
            return
        for k in range(min(cap, remaining), 0, -1):
            rec(remaining - k, k, prefix + (k,))

    rec(n, n, ())
    return tuple(out)


def partition_count(n: int) -> int:
    """p(n), by the enumeration itself."""
    return len(_static_partitions(n))


def z_factor(pi: Partition) -> int:
    """The centralizer-type factor prod_i m_i! * i^{m_i}."""
    z = 1
    for i, m in pi.multiplicities().items():
        f = 1
        for j in range(2, m + 1):
            f *= j
        z *= f * i ** m
    return z


def length_stat(pi: Partition) -> int:
    """||pi|| = |pi| - ell(pi), the minimal number of transpositions."""
    return pi.size - pi.length


def concat(pi1: Partition, pi2: Partition) -> Partition:
    """Product of partitions: multiset union of parts."""
    return Partition(sorted(pi1.parts + pi2.parts, reverse=True))


def hook_product(lam: Partition) -> int:
    h = 1
    for (r, c) in lam.boxes():
        h *= lam.hook(r, c)
    return h


def dimension(lam: Partition) -> int:
    """Number of standard Young tableaux, by the hook length formula."""
    f = 1
    for k in range(2, lam.size + 1):
        f *= k
    return f // hook_product(lam)


# ---------------------------------------------------------------------------
# Anisotropic diagrams and profiles
# ---------------------------------------------------------------------------


class AnisotropicDiagram:
    """A Young diagram drawn with boxes of width `w` and height `h`.

    For a deformation parameter alpha the natural drawing has w / h = alpha.
    """

    __slots__ = ("base", "w", "h")

    def __init__(self, base: Partition, w, h):
        if not (w > 0 and h > 0):
            raise ValueError("box sides must be positive")
        self.base = base
        self.w = w
        self.h = h

    @property
    def area(self):
        return self.base.size * self.w * self.h

    def __repr__(self):
        return "AnisotropicDiagram(%r, w=%s, h=%s)" % (self.base, self.w, self.h)


class Profile:
    """Piecewise-linear Russian-coordinate profile stored by its corners.

    `corners` is the list of (u, v) vertices ordered by increasing u; outside
    the corner range the profile continues as omega(u) = |u|.  Corner values
    are exact (Fractions) whenever the box sides are rational.
    """

    __slots__ = ("corners",)

    def __init__(self, corners: Sequence[tuple]):
        self.corners = list(corners)

    def __call__(self, u):
        return self.evaluate(u)

    def evaluate(self, u):
        cs = self.corners
        if not cs or u <= cs[0][0] or u >= cs[-1][0]:
            return abs(u)
        lo, hi = 0, len(cs) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if cs[mid][0] <= u:
                lo = mid
            else:
                hi = mid
        (u0, v0), (u1, v1) = cs[lo], cs[hi]
        return v0 + (v1 - v0) * (u - u0) / (u1 - u0)

    def evaluate_many(self, us):
        """Vectorized float evaluation on a numpy array of u values."""
        import numpy as np

        us = np.asarray(us, dtype=float)
        if not self.corners:
            return np.abs(us)
        cu = np.array([float(c[0]) for c in self.corners])
        cv = np.array([float(c[1]) for c in self.corners])
        vals = np.interp(us, cu, cv)
        outside = (us <= cu[0]) | (us >= cu[-1])
        vals[outside] = np.abs(us[outside])
        return vals

    def minima(self) -> list[tuple]:
        return self.corners[0::2]

    def maxima(self) -> list[tuple]:
        return self.corners[1::2]

    def to_csv(self) -> str:
        """Corner rows plus two sentinel rays, as `u,v` lines."""
        cs = self.corners
        if cs:
            lo = cs[0][0] - 1
            hi = cs[-1][0] + 1
        else:
            lo, hi = -1, 1
            cs = [(0, 0)]
        rows = [(lo, abs(lo))] + list(cs) + [(hi, abs(hi))]
        return "\n".join("%s,%s" % (float(u), float(v)) for u, v in rows) + "\n"


def profile(diagram: AnisotropicDiagram) -> Profile:
    """Russian profile of the anisotropically drawn diagram.

    The French staircase is mapped through u = x - y, v = x + y; corners
    alternate local minima (addable boxes) and maxima (removable boxes),
    starting and ending with a minimum.
    """
    lam, w, h = diagram.base, diagram.w, diagram.h
    if not lam.parts:
        return Profile([(0 * w, 0 * w)])
    vals, counts = distinct_parts(lam)
    d = len(vals)
    cum = [0]
    for c in counts:
        cum.append(cum[-1] + c)
    corners = [(-h * cum[d], h * cum[d])]
    for j in range(d - 1, -1, -1):
        x_max, y_max = w * vals[j], h * cum[j + 1]
        corners.append((x_max - y_max, x_max + y_max))
        x_min, y_min = w * vals[j], h * cum[j]
        corners.append((x_min - y_min, x_min + y_min))
    return Profile(corners)


def distinct_parts(lam: Partition) -> tuple[list[int], list[int]]:
    """Distinct part values (decreasing) and their multiplicities."""
    vals: list[int] = []
    counts: list[int] = []
    for p in lam.parts:
        if vals and vals[-1] == p:
            counts[-1] += 1
        else:
            vals.append(p)
            counts.append(1)
    return vals, counts


def corner_data(lam: Partition, w, h):
    """Interlacing corner u-coordinates of the (w, h)-anisotropic diagram.

    Returns (minima, maxima, add_rows, remove_rows): `minima[j]` is the u
    position of the j-th addable corner and appending a box to 1-indexed row
    `add_rows[j]` realizes it; `maxima` / `remove_rows` likewise describe the
    removable corners.  minima[0] > maxima[0] > minima[1] > ... interlace.
    """
    vals, counts = distinct_parts(lam)
    cum = [0]
    for c in counts:
        cum.append(cum[-1] + c)
    minima = [w * vals[j] - h * cum[j] for j in range(len(vals))]
    minima.append(-h * cum[-1])
    maxima = [w * vals[j] - h * cum[j + 1] for j in range(len(vals))]
    add_rows = [cum[j] + 1 for j in range(len(vals))] + [lam.length + 1]
    remove_rows = [cum[j + 1] for j in range(len(vals))]
    return minima, maxima, add_rows, remove_rows


def partition_from_profile(prof: Profile, w, h) -> Partition:
    """Reconstruct the underlying partition from a diagram profile.

    The j-th inner corner from the right sits at French point
    (w value_j, h rows_above_j); consecutive corners delimit the blocks of
    equal parts.
    """
    cs = prof.corners
    if len(cs) <= 1:
        return Partition()
    pairs = []
    for (u, v) in reversed(cs[0::2]):  # minima, right to left
        val = int(round(float((u + v) / (2 * w))))
        rows = int(round(float((v - u) / (2 * h))))
        pairs.append((val, rows))
    parts: list[int] = []
    for j in range(len(pairs) - 1):
        val = pairs[j][0]
        count = pairs[j + 1][1] - pairs[j][1]
        parts.extend([val] * count)
    return Partition(parts)


def unit_area_diagram(lam: Partition, alpha) -> AnisotropicDiagram:
    """The scaling T with w = sqrt(alpha/n), h = 1/sqrt(alpha n) (unit area)."""
    n = lam.size
    if n == 0:
        raise ValueError("empty diagram has no unit-area scaling")
    return AnisotropicDiagram(lam, sqrt(alpha / n), 1.0 / sqrt(alpha * n))


def density(diagram: AnisotropicDiagram):
    """Density f(u) = (omega(u) - |u|)/2 of a unit-area diagram.

    The returned callable integrates to 1 and is 1-Lipschitz.
    """
    area = diagram.area
    if abs(float(area) - 1.0) > 1e-9:
        raise ValueError("density requires a unit-area diagram, area=%s" % area)
    prof = profile(diagram)

    def f(u):
        return (prof.evaluate(u) - abs(u)) / 2

    f.profile = prof
    return f
