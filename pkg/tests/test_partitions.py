import json
from fractions import Fraction

import pytest

from jacklab.partitions import (
    AnisotropicDiagram,
    Partition,
    concat,
    corner_data,
    density,
    dimension,
    enumerate_partitions,
    hook_product,
    length_stat,
    partition_from_profile,
    profile,
    unit_area_diagram,
    z_factor,
)


def brute_force_partition_count(n):
    # independent DP count, no enumeration involved
    table = [[0] * (n + 1) for _ in range(n + 1)]
    for maxpart in range(n + 1):
        table[maxpart][0] = 1
    for maxpart in range(1, n + 1):
        for m in range(1, n + 1):
            table[maxpart][m] = table[maxpart - 1][m]
            if m >= maxpart:
                table[maxpart][m] += table[maxpart][m - maxpart]
    return table[n][n]


def test_enumerate_counts():
    assert enumerate_partitions(0) == [Partition()]
    assert len(enumerate_partitions(4)) == 5
    assert len(enumerate_partitions(10)) == 42
    for n in range(13):
        assert len(enumerate_partitions(n)) == brute_force_partition_count(n)


def test_enumerate_order_and_uniqueness():
    for n in range(9):
        parts = enumerate_partitions(n)
        assert len(set(parts)) == len(parts)
        # reverse lexicographic: (n) first, 1^n last
        assert list(parts[0].parts) == ([n] if n else [])
        tuples = [p.parts for p in parts]
        assert tuples == sorted(tuples, reverse=True)


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition([1, 2])
    with pytest.raises(ValueError):
        Partition([2, 0])


def test_z_factor():
    assert z_factor(Partition()) == 1
    assert z_factor(Partition([2])) == 2
    assert z_factor(Partition([1, 1])) == 2
    assert z_factor(Partition([5, 4, 3, 3, 1])) == 360


def test_length_stat():
    assert length_stat(Partition()) == 0
    assert length_stat(Partition([5, 3, 1])) == 6
    for n in range(1, 8):
        assert length_stat(Partition([1] * n)) == 0


def test_concat():
    assert concat(Partition([4, 3]), Partition([5, 3, 1])) == Partition([5, 4, 3, 3, 1])
    pi = Partition([3, 2])
    assert concat(pi, Partition()) == pi
    assert concat(Partition([1]), Partition([1])) == Partition([1, 1])
    assert concat(pi, Partition([4])).size == pi.size + 4


def test_conjugate_involution():
    for n in range(0, 16):
        for lam in enumerate_partitions(n):
            assert lam.conjugate().conjugate() == lam


def test_hooks_sum_to_n():
    for n in range(1, 9):
        for lam in enumerate_partitions(n):
            assert sum(1 for _ in lam.boxes()) == n
            assert hook_product(lam) > 0


def test_dimension_small():
    # n = 3: dims 1, 2, 1; n = 4 standard values
    assert dimension(Partition([3])) == 1
    assert dimension(Partition([2, 1])) == 2
    assert dimension(Partition([2, 2])) == 2
    assert dimension(Partition([3, 1])) == 3
    for n in range(1, 9):
        assert sum(dimension(l) ** 2 for l in enumerate_partitions(n)) == _factorial(n)


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def test_profile_empty_and_single_box():
    prof = profile(AnisotropicDiagram(Partition(), 1, 1))
    assert prof.evaluate(Fraction(7)) == 7
    assert prof.evaluate(-3.5) == 3.5
    prof1 = profile(AnisotropicDiagram(Partition([1]), 1, 1))
    assert prof1.evaluate(0) == 2
    assert prof1.evaluate(2) == 2
    # minimum of omega - |u| at u = 0
    assert prof1.evaluate(Fraction(1, 2)) - Fraction(1, 2) == 1


def test_profile_431_anisotropic_corners():
    # frozen from the staircase geometry of (4,3,1) with w=1/2, h=3/2
    d = AnisotropicDiagram(Partition([4, 3, 1]), Fraction(1, 2), Fraction(3, 2))
    expected = [
        (Fraction(-9, 2), Fraction(9, 2)),
        (Fraction(-4), Fraction(5)),
        (Fraction(-5, 2), Fraction(7, 2)),
        (Fraction(-3, 2), Fraction(9, 2)),
        (Fraction(0), Fraction(3)),
        (Fraction(1, 2), Fraction(7, 2)),
        (Fraction(2), Fraction(2)),
    ]
    assert profile(d).corners == expected


def test_profile_roundtrip():
    for n in range(0, 16):
        for lam in enumerate_partitions(n):
            prof = profile(AnisotropicDiagram(lam, 1, 1))
            assert partition_from_profile(prof, 1, 1) == lam


def test_profile_bounds_unit_area():
    import numpy as np

    rng = np.random.default_rng(0)
    for n in range(1, 13):
        parts = enumerate_partitions(n)
        lam = parts[rng.integers(0, len(parts))]
        for alpha in (0.5, 1.0, 2.0):
            d = unit_area_diagram(lam, alpha)
            prof = profile(d)
            us = np.linspace(-3, 3, 101)
            vals = prof.evaluate_many(us)
            assert np.all(vals >= np.abs(us) - 1e-12)
            assert np.all(vals <= np.sqrt(us ** 2 + 4) + 1e-12)


def test_density_unit_box():
    d = unit_area_diagram(Partition([1]), 1.0)
    f = density(d)
    assert abs(f(0.0) - 1.0) < 1e-12
    assert f(1.5) == pytest.approx(0.0)
    # triangular on [-1, 1]
    assert f(0.5) == pytest.approx(0.5)


def test_density_rejects_non_unit_area():
    with pytest.raises(ValueError):
        density(AnisotropicDiagram(Partition([2, 1]), 1, 1))


def test_density_integrates_to_one():
    import numpy as np

    rng = np.random.default_rng(1)
    for n in range(1, 13):
        parts = enumerate_partitions(n)
        lam = parts[rng.integers(0, len(parts))]
        f = density(unit_area_diagram(lam, 2.0))
        us = np.linspace(-4, 4, 4001)
        total = np.trapezoid([f(u) for u in us], us)
        assert abs(total - 1.0) < 2e-3  # grid quadrature; exact check in shape tests
        for u in np.linspace(-3, 3, 41):
            assert -1e-12 <= f(u) <= 2.0 / (np.sqrt(u * u + 4) + abs(u)) + 1e-12


def test_density_lipschitz():
    import numpy as np

    f = density(unit_area_diagram(Partition([3, 1]), 1.5))
    us = np.linspace(-3, 3, 601)
    vals = np.array([f(u) for u in us])
    assert np.max(np.abs(np.diff(vals))) <= (us[1] - us[0]) + 1e-12


def test_corner_data_interlacing():
    for n in range(1, 11):
        for lam in enumerate_partitions(n):
            minima, maxima, add_rows, remove_rows = corner_data(lam, Fraction(2), Fraction(1))
            assert len(minima) == len(maxima) + 1
            merged = []
            for k in range(len(maxima)):
                merged += [minima[k], maxima[k]]
            merged.append(minima[-1])
            assert merged == sorted(merged, reverse=True)
            assert len(add_rows) == len(lam.up_neighbours())
            assert len(remove_rows) == len(lam.down_neighbours())


def test_partition_json_roundtrip():
    lam = Partition([4, 3, 1])
    assert lam.to_json() == "[4, 3, 1]" or json.loads(lam.to_json()) == [4, 3, 1]
    assert Partition.from_json(lam.to_json()) == lam


def test_profile_csv_has_sentinels():
    prof = profile(AnisotropicDiagram(Partition([2, 1]), 1, 1))
    lines = prof.to_csv().strip().split("\n")
    assert len(lines) == len(prof.corners) + 2
    u0, v0 = (float(x) for x in lines[0].split(","))
    assert v0 == abs(u0)
