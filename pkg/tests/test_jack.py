import itertools
from fractions import Fraction

import pytest

from jacklab.algebra import GAMMA, ONE, ZERO, LaurentA, inner_product, SymFun
from jacklab.jack import (
    CapExceededError,
    ThetaTable,
    cotransition_weights,
    irr_character,
    jack_in_p,
    normalized_character,
    pieri_p1,
    pieri_p1_oracle,
    pieri_p1_oracle_all,
    sym_character,
    sym_character_normalized,
    theta,
    theta_table,
)
from jacklab.partitions import (
    Partition,
    dimension,
    enumerate_partitions,
    z_factor,
)

A_SAMPLES = [Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2), Fraction(5)]

P = Partition


def test_degree_two_jack_polynomials():
    assert jack_in_p(P([2])) == {P([1, 1]): ONE, P([2]): LaurentA.monomial(2)}
    assert jack_in_p(P([1, 1])) == {P([1, 1]): ONE, P([2]): LaurentA.const(-1)}


def test_theta_examples():
    assert theta(P([2]), P([2])) == LaurentA.monomial(2)
    assert theta(P([1, 1]), P([2])) == LaurentA.const(-1)
    for n in range(0, 11):
        table = theta_table(n, Fraction(9, 4))
        unit = P([1] * n)
        for lam in enumerate_partitions(n):
            assert table.theta(lam, unit) == 1


def test_theta_matrix_invertible_n3():
    table = theta_table(3)
    parts = enumerate_partitions(3)
    # exact determinant at a generic rational alpha must be nonzero
    alpha = Fraction(7, 3)
    mat = [[_sub_alpha(table.theta(lam, pi), alpha) for lam in parts]
           for pi in parts]
    assert _det(mat) != 0


def _sub_alpha(v, alpha):
    total = Fraction(0)
    for e, q in v.c.items():
        assert e % 2 == 0 and e >= 0
        total += q * alpha ** (e // 2)
    return total


def _det(mat):
    mat = [row[:] for row in mat]
    n = len(mat)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if mat[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        for r in range(col + 1, n):
            if mat[r][col]:
                f = mat[r][col] * inv
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[col])]
    return det


def test_theta_polynomial_in_alpha():
    for n in range(0, 9):
        table = theta_table(n)
        for v in table.entries.values():
            assert v.is_polynomial_in_alpha()


@pytest.mark.parametrize("n", range(1, 9))
def test_orthogonality_and_triangularity_symbolic(n):
    table = theta_table(n)
    parts = enumerate_partitions(n)
    vectors = {lam: [table.theta(lam, pi) for pi in parts] for lam in parts}
    weights = [LaurentA.monomial(2 * pi.length, z_factor(pi)) for pi in parts]
    for lam, mu in itertools.combinations(parts, 2):
        ip = ZERO
        for i in range(len(parts)):
            ip = ip + vectors[lam][i] * vectors[mu][i] * weights[i]
        assert ip.is_zero(), (lam, mu)
    # dominance triangularity in the m-basis
    from jacklab.algebra import p_to_m

    for lam in parts:
        f = SymFun("p", n, dict(zip(parts, vectors[lam])))
        in_m = p_to_m(f)
        for mu, c in in_m.coeffs.items():
            assert lam.dominates(mu), (lam, mu)
        # [m_{1^n}] J_lam = n!
        fact = 1
        for k in range(2, n + 1):
            fact *= k
        assert in_m.coeff(P([1] * n)) == LaurentA.const(fact)


def test_character_normalization():
    for n in range(1, 11):
        unit = P([1] * n)
        alpha = Fraction(4)
        for lam in enumerate_partitions(n):
            assert irr_character(lam, unit, Fraction(2)) == 1
    # symbolic
    for lam in enumerate_partitions(6):
        assert irr_character(lam, P([1] * 6)) == ONE


def test_character_examples_n2():
    assert irr_character(P([2]), P([2])) == LaurentA.monomial(1)
    assert irr_character(P([1, 1]), P([2])) == LaurentA.monomial(-1, -1)
    assert normalized_character(P([2]), P([2])) == LaurentA.monomial(1, 2)
    assert normalized_character(P([2]), P([1])) == ZERO
    assert normalized_character(P(), P([3, 1])) == ONE


def test_murnaghan_nakayama_oracle_alpha_one():
    # chi^(1) coincides with the normalized symmetric group character
    for n in range(1, 8):
        for lam in enumerate_partitions(n):
            for pi in enumerate_partitions(n):
                assert irr_character(lam, pi, Fraction(1)) == \
                    sym_character_normalized(lam, pi), (lam, pi)


def test_sym_character_basics():
    # column orthogonality at the identity: sum dim^2 = n!
    for n in range(1, 9):
        fact = 1
        for k in range(2, n + 1):
            fact *= k
        assert sum(sym_character(l, P([1] * n)) ** 2
                   for l in enumerate_partitions(n)) == fact
        for lam in enumerate_partitions(n):
            assert sym_character(lam, P([1] * n)) == dimension(lam)


def test_alpha_one_jack_is_scaled_schur():
    # theta at alpha=1: J_lam = H(lam) s_lam, so theta_pi = H * chi^lam(pi)/z_pi
    from jacklab.partitions import hook_product

    for n in range(1, 8):
        table = theta_table(n, Fraction(1))
        for lam in enumerate_partitions(n):
            H = hook_product(lam)
            for pi in enumerate_partitions(n):
                assert table.theta(lam, pi) == \
                    Fraction(H * sym_character(lam, pi), z_factor(pi))


def test_pieri_trivial_and_n1():
    assert pieri_p1_oracle(P()) == {P([1]): ONE}
    got = pieri_p1_oracle(P([1]))
    denom = LaurentA({0: 1, 2: 1})
    assert got[P([2])].num == ONE and got[P([2])].den == denom
    assert got[P([1, 1])].num == LaurentA.monomial(2) and got[P([1, 1])].den == denom


def test_pieri_row_sums_and_positivity():
    for A in (Fraction(1), Fraction(5, 2)):
        for n in range(0, 11):
            for lam in enumerate_partitions(n):
                coeffs = pieri_p1(lam, A * A)
                assert sum(coeffs.values()) == 1
                assert all(c > 0 for c in coeffs.values())
                assert set(coeffs) == set(lam.up_neighbours())


def test_pieri_alpha_one_plancherel_kernel():
    for n in range(0, 9):
        for lam in enumerate_partitions(n):
            coeffs = pieri_p1(lam, Fraction(1))
            for up, c in coeffs.items():
                assert c == Fraction(dimension(up),
                                     (n + 1) * dimension(lam)), (lam, up)


@pytest.mark.parametrize("A", A_SAMPLES)
def test_pieri_fast_path_gate(A):
    # closed-form corner weights == exact linear-algebra oracle, |lam| <= 10
    for n in range(0, 11):
        oracle = pieri_p1_oracle_all(n, A)
        for lam in enumerate_partitions(n):
            assert pieri_p1(lam, A * A) == oracle[lam], (lam, A)


def test_cap_exceeded():
    with pytest.raises(CapExceededError):
        theta_table(13)


def test_theta_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("JACKLAB_CACHE", str(tmp_path))
    t = theta_table.__wrapped__(4, None)  # bypass lru to exercise disk io
    text = t.to_json()
    back = ThetaTable.from_json(text)
    assert back.n == 4 and back.alpha is None
    assert back.entries == t.entries
    t2 = theta_table.__wrapped__(4, Fraction(2))
    back2 = ThetaTable.from_json(t2.to_json())
    assert back2.entries == t2.entries


def test_inner_product_of_jacks_matches_table():
    # <J_lam, J_mu> via SymFun machinery vanishes off-diagonal
    n = 4
    parts = enumerate_partitions(n)
    for lam, mu in itertools.combinations(parts, 2):
        f = SymFun("p", n, jack_in_p(lam))
        g = SymFun("p", n, jack_in_p(mu))
        assert inner_product(f, g).is_zero()
