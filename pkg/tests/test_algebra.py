import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacklab.algebra import (
    GAMMA,
    ONE,
    ZERO,
    InconsistentSystemError,
    LaurentA,
    RationalFunctionA,
    SingularSystemError,
    SymFun,
    inner_product,
    m_to_p,
    monomial_in_power,
    p_to_m,
    power_in_monomial,
    solve_linear_system,
    substitute,
)
from jacklab.partitions import Partition, enumerate_partitions


# -- explicit-variable oracle -------------------------------------------------

def monomial_in_variables(mu, nvars):
    """m_mu as a dict exponent-vector -> 1 over nvars variables."""
    out = {}
    padded = list(mu.parts) + [0] * (nvars - mu.length)
    for perm in set(itertools.permutations(padded)):
        out[perm] = 1
    return out


def power_in_variables(pi, nvars):
    """p_pi expanded over nvars variables, exponent-vector -> coefficient."""
    out = {tuple([0] * nvars): 1}
    for part in pi.parts:
        nxt = {}
        for expo, c in out.items():
            for i in range(nvars):
                e = list(expo)
                e[i] += part
                e = tuple(e)
                nxt[e] = nxt.get(e, 0) + c
        out = nxt
    return out


@pytest.mark.parametrize("n", range(1, 7))
def test_power_in_monomial_vs_variables(n):
    nvars = n  # enough variables to separate all monomials of degree n
    table = power_in_monomial(n)
    for pi in enumerate_partitions(n):
        got = {}
        for mu, c in table[pi].items():
            for expo, _ in monomial_in_variables(mu, nvars).items():
                got[expo] = got.get(expo, 0) + c
        assert got == power_in_variables(pi, nvars), pi


def test_m_to_p_examples():
    one = LaurentA.const(1)
    m1 = SymFun("m", 1, {Partition([1]): one})
    assert m_to_p(m1).coeffs == {Partition([1]): one}
    m11 = SymFun("m", 2, {Partition([1, 1]): one})
    p = m_to_p(m11)
    assert p.coeff(Partition([1, 1])) == LaurentA.const(Fraction(1, 2))
    assert p.coeff(Partition([2])) == LaurentA.const(Fraction(-1, 2))
    # p_1^2 = (m_2 image) + 2 (m_11 image): check p_2 = m_2 in the p-basis
    m2 = SymFun("m", 2, {Partition([2]): one})
    assert m_to_p(m2).coeffs == {Partition([2]): one}


@pytest.mark.parametrize("n", range(1, 13))
def test_basis_roundtrip(n):
    table = monomial_in_power(n)
    for mu in enumerate_partitions(n):
        f = SymFun("m", n, {mu: ONE})
        assert p_to_m(m_to_p(f)) == f
    assert table  # cached table exists


def test_inner_product_examples():
    p1 = SymFun("p", 1, {Partition([1]): ONE})
    assert inner_product(p1, p1) == LaurentA.monomial(2)  # A^2
    p2 = SymFun("p", 2, {Partition([2]): ONE})
    p11 = SymFun("p", 2, {Partition([1, 1]): ONE})
    assert inner_product(p2, p11) == ZERO
    assert inner_product(p11, p11) == LaurentA.monomial(4, 2)  # 2 A^4


def test_inner_product_symmetry_positivity():
    for n in range(1, 7):
        for pi in enumerate_partitions(n):
            f = SymFun("p", n, {pi: ONE})
            v = inner_product(f, f)
            assert v.substitute(Fraction(3, 2)) > 0
            assert v.substitute(2.0) > 0


def test_inner_product_degree_mismatch():
    f = SymFun("p", 1, {Partition([1]): ONE})
    g = SymFun("p", 2, {Partition([2]): ONE})
    with pytest.raises(ValueError):
        inner_product(f, g)


def test_substitute_gamma():
    assert GAMMA.substitute(Fraction(1)) == 0
    assert GAMMA.substitute(Fraction(2)) == Fraction(-3, 2)
    assert LaurentA.monomial(2).substitute(Fraction(2)) == 4
    assert substitute(GAMMA, 2.0) == pytest.approx(-1.5)
    with pytest.raises(ValueError):
        GAMMA.substitute(Fraction(-1))


def test_laurent_json_roundtrip_gamma():
    text = GAMMA.to_json()
    assert json.loads(text) == {"-1": "1", "1": "-1"}
    assert LaurentA.from_json(text) == GAMMA


small_rationals = st.fractions(min_value=-10, max_value=10,
                               max_denominator=6)


@st.composite
def laurent_polys(draw):
    exps = draw(st.lists(st.integers(min_value=-4, max_value=4), max_size=4))
    return LaurentA({e: draw(small_rationals) for e in exps})


@given(laurent_polys(), laurent_polys(), laurent_polys())
@settings(max_examples=60, deadline=None)
def test_laurent_ring_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert x * y == y * x
    assert x + ZERO == x
    assert x * ONE == x
    assert x - x == ZERO


@given(laurent_polys(), laurent_polys())
@settings(max_examples=40, deadline=None)
def test_laurent_evaluation_homomorphism(x, y):
    a = Fraction(3, 2)
    assert (x * y).substitute(a) == x.substitute(a) * y.substitute(a)
    assert (x + y).substitute(a) == x.substitute(a) + y.substitute(a)


@given(laurent_polys(), laurent_polys(), laurent_polys(), laurent_polys())
@settings(max_examples=30, deadline=None)
def test_rational_function_field_ops(a, b, c, d):
    if b.is_zero() or d.is_zero():
        return
    x = RationalFunctionA(a, b)
    y = RationalFunctionA(c, d)
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) - y == x
    if not y.is_zero():
        assert (x / y) * y == x
    s = Fraction(5, 3)
    if b.substitute(s) != 0 and d.substitute(s) != 0:
        assert (x * y).substitute(s) == x.substitute(s) * y.substitute(s)


def test_rational_function_reduction():
    # (A^2 - 1) / (A - 1) reduces to a Laurent polynomial A + 1
    num = LaurentA({2: Fraction(1), 0: Fraction(-1)})
    den = LaurentA({1: Fraction(1), 0: Fraction(-1)})
    r = RationalFunctionA(num, den)
    assert r.is_laurent()
    assert r.as_laurent() == LaurentA({1: Fraction(1), 0: Fraction(1)})


def test_solve_linear_system_exact():
    rows = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(-1)],
            [Fraction(3), Fraction(0)]]
    rhs = [Fraction(5), Fraction(1), Fraction(6)]
    sol = solve_linear_system(rows, rhs, Fraction(0), Fraction(1))
    assert sol == [Fraction(2), Fraction(1)]
    with pytest.raises(InconsistentSystemError):
        solve_linear_system(rows, [Fraction(5), Fraction(1), Fraction(7)],
                            Fraction(0), Fraction(1))
    with pytest.raises(SingularSystemError):
        solve_linear_system([[Fraction(1), Fraction(2)],
                             [Fraction(2), Fraction(4)]],
                            [Fraction(1), Fraction(2)],
                            Fraction(0), Fraction(1))
