from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.cyclotomic import (
    RootOrder,
    eps_pow,
    field_arith,
    field_inv,
    get_field,
    get_modular_field,
    quantum_factorial,
    quantum_int,
    resolve_field,
    smallest_modulus,
)
from app.errors import DivisionByZeroError, DomainError, InternalConsistencyError, StructuralError

F5 = get_field(5)
F7 = get_field(7)

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)
elements = st.lists(small, min_size=4, max_size=4).map(F5.from_fractions)


@given(elements, elements, elements)
def test_ring_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x


@given(elements)
def test_additive_inverse(x):
    assert field_arith("add", x, field_arith("neg", x)) == F5.zero
    assert x * F5.one == x


@settings(max_examples=40)
@given(elements)
def test_multiplicative_inverse(x):
    if x.is_zero():
        with pytest.raises(DivisionByZeroError):
            field_inv(x)
    else:
        assert x * field_inv(x) == F5.one


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_eps_powers_multiply(a, b):
    assert eps_pow(5, a) * eps_pow(5, b) == eps_pow(5, a + b)


def test_eps_examples():
    assert eps_pow(5, 0) == F5.one
    assert eps_pow(5, 5) == F5.one
    assert eps_pow(5, -1) == eps_pow(5, 4)
    assert field_arith("mul", eps_pow(5, 1), eps_pow(5, 4)) == F5.one
    assert field_inv(F5.one) == F5.one
    assert field_inv(F5.eps_pow(1)) == F5.eps_pow(4)
    # 1 + ε + … + ε^{l-1} = 0
    total = F5.zero
    for k in range(5):
        total = total + F5.eps_pow(k)
    assert total == F5.zero


def test_quantum_integers():
    assert quantum_int(5, 0, 1) == F5.zero
    assert quantum_int(5, 1, 2) == F5.one
    assert quantum_int(5, 5, 1) == F5.zero
    assert quantum_int(5, 2, 1) == F5.eps_pow(1) + F5.eps_pow(-1)
    assert quantum_int(5, -3, 1) == -quantum_int(5, 3, 1)
    assert quantum_factorial(5, 0, 1) == F5.one
    assert quantum_factorial(5, 1, 2) == F5.one
    assert quantum_factorial(5, 2, 1) == F5.eps_pow(1) + F5.eps_pow(-1)


def test_quantum_factorial_vanishes_at_l():
    with pytest.raises(DomainError):
        quantum_factorial(5, 5)
    with pytest.raises(DomainError):
        quantum_factorial(5, -1)


@given(st.integers(-30, 30), st.integers(1, 2), st.sampled_from([5, 7, 9]))
def test_brace_matches_definition(e, d, l):
    F = get_field(l)
    lhs = F.brace(e, d) * (F.eps_pow(d) - F.eps_pow(-d))
    assert lhs == F.eps_pow(e) - F.eps_pow(-e)


def test_brace_bad_parameter():
    with pytest.raises(InternalConsistencyError):
        F5.brace(1, 3)
    assert F5.brace(0, 1) == F5.zero
    assert F5.brace(2, 0) == F5.eps_pow(2)


def test_inverse_of_braced_denominator():
    x = F5.eps_pow(1) - F5.eps_pow(-1)
    assert field_inv(x) * x == F5.one


@pytest.mark.parametrize("l", [0, 1, 2, 3, 4, 6, 10])
def test_bad_orders(l):
    with pytest.raises(DomainError):
        RootOrder(l)


def test_text_round_trip():
    x = F5.from_fractions([Fraction(-1, 2), 0, 3])
    assert x.text() == "[-1/2, 0, 3, 0]"
    assert F5.parse(x.text()) == x
    with pytest.raises(StructuralError):
        F5.parse("1, 2")


def test_fields_do_not_mix():
    with pytest.raises(StructuralError):
        F5.one + F7.one
    with pytest.raises(StructuralError):
        field_arith("mul", F5.one, F7.one)


def test_modular_backend():
    p = smallest_modulus(5)
    assert (p - 1) % 5 == 0
    G = get_modular_field(5, p)
    eps = G.eps_pow(1)
    assert eps != G.one
    assert eps ** 5 == G.one
    for e in range(-7, 8):
        for d in (1, 2):
            assert G.brace(e, d) * (G.eps_pow(d) - G.eps_pow(-d)) == G.eps_pow(e) - G.eps_pow(-e)
    with pytest.raises(DivisionByZeroError):
        G.zero.inverse()


def test_modular_backend_rejects_bad_modulus():
    with pytest.raises(DomainError):
        get_modular_field(5, 12)
    with pytest.raises(DomainError):
        get_modular_field(5, 13)


def test_resolve_field():
    assert resolve_field(5, "exact") is get_field(5)
    assert resolve_field(5, "modp").backend == "modp"
    assert resolve_field(5, "modp:11").p == 11
    with pytest.raises(DomainError):
        resolve_field(5, "float")
