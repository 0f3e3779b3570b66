import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from charcensus import build_field
from charcensus.errors import EvenCharacteristic, FieldTooLarge, NotPrime
from charcensus.fields import is_prime

SMALL_FIELDS = [(3, 1), (5, 1), (7, 1), (13, 1), (3, 2), (3, 3), (5, 2), (7, 2)]


def test_prime_field_basics():
    f = build_field(3)
    assert f.q == 3 and list(f.elements()) == [0, 1, 2]
    assert f.mul(2, 2) == 1
    assert f.inv(2) == 2
    assert f.add(2, 2) == 1
    assert f.sub(0, 1) == 2


def test_even_characteristic_rejected():
    with pytest.raises(EvenCharacteristic):
        build_field(2)
    with pytest.raises(EvenCharacteristic):
        build_field(2, 5)


def test_not_prime_rejected():
    for p in (1, 9, 15, 21):
        with pytest.raises(NotPrime):
            build_field(p)


def test_too_large_rejected():
    with pytest.raises(FieldTooLarge):
        build_field(2147483659)  # prime just above 2^31
    with pytest.raises(FieldTooLarge):
        build_field(3, 11)  # 3^11 > 2^16


def test_bad_exponent():
    with pytest.raises(ValueError):
        build_field(3, 0)


def test_is_prime():
    assert all(is_prime(p) for p in (2, 3, 5, 7, 11, 101, 6553))
    assert not any(is_prime(n) for n in (-1, 0, 1, 4, 9, 15, 49, 6559, 6561))
    assert sorted(n for n in range(60) if is_prime(n)) == [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59,
    ]


def test_f9_multiplicative_order():
    f = build_field(3, 2)
    assert f.q == 9
    for a in range(1, 9):
        assert f.pow(a, 8) == 1
        assert any(f.pow(a, e) != 1 for e in range(1, 8)) or a == 1


def test_modulus_choice_is_deterministic():
    # lexicographically smallest monic irreducibles, frozen as regressions
    assert build_field(3, 2).modulus == (1, 0, 1)  # X^2 + 1
    assert build_field(5, 2).modulus == (2, 0, 1)  # X^2 + 2
    assert build_field(3, 3).modulus == (1, 2, 0, 1)  # X^3 + 2X + 1


def test_modulus_is_irreducible_no_roots():
    f = build_field(3, 2)
    # X^2 + 1 has no root mod 3
    assert all((x * x + 1) % 3 != 0 for x in range(3))


def test_build_field_cached():
    assert build_field(3, 2) is build_field(3, 2)


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_chi_table_shape_and_balance(p, k):
    f = build_field(p, k)
    chi = f.chi_table
    assert chi[0] == 0
    assert np.count_nonzero(chi == 1) == (f.q - 1) // 2
    assert np.count_nonzero(chi == -1) == (f.q - 1) // 2
    assert int(chi.sum()) == 0  # balanced character


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_chi_multiplicative_all_pairs(p, k):
    f = build_field(p, k)
    for a in range(f.q):
        for b in range(f.q):
            assert f.quad_char(f.mul(a, b)) == f.quad_char(a) * f.quad_char(b)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 101])
def test_chi_agrees_with_euler_criterion(p):
    f = build_field(p)
    assert f.quad_char(0) == 0
    for a in range(1, p):
        euler = pow(a, (p - 1) // 2, p)
        assert f.quad_char(a) == (1 if euler == 1 else -1)


def test_chi_examples_f3():
    f = build_field(3)
    assert f.quad_char(0) == 0
    assert f.quad_char(1) == 1
    assert f.quad_char(2) == -1  # Euler: 2^1 = -1 mod 3


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_field_axioms_exhaustive_small(p, k):
    f = build_field(p, k)
    q = f.q
    if q > 9:
        pytest.skip("full triple loop only for the smallest fields")
    for a in range(q):
        assert f.add(a, 0) == a and f.mul(a, 1) == a
        assert f.neg(f.neg(a)) == a
        assert f.add(a, f.neg(a)) == 0
        for b in range(q):
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
            for c in range(q):
                assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
                assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_inverses(p, k):
    f = build_field(p, k)
    for a in range(1, f.q):
        assert f.mul(a, f.inv(a)) == 1
    with pytest.raises(ZeroDivisionError):
        f.inv(0)


def test_pow_conventions(f9):
    assert f9.pow(0, 0) == 1
    assert f9.pow(0, 5) == 0
    for a in range(1, 9):
        assert f9.pow(a, -1) == f9.inv(a)
        assert f9.pow(a, 9) == f9.mul(a, f9.pow(a, 8))


@given(st.integers(0, 101**2))
def test_prime_field_matches_int_arithmetic(n):
    f = build_field(101)
    a, b = n % 101, (n // 101) % 101
    assert f.add(a, b) == (a + b) % 101
    assert f.mul(a, b) == (a * b) % 101
    assert f.sub(a, b) == (a - b) % 101


@given(st.integers(0, 9**3 - 1))
def test_extension_axioms_random_triples(n):
    f = build_field(3, 2)
    a, b, c = n % 9, (n // 9) % 9, (n // 81) % 9
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))


def test_vector_ops_match_scalar(f9, f5):
    for f in (f9, f5):
        q = f.q
        a = np.arange(q, dtype=np.int64)[:, None]
        b = np.arange(q, dtype=np.int64)[None, :]
        vadd = f.vadd(a, b)
        vmul = f.vmul(a, b)
        vsub = f.vsub(a, b)
        for x in range(q):
            for y in range(q):
                assert vadd[x, y] == f.add(x, y)
                assert vmul[x, y] == f.mul(x, y)
                assert vsub[x, y] == f.sub(x, y)
        assert np.array_equal(f.vneg(np.arange(q)), [f.neg(x) for x in range(q)])


def test_kernel_tables_consistent(f9):
    for f in (f9, build_field(101)):
        chi, log_t, exp_t, inv_t, neg_t, add_t = f.kernel_tables()
        q = f.q
        assert chi.shape == (q,)
        for a in range(1, q):
            assert inv_t[a] == f.inv(a)
            assert neg_t[a] == f.neg(a)
        if f.k > 1:
            for a in range(1, q):
                for b in range(1, q):
                    assert exp_t[log_t[a] + log_t[b]] == f.mul(a, b)
            if add_t.shape[0] > 1:
                for a in range(q):
                    for b in range(q):
                        assert add_t[a, b] == f.add(a, b)


def test_format_element(f9, f3):
    assert f3.format_element(2) == "2"
    assert f9.format_element(0) == "0"
    assert f9.format_element(1) == "1"
    assert f9.format_element(3) == "a"
    assert f9.format_element(4) == "1 + a"
    assert f9.format_element(7) == "1 + 2*a"


def test_chi_immutable(f3):
    with pytest.raises((ValueError, RuntimeError)):
        f3.chi_table[0] = 1


def test_canonical_index_round_trip():
    from charcensus.fields import _digits, _index_of

    for p, k in [(3, 2), (3, 3), (5, 2)]:
        f = build_field(p, k)
        for a in range(f.q):
            assert _index_of(_digits(a, p, k), p) == a
