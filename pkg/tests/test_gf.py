import pytest

from ortho_invar.gf import (FieldSpec, binomial_mod_p, catalan, catalan_congruence, digit_sum,
                            lucas_vec, prime_power)
import numpy as np


def test_prime_field_arithmetic():
    F = FieldSpec(3)
    assert int(F.elem(2) * F.elem(2)) == 1
    assert int(F.elem(2).inverse()) == 2
    with pytest.raises(ZeroDivisionError):
        F.zero().inverse()


def test_quadratic_extension():
    F = FieldSpec(9)
    t = F.gen()
    # modulus t^2 + 1
    assert int(t * t) == 2
    assert all((a * a.inverse()) == F.one() for a in F.elements() if not a.is_zero())
    assert len({a ** 8 for a in F.elements() if not a.is_zero()}) == 1


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        FieldSpec(3).one() + FieldSpec(5).one()


def test_even_characteristic_rejected():
    with pytest.raises(ValueError):
        FieldSpec(4)
    with pytest.raises(ValueError):
        FieldSpec(2)


def test_binomials_lucas():
    assert binomial_mod_p(4, 2, 3) == 0
    assert binomial_mod_p(3, 1, 3) == 0
    assert binomial_mod_p(8, 4, 3) == 1
    n = np.array([8, 4, 3, 10])
    r = np.array([4, 2, 1, 3])
    assert list(lucas_vec(n, r, 3)) == [binomial_mod_p(a, b, 3) for a, b in zip(n, r)]


def test_digit_sum_and_prime_power():
    assert digit_sum(5, 3) == 3
    assert prime_power(9) == (3, 2)


@pytest.mark.parametrize("q,j,val", [(3, 0, 1), (3, 1, 1), (7, 2, 2)])
def test_catalan_congruence_oracles(q, j, val):
    holds, lhs, rhs = catalan_congruence(q, j)
    assert holds and lhs == rhs == val


def test_catalan_congruence_all_small_q():
    for q in (3, 5, 7, 9, 11, 13):
        for j in range((q - 1) // 2 + 1):
            assert catalan_congruence(q, j)[0], (q, j)
    assert [catalan(j) for j in range(6)] == [1, 1, 2, 5, 14, 42]
