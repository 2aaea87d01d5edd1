from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from abquot import cyclo

pairs = st.tuples(st.integers(-20, 20), st.integers(-20, 20))


@pytest.mark.parametrize("name", sorted(cyclo.RINGS))
def test_theta_squares_to_minus_c(name):
    R = cyclo.ring(name)
    th = R.theta(3)
    assert (th.dot(th) == -R.norm_of_theta * np.eye(6, dtype=object)).all()
    assert R.norm_of_theta > 0


def test_unknown_ring():
    with pytest.raises(ValueError):
        cyclo.ring("dyadic")


@pytest.mark.parametrize("name", sorted(cyclo.RINGS))
@given(x=pairs, y=pairs)
def test_multiplication_matches_complex_numbers(name, x, y):
    R = cyclo.ring(name)
    assert abs(R.to_complex(R.mul(x, y)) - R.to_complex(x) * R.to_complex(y)) < 1e-6


@pytest.mark.parametrize("name", sorted(cyclo.RINGS))
@given(x=pairs, y=pairs)
def test_realification_is_multiplicative(name, x, y):
    R = cyclo.ring(name)
    M = lambda z: cyclo.realify([[z[0]]], [[z[1]]], R)
    assert (M(x).dot(M(y)) == M(R.mul(x, y))).all()


@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_zeta_blocks_have_order_m_and_commute_with_theta(m):
    z = cyclo.zeta_block(m)
    assert (cyclo.zeta_power(m, m) == np.eye(2, dtype=np.int64)).all()
    assert all(not (cyclo.zeta_power(m, k) == np.eye(2, dtype=np.int64)).all() for k in range(1, m))
    th, _ = cyclo.theta_block(m)
    assert (z @ th == th @ z).all()


def test_no_order_five_automorphism():
    with pytest.raises(ValueError):
        cyclo.zeta_block(5)


def test_multiplier_change_places_tau_i():
    R = cyclo.ring("eisenstein")
    P = cyclo.multiplier_change([(0, 1), (Fraction(1, 3), 2)], R)
    assert P[:, 3].tolist() == [0, Fraction(1, 3), 0, 2]
    assert P[:, 2].tolist() == [0, 0, 1, 0]
