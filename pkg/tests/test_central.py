import numpy as np
import pytest

from matspec import (
    Classification,
    GammaSeq,
    HermSeq,
    NOT_CENTRAL,
    ball_params,
    caratheodory_check,
    central_extend,
    central_order,
    classify,
    conjugate_by_unitary,
    covariance_from_gamma,
    gamma_from_covariance,
    rank_drop,
    spec_norm,
    toeplitz_matrix,
)
from matspec.errors import InvalidInputError, ModelError

from _gen import random_tpd_seq, random_unitary

RNG = np.random.default_rng(23)


def scalar_seq(*vals):
    return HermSeq([np.array([[v]], dtype=complex) for v in vals])


class TestGammaConversion:
    def test_forward(self):
        g = gamma_from_covariance(scalar_seq(1.0, 0.5))
        assert isinstance(g, GammaSeq)
        assert np.allclose(g.coeff(0), 1.0)
        assert np.allclose(g.coeff(1), 1.0)

    def test_round_trip(self):
        seq = random_tpd_seq(RNG, 2, 3)
        back = covariance_from_gamma(gamma_from_covariance(seq))
        for j in range(4):
            assert np.allclose(back.coeff(j), seq.coeff(j), atol=1e-14)

    def test_inverse_takes_hermitian_part_of_head(self):
        g = GammaSeq([np.array([[1.0 + 2.0j]]), np.array([[0.2]])])
        seq = covariance_from_gamma(g)
        assert np.allclose(seq.coeff(0), 1.0)

    def test_gamma_of_tnd_passes_caratheodory(self):
        g = gamma_from_covariance(random_tpd_seq(RNG, 2, 3))
        assert caratheodory_check(g)


class TestCentralExtend:
    def test_ones_extends_to_ones(self):
        ext = central_extend(scalar_seq(1.0, 1.0), 7)
        for j in range(7):
            assert np.allclose(ext.coeff(j), 1.0, atol=1e-12)

    def test_white_noise_extends_to_zero(self):
        ext = central_extend(scalar_seq(1.0), 5)
        for j in range(1, 5):
            assert np.allclose(ext.coeff(j), 0.0, atol=1e-14)

    def test_constant_rotation(self):
        # C_j = u^-j C_0 forces every later coefficient onto the same orbit
        u = np.exp(1j * 0.7)
        ext = central_extend(scalar_seq(1.0).append(np.array([[1 / u]])), 6)
        for j in range(6):
            assert np.allclose(ext.coeff(j), u ** (-j), atol=1e-11)

    def test_preserves_given_prefix(self):
        seq = random_tpd_seq(RNG, 2, 2)
        ext = central_extend(seq, 5)
        for j in range(3):
            assert np.allclose(ext.coeff(j), seq.coeff(j), atol=0.0)

    def test_idempotent(self):
        seq = random_tpd_seq(RNG, 2, 2)
        once = central_extend(seq, 6)
        again = central_extend(once.prefix(4), 6)
        assert np.allclose(again.coeff(5), once.coeff(5), atol=1e-11)

    def test_extension_stays_tnd(self):
        seq = random_tpd_seq(RNG, 3, 2)
        ext = central_extend(seq, 6)
        assert classify(ext) is not Classification.NOT_TND

    def test_tpd_extension_stays_tpd(self):
        seq = random_tpd_seq(RNG, 2, 2)
        assert classify(central_extend(seq, 6)) is Classification.TPD

    def test_rank_plateau_when_degenerate(self):
        # once the semiradii vanish the Toeplitz rank freezes
        seq = scalar_seq(1.0, 1.0)
        ext = central_extend(seq, 6)
        for n in range(1, 6):
            t = toeplitz_matrix(ext.prefix(n + 1), n)
            assert int(np.sum(np.linalg.eigvalsh(t) > 1e-9)) == 1
        assert rank_drop(ext.prefix(3), 2)

    def test_unitary_equivariance(self):
        seq = random_tpd_seq(RNG, 2, 2)
        u = random_unitary(RNG, 2)
        a = central_extend(conjugate_by_unitary(seq, u), 6)
        b = conjugate_by_unitary(central_extend(seq, 6), u)
        for j in range(6):
            assert np.allclose(a.coeff(j), b.coeff(j), atol=1e-10)

    def test_gamma_input_gives_gamma_output(self):
        g = gamma_from_covariance(scalar_seq(1.0, 0.5))
        ext = central_extend(g, 4)
        assert isinstance(ext, GammaSeq)
        cov_ext = central_extend(scalar_seq(1.0, 0.5), 4)
        assert np.allclose(ext.coeff(3), 2.0 * cov_ext.coeff(3), atol=1e-12)

    def test_rejects_non_tnd(self):
        with pytest.raises(ModelError):
            central_extend(scalar_seq(1.0, 2.0), 4)

    def test_rejects_shrinking(self):
        with pytest.raises(InvalidInputError):
            central_extend(scalar_seq(1.0, 0.5), 0)


class TestCentralOrder:
    def test_white_noise_is_order_zero(self):
        assert central_order(scalar_seq(1.0, 0.0, 0.0)) == 0

    def test_full_order(self):
        seq = random_tpd_seq(RNG, 2, 3)
        ext = central_extend(seq, 6)
        assert central_order(ext) == 3

    def test_not_central_when_tail_off_center(self):
        assert central_order(scalar_seq(1.0, 1.0, 0.5)) is NOT_CENTRAL

    def test_order_counts_last_mismatch(self):
        # tail (0, 0.5, ...) where 0.5 is the center of its ball at step 2
        seq = scalar_seq(1.0, 0.5)
        ext = central_extend(seq, 4)
        assert central_order(ext) == 1

    def test_constant_one_sequence(self):
        assert central_order(scalar_seq(1.0, 1.0, 1.0, 1.0)) == 1

    def test_interior_breach_raises(self):
        with pytest.raises(ModelError) as exc:
            central_order(scalar_seq(1.0, 2.0, 0.5))
        assert "T_1" in str(exc.value)

    def test_length_one_is_order_zero(self):
        assert central_order(scalar_seq(3.0)) == 0

    def test_matrix_case(self):
        seq = random_tpd_seq(RNG, 2, 2)
        ext = central_extend(seq, 5)
        assert central_order(ext) == 2


class TestCentralExtendAgainstBalls:
    def test_each_new_coefficient_is_ball_center(self):
        seq = random_tpd_seq(RNG, 2, 1)
        ext = central_extend(seq, 5)
        for n in range(2, 5):
            ball = ball_params(ext.prefix(n), n - 1)
            assert np.allclose(ext.coeff(n), ball.center, atol=1e-12 * (1 + spec_norm(ball.center)))
