import numpy as np
import pytest

from matspec import (
    GammaSeq,
    HermSeq,
    caratheodory_check,
    caratheodory_first_failure,
    central_quotient,
    gamma_from_covariance,
    numerical_rank,
    pd_polynomials,
    phi_at,
    radial_atom_limit,
    rational_values,
    re_mat,
    taylor_coefficients,
)
from matspec.errors import InvalidInputError, ModelError

from _gen import atomic_coeffs, random_tpd_seq

RNG = np.random.default_rng(41)


def scalar_gamma(*vals):
    return GammaSeq([np.array([[v]], dtype=complex) for v in vals])


def scalar_seq(*vals):
    return HermSeq([np.array([[v]], dtype=complex) for v in vals])


def ones_quotient():
    # Phi(z) = (1 + z)/(1 - z), the Caratheodory function of a mass at 1
    return central_quotient(gamma_from_covariance(scalar_seq(1.0, 1.0)))


class TestCaratheodoryCheck:
    def test_tnd_gammas_pass(self):
        g = gamma_from_covariance(random_tpd_seq(RNG, 2, 3))
        assert caratheodory_check(g)
        assert caratheodory_first_failure(g) is None

    def test_failure_index(self):
        # re S_1 for Gamma = (1, 4) is [[1, 2], [2, 1]], which is indefinite
        g = scalar_gamma(1.0, 4.0)
        assert caratheodory_first_failure(g) == 1
        assert not caratheodory_check(g)

    def test_inline_eigen_oracle(self):
        g = scalar_gamma(1.0, 1.2)
        s1 = np.array([[1.0, 0.0], [1.2, 1.0]])
        expect = np.linalg.eigvalsh((s1 + s1.T) / 2).min() >= 0
        assert caratheodory_check(g) == expect


class TestCentralQuotient:
    def test_mass_at_one_coefficients(self):
        cq = ones_quotient()
        assert cq.order == 1
        assert np.allclose(cq.num.coeffs[:, 0, 0], [1.0, 1.0], atol=1e-12)
        assert np.allclose(cq.den.coeffs[:, 0, 0], [1.0, -1.0], atol=1e-12)

    def test_constant_case(self):
        cq = central_quotient(scalar_gamma(2.0))
        assert cq.order == 0
        assert np.allclose(phi_at(cq, 0.3 + 0.1j), [[2.0]])

    def test_order_argument_truncates(self):
        g = gamma_from_covariance(scalar_seq(1.0, 0.5, 0.25))
        cq = central_quotient(g, n=1)
        assert cq.den.degree <= 1

    def test_non_hermitian_head_rejected(self):
        with pytest.raises(InvalidInputError):
            central_quotient(scalar_gamma(1.0 + 0.5j, 0.2))

    def test_non_caratheodory_rejected(self):
        with pytest.raises(ModelError) as exc:
            central_quotient(scalar_gamma(1.0, 4.0))
        assert "re S_1" in str(exc.value)

    def test_phi_outside_disk_rejected(self):
        cq = ones_quotient()
        with pytest.raises(InvalidInputError):
            phi_at(cq, 1.0)

    def test_phi_value(self):
        assert np.allclose(phi_at(ones_quotient(), 0.5), [[3.0]], atol=1e-12)

    def test_rational_values_stacked(self):
        cq = ones_quotient()
        zs = np.array([0.0, 0.5, 0.3j])
        vals = rational_values(cq, zs)
        assert vals.shape == (3, 1, 1)
        expect = (1 + zs) / (1 - zs)
        assert np.allclose(vals[:, 0, 0], expect, atol=1e-12)

    def test_real_part_nonnegative_on_disk(self):
        g = gamma_from_covariance(random_tpd_seq(RNG, 2, 3))
        cq = central_quotient(g)
        for _ in range(40):
            z = RNG.uniform(0, 0.97) * np.exp(1j * RNG.uniform(0, 2 * np.pi))
            phi = phi_at(cq, z)
            low = np.linalg.eigvalsh(re_mat(phi)).min()
            assert low > -1e-9 * (1.0 + np.linalg.norm(phi, 2))

    def test_taylor_reproduces_gamma(self):
        seq = random_tpd_seq(RNG, 2, 3)
        g = gamma_from_covariance(seq)
        cq = central_quotient(g)
        coeffs = taylor_coefficients(cq, 4)
        for j in range(4):
            assert np.allclose(coeffs[j], g.coeff(j), atol=1e-9)

    def test_taylor_beyond_data_matches_extension(self):
        from matspec import central_extend

        seq = random_tpd_seq(RNG, 2, 2)
        cq = central_quotient(gamma_from_covariance(seq))
        coeffs = taylor_coefficients(cq, 6)
        ext = central_extend(seq, 6)
        for j in range(3, 6):
            assert np.allclose(coeffs[j], 2.0 * ext.coeff(j), atol=1e-8)

    def test_rank_of_real_part_matches_head(self):
        # degenerate data: rank of re Phi inside the disk equals rank of C_0
        seq = HermSeq([np.eye(2), np.diag([0.0, 1.0]).astype(complex)])
        cq = central_quotient(gamma_from_covariance(seq))
        phi = phi_at(cq, 0.3 + 0.2j)
        assert numerical_rank(re_mat(phi)) == 2
        seq2 = HermSeq([np.diag([1.0, 0.0]).astype(complex)])
        cq2 = central_quotient(gamma_from_covariance(seq2))
        assert numerical_rank(re_mat(phi_at(cq2, 0.5j))) == 1


class TestPdPolynomials:
    def test_scalar_half_fixture(self):
        # T_1 for (1, 1/2) inverts to [[4/3, -2/3], [-2/3, 4/3]] by hand
        a, b = pd_polynomials(scalar_seq(1.0, 0.5))
        assert np.allclose(a.coeffs[:, 0, 0], [4.0 / 3.0, -2.0 / 3.0], atol=1e-12)
        assert np.allclose(b.coeffs[:, 0, 0], [4.0 / 3.0, -2.0 / 3.0], atol=1e-12)

    def test_white_noise_fixture(self):
        a, b = pd_polynomials(scalar_seq(2.0))
        assert np.allclose(a.coeffs[:, 0, 0], [0.5], atol=1e-14)
        assert np.allclose(b.coeffs[:, 0, 0], [0.5], atol=1e-14)

    def test_inverse_blocks_against_numpy(self):
        from matspec import toeplitz_matrix

        seq = random_tpd_seq(RNG, 2, 2)
        a, b = pd_polynomials(seq)
        tinv = np.linalg.inv(toeplitz_matrix(seq, 2))
        for j in range(3):
            assert np.allclose(a.coeffs[j], tinv[2 * j : 2 * j + 2, :2], atol=1e-9)
            assert np.allclose(
                b.coeffs[j], tinv[4:, 2 * (2 - j) : 2 * (2 - j) + 2], atol=1e-9
            )

    def test_rejects_merely_tnd(self):
        with pytest.raises(ModelError):
            pd_polynomials(scalar_seq(1.0, 1.0))


class TestRadialAtomLimit:
    def test_mass_at_one(self):
        cq = ones_quotient()
        assert np.allclose(radial_atom_limit(cq, 1.0), [[1.0]], atol=1e-8)

    def test_no_mass_elsewhere(self):
        cq = ones_quotient()
        for u in (1j, -1.0, np.exp(2.2j)):
            assert np.allclose(radial_atom_limit(cq, u), 0.0, atol=1e-8)

    def test_atom_free_quotient(self):
        cq = central_quotient(gamma_from_covariance(random_tpd_seq(RNG, 2, 2)))
        assert np.allclose(radial_atom_limit(cq, 1.0), 0.0, atol=1e-7)

    def test_off_circle_rejected(self):
        with pytest.raises(InvalidInputError):
            radial_atom_limit(ones_quotient(), 0.9)

    def test_atomic_two_point_measure(self):
        coeffs, atoms = atomic_coeffs(RNG, 2, 4, n_atoms=2)
        cq = central_quotient(gamma_from_covariance(HermSeq(coeffs)))
        for u, w in atoms:
            got = radial_atom_limit(cq, u)
            assert np.allclose(got, w, atol=1e-6 * (1 + np.linalg.norm(w, 2)))

    def test_second_order_circle_pole_has_no_limit(self):
        # not a Caratheodory function: (1 - z)^-2 blows up too fast radially
        from matspec import CaratheodoryQuotient, MatPoly
        from matspec.errors import NoLimitError

        num = MatPoly(np.ones((1, 1, 1), dtype=complex))
        den = MatPoly(np.array([[[1.0]], [[-2.0]], [[1.0]]], dtype=complex))
        cq = CaratheodoryQuotient(num=num, den=den, order=2)
        with pytest.raises(NoLimitError):
            radial_atom_limit(cq, 1.0)
