import numpy as np
import pytest

from zklab import errors
from zklab.grid import (
    bessel_op,
    dealias_mask,
    deriv,
    eval_at,
    eval_gradient_at,
    field_from_function,
    forward,
    frac_deriv,
    hilbert,
    inverse,
    l2_norm,
    make_grid,
    RealField,
    spectral_l2_norm,
)


def rel_l2(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300)


def random_bandlimited(grid, rng, kmax_frac=0.25):
    """Real random field with spectral support in the low |m| block."""
    c = np.zeros((grid.nx, grid.ny), dtype=complex)
    mcut = max(2, int(kmax_frac * grid.nx / 2))
    ncut = max(2, int(kmax_frac * grid.ny / 2))
    block = rng.standard_normal((2 * mcut, 2 * ncut)) + 1j * rng.standard_normal((2 * mcut, 2 * ncut))
    c[:mcut, :ncut] = block[:mcut, :ncut]
    c[-mcut:, :ncut] = block[mcut:, :ncut]
    c[:mcut, -ncut:] = block[:mcut, ncut:]
    c[-mcut:, -ncut:] = block[mcut:, ncut:]
    import scipy.fft as sfft

    v = sfft.ifft2(c)
    return RealField(grid, np.ascontiguousarray(v.real))


class TestMakeGrid:
    def test_definitional(self):
        g = make_grid(8, 8, 2 * np.pi, 2 * np.pi)
        assert g.dx == pytest.approx(np.pi / 4)
        assert sorted(g.mx) == list(range(-4, 4))

        g = make_grid(256, 256, 128 * np.pi, 128 * np.pi)
        assert g.dx == pytest.approx(np.pi / 2)
        assert np.max(np.abs(g.kx)) == pytest.approx(2.0)

        g = make_grid(16, 8, 32, 16)
        assert g.dx == pytest.approx(2.0)
        assert g.dy == pytest.approx(2.0)
        assert g.kx[1] == pytest.approx(2 * np.pi / 32)

    def test_rejects_bad_sizes(self):
        with pytest.raises(errors.ConfigurationError):
            make_grid(12, 8, 1.0, 1.0)
        with pytest.raises(errors.ConfigurationError):
            make_grid(4, 8, 1.0, 1.0)
        with pytest.raises(errors.ConfigurationError):
            make_grid(8, 8, -1.0, 1.0)

    def test_coordinates_start_at_corner(self):
        g = make_grid(8, 8, 16, 16)
        assert g.x[0] == pytest.approx(-8.0)
        assert g.x[3] == pytest.approx(-8.0 + 3 * g.dx)


class TestTransformPair:
    def test_zero_field(self):
        g = make_grid(16, 16, 10, 10)
        f = RealField(g, np.zeros((16, 16)))
        assert np.all(forward(f).coeffs == 0)

    def test_cosine_coefficients(self):
        g = make_grid(32, 32, 7.0, 5.0)
        f = field_from_function(g, lambda X, Y: np.cos(2 * np.pi * X / g.Lx))
        c = forward(f).coeffs
        # only m = +-1, n = 0 survive, each of magnitude Lx*Ly/2
        assert abs(c[1, 0]) == pytest.approx(g.Lx * g.Ly / 2, rel=1e-12)
        assert abs(c[-1, 0]) == pytest.approx(g.Lx * g.Ly / 2, rel=1e-12)
        c[1, 0] = c[-1, 0] = 0
        assert np.max(np.abs(c)) < 1e-10

    def test_gaussian_matches_continuum_transform(self):
        # f^ = 2 pi e^{-(xi^2+eta^2)/2} for e^{-r^2/2}
        g = make_grid(256, 256, 64, 64)
        f = field_from_function(g, lambda X, Y: np.exp(-(X**2 + Y**2) / 2))
        c = forward(f).coeffs
        KX, KY = g.kgrid()
        exact = 2 * np.pi * np.exp(-(KX**2 + KY**2) / 2)
        band = np.hypot(KX, KY) < 6.0
        err = np.max(np.abs(c - exact)[band]) / (2 * np.pi)
        assert err <= 1e-10

    def test_round_trip(self):
        g = make_grid(64, 32, 12.0, 9.0)
        rng = np.random.default_rng(0)
        f = RealField(g, rng.standard_normal((64, 32)))
        back = inverse(forward(f))
        assert rel_l2(back.values, f.values) <= 1e-13

    def test_shape_mismatch(self):
        g = make_grid(16, 16, 10, 10)
        with pytest.raises(errors.ShapeError):
            RealField(g, np.zeros((16, 8)))


class TestMultipliers:
    def setup_method(self):
        self.g = make_grid(64, 64, 2 * np.pi, 2 * np.pi)

    def test_frac_deriv_identity_at_zero(self):
        f = field_from_function(self.g, lambda X, Y: np.cos(X) * np.sin(Y))
        c = forward(f)
        assert rel_l2(frac_deriv(c, 0.0).coeffs, c.coeffs) == 0

    def test_frac_deriv_cosine(self):
        f = field_from_function(self.g, lambda X, Y: np.cos(X) + 0 * Y)
        out = inverse(frac_deriv(forward(f), 2.0, axis="x"))
        assert rel_l2(out.values, f.values) <= 1e-12

    def test_frac_deriv_half_order(self):
        f = field_from_function(self.g, lambda X, Y: np.cos(2 * X) + 0 * Y)
        out = inverse(frac_deriv(forward(f), 0.5, axis="x"))
        assert rel_l2(out.values, np.sqrt(2) * f.values) <= 1e-12

    def test_frac_deriv_rejects_negative(self):
        f = field_from_function(self.g, lambda X, Y: np.cos(X) + 0 * Y)
        with pytest.raises(errors.DomainError):
            frac_deriv(forward(f), -1.0)

    def test_bessel_identity_and_inverse(self):
        rng = np.random.default_rng(1)
        f = random_bandlimited(self.g, rng)
        c = forward(f)
        assert rel_l2(bessel_op(c, 0.0).coeffs, c.coeffs) == 0
        back = bessel_op(bessel_op(c, 1.7), -1.7)
        assert rel_l2(back.coeffs, c.coeffs) <= 1e-13

    def test_bessel_cosine(self):
        f = field_from_function(self.g, lambda X, Y: np.cos(X) + 0 * Y)
        out = inverse(bessel_op(forward(f), 2.0, axis="isotropic"))
        assert rel_l2(out.values, 2.0 * f.values) <= 1e-12

    def test_hilbert_cos_to_sin(self):
        f = field_from_function(self.g, lambda X, Y: np.cos(X) + 0 * Y)
        out = inverse(hilbert(forward(f), axis="x"))
        X, _ = self.g.meshgrid()
        assert rel_l2(out.values, np.sin(X)) <= 1e-13

    def test_hilbert_squared_is_minus_one(self):
        f = field_from_function(self.g, lambda X, Y: np.sin(3 * X) + 0 * Y)
        out = inverse(hilbert(hilbert(forward(f), "x"), "x"))
        assert rel_l2(out.values, -f.values) <= 1e-13

    def test_hilbert_kills_constants(self):
        f = field_from_function(self.g, lambda X, Y: 1.0 + 0 * X + 0 * Y)
        out = inverse(hilbert(forward(f), "x"))
        assert np.max(np.abs(out.values)) < 1e-14


class TestProperties:
    def test_parseval_random_fields(self):
        g = make_grid(64, 32, 11.0, 23.0)
        rng = np.random.default_rng(42)
        for _ in range(100):
            f = random_bandlimited(g, rng)
            assert abs(l2_norm(f) - spectral_l2_norm(forward(f))) <= 1e-12 * max(l2_norm(f), 1)

    def test_multipliers_commute(self):
        g = make_grid(64, 64, 13.0, 13.0)
        rng = np.random.default_rng(3)
        c = forward(random_bandlimited(g, rng))
        a = frac_deriv(bessel_op(c, 1.3), 0.7, "x")
        b = bessel_op(frac_deriv(c, 0.7, "x"), 1.3)
        assert rel_l2(a.coeffs, b.coeffs) <= 1e-12

    def test_dx_is_hilbert_of_frac_deriv(self):
        # d/dx = -H D_x on mean-zero fields (sign fixed by the -i sign(k) symbol)
        g = make_grid(64, 64, 9.0, 9.0)
        rng = np.random.default_rng(4)
        f = random_bandlimited(g, rng)
        c = forward(f)
        lhs = deriv(c, "x")
        rhs = hilbert(frac_deriv(c, 1.0, "x"), "x")
        scale = max(np.max(np.abs(lhs.coeffs)), 1e-300)
        assert np.max(np.abs(lhs.coeffs + rhs.coeffs)) / scale <= 1e-12


class TestEvaluation:
    def test_eval_matches_grid_point(self):
        g = make_grid(64, 64, 17.0, 17.0)
        rng = np.random.default_rng(5)
        f = random_bandlimited(g, rng)
        c = forward(f)
        assert eval_at(c, g.x[10], g.y[20]) == pytest.approx(f.values[10, 20], rel=1e-10)

    def test_eval_off_grid_closed_form(self):
        g = make_grid(64, 64, 2 * np.pi, 2 * np.pi)
        f = field_from_function(g, lambda X, Y: np.cos(2 * X) * np.sin(Y))
        c = forward(f)
        p, q = 0.3141, -1.234
        assert eval_at(c, p, q) == pytest.approx(np.cos(2 * p) * np.sin(q), abs=1e-12)
        dx, dy = eval_gradient_at(c, p, q)
        assert dx == pytest.approx(-2 * np.sin(2 * p) * np.sin(q), abs=1e-11)
        assert dy == pytest.approx(np.cos(2 * p) * np.cos(q), abs=1e-11)


def test_dealias_mask_fraction():
    g = make_grid(32, 32, 5, 5)
    m = dealias_mask(g, 2.0 / 3.0)
    kept = np.abs(g.mx)[m[:, 0]]
    assert kept.max() < 2.0 / 3.0 * 16
    with pytest.raises(errors.ConfigurationError):
        dealias_mask(g, 0.4)
