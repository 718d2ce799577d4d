import math

import numpy as np
import pytest
from scipy import integrate

from carleson_primes import smooth
from carleson_primes.multiplier import FreqGrid, tv_norm
from carleson_primes.smooth import ETA, BumpSpec, CutoffConstants


def test_eta_examples():
    assert smooth.eval_eta(0.0) == 1.0
    assert smooth.eval_eta(2.0) == 0.0
    assert 0.0 < smooth.eval_eta(0.75) < 1.0


@pytest.mark.parametrize(
    "spec",
    [ETA, CutoffConstants().chi(), CutoffConstants().phi(), CutoffConstants().varphi(), CutoffConstants().chi_s(2)],
)
def test_sandwich(spec):
    rng = np.random.default_rng(0)
    p, w = spec.plateau_half_width, spec.support_half_width
    x = rng.uniform(-1.5 * w, 1.5 * w, 10_000)
    b = smooth.eval_bump(spec, x)
    assert np.all((b >= 0) & (b <= 1))
    assert np.all(b[np.abs(x) <= p] == 1.0)
    assert np.all(b[np.abs(x) >= w] == 0.0)
    assert np.array_equal(b, smooth.eval_bump(spec, -x))
    edges = np.array([p, -p, w, -w])
    assert smooth.eval_bump(spec, edges).tolist() == [1.0, 1.0, 0.0, 0.0]


def test_bump_derivative_matches_finite_difference():
    x = np.linspace(0.51, 0.99, 50)
    h = 1e-6
    fd = (smooth.eval_eta(x + h) - smooth.eval_eta(x - h)) / (2 * h)
    assert np.allclose(smooth.bump_derivative(ETA, x), fd, atol=1e-7)


def test_bump_spec_validation():
    with pytest.raises(ValueError):
        BumpSpec(1.0, 0.5)
    with pytest.raises(ValueError):
        BumpSpec(0.5, 1.0, "cosine")


def test_constants_validation():
    with pytest.raises(ValueError):
        CutoffConstants(alpha=16.0)
    with pytest.raises(ValueError):
        CutoffConstants(N=12)
    with pytest.raises(ValueError):
        CutoffConstants(c=0.5, a=0.25)
    assert CutoffConstants(alpha=2.0, strict=False).alpha == 2.0


def test_psi_basic():
    assert smooth.eval_psi(0.1) == 0.0
    x = np.linspace(-2, 2, 2001)
    psi = smooth.eval_psi(x)
    assert np.array_equal(psi, -smooth.eval_psi(-x))
    assert np.all(psi[(np.abs(x) <= 0.25) | (np.abs(x) >= 1)] == 0)
    assert smooth.eval_psi_j(5, 40.0) == pytest.approx(2**-5 * smooth.eval_psi(40 / 32))


def test_psi_partial_sum_is_reciprocal():
    t = 37.0
    assert abs(smooth.psi_partial_sum(t, 2, 12) - 1 / t) <= 1e-12
    t = np.array([-700.0, -3.0, 2.0, 5.5, 1000.0])
    assert np.allclose(smooth.psi_partial_sum(t, 2, 12), 1 / t, atol=1e-12, rtol=0)


def test_psi_sup_reported():
    assert 1.0 < smooth.psi_sup() < 3.0


def test_psi_hat_zero_odd_imaginary():
    assert smooth.psi_hat(0.0) == 0
    xi = np.linspace(-30, 30, 301)
    v = smooth.psi_hat(xi)
    assert np.max(np.abs(v.real)) == 0
    assert np.allclose(v, -smooth.psi_hat(-xi), atol=1e-15)


def _psi_j_hat_quad(j, beta):
    # -2i int_0^inf psi_j(t) sin(2 pi beta t) dt over the support [2^(j-2), 2^j]
    lo, hi = 2.0 ** (j - 2), 2.0**j
    val, _ = integrate.quad(lambda t: smooth.eval_psi_j(j, t), lo, hi, weight="sin",
                            wvar=2 * np.pi * beta, limit=400, epsabs=1e-14, epsrel=1e-13)
    return -2j * val


def test_psi_j_hat_scaling_vs_direct_quadrature():
    rng = np.random.default_rng(1)
    js = rng.integers(2, 9, 16)
    betas = rng.uniform(-0.5, 0.5, 16)
    for j, b in zip(js, betas):
        assert abs(smooth.psi_j_hat(int(j), b) - _psi_j_hat_quad(int(j), b)) <= 1e-9


def test_bump_hat_vs_quadrature():
    spec = CutoffConstants().phi()
    for xi in (0.0, 3.0, 17.5, 60.0):
        val, _ = integrate.quad(lambda x: smooth.eval_bump(spec, x), -spec.support_half_width,
                                spec.support_half_width, weight="cos", wvar=2 * np.pi * xi,
                                epsabs=1e-14, limit=200)
        assert smooth.bump_hat(spec, xi) == pytest.approx(val, abs=1e-11)


def test_fourier_transform_signals_unreachable_tolerance():
    step = lambda x: (np.abs(x) < 0.3).astype(float)
    with pytest.raises(smooth.TransformAccuracyError):
        smooth.fourier_transform(step, (-0.5, 0.5), np.linspace(0, 5, 11), tol=1e-12)


def test_fourier_bump_on_grid():
    grid = FreqGrid.interval(-2, 2, 64)
    m = smooth.fourier_bump(3, grid)
    assert np.allclose(m.values, smooth.psi_hat(8 * grid.points))
    b = smooth.fourier_bump(ETA, grid)
    assert np.max(np.abs(b.values.imag)) == 0


def test_sign_smoothing_vs_quadrature():
    for y in (0.3, 1.7, 12.25, -40.0):
        g = lambda t: 2 * np.pi * y if t == 0 else smooth.eval_eta(t) * np.sin(2 * np.pi * y * t) / t
        val, _ = integrate.quad(g, 0, 1, limit=2000, epsabs=1e-14, epsrel=1e-13)
        assert smooth.sign_smoothing(y) == pytest.approx(2 / np.pi * val, abs=1e-10)
    assert smooth.sign_smoothing(np.array([5000.0, -5000.0])).tolist() == [1.0, -1.0]


def test_psi_hat_from_sign_smoothing():
    # psi-hat(xi) = -pi i (G(xi) - G(xi/2)): an independent closed-form path
    xi = np.linspace(-40, 40, 161)
    G = smooth.sign_smoothing
    assert np.allclose(smooth.psi_hat(xi), -np.pi * 1j * (G(xi) - G(xi / 2)), atol=1e-12)


# total variation is invariant under reparametrisation, so psi_j-hat on the
# torus is psi-hat on [-2^(j-1), 2^(j-1)]; one fine sample serves every j
_Y = np.linspace(-600, 600, 48001)


@pytest.fixture(scope="module")
def psi_hat_fine():
    return smooth.psi_hat(_Y)


def test_psi_j_hat_total_variation_uniform_in_j(psi_hat_fine):
    tvs = []
    for j in range(2, 21):
        half = min(2.0 ** (j - 1), 600)
        tvs.append(tv_norm(psi_hat_fine[np.abs(_Y) <= half]))
    assert max(tvs) < 10
    assert abs(max(tvs) - tvs[-1]) < 1e-9  # saturates once psi-hat has decayed


def test_psi_j_hat_times_chi_s_total_variation_bounded(psi_hat_fine):
    C = CutoffConstants()
    tv_psi = tv_norm(psi_hat_fine)
    sup_psi = float(np.max(np.abs(psi_hat_fine)))
    # product rule: TV(fg) <= TV(f) sup|g| + sup|f| TV(g), TV(chi) = 2
    bound = tv_psi + 2 * sup_psi
    for s in range(4):
        for j in range(2, 21):
            vals = psi_hat_fine * smooth.eval_bump(C.chi_s(s), _Y / 2.0**j)
            assert tv_norm(vals) <= bound + 1e-12
