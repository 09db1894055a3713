import numpy as np
import pytest
from scipy import special

from specmimo.bessel import bessel_j0_complex


def envelope(z):
    return np.maximum(np.abs(special.jv(0, z)),
                      np.sqrt(2 / (np.pi * np.maximum(np.abs(z), 1e-300)))
                      * np.cosh(z.imag))


@pytest.mark.parametrize("rmax", [8.0, 25.0, 300.0, 5000.0])
def test_matches_scipy_across_regimes(rng, rmax):
    r = rng.uniform(0, rmax, 4000)
    phi = rng.uniform(-np.pi, np.pi, 4000)
    z = r * np.exp(1j * phi)
    z = z.real + 1j * np.clip(z.imag, -60, 60)
    err = np.abs(bessel_j0_complex(z) - special.jv(0, z)) / envelope(z)
    tol = 1e-13 if rmax <= 300 else 1e-12
    assert err.max() < tol


def test_regime_boundaries_continuous():
    eps = 1e-9
    for r in (8.0, 25.0, 40.0, 70.0, 150.0, 400.0, 1500.0):
        z = np.array([r - eps, r + eps]) * np.exp(0.3j)
        a, b = bessel_j0_complex(z)
        assert abs(a - b) <= 1e-12 * max(1.0, abs(a)) + 1e-8 * abs(a)


def test_imaginary_axis_is_modified_bessel():
    x = np.linspace(0, 50, 101)
    np.testing.assert_allclose(bessel_j0_complex(1j * x), special.i0(x),
                               rtol=1e-13)


def test_real_zeros():
    zeros = special.jn_zeros(0, 50)
    vals = bessel_j0_complex(zeros.astype(complex))
    assert np.max(np.abs(vals)) < 1e-13


def test_even_and_scalar():
    z = 3.7 - 12.1j
    assert isinstance(bessel_j0_complex(z), complex)
    assert bessel_j0_complex(-z) == pytest.approx(bessel_j0_complex(z),
                                                  rel=1e-15)
    assert bessel_j0_complex(0.0) == 1.0


def test_shape_preserved():
    z = np.arange(12.0).reshape(3, 4) * (1 + 0.1j)
    assert bessel_j0_complex(z).shape == (3, 4)


def test_overflow_guard():
    with pytest.raises(OverflowError):
        bessel_j0_complex(10 + 701j)


def test_accuracy_target_large_arguments(rng):
    z = rng.uniform(0, 1e4, 20000) + 1j * rng.uniform(-10, 10, 20000)
    err = np.abs(bessel_j0_complex(z) - special.jv(0, z)) / envelope(z)
    assert err.max() <= 1e-12
