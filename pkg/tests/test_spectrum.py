import numpy as np
import pytest
from scipy import special

from specmimo.materials import (CONCRETE, PERFECT_CONDUCTOR, Wavenumbers,
                                fresnel_angle)
from specmimo.spectrum import (KernelMode, Region, engine_constant,
                               region_of, surface_impulse_response,
                               wavenumber_response, weyl_los_closed_form)

D0 = 15.0


def test_total_is_sum_of_parts(wn):
    kr = np.array([0.0, 0.3, 0.9, 1.4]) * wn.kappa1 + 0.01j
    parts = [wavenumber_response(kr, 8.0, 0.0, wn, CONCRETE, D0, m)
             for m in ("los", "reflected", "total")]
    np.testing.assert_allclose(parts[0] + parts[1], parts[2], rtol=1e-14)


def test_conductor_reflection_is_mirrored_sign_flipped_source(wn):
    kr = np.linspace(0.01, 0.99, 7) * wn.kappa1
    rz, sz = 6.0, 1.0
    refl = wavenumber_response(kr, rz, sz, wn, PERFECT_CONDUCTOR, D0,
                               KernelMode.REFLECTED)
    image = wavenumber_response(kr, rz, 2 * D0 - sz, wn, PERFECT_CONDUCTOR,
                                D0, KernelMode.LOS)
    np.testing.assert_allclose(refl, -image, rtol=1e-13)


def test_regions():
    assert region_of(3.0, 1.0) is Region.BETWEEN
    assert region_of(-3.0, 1.0) is Region.BELOW


def test_below_region_uses_downgoing_wave(wn):
    kr = 0.5 * wn.kappa1
    up = wavenumber_response(kr, 4.0, 1.0, wn, CONCRETE, D0, "los")
    down = wavenumber_response(kr, -2.0, 1.0, wn, CONCRETE, D0, "los")
    assert up == pytest.approx(down)


def test_pole_rejected(wn):
    with pytest.raises(ValueError, match="pole"):
        wavenumber_response(wn.kappa1, 1.0, 0.0, wn, CONCRETE, D0)


def test_indicator_cuts_evanescent(wn):
    kr = np.array([0.5, 1.5]) * wn.kappa1
    out = wavenumber_response(kr, 1.0, 0.0, wn, CONCRETE, D0, indicator=True)
    assert out[1] == 0 and out[0] != 0


def test_evanescent_decays(wn):
    kr = 1.2 * wn.kappa1
    near = abs(wavenumber_response(kr, 0.01, 0.0, wn, CONCRETE, D0, "los"))
    far = abs(wavenumber_response(kr, 0.02, 0.0, wn, CONCRETE, D0, "los"))
    k1z_im = np.sqrt(kr ** 2 - wn.kappa1 ** 2)
    assert far / near == pytest.approx(np.exp(-k1z_im * 0.01), rel=1e-10)


def test_weyl_closed_form(wn):
    r = np.array([0.3, 0.4, 10.0])
    d = np.linalg.norm(r)
    c = engine_constant(wn)
    assert weyl_los_closed_form(r, np.zeros(3), wn) == pytest.approx(
        c * np.exp(1j * wn.kappa1 * d) / d)
    with pytest.raises(ValueError):
        weyl_los_closed_form(r, r, wn)


def test_surface_response_conductor_closed_form():
    wn = Wavenumbers.from_frequency(10e9)
    K = 1.5 * wn.kappa1
    rho = np.array([0.0, 0.004, 0.03, 0.2])
    got = surface_impulse_response(rho, wn, PERFECT_CONDUCTOR, K)
    with np.errstate(invalid="ignore", divide="ignore"):
        want = -K * special.j1(K * rho) / (2 * np.pi * rho)
    want[0] = -K ** 2 / (4 * np.pi)
    np.testing.assert_allclose(got, want, rtol=1e-11, atol=1e-9 * K ** 2)


def test_surface_response_small_band_is_normal_reflection():
    wn = Wavenumbers.from_frequency(10e9, CONCRETE)
    K = 1e-3 * wn.kappa1
    r0 = surface_impulse_response(0.0, wn, CONCRETE, K)
    assert r0 / (K ** 2 / (4 * np.pi)) == pytest.approx(
        fresnel_angle(0.0, CONCRETE), rel=1e-6)


def test_surface_response_validation(wn):
    with pytest.raises(ValueError):
        surface_impulse_response(-1.0, wn, CONCRETE)
    with pytest.raises(ValueError):
        surface_impulse_response(1.0, wn, CONCRETE, kappa_max=0)
