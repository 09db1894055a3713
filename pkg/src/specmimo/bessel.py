"""Vectorised Bessel function J0 for complex arguments.

Three regimes keep the error near machine precision relative to the
envelope ``max(|J0(z)|, sqrt(2/(pi |z|)) cosh(Im z))``:

* ``|z| <= 8``: ascending power series.
* ``8 < |z| <= 25``: Miller backward recurrence, normalised with the
  generating-function identity ``exp(-+iz) = J0 + 2 sum (-+i)^n Jn``
  (sign matched to ``Im z`` so that no term cancels catastrophically).
* ``|z| > 25``: Hankel asymptotic expansion.
"""
import numpy as np

SERIES_LIMIT = 8.0
ASYMPTOTIC_LIMIT = 25.0
MAX_IMAG = 700.0

_N_SERIES = 48
_N_ASYMPTOTIC = 32


def _series(z):
    q = -0.25 * z * z
    term = np.ones_like(z)
    total = np.ones_like(z)
    for k in range(1, _N_SERIES):
        term = term * q / (k * k)
        total = total + term
    return total


def _miller(z):
    zmax = float(np.max(np.abs(z)))
    start = int(zmax) + 40
    sign = np.where(z.imag >= 0.0, -1j, 1j)
    f_next = np.zeros_like(z)
    f = np.full_like(z, 1e-300)
    norm = np.zeros_like(z)
    phase = sign ** start
    norm = norm + 2.0 * phase * f
    for n in range(start, 0, -1):
        f_prev = (2.0 * n / z) * f - f_next
        f_next, f = f, f_prev
        phase = phase / sign
        norm = norm + (2.0 if n > 1 else 1.0) * phase * f
        big = np.abs(f) > 1e200
        if np.any(big):
            scale = np.where(big, 1e-200, 1.0)
            f, f_next, norm = f * scale, f_next * scale, norm * scale
    # after the loop ``f`` holds the unnormalised J0
    return f * np.exp(sign * z) / norm


def _asymptotic_coeffs(n):
    a = [1.0]
    for k in range(1, n):
        a.append(a[-1] * (-(2 * k - 1) ** 2) / (k * 8.0))
    return a


_A = _asymptotic_coeffs(2 * _N_ASYMPTOTIC)

# (lower bound on |z|, coefficients needed for a 1e-17 truncation error)
_TIERS = ((1500.0, 7), (400.0, 8), (150.0, 10), (70.0, 12), (40.0, 15),
          (ASYMPTOTIC_LIMIT, 21))


def _asymptotic(z, n_coeffs=2 * _N_ASYMPTOTIC):
    n_pairs = (n_coeffs + 1) // 2
    w = 1.0 / (z * z)
    P = np.zeros_like(z)
    Q = np.zeros_like(z)
    for j in range(n_pairs - 1, -1, -1):
        sgn = -1.0 if j % 2 else 1.0
        P = P * w + sgn * _A[2 * j]
        Q = Q * w + sgn * _A[2 * j + 1]
    iQ = 1j * Q / z
    # P cos(chi) - Q sin(chi) from a single complex exponential
    e = np.exp(1j * (z - 0.25 * np.pi))
    return np.sqrt(0.5 / (np.pi * z)) * ((P + iQ) * e + (P - iQ) / e)


def bessel_j0_complex(z):
    """Bessel function of the first kind, order zero, for complex ``z``.

    Parameters
    ----------
    z : complex or array_like of complex

    Returns
    -------
    complex or ndarray of complex
        Same shape as ``z``.

    Raises
    ------
    OverflowError
        If any ``|Im z|`` exceeds 700, where ``J0`` overflows a double.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    if np.any(np.abs(z.imag) > MAX_IMAG):
        raise OverflowError("|Im z| > 700: J0 overflows double precision")
    # J0 is even; fold onto the right half-plane for the asymptotic branch
    z = np.where(z.real < 0.0, -z, z)
    out = np.empty_like(z)
    mag = np.abs(z)
    lo = mag <= SERIES_LIMIT
    hi = mag > ASYMPTOTIC_LIMIT
    mid = ~(lo | hi)
    if np.any(lo):
        out[lo] = _series(z[lo])
    if np.any(mid):
        out[mid] = _miller(z[mid])
    upper = np.inf
    for lower, n_coeffs in _TIERS:
        sel = hi & (mag > lower) & (mag <= upper)
        if np.any(sel):
            out[sel] = _asymptotic(z[sel], n_coeffs)
        upper = lower
    return out[0] if scalar else out
