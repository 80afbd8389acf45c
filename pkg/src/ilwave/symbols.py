"""Dispersion symbols for the finite-depth internal-wave equation family.

Every function here evaluates a Fourier multiplier as a plain real function
of the angular frequency ``z``.  On a periodic grid of period ``L`` the modes
sit at ``z_k = 2*pi*k/L``; the grid layer owns that mapping, so no ``2*pi``
factors appear in this module.

The finite-depth dispersion function is

    omega(delta, z) = z**2 * coth(delta*z) - z/delta

which is odd, positive for ``z > 0``, behaves like ``delta*z**3/3`` near the
origin and like ``z*|z| - z/delta`` at infinity.  All other symbols derive
from it: ``omega_prime`` (its derivative, even), ``q_symbol`` (the square
root of ``omega_prime``), ``big_l`` (``omega(z)/z``), ``psi_symbol`` (the
bounded order-zero factor with ``z**2 * psi = -omega``), and ``bo_ilw_gap``
(the exponentially small difference to the deep-water symbol ``z*|z|``).

Evaluation strategy: below ``|delta*z| = SERIES_SWITCH`` a Taylor branch is
used; above it, coth/csch are computed through ``exp(-2w)`` and ``expm1`` so
nothing overflows for any finite argument.  Odd symbols are computed from
``|z|`` and signed afterwards, which makes oddness/evenness exact in floating
point.
"""

from __future__ import annotations

import numpy as np

# Branch switch for |delta*z|.  Below it the truncated Taylor series is
# accurate to ~1e-14 relative; above it the exp/expm1 form loses at most
# ~3e-13 to cancellation.  (At 1e-3 the direct form would lose ~1e-9:
# omega ~ w**3 must emerge from w-sized intermediates.)
SERIES_SWITCH = 0.05


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not np.isfinite(delta) or delta <= 0.0:
        raise ValueError(f"depth parameter must be positive and finite, got {delta}")
    return delta


def _coth_large(w):
    """coth(w) for w > 0 via exp(-2w); exact saturation to 1, no overflow."""
    q = np.exp(-2.0 * w)
    return 1.0 + 2.0 * q / (-np.expm1(-2.0 * w))


def _csch2_large(w):
    """csch(w)**2 for w > 0 via exp(-2w)."""
    q = np.exp(-2.0 * w)
    e = -np.expm1(-2.0 * w)
    return 4.0 * q / (e * e)


# Taylor branches, all in w = delta*|z|, valid for w <= SERIES_SWITCH.
# w*coth(w) - 1 = w**2/3 - w**4/45 + 2w**6/945 - w**8/4725 + ...

def _omega_prime_series(w):
    w2 = w * w
    return w2 * (1.0 - w2 / 9.0 + w2 * w2 * (2.0 / 135.0 - w2 / 525.0))


def _omega_prime_direct(w):
    return 2.0 * w * _coth_large(w) - w * w * _csch2_large(w) - 1.0


def _big_l_series(w):
    w2 = w * w
    return w2 * (1.0 / 3.0 + w2 * (-1.0 / 45.0 + w2 * (2.0 / 945.0 - w2 / 4725.0)))


def _big_l_direct(w):
    return w * _coth_large(w) - 1.0


def _psi_series(w):
    w2 = w * w
    return -w * (1.0 / 3.0 + w2 * (-1.0 / 45.0 + w2 * (2.0 / 945.0 - w2 / 4725.0)))


def _psi_direct(w):
    return 1.0 / w - _coth_large(w)


def _branched(w, series, direct):
    """Evaluate series(w) for w < SERIES_SWITCH and direct(w) above, w >= 0."""
    w = np.asarray(w, dtype=float)
    out = np.empty_like(w)
    small = w < SERIES_SWITCH
    if small.any():
        out[small] = series(w[small])
    big = ~small
    if big.any():
        out[big] = direct(w[big])
    return out


def _signed(z, magnitude):
    return np.where(z < 0.0, -magnitude, np.where(z > 0.0, magnitude, 0.0))


def _as_scalar_or_array(z, out):
    if np.isscalar(z) or (isinstance(z, np.ndarray) and z.ndim == 0):
        return float(out)
    return out


def omega(delta, z):
    """Dispersion function z**2*coth(delta*z) - z/delta; odd, > 0 for z > 0.

    Computed as z * big_l(delta, z) so the factorization is exact in floating
    point; oddness is exact because big_l depends on |z| only.
    """
    delta = _check_delta(delta)
    zf = np.asarray(z, dtype=float)
    val = zf * (_branched(delta * np.abs(zf), _big_l_series, _big_l_direct) / delta)
    return _as_scalar_or_array(z, val)


def omega_prime(delta, z):
    """Derivative of omega in z; even, zero only at z = 0."""
    delta = _check_delta(delta)
    za = np.abs(np.asarray(z, dtype=float))
    val = _branched(delta * za, _omega_prime_series, _omega_prime_direct) / delta
    return _as_scalar_or_array(z, val)


def q_symbol(delta, z):
    """Square root of omega_prime; even, nonnegative, vanishes at z = 0."""
    return _as_scalar_or_array(z, np.sqrt(omega_prime(delta, z)))


def big_l(delta, z):
    """Even factor z*coth(delta*z) - 1/delta, so that z*big_l(z) = omega(z)."""
    delta = _check_delta(delta)
    za = np.abs(np.asarray(z, dtype=float))
    val = _branched(delta * za, _big_l_series, _big_l_direct) / delta
    return _as_scalar_or_array(z, val)


def psi_symbol(delta, z):
    """Bounded odd order-zero factor 1/(delta*z) - coth(delta*z).

    Satisfies z**2 * psi_symbol(delta, z) = -omega(delta, z), tends to -+1 as
    z -> +-infinity and |psi| <= 1 everywhere.  The corresponding operator
    multiplies spectra by ``-1j * psi_symbol(z)``; the caller tracks the -1j.
    """
    delta = _check_delta(delta)
    zf = np.asarray(z, dtype=float)
    val = _branched(delta * np.abs(zf), _psi_series, _psi_direct)
    return _as_scalar_or_array(z, _signed(zf, val))


def bo_ilw_gap(delta, z):
    """Difference z*|z| - z**2*coth(delta*z) between deep-water and
    finite-depth principal symbols.

    Equals -sgn(z) * z**2 * 2*exp(-2w)/(1 - exp(-2w)) with w = delta*|z|, so
    its magnitude is bounded by 2*z**2*exp(-2*delta*|z|)/(1-exp(-2*delta*|z|))
    and decays exponentially in delta*|z|.
    """
    delta = _check_delta(delta)
    zf = np.asarray(z, dtype=float)
    za = np.abs(zf)
    w = delta * za
    out = np.zeros_like(za)
    nz = w > 0.0
    if nz.any():
        q = np.exp(-2.0 * w[nz])
        out[nz] = -za[nz] * za[nz] * 2.0 * q / (-np.expm1(-2.0 * w[nz]))
    return _as_scalar_or_array(z, _signed(zf, out))


def bo_ilw_gap_bound(delta, z):
    """Closed-form envelope 2*z**2*exp(-2w)/(1-exp(-2w)), w = delta*|z| > 0."""
    delta = _check_delta(delta)
    za = np.abs(np.asarray(z, dtype=float))
    w = delta * za
    q = np.exp(-2.0 * w)
    return _as_scalar_or_array(z, 2.0 * za * za * q / (-np.expm1(-2.0 * w)))


def t_delta_dx_symbol(delta, z):
    """Even multiplier -z*coth(delta*z) of the coth-kernel singular integral
    composed with d/dx; equals -(big_l + 1/delta), series-safe at z = 0."""
    delta = _check_delta(delta)
    return _as_scalar_or_array(z, -(np.asarray(big_l(delta, z)) + 1.0 / delta))
