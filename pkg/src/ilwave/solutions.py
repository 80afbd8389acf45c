"""Initial data: solitary waves with numerically resolved parameters,
Gaussians, and mixed-regularity data.

The solitary-wave profile for speed ``c > 1/delta`` is the two-parameter
family

    Q(s) = b * sin(a*delta) / (cos(a*delta) + cosh(a*s)),   0 < a*delta < pi,

whose parameters are pinned by requiring the traveling-wave equation

    (T dx) Q + (1/delta - c) Q + Q**2/2 = 0

to hold on the grid: for each trial ``a`` the amplitude ``b`` is a linear
least-squares fit, and ``a`` itself minimizes the resulting residual; a
joint Gauss-Newton polish then drives the residual to rounding level.  No
closed-form dispersion relation is assumed, so the resolved parameters are
consistent with the same discrete operator that propagates the wave.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares, minimize_scalar

from .spectral import Field, Grid, l2_norm, t_delta_dx
from .weights import smooth_step


class SolitonResolutionError(RuntimeError):
    """No parameter pair reached the requested residual."""

    def __init__(self, message: str, best_residual: float):
        super().__init__(message)
        self.best_residual = best_residual


@dataclass(frozen=True)
class SolitonProfile:
    c: float
    delta: float
    a: float
    b: float
    residual: float  # relative L2 residual of the profile equation
    field: Field

    @property
    def peak(self) -> float:
        return float(np.max(np.abs(self.field.values)))


def soliton_shape(grid: Grid, a: float, delta: float, center: float = 0.0) -> np.ndarray:
    """Unit-amplitude-factor profile sin(a d)/(cos(a d) + cosh(a s)).

    Evaluated through exp(-a|s|) so cosh never overflows; s is the periodic
    distance to the center.
    """
    l = grid.l_domain
    s = np.mod(grid.x - center + 0.5 * l, l) - 0.5 * l
    e = np.exp(-a * np.abs(s))
    ad = a * delta
    return 2.0 * e * np.sin(ad) / (1.0 + e * e + 2.0 * e * np.cos(ad))


def profile_residual_field(grid: Grid, a: float, b: float, c: float, delta: float,
                           center: float = 0.0) -> Field:
    """Left side of the traveling-wave equation for the ansatz Q_{a,b}."""
    q = Field(grid, b * soliton_shape(grid, a, delta, center))
    lin = t_delta_dx(q, delta).values + (1.0 / delta - c) * q.values
    return Field(grid, lin + 0.5 * q.values**2)


def solve_soliton(c: float, delta: float, grid: Grid, tol: float = 1e-8,
                  center: float = 0.0, scan_points: int = 400) -> SolitonProfile:
    """Resolve (a, b) so the ansatz satisfies the traveling-wave equation.

    Raises SolitonResolutionError (carrying the best residual reached) when
    nothing in 0 < a*delta < pi meets ``tol``; that typically means c is too
    close to 1/delta for the grid, or the grid does not resolve the width.
    """
    delta = float(delta)
    c = float(c)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if c <= 1.0 / delta:
        raise ValueError(f"speed must exceed 1/delta = {1.0 / delta:.6g}, got {c}")

    h = grid.spacing

    def fit_b(a: float):
        g = soliton_shape(grid, a, delta, center)
        lin = t_delta_dx(Field(grid, g), delta).values + (1.0 / delta - c) * g
        quad = 0.5 * g * g
        denom = float(np.dot(quad, quad))
        if denom == 0.0:
            return 0.0, np.inf
        b = -float(np.dot(lin, quad)) / denom
        q_norm = abs(b) * np.sqrt(h * np.dot(g, g))
        if q_norm == 0.0:
            return b, np.inf
        resid = abs(b) * np.sqrt(h * np.sum((lin + b * quad) ** 2))
        return b, resid / q_norm

    # Profiles wider than the domain degenerate toward the constant branch
    # Q = 2c; demanding decay e^{-a L/2} ~ 1e-7 by mid-domain excludes it and
    # is required for the periodized residual to be meaningful anyway.
    a_lo = 30.0 / grid.l_domain
    a_hi = (np.pi - 1e-6) / delta
    if a_lo >= a_hi:
        raise SolitonResolutionError(
            f"domain L={grid.l_domain} too small to hold a localized profile with "
            f"a*delta < pi at delta={delta}", np.inf)
    scan = np.linspace(a_lo, a_hi, scan_points)
    resids = np.array([fit_b(a)[1] for a in scan])
    i = int(np.argmin(resids))
    lo = scan[max(i - 1, 0)]
    hi = scan[min(i + 1, scan_points - 1)]
    bracket = minimize_scalar(lambda a: fit_b(a)[1], bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12})
    a0 = float(bracket.x)
    b0, _ = fit_b(a0)

    def vec(params):
        a, b = params
        if not (a_lo <= a and a * delta < np.pi):
            return np.full(grid.n, 1e6)
        r = profile_residual_field(grid, a, b, c, delta, center)
        qn = abs(b) * np.sqrt(h * np.sum(soliton_shape(grid, a, delta, center) ** 2))
        return r.values * np.sqrt(h) / max(qn, 1e-300)

    sol = least_squares(vec, x0=[a0, b0], xtol=1e-15, ftol=1e-15, gtol=1e-15)
    a, b = float(sol.x[0]), float(sol.x[1])
    resid = float(np.sqrt(np.sum(vec([a, b]) ** 2)))
    if not np.isfinite(resid) or resid > tol:
        raise SolitonResolutionError(
            f"profile residual {resid:.3e} exceeds tol {tol:.3e} for c={c}, delta={delta}"
            " (speed too close to 1/delta for this grid, or grid too coarse)",
            resid,
        )
    field = Field(grid, b * soliton_shape(grid, a, delta, center))
    return SolitonProfile(c=c, delta=delta, a=a, b=b, residual=resid, field=field)


def gaussian(grid: Grid, amplitude: float, width: float, center: float = 0.0) -> Field:
    """amplitude * exp(-((x-center)/width)**2); integral = amp*width*sqrt(pi)."""
    if width <= 0:
        raise ValueError("width must be positive")
    return Field(grid, amplitude * np.exp(-(((grid.x - center) / width) ** 2)))


@dataclass(frozen=True)
class RegularityDatum:
    """Rough-left / smooth-right initial datum.

    The rough part is a seeded random Fourier series with coefficient decay
    |z|**-(3/2 + left_roughness), mollified to live in x < x0; the right
    part is a Gaussian so every one-sided Sobolev norm to the right of x0 is
    finite.  ``left_roughness`` must exceed 1/2 to keep the global field
    smoother than H^{3/2}.
    """

    x0: float
    m: int
    left_roughness: float
    right_amplitude: float = 1.0
    right_width: float = 2.0
    right_offset: float = 6.0
    rough_amplitude: float = 0.5
    cutoff_margin: float = 1.0
    rough_extent: float | None = None  # width of the rough band; None = to the seam
    seed: int = 0

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 2:
            raise ValueError("sobolev index m must be an integer >= 2")
        if self.left_roughness <= 0.5:
            raise ValueError(
                "left_roughness must exceed 0.5 to stay above the H^{3/2} class"
            )
        if self.cutoff_margin <= 0 or self.right_offset <= 0:
            raise ValueError("cutoff_margin and right_offset must be positive")
        if self.rough_extent is not None and self.rough_extent <= 0:
            raise ValueError("rough_extent must be positive when given")


def make_regularity_datum(spec: RegularityDatum, grid: Grid) -> Field:
    rng = np.random.default_rng(spec.seed)
    n = grid.n
    p = 1.5 + spec.left_roughness
    ks = np.arange(1, n // 2)
    amps = np.abs(grid.z[ks]) ** (-p)
    phases = rng.uniform(0.0, 2.0 * np.pi, ks.size)
    spectrum = np.zeros(n, dtype=complex)
    spectrum[ks] = amps * np.exp(1j * phases)
    spectrum[n - ks] = np.conj(spectrum[ks])
    rough = np.fft.ifft(spectrum).real
    peak = np.max(np.abs(rough))
    if peak > 0:
        rough *= spec.rough_amplitude / peak

    # mollified indicator of x < x0, also vanishing near the periodic seam so
    # the product stays smooth across the wrap; an optional finite extent
    # confines the rough band so fast left-movers cannot reach the seam over
    # the experiment horizon
    margin = spec.cutoff_margin
    x = grid.x
    cutoff = smooth_step((spec.x0 - margin - x) / margin)
    if spec.rough_extent is None:
        left_edge = -0.5 * grid.l_domain + 4.0 * margin
    else:
        left_edge = spec.x0 - margin - spec.rough_extent
    cutoff = cutoff * smooth_step((x - left_edge) / margin)
    smooth = gaussian(grid, spec.right_amplitude, spec.right_width,
                      spec.x0 + spec.right_offset)
    return Field(grid, smooth.values + cutoff * rough)


def two_soliton_data(grid: Grid, c1: float, c2: float, delta: float,
                     sep: float, tol: float = 1e-8) -> tuple[Field, SolitonProfile, SolitonProfile]:
    """Superposed single solitary waves (faster one behind), for overtaking runs."""
    p1 = solve_soliton(c1, delta, grid, tol=tol, center=-0.5 * sep)
    p2 = solve_soliton(c2, delta, grid, tol=tol, center=0.5 * sep)
    return p1.field + p2.field, p1, p2
