"""Monitored functionals of the flow.

Conserved integrals, weighted time-rescaled functionals and their analytic
time-derivative identities, sharp-window masses, far-field norms, momentum
integrals, and windowed Sobolev probes.  Everything is a pure function of a
:class:`Field` snapshot (plus schedule time), so records can be computed in
parallel and replayed from stored trajectories.

Sharp windows use a cosine taper a few grid points wide at their edges to
keep Gibbs oscillations out of the fractional-derivative pieces; the taper
width is part of the CSV metadata written by the scenario runner.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .spectral import (
    Field,
    Grid,
    Nonlinearity,
    apply_multiplier,
    dx,
    half_derivative,
    integrate,
    linear_ilw,
    psi_operator,
    t_delta_dx,
)
from .symbols import q_symbol
from .weights import Weight, WeightSchedule

TAPER_POINTS = 10


# ---------------------------------------------------------------------------
# conserved integrals

def invariants(f: Field, delta: float) -> tuple[float, float, float, float]:
    """Mass-type, quadratic, Hamiltonian, and H1-controlling invariants.

    The quartic invariant's spatially constant density 3/(2 delta^2) would
    contribute L*3/(2 delta^2) on the periodic domain; it is omitted since
    only drift is monitored.
    """
    h = f.grid.spacing
    u = f.values
    ux = dx(f).values
    tux = t_delta_dx(f, delta).values  # coth-kernel transform of u_x
    i1 = h * np.sum(u)
    i2 = h * np.sum(u * u)
    i3 = h * np.sum(u * tux + u * u / delta - u**3 / 3.0)
    i4 = h * np.sum(
        0.25 * u**4
        + 1.5 * u * u * tux
        + 0.5 * ux * ux
        + 1.5 * tux * tux
        + (1.5 * u**3 + 4.5 * u * tux) / delta
    )
    return float(i1), float(i2), float(i3), float(i4)


# ---------------------------------------------------------------------------
# weighted, time-rescaled functionals and their analytic rates

def _check_schedule_time(t: float) -> float:
    t = float(t)
    if t < 10.0:
        raise ValueError(f"weighted functionals are defined for t >= 10, got {t}")
    return t


def v_functional(f: Field, t: float, ws: WeightSchedule, w: Weight) -> float:
    t = _check_schedule_time(t)
    lam, mu = ws.lam(t), ws.mu(t)
    return float(integrate(Field(f.grid, w.phi(f.grid.x / lam) * f.values)) / mu)


def j_functional(f: Field, t: float, ws: WeightSchedule, w: Weight) -> float:
    t = _check_schedule_time(t)
    lam, mu = ws.lam(t), ws.mu(t)
    dens = w.phi(f.grid.x / lam) * f.values**2
    return float(0.5 * f.grid.spacing * np.sum(dens) / mu)


def je_functional(f: Field, t: float, ws: WeightSchedule, w: Weight) -> float:
    t = _check_schedule_time(t)
    lam, mu = ws.lam(t), ws.mu(t)
    dens = w.phi((f.grid.x + mu) / lam) * f.values**2
    return float(0.5 * f.grid.spacing * np.sum(dens))


def v_rate(f: Field, t: float, ws: WeightSchedule, w: Weight, delta: float) -> float:
    """Analytic d/dt of v_functional along the flow (four terms: both
    schedule rescalings, the order-zero dispersive piece against phi'', and
    the quadratic flux against phi')."""
    t = _check_schedule_time(t)
    g = f.grid
    h = g.spacing
    lam, mu = ws.lam(t), ws.mu(t)
    lamp, mup = ws.lam_prime(t), ws.mu_prime(t)
    s = g.x / lam
    u = f.values
    phi = w.phi(s)
    dphi = w.phi_prime(s)
    ddphi = w.phi_double_prime(s)
    psi_u = psi_operator(f, delta).values
    term1 = -(lamp / (mu * lam)) * h * np.sum(s * dphi * u)
    term2 = -(mup / mu**2) * h * np.sum(phi * u)
    term3 = -(1.0 / (mu * lam**2)) * h * np.sum(ddphi * psi_u)
    term4 = (0.5 / (mu * lam)) * h * np.sum(dphi * u * u)
    return float(term1 + term2 + term3 + term4)


def j_rate(f: Field, t: float, ws: WeightSchedule, w: Weight, delta: float) -> float:
    """Analytic d/dt of j_functional along the flow."""
    t = _check_schedule_time(t)
    g = f.grid
    h = g.spacing
    lam, mu = ws.lam(t), ws.mu(t)
    lamp, mup = ws.lam_prime(t), ws.mu_prime(t)
    s = g.x / lam
    u = f.values
    phi = w.phi(s)
    dphi = w.phi_prime(s)
    lin = linear_ilw(f, delta).values  # = -(T dxx + dx/delta) u
    term1 = -(mup / (2.0 * mu**2)) * h * np.sum(phi * u * u)
    term2 = -(lamp / (2.0 * mu * lam)) * h * np.sum(s * dphi * u * u)
    term3 = (1.0 / mu) * h * np.sum(phi * u * lin)
    term4 = (1.0 / (3.0 * lam * mu)) * h * np.sum(dphi * u**3)
    return float(term1 + term2 + term3 + term4)


def je_rate(f: Field, t: float, ws: WeightSchedule, w: Weight, delta: float) -> float:
    """Analytic d/dt of je_functional along the flow."""
    t = _check_schedule_time(t)
    g = f.grid
    h = g.spacing
    lam, mu = ws.lam(t), ws.mu(t)
    lamp, mup = ws.lam_prime(t), ws.mu_prime(t)
    s = (g.x + mu) / lam
    u = f.values
    phi = w.phi(s)
    dphi = w.phi_prime(s)
    lin = linear_ilw(f, delta).values
    term1 = (mup / (2.0 * lam)) * h * np.sum(dphi * u * u)
    term2 = -(lamp / (2.0 * lam)) * h * np.sum(s * dphi * u * u)
    term3 = h * np.sum(phi * u * lin)
    term4 = (1.0 / (3.0 * lam)) * h * np.sum(dphi * u**3)
    return float(term1 + term2 + term3 + term4)


# ---------------------------------------------------------------------------
# sharp windows

def tapered_indicator(grid: Grid, lo: float, hi: float,
                      taper_points: int = TAPER_POINTS) -> np.ndarray:
    """Indicator of [lo, hi] with cosine rolloffs (inside the interval)."""
    x = grid.x
    lo_eff = max(lo, float(x[0]))
    hi_eff = min(hi, float(x[-1]) + grid.spacing)
    if hi_eff <= lo_eff:
        raise ValueError(f"window [{lo}, {hi}] does not intersect the domain")
    width = min(taper_points * grid.spacing, 0.25 * (hi_eff - lo_eff))
    w = np.zeros(grid.n)
    inside = (x >= lo_eff) & (x <= hi_eff)
    w[inside] = 1.0
    if width > 0:
        rising = inside & (x < lo_eff + width)
        w[rising] = 0.5 * (1.0 - np.cos(np.pi * (x[rising] - lo_eff) / width))
        falling = inside & (x > hi_eff - width)
        w[falling] = 0.5 * (1.0 - np.cos(np.pi * (hi_eff - x[falling]) / width))
    return w


def window_mass(f: Field, t: float, ws: WeightSchedule, delta: float) -> float:
    """Mass of u^2 + (q(d/dx)u)^2 in the central window |x| <= C*lambda(t)."""
    t = _check_schedule_time(t)
    radius = ws.window_radius(t)
    g = f.grid
    margin = TAPER_POINTS * g.spacing
    if radius + margin > 0.5 * g.l_domain:
        raise ValueError(
            f"window radius {radius:.3g} (+taper) exceeds the half-domain "
            f"{0.5 * g.l_domain:.3g}; enlarge the domain")
    wmask = tapered_indicator(g, -radius, radius)
    qu = apply_multiplier(f, lambda z: q_symbol(delta, z), "even", False).values
    dens = f.values**2 + qu**2
    return float(g.spacing * np.sum(wmask * dens))


def far_field_l2(f: Field, t: float, ws: WeightSchedule) -> float:
    """L2 norm of u over the annulus mu(t)/2 <= |x| <= 2 mu(t) (domain-clipped)."""
    t = _check_schedule_time(t)
    mu = ws.mu(t)
    g = f.grid
    lo, hi = 0.5 * mu, 2.0 * mu
    if lo >= 0.5 * g.l_domain:
        raise ValueError(
            f"annulus inner radius {lo:.3g} lies outside the half-domain "
            f"{0.5 * g.l_domain:.3g}")
    wmask = tapered_indicator(g, lo, hi) + tapered_indicator(g, -hi, -lo)
    return float(np.sqrt(g.spacing * np.sum(wmask * f.values**2)))


# ---------------------------------------------------------------------------
# momentum identities

@dataclass(frozen=True)
class MomentumRecord:
    x_moment: float
    f_integral: float
    edge_flag: bool


def momentum_identity(f: Field, nl: Nonlinearity,
                      edge_points: int = 5,
                      edge_tol: float = 1e-8) -> MomentumRecord:
    """First moment of u against the sawtooth coordinate, and the flux
    integral that predicts its time derivative.

    The coordinate weight is the periodized sawtooth, so mass near the seam
    invalidates the moment; the edge flag trips when the L2 mass within
    ``edge_points`` of the seam exceeds ``edge_tol`` times the total.
    """
    g = f.grid
    h = g.spacing
    u = f.values
    x_moment = h * np.sum(g.x * u)
    f_integral = h * np.sum(nl.flux(u))
    i2 = h * np.sum(u * u)
    edge = h * (np.sum(u[:edge_points] ** 2) + np.sum(u[-edge_points:] ** 2))
    flag = bool(i2 > 0 and edge > edge_tol * i2)
    return MomentumRecord(float(x_moment), float(f_integral), flag)


def weighted_moment_rate(f: Field, nl: Nonlinearity) -> float:
    """Predicted d/dt of the weighted moment integral of u^2 x for the
    deep-water (Hilbert-dispersion) family:

        2*||D^(1/2) u||^2 + 2*leading*k/(k+1) * int u^(k+1) + 2*int P(u)

    where P'(s) = s p'(s) collects the perturbative flux terms.
    """
    g = f.grid
    h = g.spacing
    u = f.values
    du = half_derivative(f).values
    half_norm = h * np.sum(du * du)
    k = nl.k
    lead = nl.leading * (k / (k + 1.0)) * h * np.sum(u ** (k + 1))
    pert = h * np.sum(nl.big_p(u))
    return float(2.0 * half_norm + 2.0 * lead + 2.0 * pert)


# ---------------------------------------------------------------------------
# windowed Sobolev probes

def _check_order(grid: Grid, m: int):
    if int(m) != m or m < 1:
        raise ValueError(f"derivative order must be a positive integer, got {m}")
    zmax = float(np.max(np.abs(grid.z)))
    if zmax**m * np.finfo(float).eps > 1e-3:
        raise ValueError(
            f"order {m} exceeds the resolvable derivative order at this grid "
            f"resolution (amplification {zmax ** m:.2e})")


def local_sobolev(f: Field, window: tuple, m: int) -> float:
    """Windowed squared seminorm of the m-th derivative."""
    _check_order(f.grid, m)
    lo, hi = window
    wmask = tapered_indicator(f.grid, float(lo), float(hi))
    gm = dx(f, m).values
    return float(f.grid.spacing * np.sum(wmask * gm * gm))


def smoothing_halfnorm(f: Field, window: tuple, m: int) -> float:
    """Windowed squared seminorm of the extra half derivative D^(1/2) d^m."""
    _check_order(f.grid, m)
    lo, hi = window
    wmask = tapered_indicator(f.grid, float(lo), float(hi))
    gm = half_derivative(dx(f, m)).values
    return float(f.grid.spacing * np.sum(wmask * gm * gm))


def sobolev_norm(f: Field, s: float) -> float:
    """Global H^s norm via the spectrum: sum (1+z^2)^s |u_hat|^2 weights."""
    g = f.grid
    weights = (1.0 + g.z**2) ** s
    return float(np.sqrt(g.spacing / g.n * np.sum(weights * np.abs(f.spectrum) ** 2)))


# ---------------------------------------------------------------------------
# corollary integrand

def corollary_integrand(f: Field, t: float, ws: WeightSchedule, w: Weight) -> float:
    """Inner weighted integral int s*phi'(s) u^2 dx with s = (x+mu)/lambda.

    Accumulated as sum (1/t_n) * integrand * dt by the scenario runner; its
    running sum stays bounded for solitary waves.
    """
    t = _check_schedule_time(t)
    lam, mu = ws.lam(t), ws.mu(t)
    s = (f.grid.x + mu) / lam
    dens = s * w.phi_prime(s) * f.values**2
    return float(f.grid.spacing * np.sum(dens))


# ---------------------------------------------------------------------------
# record + CSV schema

DIAGNOSTIC_COLUMNS = (
    "t", "i1", "i2", "i3", "i4", "v", "j", "je", "window_mass", "far_field_l2",
    "x_moment", "f_integral", "weighted_moment_pred", "local_hm_left",
    "local_hm_right", "smoothing_halfnorm", "corollary_integrand",
    "edge_mass_flag",
)


@dataclass
class DiagnosticRecord:
    """One timestamped row of the fixed diagnostics schema (None = empty cell)."""

    t: float
    i1: float | None = None
    i2: float | None = None
    i3: float | None = None
    i4: float | None = None
    v: float | None = None
    j: float | None = None
    je: float | None = None
    window_mass: float | None = None
    far_field_l2: float | None = None
    x_moment: float | None = None
    f_integral: float | None = None
    weighted_moment_pred: float | None = None
    local_hm_left: float | None = None
    local_hm_right: float | None = None
    smoothing_halfnorm: float | None = None
    corollary_integrand: float | None = None
    edge_mass_flag: bool | None = None

    def row(self) -> list:
        out = []
        for col in DIAGNOSTIC_COLUMNS:
            val = getattr(self, col)
            if val is None:
                out.append("")
            elif col == "edge_mass_flag":
                out.append("1" if val else "0")
            else:
                out.append(repr(float(val)))
        return out


def write_diagnostics_csv(records, path) -> None:
    """Fixed-schema CSV, one row per snapshot, deterministic formatting."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(DIAGNOSTIC_COLUMNS) + "\n")
        for rec in records:
            fh.write(",".join(rec.row()) + "\n")


def record_fields() -> tuple:
    return tuple(f.name for f in fields(DiagnosticRecord))
