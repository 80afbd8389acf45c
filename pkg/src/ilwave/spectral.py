"""Periodic grid, real fields, Fourier multipliers and dealiased fluxes.

A :class:`Grid` carries ``n`` equispaced points on ``[-L/2, L/2)`` and the
signed angular frequencies ``z_k = 2*pi*k/L`` in FFT order.  A :class:`Field`
is a real-valued grid function with a lazily cached spectrum; operations
never mutate their inputs.

Multiplier conventions: a real even symbol applied directly, or a real odd
symbol applied together with a factor ``1j``, both map real fields to real
fields.  Any other combination is rejected.  Odd multipliers zero the
(unpaired) Nyquist mode and the mean mode.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .symbols import omega, psi_symbol, t_delta_dx_symbol


@dataclass(frozen=True)
class Grid:
    """Equispaced periodic grid on [-l_domain/2, l_domain/2)."""

    n: int
    l_domain: float

    def __post_init__(self):
        if self.n % 2 != 0 or self.n < 16:
            raise ValueError(f"grid size must be even and >= 16, got {self.n}")
        if not np.isfinite(self.l_domain) or self.l_domain <= 0:
            raise ValueError(f"period length must be positive, got {self.l_domain}")

    @cached_property
    def spacing(self) -> float:
        return self.l_domain / self.n

    @cached_property
    def x(self) -> np.ndarray:
        return -0.5 * self.l_domain + self.spacing * np.arange(self.n)

    @cached_property
    def z(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)

    @cached_property
    def nyquist_index(self) -> int:
        return self.n // 2


class Field:
    """Real grid function with cached spectral coefficients."""

    __slots__ = ("grid", "values", "_spectrum")

    def __init__(self, grid: Grid, values: np.ndarray):
        if np.iscomplexobj(values):
            raise ValueError("field values must be real")
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.n,):
            raise ValueError(f"expected {grid.n} samples, got shape {values.shape}")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values.copy())
        object.__setattr__(self, "_spectrum", None)

    def __setattr__(self, name, value):
        raise AttributeError("Field is immutable")

    @property
    def spectrum(self) -> np.ndarray:
        if self._spectrum is None:
            object.__setattr__(self, "_spectrum", np.fft.fft(self.values))
        return self._spectrum

    @classmethod
    def from_spectrum(cls, grid: Grid, spectrum: np.ndarray) -> "Field":
        return cls(grid, np.fft.ifft(spectrum).real)

    @classmethod
    def zeros(cls, grid: Grid) -> "Field":
        return cls(grid, np.zeros(grid.n))

    def shifted(self, offset: float) -> "Field":
        """Translate by ``offset`` (periodically, spectrally exact)."""
        return Field.from_spectrum(self.grid, self.spectrum * np.exp(-1j * self.grid.z * offset))

    def __add__(self, other: "Field") -> "Field":
        _same_grid(self, other)
        return Field(self.grid, self.values + other.values)

    def __sub__(self, other: "Field") -> "Field":
        _same_grid(self, other)
        return Field(self.grid, self.values - other.values)

    def __mul__(self, scalar: float) -> "Field":
        return Field(self.grid, self.values * float(scalar))

    __rmul__ = __mul__


def _same_grid(a: Field, b: Field):
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")


def integrate(f: Field) -> float:
    """Periodic trapezoid quadrature of f over one period."""
    return float(f.grid.spacing * np.sum(f.values))


def l2_norm(f: Field) -> float:
    return float(np.sqrt(f.grid.spacing * np.sum(f.values**2)))


def multiplier_values(grid: Grid, m, parity: str, factor_i: bool) -> np.ndarray:
    """Evaluate a symbol on the grid frequencies as a complex multiplier.

    parity 'even' with factor_i False, or parity 'odd' with factor_i True,
    preserve Hermitian symmetry (real output for real input); anything else
    is rejected.  Odd multipliers force the Nyquist and mean modes to zero.
    """
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    if parity == "even" and factor_i:
        raise ValueError("even multiplier with factor i breaks realness")
    if parity == "odd" and not factor_i:
        raise ValueError("odd multiplier without factor i breaks realness")
    vals = np.asarray(m(grid.z), dtype=float)
    if vals.shape != grid.z.shape:
        raise ValueError("symbol must evaluate elementwise on the frequency grid")
    if not np.all(np.isfinite(vals)):
        raise ValueError("symbol evaluates to non-finite values on the grid")
    if parity == "odd":
        vals = vals.copy()
        vals[0] = 0.0
        vals[grid.nyquist_index] = 0.0
        return 1j * vals
    return vals.astype(complex)


def apply_multiplier(f: Field, m, parity: str, factor_i: bool) -> Field:
    """Apply the Fourier multiplier m(z) (times i if factor_i) to a field."""
    mult = multiplier_values(f.grid, m, parity, factor_i)
    return Field.from_spectrum(f.grid, f.spectrum * mult)


def dx(f: Field, order: int = 1) -> Field:
    """Spectral derivative of the given order."""
    if order < 1:
        raise ValueError("derivative order must be >= 1")
    if order % 2 == 1:
        return apply_multiplier(f, lambda z: z**order * (-1.0) ** ((order - 1) // 2),
                                "odd", True)
    return apply_multiplier(f, lambda z: z**order * (-1.0) ** (order // 2),
                            "even", False)


def hilbert(f: Field) -> Field:
    """Discrete Hilbert transform: multiplier -i*sgn(z), sgn(0) = 0."""
    return apply_multiplier(f, lambda z: -np.sign(z), "odd", True)


def half_derivative(f: Field) -> Field:
    """Riesz half derivative: even multiplier |z|**(1/2)."""
    return apply_multiplier(f, lambda z: np.sqrt(np.abs(z)), "even", False)


def t_delta_dx(f: Field, delta: float) -> Field:
    """Coth-kernel singular integral of the derivative (even multiplier
    -z*coth(delta*z); value -1/delta at z = 0)."""
    return apply_multiplier(f, lambda z: t_delta_dx_symbol(delta, z), "even", False)


def linear_ilw(f: Field, delta: float) -> Field:
    """Time derivative of the linear finite-depth flow: multiplier
    i*omega(delta, z), i.e. minus the dispersive operator applied to f."""
    return apply_multiplier(f, lambda z: omega(delta, z), "odd", True)


def psi_operator(f: Field, delta: float) -> Field:
    """Order-zero operator with spectrum multiplied by -i*psi_symbol(z)."""
    return apply_multiplier(f, lambda z: -np.asarray(psi_symbol(delta, z)), "odd", True)


@dataclass(frozen=True)
class Nonlinearity:
    """Flux density leading*u**k + sum_j a_j u**j for j = k+1..m.

    The generalized equation family carries the flux u**k + p(u) with unit
    leading coefficient; the classical quadratic equations (advective term
    u u_x) correspond to k=2 with leading=1/2.
    """

    k: int
    coeffs: tuple = ()
    leading: float = 1.0

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 2:
            raise ValueError(f"leading power must be an integer >= 2, got {self.k}")
        if self.leading == 0.0:
            raise ValueError("leading coefficient must be nonzero")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        object.__setattr__(self, "leading", float(self.leading))

    @property
    def max_degree(self) -> int:
        return self.k + len(self.coeffs)

    def degrees(self):
        yield self.k, self.leading
        for j, a in enumerate(self.coeffs, start=self.k + 1):
            if a != 0.0:
                yield j, a

    def flux(self, u: np.ndarray) -> np.ndarray:
        """f(u) = u**k + p(u)."""
        out = np.zeros_like(u)
        with np.errstate(over="ignore"):
            for j, a in self.degrees():
                term = a * u**j
                if not np.all(np.isfinite(term)):
                    raise FloatingPointError(f"nonlinear term of degree {j} overflowed")
                out += term
        return out

    def big_p(self, u: np.ndarray) -> np.ndarray:
        """P(u) with P' (s) = s * p'(s): sum_j a_j * j/(j+1) * u**(j+1)."""
        out = np.zeros_like(u)
        for j, a in enumerate(self.coeffs, start=self.k + 1):
            if a != 0.0:
                out += a * (j / (j + 1.0)) * u ** (j + 1)
        return out

    def big_g(self, u: np.ndarray) -> np.ndarray:
        """Antiderivative of p: sum_j a_j u**(j+1)/(j+1)."""
        out = np.zeros_like(u)
        for j, a in enumerate(self.coeffs, start=self.k + 1):
            if a != 0.0:
                out += a * u ** (j + 1) / (j + 1.0)
        return out


def classical_quadratic() -> Nonlinearity:
    """The advective nonlinearity u u_x as a flux: d/dx (u**2 / 2)."""
    return Nonlinearity(2, (), 0.5)


def dealias_cutoff(grid: Grid, max_degree: int) -> int:
    """Largest kept |k| for truncation dealiasing of a degree-d product."""
    return grid.n // (max_degree + 1)


def _truncate_spectrum(spec: np.ndarray, keep: int) -> np.ndarray:
    out = spec.copy()
    n = spec.shape[0]
    out[keep + 1 : n - keep] = 0.0
    return out


def nonlinear_flux(f: Field, nl: Nonlinearity, dealias: str = "auto") -> Field:
    """d/dx of the flux density, alias-free per the chosen rule.

    'two_thirds' truncates input and output spectra at n//3 (alias-free for
    quadratic fluxes); 'padded' evaluates the product on a zero-padded grid
    of length ceil(n*(d+1)/2) (alias-free for degree d); 'auto' picks
    'two_thirds' for purely quadratic fluxes and 'padded' otherwise.
    The spectral derivative makes the output mean exactly zero.
    """
    grid = f.grid
    if dealias == "auto":
        dealias = "two_thirds" if nl.max_degree == 2 else "padded"
    if dealias == "two_thirds":
        keep = grid.n // 3
        spec = _truncate_spectrum(f.spectrum, keep)
        u = np.fft.ifft(spec).real
        w_hat = _truncate_spectrum(np.fft.fft(nl.flux(u)), keep)
    elif dealias == "padded":
        m = int(np.ceil(grid.n * (nl.max_degree + 1) / 2 / 2)) * 2
        pad_spec = np.zeros(m, dtype=complex)
        half = grid.n // 2
        spec = f.spectrum
        pad_spec[: half + 1] = spec[: half + 1]
        pad_spec[m - half + 1 :] = spec[half + 1 :]
        u = np.fft.ifft(pad_spec).real * (m / grid.n)
        w_pad = np.fft.fft(nl.flux(u)) * (grid.n / m)
        w_hat = np.zeros(grid.n, dtype=complex)
        w_hat[: half + 1] = w_pad[: half + 1]
        w_hat[half + 1 :] = w_pad[m - half + 1 :]
        w_hat[half] = 0.0
    else:
        raise ValueError(f"unknown dealias rule {dealias!r}")
    zk = grid.z.copy()
    zk[grid.nyquist_index] = 0.0
    return Field.from_spectrum(grid, 1j * zk * w_hat)


def remove_mean(f: Field) -> Field:
    return Field(f.grid, f.values - f.values.mean())


def reflected(f: Field) -> Field:
    """Spatial reflection x -> -x on the periodic grid (exact index map)."""
    vals = f.values
    return Field(f.grid, np.concatenate([vals[:1], vals[1:][::-1]]))


def hilbert_commutator_residual(f: Field) -> float:
    """L2 norm of d/dx [H, x] d/dx applied to the field.

    The coordinate is the sawtooth-periodized grid coordinate; the sample
    mean is removed first (the zero mode has no consistent meaning under the
    sawtooth commutator).  For data supported away from the domain edge the
    result is tiny; support touching the edge breaks the periodization.
    Requires a power-of-two grid.
    """
    n = f.grid.n
    if n & (n - 1) != 0:
        raise ValueError("commutator check requires a power-of-two grid size")
    g = remove_mean(f)
    v = dx(g)
    x = f.grid.x
    inner = hilbert(Field(f.grid, x * v.values)) - Field(f.grid, x * hilbert(v).values)
    return l2_norm(dx(inner))


def field_to_csv(f: Field, path, time: float | None = None) -> None:
    """Write (x, u) rows; optional time recorded as a comment header."""
    with open(path, "w", encoding="utf-8") as fh:
        if time is not None:
            fh.write(f"# t = {time!r}\n")
        fh.write("x,u\n")
        for xj, uj in zip(f.grid.x, f.values):
            fh.write(f"{xj!r},{uj!r}\n")


_BIN_HEADER = struct.Struct("<qdd")


def write_field_binary(f: Field, path, time: float = 0.0) -> None:
    """Raw snapshot: little-endian header (n: int64, L: f64, t: f64) + n f64."""
    with open(path, "wb") as fh:
        fh.write(_BIN_HEADER.pack(f.grid.n, f.grid.l_domain, float(time)))
        fh.write(f.values.astype("<f8").tobytes())


def read_field_binary(path) -> tuple[Field, float]:
    with open(path, "rb") as fh:
        n, l_domain, time = _BIN_HEADER.unpack(fh.read(_BIN_HEADER.size))
        values = np.frombuffer(fh.read(8 * n), dtype="<f8")
    if values.shape != (n,):
        raise ValueError(f"truncated snapshot file {path}")
    return Field(Grid(n, l_domain), values), time
