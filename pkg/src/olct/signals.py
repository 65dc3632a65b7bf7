"""Uniform grids, sampled complex signals, analytic signal families,
quadrature, differentiation and inner products.

Everything here is a pure function over immutable value objects; results
only depend on the arguments, so signals and grids can be shared freely
across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import fft as sfft

from .errors import NumericsError

__all__ = [
    "Grid",
    "SampledSignal",
    "AnalyticSignal",
    "WeightFunction",
    "make_grid",
    "gaussian_chirp",
    "exp_quadratic",
    "exp_weight",
    "unit_weight",
    "quadrature_weights",
    "integrate",
    "derivative",
    "inner_product",
    "norm_l2",
    "energy",
]

MIN_GRID_POINTS = 16

# Relative edge magnitude above which spectral differentiation and the fast
# transform path refuse to treat the truncated signal as effectively periodic.
EDGE_DECAY_TOL = 1e-8

# Spectrum bins below this fraction of the peak are rounding noise; the
# frequency-domain derivative multiplier would amplify them by omega^k, so
# they are zeroed first.
SPECTRAL_NOISE_FLOOR = 1e-12


@dataclass(frozen=True)
class Grid:
    """Uniformly spaced sample locations on a closed interval."""

    t_min: float
    t_max: float
    n: int

    @property
    def dt(self) -> float:
        return (self.t_max - self.t_min) / (self.n - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.n)

    @property
    def length(self) -> float:
        return self.t_max - self.t_min


def make_grid(t_min: float, t_max: float, n: int) -> Grid:
    """Build a uniform grid with at least ``MIN_GRID_POINTS`` samples.

    Parameters
    ----------
    t_min, t_max : float
        Interval endpoints, ``t_min < t_max``, both finite.
    n : int
        Number of samples, ``n >= 16``.
    """
    if not (np.isfinite(t_min) and np.isfinite(t_max)):
        raise ValueError("grid endpoints must be finite")
    if not t_min < t_max:
        raise ValueError(f"grid needs t_min < t_max, got [{t_min}, {t_max}]")
    n = int(n)
    if n < MIN_GRID_POINTS:
        raise ValueError(f"grid too small: n={n} < {MIN_GRID_POINTS}")
    return Grid(float(t_min), float(t_max), n)


@dataclass(frozen=True)
class SampledSignal:
    """Complex samples of a signal on a uniform grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != (self.grid.n,):
            raise ValueError(
                f"signal length {vals.shape} does not match grid n={self.grid.n}"
            )
        if not np.all(np.isfinite(vals.real)) or not np.all(np.isfinite(vals.imag)):
            raise ValueError("signal contains non-finite samples")
        object.__setattr__(self, "values", vals)

    def with_values(self, values: np.ndarray) -> "SampledSignal":
        return type(self)(self.grid, values)


class AnalyticSignal:
    """A signal given by closed-form callables, with optional exact derivatives.

    ``eval_fn`` maps an array of sample times to complex values.  When
    ``deriv_fn`` is provided, ``deriv_fn(k)`` returns the callable for the
    exact k-th derivative; spectral differentiation of sampled values is the
    fallback otherwise.
    """

    def __init__(self, eval_fn: Callable, deriv_fn: Optional[Callable] = None,
                 label: str = ""):
        self.eval_fn = eval_fn
        self.deriv_fn = deriv_fn
        self.label = label

    def __call__(self, t) -> np.ndarray:
        return np.asarray(self.eval_fn(np.asarray(t, dtype=float)),
                          dtype=np.complex128)

    @property
    def has_deriv(self) -> bool:
        return self.deriv_fn is not None

    def deriv(self, k: int) -> Callable:
        if k == 0:
            return self.eval_fn
        if self.deriv_fn is None:
            raise ValueError(f"signal {self.label!r} has no analytic derivatives")
        return self.deriv_fn(int(k))

    def sample(self, grid: Grid) -> SampledSignal:
        return SampledSignal(grid, self(grid.points()))

    def sample_deriv(self, grid: Grid, k: int) -> SampledSignal:
        return SampledSignal(grid, np.asarray(self.deriv(k)(grid.points()),
                                              dtype=np.complex128))

    def __repr__(self):
        return f"AnalyticSignal({self.label!r})"


def exp_quadratic(c0: complex, q2: complex, q1: complex = 0.0,
                  q0: complex = 0.0, label: str = "") -> AnalyticSignal:
    """Signal c0 * exp(q2*t^2 + q1*t + q0) with exact derivatives of any order.

    The k-th derivative is P_k(t) * f(t) where P_0 = 1 and
    P_{k+1} = P_k' + (2*q2*t + q1) * P_k; the polynomial recursion is exact,
    so derivatives carry no discretization error.
    """
    c0 = complex(c0)
    lead = np.polynomial.Polynomial([complex(q1), 2.0 * complex(q2)])
    polys = [np.polynomial.Polynomial([1.0 + 0.0j])]

    def base(t):
        t = np.asarray(t, dtype=float)
        return c0 * np.exp(q2 * t * t + q1 * t + q0)

    def deriv(k: int) -> Callable:
        while len(polys) <= k:
            p = polys[-1]
            polys.append(p.deriv() + lead * p)
        pk = polys[k]
        return lambda t: pk(np.asarray(t, dtype=float)) * base(t)

    return AnalyticSignal(base, deriv, label=label)


def gaussian_chirp(r: float, chirp: float) -> AnalyticSignal:
    """Gaussian envelope with a quadratic phase: exp(-(r/2)t^2) * exp(-j*chirp*t^2).

    The squared magnitude is exp(-r t^2) and the value at t=0 is 1.
    """
    if not r > 0:
        raise ValueError(f"gaussian width parameter must be positive, got r={r}")
    return exp_quadratic(1.0, -(r / 2.0) - 1j * float(chirp),
                         label=f"gaussian_chirp(r={r}, chirp={chirp})")


@dataclass(frozen=True)
class WeightFunction:
    """Real weight with exact derivatives up to ``max_order``."""

    eval_fn: Callable = field(repr=False)
    deriv_factory: Callable = field(repr=False)
    max_order: int
    label: str = ""

    def __call__(self, t) -> np.ndarray:
        return np.asarray(self.eval_fn(np.asarray(t, dtype=float)), dtype=float)

    def deriv(self, k: int) -> Callable:
        k = int(k)
        if k == 0:
            return self.eval_fn
        if k > self.max_order:
            raise ValueError(
                f"weight {self.label!r} supplies derivatives up to order "
                f"{self.max_order}, requested {k}"
            )
        return self.deriv_factory(k)


def exp_weight(r: float) -> WeightFunction:
    """Exponential weight w(t) = exp(-r t); d^k/dt^k w = (-r)^k exp(-r t)."""
    if not r > 0:
        raise ValueError(f"exponential weight rate must be positive, got r={r}")
    r = float(r)
    return WeightFunction(
        eval_fn=lambda t: np.exp(-r * t),
        deriv_factory=lambda k: (lambda t: (-r) ** k * np.exp(-r * t)),
        max_order=64,
        label=f"exp_weight({r})",
    )


def unit_weight() -> WeightFunction:
    """Constant weight w(t) = 1."""
    return WeightFunction(
        eval_fn=lambda t: np.ones_like(np.asarray(t, dtype=float)),
        deriv_factory=lambda k: (lambda t: np.zeros_like(np.asarray(t, dtype=float))),
        max_order=64,
        label="unit_weight",
    )


def quadrature_weights(n: int, dt: float) -> np.ndarray:
    """Composite Simpson weights for ``n`` uniform samples.

    For an odd number of panels the last three are integrated with the 3/8
    rule, which keeps the composite rule exact for cubics on every grid
    parity.
    """
    if n < 2:
        raise ValueError("quadrature needs at least two samples")
    m = n - 1
    w = np.zeros(n)
    if m % 2 == 0:
        w[0] = w[-1] = 1.0
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        w *= dt / 3.0
    elif m == 1:
        w[:] = dt / 2.0
    elif m == 3:
        w[:] = np.array([1.0, 3.0, 3.0, 1.0]) * (3.0 * dt / 8.0)
    else:
        head = quadrature_weights(n - 3, dt)
        w[: n - 3] = head
        w[n - 4 :] += np.array([1.0, 3.0, 3.0, 1.0]) * (3.0 * dt / 8.0)
    return w


def integrate(s: SampledSignal) -> complex:
    """Integral of the signal over its grid interval (composite Simpson)."""
    w = quadrature_weights(s.grid.n, s.grid.dt)
    return complex(np.sum(w * s.values))


def _check_edge_decay(values: np.ndarray, what: str) -> None:
    peak = np.max(np.abs(values))
    if peak == 0.0:
        return
    edge = max(abs(values[0]), abs(values[-1]))
    if edge > EDGE_DECAY_TOL * peak:
        raise NumericsError(
            f"wraparound risk: {what} does not decay at the grid edges "
            f"(edge/peak = {edge / peak:.2e}, need < {EDGE_DECAY_TOL:.0e}); "
            "widen the grid or use the finite_difference method"
        )


def _spectral_derivative(s: SampledSignal, k: int) -> np.ndarray:
    _check_edge_decay(s.values, "signal")
    n = s.grid.n
    omega = 2.0j * np.pi * sfft.fftfreq(n, d=s.grid.dt)
    mult = omega**k
    if n % 2 == 0 and k % 2 == 1:
        mult[n // 2] = 0.0  # unmatched Nyquist bin
    spec = sfft.fft(s.values)
    spec[np.abs(spec) < SPECTRAL_NOISE_FLOOR * np.max(np.abs(spec))] = 0.0
    return sfft.ifft(spec * mult)


# Fourth-order first-derivative stencils: centered interior row plus
# one-sided rows for the two samples at each end.
_FD_INTERIOR = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_FD_EDGE0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
_FD_EDGE1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0


def _fd_first_derivative(values: np.ndarray, dt: float) -> np.ndarray:
    out = np.convolve(values, _FD_INTERIOR[::-1], mode="same")
    out[0] = _FD_EDGE0 @ values[:5]
    out[1] = _FD_EDGE1 @ values[:5]
    out[-1] = -(_FD_EDGE0 @ values[-5:][::-1])
    out[-2] = -(_FD_EDGE1 @ values[-5:][::-1])
    return out / dt


def derivative(s: SampledSignal, k: int, method: str = "spectral") -> SampledSignal:
    """k-th derivative of a sampled signal.

    Parameters
    ----------
    s : SampledSignal
    k : int
        Derivative order, ``k >= 1``.
    method : {"spectral", "finite_difference"}
        ``spectral`` differentiates through the frequency domain and requires
        the signal to be negligible at the grid edges; ``finite_difference``
        applies fourth-order stencils (one-sided at the boundary) and has no
        decay requirement.
    """
    k = int(k)
    if k < 1:
        raise ValueError(f"derivative order must be >= 1, got {k}")
    if method == "spectral":
        return s.with_values(_spectral_derivative(s, k))
    if method == "finite_difference":
        vals = s.values
        for _ in range(k):
            vals = _fd_first_derivative(vals, s.grid.dt)
        return s.with_values(vals)
    raise ValueError(f"unknown differentiation method {method!r}")


def _require_same_grid(s1: SampledSignal, s2: SampledSignal) -> None:
    if s1.grid != s2.grid:
        raise ValueError("signals live on different grids")


def inner_product(s1: SampledSignal, s2: SampledSignal) -> complex:
    """L2 inner product: integral of s1 * conj(s2)."""
    _require_same_grid(s1, s2)
    w = quadrature_weights(s1.grid.n, s1.grid.dt)
    return complex(np.sum(w * s1.values * np.conj(s2.values)))


def energy(s: SampledSignal) -> float:
    """Integral of |s|^2 over the grid."""
    w = quadrature_weights(s.grid.n, s.grid.dt)
    return float(np.sum(w * np.abs(s.values) ** 2))


def norm_l2(s: SampledSignal) -> float:
    return math.sqrt(max(energy(s), 0.0))
