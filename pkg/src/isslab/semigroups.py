"""Concrete contraction-semigroup realizations and the input convolution.

Two families are provided. A diagonal operator on a truncated sequence
space covers the modulated and semilinear systems; the left-translation
operator on a gridded half-line L^2 covers the kernel-driven linear system.
Translation states reuse the Signal representation (window plus analytic
tail), so the shift is an exact index drop and the L^2 norm includes the
tail contribution in closed form.

The input convolution integral is evaluated by composite trapezoid
quadrature per spatial cell. Beyond the state window the convolved state is
represented by a power tail with coefficient (integral of u) * (kernel tail
coefficient) and offset bumped by t/2; this is asymptotically exact in the
spatial variable and second-order accurate at the window edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .signals import (
    ConstTail,
    PowerDecayTail,
    Signal,
    ZeroTail,
    constant_signal,
    grid_steps,
    lp_norm,
    shift,
    window_samples,
)

__all__ = [
    "DiagonalSemigroup",
    "Kernel",
    "TranslationSemigroup",
    "apply_diagonal",
    "apply_translation",
    "duhamel_translation",
    "growth_norm",
]

_trapz = getattr(np, "trapezoid", None) or np.trapz


@dataclass(frozen=True, eq=False)
class DiagonalSemigroup:
    """Diagonal generator on a truncated sequence space; all eigenvalues <= 0."""

    eigenvalues: np.ndarray

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float).reshape(-1)
        if ev.size == 0 or not np.all(np.isfinite(ev)):
            raise ValueError("eigenvalues must be a nonempty finite vector")
        if np.any(ev > 0.0):
            raise ValueError("contraction semigroup needs eigenvalues <= 0")
        ev = ev.copy()
        ev.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    @staticmethod
    def harmonic(n: int) -> "DiagonalSemigroup":
        """Eigenvalues -1/k: every orbit decays, but with no uniform rate."""
        return DiagonalSemigroup(-1.0 / np.arange(1, n + 1))


def apply_diagonal(sg: DiagonalSemigroup, v: float, x: np.ndarray) -> np.ndarray:
    """Componentwise exp(lambda_k * v) * x_k for elapsed parameter v >= 0."""
    if v < 0.0:
        raise ValueError(f"semigroup parameter must be nonnegative, got {v}")
    x = np.asarray(x, dtype=float)
    if x.shape != (sg.dim,):
        raise ValueError(f"state must have shape ({sg.dim},)")
    return np.exp(sg.eigenvalues * v) * x


@dataclass(frozen=True)
class TranslationSemigroup:
    """Left translation on gridded L^2 of the half line: (T_t f) = f(. + t)."""

    dzeta: float
    window: float

    def __post_init__(self):
        if not (self.dzeta > 0.0 and self.window > 0.0):
            raise ValueError("grid step and window length must be positive")
        grid_steps(self.window, self.dzeta)

    @property
    def points(self) -> int:
        return grid_steps(self.window, self.dzeta) + 1

    def grid(self) -> np.ndarray:
        return np.arange(self.points) * self.dzeta

    def state(self, values, tail=ZeroTail()) -> Signal:
        vals = np.asarray(values, dtype=float)
        if vals.shape[0] != self.points:
            raise ValueError(f"state window needs {self.points} grid values")
        return Signal(self.dzeta, vals, tail)


def apply_translation(sg: TranslationSemigroup, t: float, f: Signal) -> Signal:
    """Exact left shift by t (a grid multiple); the L^2 norm never grows."""
    if abs(f.dt - sg.dzeta) > 1e-12 * sg.dzeta:
        raise ValueError("state grid does not match the semigroup grid")
    return shift(f, t)


@dataclass(frozen=True, eq=False)
class Kernel:
    """Input direction b for the rank-one operator v -> v*b on the half line.

    b must be nonnegative with finite L^2 norm, and certifiably outside L^1:
    the tail must be a constant or a power t^(-e) with e <= 1. The bounded
    rank-one input operator is then admissible by construction while the
    response to persistent inputs grows without bound.
    """

    profile: Signal

    def __post_init__(self):
        b = self.profile
        if b.m != 1:
            raise ValueError("kernel profile must be scalar")
        if np.any(b.values < 0.0):
            raise ValueError("kernel must be nonnegative")
        if math.isinf(lp_norm(b, 2.0)):
            raise ValueError("kernel must have finite L^2 norm")
        tail = b.tail
        diverges = (isinstance(tail, ConstTail) and tail.coeff > 0.0) or (
            isinstance(tail, PowerDecayTail) and tail.coeff > 0.0 and tail.exponent <= 1.0
        )
        if not diverges:
            raise ValueError("kernel tail does not certify a divergent L^1 mass")

    @staticmethod
    def reciprocal(dzeta: float, window: float) -> "Kernel":
        """b(z) = 1/z for z >= 1, else 0. The jump at z = 1 sits on the grid
        and carries the one-sided average 1/2, which keeps trapezoid
        quadratures of the crisp profile second-order accurate."""
        grid_steps(1.0, dzeta)
        z = np.arange(grid_steps(window, dzeta) + 1) * dzeta
        vals = np.where(z >= 1.0 - 1e-12, 1.0 / np.maximum(z, 1.0), 0.0)
        vals[np.argmin(np.abs(z - 1.0))] = 0.5
        return Kernel(Signal(dzeta, vals, PowerDecayTail(1.0, 1.0, 0.0)))


def _kernel_grid(kernel: Kernel, n: int) -> np.ndarray:
    """Kernel values on the first n grid points (tail formula beyond window)."""
    b = kernel.profile
    if n <= b.n:
        return b.values[:n, 0]
    extra = b.tail.values(np.arange(b.n, n) * b.dt)
    return np.concatenate([b.values[:, 0], extra])


def _convolution_tail(kernel: Kernel, u_integral: float, t: float):
    if u_integral == 0.0:
        return ZeroTail()
    tail = kernel.profile.tail
    if isinstance(tail, ConstTail):
        return ConstTail(tail.coeff * u_integral)
    return PowerDecayTail(tail.coeff * u_integral, tail.exponent, tail.offset + 0.5 * t)


def duhamel_translation(kernel: Kernel, u: Signal, t: float, extra: float = 0.0) -> Signal:
    """State reached from 0 at time t under input u: per spatial cell z the
    trapezoid quadrature of integral_0^t u(s) b(z + t - s) ds.

    `extra` widens the output window beyond the kernel window; exact values
    there let downstream shifts avoid the asymptotic tail model.
    """
    b = kernel.profile
    dz = b.dt
    if u.m != 1:
        raise ValueError("the kernel system takes scalar inputs")
    if abs(u.dt - dz) > 1e-12 * dz:
        raise ValueError("input grid must match the spatial grid")
    k = grid_steps(t, dz)
    n_out = b.n + grid_steps(extra, dz)
    if k == 0:
        return Signal(dz, np.zeros(n_out), ZeroTail())
    bg = _kernel_grid(kernel, n_out + k)
    wu = window_samples(u, k).copy()
    wu[0] *= 0.5
    wu[-1] *= 0.5
    wu *= dz
    vals = np.convolve(bg, wu)[k : k + n_out]
    return Signal(dz, vals, _convolution_tail(kernel, float(wu.sum()), k * dz))


def growth_norm(kernel: Kernel, tau: float) -> float:
    """L^2 norm of integral_0^tau b(. + s) ds, by nested quadrature.

    Monotone in tau because b >= 0; grows without bound exactly because the
    kernel mass is not integrable.
    """
    if tau == 0.0:
        return 0.0
    ones = constant_signal(kernel.profile.dt, 1.0)
    return lp_norm(duhamel_translation(kernel, ones, tau), 2.0)
