"""Sampled input signals on a uniform grid with analytic tails.

A signal u: [0, inf) -> R^m is stored as window samples u(k*dt) plus a tail
descriptor giving u(t) in closed form beyond the window. Between samples the
signal is read as piecewise linear, and L^p norms are composite-trapezoid
quadratures over the window plus closed-form tail integrals, so the norm
covers the whole half line. Tails are what make asymptotic membership
statements (finite L^p norm, divergence of a modulation integral, eventual
exponential decay) hold by construction instead of by truncation.

Time shifts and concatenations are restricted to grid multiples and are
exact: shifting drops leading samples and re-anchors the tail, so no
interpolation error enters the cocycle or causality bookkeeping downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ALPHA_DIVERGENT",
    "EVENTUALLY_EXP",
    "FULL_LP",
    "LINFTY0",
    "AlphaSpec",
    "ConstTail",
    "ExpDecayTail",
    "GridAlignmentError",
    "InputSpaceSpec",
    "PairTail",
    "PowerDecayTail",
    "Signal",
    "ZeroTail",
    "add_signals",
    "alpha_divergence_certified",
    "concat",
    "constant_signal",
    "grid_samples",
    "grid_steps",
    "lp_norm",
    "make_alpha_divergent",
    "make_eventually_exp_decaying",
    "merge_tails",
    "shift",
    "signal_from_csv",
    "signal_to_csv",
    "suffix_lp_norms",
    "window_samples",
    "zero_signal",
]

_trapz = getattr(np, "trapezoid", None) or np.trapz


class GridAlignmentError(ValueError):
    """A time argument is not an integer multiple of the grid step."""


def grid_steps(tau: float, dt: float) -> int:
    """Number of grid cells in tau, rejecting non-multiples (no resampling)."""
    if tau < 0.0:
        raise GridAlignmentError(f"time must be nonnegative, got {tau}")
    k = round(tau / dt)
    if abs(tau - k * dt) > 1e-9 * max(dt, abs(tau)):
        raise GridAlignmentError(f"{tau} is not a multiple of the grid step {dt}")
    return int(k)


# --- tail descriptors ------------------------------------------------------


@dataclass(frozen=True)
class ZeroTail:
    def values(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))

    def shifted(self, tau):
        return self

    def delayed(self, tau):
        return self

    def sup_from(self, t0):
        return 0.0

    def lp_integral_from(self, t0, p):
        return 0.0


@dataclass(frozen=True)
class ConstTail:
    """u(t) = coeff beyond the window; infinite L^p mass for p < inf."""

    coeff: float

    def values(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.coeff)

    def shifted(self, tau):
        return self

    def delayed(self, tau):
        return self

    def sup_from(self, t0):
        return abs(self.coeff)

    def lp_integral_from(self, t0, p):
        return math.inf if self.coeff != 0.0 else 0.0


@dataclass(frozen=True)
class ExpDecayTail:
    """u(t) = coeff * exp(-rate*(t - anchor)) beyond the window."""

    coeff: float
    rate: float
    anchor: float = 0.0

    def __post_init__(self):
        if not self.rate > 0.0:
            raise ValueError("exponential tail rate must be positive")

    def values(self, t):
        t = np.asarray(t, dtype=float)
        return self.coeff * np.exp(-self.rate * (t - self.anchor))

    def shifted(self, tau):
        anchor = self.anchor - tau
        if anchor < 0.0:
            return ExpDecayTail(self.coeff * math.exp(self.rate * anchor), self.rate, 0.0)
        return ExpDecayTail(self.coeff, self.rate, anchor)

    def delayed(self, tau):
        return ExpDecayTail(self.coeff, self.rate, self.anchor + tau)

    def sup_from(self, t0):
        return abs(float(self.values(t0)))

    def lp_integral_from(self, t0, p):
        a = abs(float(self.values(t0)))
        return a**p / (p * self.rate)


@dataclass(frozen=True)
class PowerDecayTail:
    """u(t) = coeff * (t + offset)^(-exponent) beyond the window."""

    coeff: float
    exponent: float
    offset: float = 0.0

    def __post_init__(self):
        if not self.exponent > 0.0:
            raise ValueError("power tail exponent must be positive")

    def values(self, t):
        t = np.asarray(t, dtype=float)
        return self.coeff * (t + self.offset) ** (-self.exponent)

    def shifted(self, tau):
        return PowerDecayTail(self.coeff, self.exponent, self.offset + tau)

    def delayed(self, tau):
        return PowerDecayTail(self.coeff, self.exponent, self.offset - tau)

    def sup_from(self, t0):
        if t0 + self.offset <= 0.0:
            raise ValueError("power tail evaluated at or before its singularity")
        return abs(float(self.values(t0)))

    def lp_integral_from(self, t0, p):
        pe = p * self.exponent
        if pe <= 1.0:
            return math.inf if self.coeff != 0.0 else 0.0
        base = t0 + self.offset
        if base <= 0.0:
            raise ValueError("power tail evaluated at or before its singularity")
        return abs(self.coeff) ** p * base ** (1.0 - pe) / (pe - 1.0)


def _cross_l2(a, b, t0) -> float:
    """Closed-form integral of a(t)*b(t) over [t0, inf) for supported pairs."""
    if isinstance(a, ZeroTail) or isinstance(b, ZeroTail):
        return 0.0
    if isinstance(a, ExpDecayTail) and isinstance(b, ExpDecayTail):
        va = float(a.values(t0))
        vb = float(b.values(t0))
        return va * vb / (a.rate + b.rate)
    if isinstance(a, PowerDecayTail) and isinstance(b, PowerDecayTail):
        if a.exponent == 1.0 and b.exponent == 1.0:
            oa, ob = a.offset, b.offset
            if oa == ob:
                return a.coeff * b.coeff / (t0 + oa)
            return a.coeff * b.coeff * math.log((t0 + ob) / (t0 + oa)) / (ob - oa)
    raise NotImplementedError(
        f"no closed-form cross term for tail pair {type(a).__name__}/{type(b).__name__}"
    )


@dataclass(frozen=True)
class PairTail:
    """Sum of two elementary tails; arises when two states are superposed."""

    parts: tuple

    def values(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for part in self.parts:
            out = out + part.values(t)
        return out

    def shifted(self, tau):
        return PairTail(tuple(p.shifted(tau) for p in self.parts))

    def delayed(self, tau):
        return PairTail(tuple(p.delayed(tau) for p in self.parts))

    def sup_from(self, t0):
        raise NotImplementedError("sup-norm of a superposed tail is not supported")

    def lp_integral_from(self, t0, p):
        if p != 2.0:
            raise NotImplementedError("superposed tails only support L^2 mass")
        own = sum(part.lp_integral_from(t0, 2.0) for part in self.parts)
        if math.isinf(own):
            return math.inf
        cross = 0.0
        for i, a in enumerate(self.parts):
            for b in self.parts[i + 1 :]:
                cross += _cross_l2(a, b, t0)
        return own + 2.0 * cross


def merge_tails(a, b):
    """Exact sum of two tails when the family is closed; PairTail otherwise."""
    if isinstance(a, ZeroTail):
        return b
    if isinstance(b, ZeroTail):
        return a
    if isinstance(a, ConstTail) and isinstance(b, ConstTail):
        return ConstTail(a.coeff + b.coeff)
    if isinstance(a, ExpDecayTail) and isinstance(b, ExpDecayTail) and a.rate == b.rate:
        anchor = max(a.anchor, b.anchor)
        coeff = a.coeff * math.exp(-a.rate * (anchor - a.anchor)) + b.coeff * math.exp(
            -b.rate * (anchor - b.anchor)
        )
        return ExpDecayTail(coeff, a.rate, anchor)
    if (
        isinstance(a, PowerDecayTail)
        and isinstance(b, PowerDecayTail)
        and a.exponent == b.exponent
        and a.offset == b.offset
    ):
        return PowerDecayTail(a.coeff + b.coeff, a.exponent, a.offset)
    parts = (a.parts if isinstance(a, PairTail) else (a,)) + (
        b.parts if isinstance(b, PairTail) else (b,)
    )
    return PairTail(parts)


# --- the signal itself -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class Signal:
    """Grid samples plus tail; immutable. values has shape (n, m)."""

    dt: float
    values: np.ndarray
    tail: object = ZeroTail()

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim == 1:
            vals = vals[:, None]
        if vals.ndim != 2 or vals.shape[0] < 1:
            raise ValueError("signal window must be a nonempty (n, m) array")
        if not np.all(np.isfinite(vals)):
            raise ValueError("signal values must be finite")
        if not self.dt > 0.0:
            raise ValueError("grid step must be positive")
        if vals.shape[1] != 1 and not isinstance(self.tail, ZeroTail):
            raise ValueError("analytic tails are only supported for scalar signals")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    @property
    def window_end(self) -> float:
        return (self.n - 1) * self.dt

    def times(self) -> np.ndarray:
        return np.arange(self.n) * self.dt

    def value_at(self, k: int) -> np.ndarray:
        if k < self.n:
            return self.values[k]
        if isinstance(self.tail, ZeroTail):
            return np.zeros(self.m)
        return np.atleast_1d(self.tail.values(k * self.dt))

    def value_at_time(self, t: float) -> np.ndarray:
        """Piecewise-linear read inside the window, tail formula beyond."""
        if t < 0.0:
            raise ValueError("signals live on the nonnegative half line")
        end = self.window_end
        if t >= end:
            if t <= end + 1e-12 * max(1.0, end):
                return self.values[self.n - 1]
            if isinstance(self.tail, ZeroTail):
                return np.zeros(self.m)
            return np.atleast_1d(self.tail.values(t))
        pos = t / self.dt
        k = min(int(math.floor(pos)), self.n - 2)
        w = pos - k
        return (1.0 - w) * self.values[k] + w * self.values[k + 1]

    def sample_norms(self) -> np.ndarray:
        return np.linalg.norm(self.values, axis=1)


def grid_samples(u: Signal, n: int) -> np.ndarray:
    """Values of u at the first n grid points, sampling the tail beyond."""
    if n <= u.n:
        return u.values[:n]
    if isinstance(u.tail, ZeroTail):
        extra = np.zeros((n - u.n, u.m))
    else:
        extra = np.atleast_2d(u.tail.values(np.arange(u.n, n) * u.dt)).T
    return np.vstack([u.values, extra])


def window_samples(u: Signal, k: int) -> np.ndarray:
    """Scalar samples u_0..u_k (inclusive) for a scalar signal."""
    if u.m != 1:
        raise ValueError("window_samples needs a scalar signal")
    return grid_samples(u, k + 1)[:, 0]


def lp_norm(u: Signal, p) -> float:
    """L^p norm on [0, inf): trapezoid window quadrature plus tail integral.

    For p = inf the window maximum is combined with the tail supremum.
    """
    p = float(p)
    if not (p >= 1.0 or math.isinf(p)):
        raise ValueError("norm exponent must be in [1, inf]")
    norms = u.sample_norms()
    if math.isinf(p):
        return max(float(norms.max()), u.tail.sup_from(u.window_end))
    window = float(_trapz(norms**p, dx=u.dt)) if u.n > 1 else 0.0
    tail = u.tail.lp_integral_from(u.window_end, p)
    if math.isinf(tail):
        return math.inf
    return (window + tail) ** (1.0 / p)


def suffix_lp_norms(u: Signal, p) -> np.ndarray:
    """lp_norm(shift(u, k*dt), p) for k = 0..n-1, via right-to-left cell sums."""
    p = float(p)
    norms = u.sample_norms()
    if math.isinf(p):
        sups = np.maximum.accumulate(norms[::-1])[::-1]
        return np.maximum(sups, u.tail.sup_from(u.window_end))
    cells = 0.5 * u.dt * (norms[:-1] ** p + norms[1:] ** p)
    suffix = np.concatenate([np.cumsum(cells[::-1])[::-1], [0.0]])
    tail = u.tail.lp_integral_from(u.window_end, p)
    return (suffix + tail) ** (1.0 / p)


def shift(u: Signal, tau: float) -> Signal:
    """Left shift u(. + tau); tau must be a grid multiple (exact, no resampling)."""
    k = grid_steps(tau, u.dt)
    if k == 0:
        return u
    if k < u.n:
        return Signal(u.dt, u.values[k:], u.tail.shifted(k * u.dt))
    tau = k * u.dt
    if isinstance(u.tail, ZeroTail):
        return Signal(u.dt, np.zeros((2, u.m)), ZeroTail())
    window = u.tail.values(tau + np.arange(2) * u.dt)
    return Signal(u.dt, np.atleast_2d(window).T, u.tail.shifted(tau))


def concat(u1: Signal, u2: Signal, tau: float) -> Signal:
    """u1 on [0, tau), then u2(. - tau); the tail comes from u2."""
    if abs(u1.dt - u2.dt) > 1e-12 * u1.dt:
        raise ValueError("concatenation needs matching grid steps")
    if u1.m != u2.m:
        raise ValueError("concatenation needs matching value dimensions")
    k = grid_steps(tau, u1.dt)
    if k == 0:
        return u2
    head = grid_samples(u1, k)
    return Signal(u1.dt, np.vstack([head, u2.values]), u2.tail.delayed(k * u1.dt))


def add_signals(f: Signal, g: Signal) -> Signal:
    """Pointwise sum of two scalar states on the same grid."""
    if abs(f.dt - g.dt) > 1e-12 * f.dt or f.m != g.m:
        raise ValueError("states must share grid step and dimension")
    n = max(f.n, g.n)
    return Signal(f.dt, grid_samples(f, n) + grid_samples(g, n), merge_tails(f.tail, g.tail))


def zero_signal(dt: float, m: int = 1) -> Signal:
    return Signal(dt, np.zeros((2, m)), ZeroTail())


def constant_signal(dt: float, level: float) -> Signal:
    """u identically equal to `level` (constant tail beyond a 2-sample window)."""
    return Signal(dt, np.full((2, 1), float(level)), ConstTail(float(level)))


# --- modulation profiles and input-space membership ------------------------


@dataclass(frozen=True)
class AlphaSpec:
    """Scalar modulation profile alpha(r) = offset + scale*|r|^power, or a
    tabulated piecewise-linear profile in |r| (constant beyond the table)."""

    offset: float = 0.0
    power: float = 1.0
    scale: float = 1.0
    table: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if self.table is not None:
            pts = tuple((float(r), float(v)) for r, v in self.table)
            if any(v < 0.0 for _, v in pts):
                raise ValueError("alpha must be nonnegative")
            if any(b <= a for (a, _), (b, _) in zip(pts, pts[1:])):
                raise ValueError("alpha table abscissae must increase")
            object.__setattr__(self, "table", pts)
        else:
            if self.offset < 0.0 or self.scale < 0.0 or self.power <= 0.0:
                raise ValueError("alpha needs offset, scale >= 0 and power > 0")

    def __call__(self, r):
        a = np.abs(np.asarray(r, dtype=float))
        if self.table is not None:
            xs = [x for x, _ in self.table]
            ys = [y for _, y in self.table]
            out = np.interp(a, xs, ys)
        else:
            out = self.offset + self.scale * a**self.power
        return float(out) if np.isscalar(r) or np.ndim(r) == 0 else out

    @property
    def zero_value(self) -> float:
        return self(0.0)

    @property
    def is_pure_power(self) -> bool:
        return self.table is None and self.offset == 0.0 and self.scale > 0.0


FULL_LP = "full_lp"
ALPHA_DIVERGENT = "alpha_divergent"
EVENTUALLY_EXP = "eventually_exp_decaying"
LINFTY0 = "linfty0"
_CONSTRAINTS = (FULL_LP, ALPHA_DIVERGENT, EVENTUALLY_EXP, LINFTY0)


@dataclass(frozen=True)
class InputSpaceSpec:
    """Which admissible-input family a system runs on, with its norm exponent."""

    p: float
    constraint: str = FULL_LP
    alpha: AlphaSpec | None = None

    def __post_init__(self):
        p = float(self.p)
        object.__setattr__(self, "p", p)
        if not (p >= 1.0 or math.isinf(p)):
            raise ValueError("norm exponent must be in [1, inf]")
        if self.constraint not in _CONSTRAINTS:
            raise ValueError(f"unknown input-space constraint {self.constraint!r}")
        if self.constraint == LINFTY0 and not math.isinf(p):
            raise ValueError("the vanishing-shift space requires the sup norm")
        if self.constraint == ALPHA_DIVERGENT and self.alpha is None:
            raise ValueError("a divergence constraint needs its alpha profile")

    def contains(self, u: Signal) -> bool:
        """Constructive membership via the tail rules (sufficient, not exhaustive)."""
        if self.constraint == FULL_LP:
            return not math.isinf(lp_norm(u, self.p))
        if self.constraint == ALPHA_DIVERGENT:
            return alpha_divergence_certified(u, self.p, self.alpha)
        if self.constraint == EVENTUALLY_EXP:
            return isinstance(u.tail, (ZeroTail, ExpDecayTail))
        sup_ok = isinstance(u.tail, (ZeroTail, ExpDecayTail, PowerDecayTail))
        return sup_ok and not math.isinf(lp_norm(u, self.p))


def alpha_divergence_certified(u: Signal, p, alpha: AlphaSpec) -> bool:
    """True when the tail family certifies both finite L^p norm and a
    divergent integral of alpha(u(.)) on the half line."""
    if math.isinf(lp_norm(u, p)):
        return False
    if alpha.table is None and alpha.offset > 0.0:
        return True  # alpha bounded below by a positive constant
    if not alpha.is_pure_power:
        return False
    q = alpha.power
    tail = u.tail
    if isinstance(tail, ConstTail):
        return math.isinf(float(p)) and alpha(tail.coeff) > 0.0
    if isinstance(tail, PowerDecayTail):
        return tail.coeff != 0.0 and q * tail.exponent <= 1.0
    return False


def make_alpha_divergent(p, alpha: AlphaSpec, amplitude: float, dt: float = 0.01) -> Signal:
    """A certified member of the divergent-dilation family: finite L^p norm
    but infinite integral of alpha(u(.)).

    For p < inf and alpha(r) = scale*|r|^q with q < p, the window ramps from
    0 up to `amplitude` on [0, 1] and the tail decays like t^(-e) with
    e = (1/p + 1/q)/2, so p*e > 1 (finite norm) and q*e < 1 (divergence).
    For p = inf the constant signal u = amplitude is returned. Requests
    outside this certified family are refused.
    """
    if not amplitude > 0.0:
        raise ValueError("amplitude must be positive")
    p = float(p)
    if math.isinf(p):
        if alpha(amplitude) <= 0.0:
            raise ValueError("constant member needs alpha(amplitude) > 0")
        return constant_signal(dt, amplitude)
    if not alpha.is_pure_power:
        raise ValueError("certified family needs alpha(r) = scale*|r|^q")
    q = alpha.power
    if q >= p:
        raise ValueError(
            f"no certified tail exponent exists for q = {q} >= p = {p}"
        )
    e = 0.5 * (1.0 / p + 1.0 / q)
    k1 = grid_steps(1.0, dt)
    t = np.arange(k1 + 1) * dt
    window = amplitude * np.clip(t / 0.5, 0.0, 1.0)
    return Signal(dt, window, PowerDecayTail(amplitude, e, 0.0))


def make_eventually_exp_decaying(
    window_values, dt: float, coeff: float, rate: float
) -> Signal:
    """Signal with an exponential tail |u(t)| = coeff*exp(-rate*(t - t_end))."""
    if not rate > 0.0:
        raise ValueError("decay rate must be positive")
    if coeff < 0.0:
        raise ValueError("tail coefficient must be nonnegative")
    vals = np.asarray(window_values, dtype=float)
    if coeff == 0.0:
        return Signal(dt, vals, ZeroTail())
    anchor = (vals.shape[0] - 1) * dt
    return Signal(dt, vals, ExpDecayTail(coeff, rate, anchor))


# --- CSV import/export -----------------------------------------------------


def _tail_descriptor(tail) -> str:
    if isinstance(tail, ZeroTail):
        return "zero"
    if isinstance(tail, ConstTail):
        return f"const:{tail.coeff!r}"
    if isinstance(tail, ExpDecayTail):
        return f"exp:{tail.coeff!r}:{tail.rate!r}:{tail.anchor!r}"
    if isinstance(tail, PowerDecayTail):
        return f"power:{tail.coeff!r}:{tail.exponent!r}:{tail.offset!r}"
    raise ValueError(f"cannot serialize tail {tail!r}")


def _tail_from_descriptor(text: str):
    kind, _, rest = text.partition(":")
    args = [float(x) for x in rest.split(":")] if rest else []
    if kind == "zero":
        return ZeroTail()
    if kind == "const":
        return ConstTail(*args)
    if kind == "exp":
        return ExpDecayTail(*args)
    if kind == "power":
        return PowerDecayTail(*args)
    raise ValueError(f"unknown tail descriptor {text!r}")


def signal_to_csv(u: Signal, path) -> None:
    header = ",".join(["t"] + [f"u_{j + 1}" for j in range(u.m)])
    lines = [f"# dt={u.dt!r} m={u.m} tail={_tail_descriptor(u.tail)}", header]
    for k in range(u.n):
        row = [repr(k * u.dt)] + [repr(float(x)) for x in u.values[k]]
        lines.append(",".join(row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def signal_from_csv(path) -> Signal:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    meta = dict(item.split("=", 1) for item in lines[0].lstrip("# ").split())
    dt = float(meta["dt"])
    tail = _tail_from_descriptor(meta["tail"])
    rows = [[float(x) for x in ln.split(",")[1:]] for ln in lines[2:]]
    return Signal(dt, np.asarray(rows), tail)
