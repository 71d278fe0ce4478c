"""Comparison-function algebra: class-K and class-L representations.

Class-K functions (continuous, strictly increasing, zero at zero) are stored
as piecewise-linear interpolants with a linear tail; class-L functions
(continuous, strictly decreasing to zero) as piecewise-linear interpolants
with an exponential tail. Addition, scaling, composition, pointwise maxima,
and inversion are all exact on these representations, which is enough to
express the gain constructions used by the stability testers and the
trajectory-envelope builder.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

EPS_SLOPE = 1e-9

__all__ = [
    "EPS_SLOPE",
    "CompFn",
    "DecayFn",
    "DomainError",
    "add",
    "asymptotic_gain_from_limit",
    "compose",
    "envelope_overshoot_and_gain",
    "fit_k_upper",
    "identity",
    "linear",
    "piecewise_record",
    "pointwise_max",
    "scale_input",
    "scale_output",
]


class DomainError(ValueError):
    """Argument outside the domain of a comparison function."""


def _clean_points(points, what):
    pts = tuple((float(r), float(v)) for r, v in points)
    if not pts:
        raise ValueError(f"{what} needs at least one breakpoint")
    return pts


@dataclass(frozen=True)
class CompFn:
    """Class-K function: strictly increasing, f(0) = 0, piecewise linear.

    ``breakpoints`` is an ordered tuple of (r, value) pairs starting at
    (0, 0); beyond the last breakpoint the function continues linearly with
    slope ``tail_slope`` > 0, so the range is all of [0, inf).
    """

    breakpoints: tuple[tuple[float, float], ...]
    tail_slope: float = 1.0

    def __post_init__(self):
        pts = _clean_points(self.breakpoints, "CompFn")
        object.__setattr__(self, "breakpoints", pts)
        if pts[0] != (0.0, 0.0):
            raise ValueError("CompFn must start at the breakpoint (0, 0)")
        rs = tuple(r for r, _ in pts)
        vs = tuple(v for _, v in pts)
        if any(b <= a for a, b in zip(rs, rs[1:])):
            raise ValueError("CompFn abscissae must be strictly increasing")
        if any(b <= a for a, b in zip(vs, vs[1:])):
            raise ValueError("CompFn values must be strictly increasing")
        if not self.tail_slope > 0.0:
            raise ValueError("CompFn tail_slope must be positive")
        if not all(map(math.isfinite, rs + vs)) or not math.isfinite(self.tail_slope):
            raise ValueError("CompFn breakpoints must be finite")
        object.__setattr__(self, "_rs", rs)
        object.__setattr__(self, "_vs", vs)

    def __call__(self, r: float) -> float:
        r = float(r)
        if r < 0.0:
            raise DomainError(f"class-K argument must be nonnegative, got {r}")
        rs, vs = self._rs, self._vs
        if r >= rs[-1]:
            return vs[-1] + self.tail_slope * (r - rs[-1])
        i = bisect.bisect_right(rs, r) - 1
        r0, r1 = rs[i], rs[i + 1]
        v0, v1 = vs[i], vs[i + 1]
        return v0 + (v1 - v0) * (r - r0) / (r1 - r0)

    def inverse(self, y: float) -> float:
        """Unique r with f(r) = y; exact on segments, analytic on the tail."""
        y = float(y)
        if y < 0.0:
            raise DomainError(f"class-K values are nonnegative, got {y}")
        rs, vs = self._rs, self._vs
        if y >= vs[-1]:
            return rs[-1] + (y - vs[-1]) / self.tail_slope
        i = bisect.bisect_right(vs, y) - 1
        r0, r1 = rs[i], rs[i + 1]
        v0, v1 = vs[i], vs[i + 1]
        return r0 + (r1 - r0) * (y - v0) / (v1 - v0)


@dataclass(frozen=True)
class DecayFn:
    """Class-L function: strictly decreasing to zero.

    Piecewise linear on [0, t_last], then ``v_last * exp(-tail_rate*(t -
    t_last))``. Breakpoint values must stay positive so that strict decrease
    and the zero limit hold everywhere.
    """

    breakpoints: tuple[tuple[float, float], ...]
    tail_rate: float = 1.0

    def __post_init__(self):
        pts = _clean_points(self.breakpoints, "DecayFn")
        object.__setattr__(self, "breakpoints", pts)
        ts = tuple(t for t, _ in pts)
        vs = tuple(v for _, v in pts)
        if ts[0] != 0.0:
            raise ValueError("DecayFn domain starts at t = 0")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("DecayFn abscissae must be strictly increasing")
        if any(b >= a for a, b in zip(vs, vs[1:])):
            raise ValueError("DecayFn values must be strictly decreasing")
        if any(v <= 0.0 for v in vs):
            raise ValueError("DecayFn values must be positive")
        if not self.tail_rate > 0.0:
            raise ValueError("DecayFn tail_rate must be positive")
        object.__setattr__(self, "_ts", ts)
        object.__setattr__(self, "_vs", vs)

    def __call__(self, t: float) -> float:
        t = float(t)
        if t < 0.0:
            raise DomainError(f"class-L argument must be nonnegative, got {t}")
        ts, vs = self._ts, self._vs
        if t >= ts[-1]:
            return vs[-1] * math.exp(-self.tail_rate * (t - ts[-1]))
        i = bisect.bisect_right(ts, t) - 1
        t0, t1 = ts[i], ts[i + 1]
        v0, v1 = vs[i], vs[i + 1]
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0)


def identity() -> CompFn:
    return CompFn(((0.0, 0.0), (1.0, 1.0)), 1.0)


def linear(slope: float) -> CompFn:
    if not slope > 0.0:
        raise ValueError("linear gain needs a positive slope")
    return CompFn(((0.0, 0.0), (1.0, float(slope))), float(slope))


def scale_output(f: CompFn, c: float) -> CompFn:
    """r -> c * f(r) for c > 0."""
    if not c > 0.0:
        raise ValueError("scale factor must be positive")
    return CompFn(tuple((r, c * v) for r, v in f.breakpoints), c * f.tail_slope)


def scale_input(f: CompFn, c: float) -> CompFn:
    """r -> f(c * r) for c > 0."""
    if not c > 0.0:
        raise ValueError("scale factor must be positive")
    return CompFn(tuple((r / c, v) for r, v in f.breakpoints), c * f.tail_slope)


def _dedupe(rs):
    out = []
    for r in sorted(rs):
        if not out or r > out[-1] + 1e-12 * max(1.0, abs(out[-1])):
            out.append(r)
    return out


def _from_grid(grid, fn, tail_slope) -> CompFn:
    pts = [(0.0, 0.0)]
    for r in grid:
        if r <= 0.0:
            continue
        v = fn(r)
        if v > pts[-1][1]:
            pts.append((r, v))
    return CompFn(tuple(pts), tail_slope)


def add(f: CompFn, g: CompFn) -> CompFn:
    """Pointwise sum, exact on the union of breakpoint grids."""
    grid = _dedupe([r for r, _ in f.breakpoints] + [r for r, _ in g.breakpoints])
    return _from_grid(grid, lambda r: f(r) + g(r), f.tail_slope + g.tail_slope)


def pointwise_max(f: CompFn, g: CompFn) -> CompFn:
    """Pointwise maximum, exact: union grid plus segment/tail crossings."""
    base = _dedupe([r for r, _ in f.breakpoints] + [r for r, _ in g.breakpoints])
    extra = []
    for a, b in zip(base, base[1:]):
        d0 = f(a) - g(a)
        d1 = f(b) - g(b)
        if d0 * d1 < 0.0:
            extra.append(a + (b - a) * d0 / (d0 - d1))
    last = base[-1]
    dv = f(last) - g(last)
    ds = f.tail_slope - g.tail_slope
    if dv * ds < 0.0:
        cross = last - dv / ds
        if cross > last:
            extra.append(cross)
    grid = _dedupe(base + extra)
    return _from_grid(grid, lambda r: max(f(r), g(r)), max(f.tail_slope, g.tail_slope))


def compose(outer: CompFn, inner: CompFn) -> CompFn:
    """outer(inner(r)), exact: grid joins inner breakpoints with preimages of
    outer breakpoints, so each cell maps into a single linear piece."""
    rs = [r for r, _ in inner.breakpoints]
    rs += [inner.inverse(rb) for rb, _ in outer.breakpoints]
    grid = _dedupe(rs)
    return _from_grid(grid, lambda r: outer(inner(r)), outer.tail_slope * inner.tail_slope)


def asymptotic_gain_from_limit(
    sigma_ugs: CompFn, gamma_ugs: CompFn, gamma_limit: CompFn | None
) -> CompFn:
    """Gain under which a uniformly globally stable system with the weak
    limit property satisfies the eventual asymptotic-gain bound:
    r -> sigma_ugs(2*gamma_limit(r)) + gamma_ugs(r).

    ``gamma_limit=None`` stands for the zero gain, collapsing the first term.
    """
    if gamma_limit is None:
        return gamma_ugs
    return add(compose(sigma_ugs, scale_output(gamma_limit, 2.0)), gamma_ugs)


def envelope_overshoot_and_gain(
    sigma_ugs: CompFn, gamma_ugs: CompFn, gamma_ag: CompFn | None
) -> tuple[CompFn, CompFn]:
    """Overshoot bound and gain used by the trajectory-envelope construction:
    (2*sigma_ugs, max(gamma_ugs, gamma_ag)). ``gamma_ag=None`` is the zero gain.
    """
    sigma = scale_output(sigma_ugs, 2.0)
    gamma = gamma_ugs if gamma_ag is None else pointwise_max(gamma_ugs, gamma_ag)
    return sigma, gamma


def fit_k_upper(samples, eps_slope: float = EPS_SLOPE) -> CompFn:
    """Minimal nondecreasing piecewise-linear majorant of (r, y) samples,
    anchored at (0, 0) and lifted to strict increase by adding eps_slope*r.

    The running maximum of y over increasing r gives the flat majorant; the
    eps_slope lift restores the strict monotonicity class-K requires.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("fit_k_upper needs at least one sample")
    by_r: dict[float, float] = {}
    for r, y in samples:
        r, y = float(r), float(y)
        if r < 0.0 or y < 0.0:
            raise DomainError("samples must lie in the nonnegative quadrant")
        by_r[r] = max(by_r.get(r, 0.0), y)
    if by_r.get(0.0, 0.0) > 0.0:
        raise ValueError("no class-K function can majorize a positive value at r = 0")
    pts = [(0.0, 0.0)]
    running = 0.0
    for r in sorted(by_r):
        if r == 0.0:
            continue
        running = max(running, by_r[r])
        pts.append((r, running + eps_slope * r))
    return CompFn(tuple(pts), eps_slope if len(pts) > 1 else max(eps_slope, 1e-30))


def piecewise_record(fn: CompFn | DecayFn, name: str) -> list[str]:
    """Plain-text record: one comment line with name and tail rule, a column
    header, then one ``r,value`` row per breakpoint."""
    if isinstance(fn, CompFn):
        tail = f"slope:{fn.tail_slope!r}"
        kind = "CompFn"
    else:
        tail = f"exp:{fn.tail_rate!r}"
        kind = "DecayFn"
    lines = [f"# name={name} kind={kind} tail={tail}", "r,value"]
    lines += [f"{r!r},{v!r}" for r, v in fn.breakpoints]
    return lines
