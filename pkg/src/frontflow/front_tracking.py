"""Extract front sets, front points, labels and signs from PDE snapshots,
plus the inner/outer preparedness diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pgl_sim import Field, energy_density, gradient
from .potential import Potential
from .stationary_fronts import build_front


@dataclass(frozen=True)
class FrontPoint:
    position: float
    transition: int   # lower well index of the crossing
    sign: int         # +1 if the well index increases left to right


@dataclass(frozen=True)
class TrackedFronts:
    intervals: tuple[tuple[float, float], ...]
    points: tuple[FrontPoint, ...]
    merging: bool          # some interval was ambiguous (collision in progress)
    d_min: float
    d_min_att: float       # min gap over front/anti-front (attractive) pairs
    d_min_rep: float       # min gap over same-sign (repulsive) pairs

    @property
    def count(self) -> int:
        return len(self.points)

    def positions(self) -> np.ndarray:
        return np.array([p.position for p in self.points])

    def well_path(self) -> tuple[int, ...]:
        if not self.points:
            return ()
        path = [self.points[0].transition + (0 if self.points[0].sign > 0 else 1)]
        for p in self.points:
            path.append(path[-1] + p.sign)
        return tuple(path)


def front_set(potential: Potential, f: Field, mu0: float | None = None) -> tuple[tuple[float, float], ...]:
    """Maximal intervals where dist(v, wells) >= mu0, merged within 3 eps."""
    mu = potential.mu0 if mu0 is None else mu0
    x = f.grid.x
    far = potential.dist_to_wells(f.values) >= mu
    if not np.any(far):
        return ()
    idx = np.flatnonzero(far)
    breaks = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate([[idx[0]], idx[breaks + 1]])
    ends = np.concatenate([idx[breaks], [idx[-1]]])
    raw = [(x[a], x[b]) for a, b in zip(starts, ends)]
    merged = [list(raw[0])]
    for lo, hi in raw[1:]:
        if lo - merged[-1][1] < 3 * f.eps:
            merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return tuple((float(a), float(b)) for a, b in merged)


def _nearest_well(potential: Potential, value: float) -> int:
    return int(np.argmin(np.abs(potential.well_positions() - value)))


def front_points(potential: Potential, f: Field, mu0: float | None = None) -> TrackedFronts:
    """Locate separator crossings inside each front-set interval.

    The transition label comes from the flanking well values; the sign from
    the slope at the crossing. Intervals whose flanks disagree with their
    crossings (no crossing, or several of the same separator) are flagged as
    merging and contribute no points.
    """
    intervals = front_set(potential, f, mu0)
    x = f.grid.x
    v = f.values
    h = f.grid.h
    pts: list[FrontPoint] = []
    merging = False
    for lo, hi in intervals:
        pad = 5 * f.eps
        a = np.searchsorted(x, lo - pad)
        b = np.searchsorted(x, hi + pad)
        a = max(a, 0)
        b = min(b, x.size)
        left = _nearest_well(potential, float(np.mean(v[max(a - 3, 0):a + 1])))
        right = _nearest_well(potential, float(np.mean(v[b - 1:min(b + 3, x.size)])))
        if left == right:
            merging = True  # even number of crossings collapsed together
            continue
        step = 1 if right > left else -1
        expected = list(range(left, right, step))
        found: list[FrontPoint] = []
        ok = True
        for w in expected:
            trans = min(w, w + step)
            z = potential.separators[trans]
            seg = v[a:b]
            cross = np.flatnonzero((seg[:-1] - z) * (seg[1:] - z) <= 0)
            cross = [c for c in cross if (seg[c + 1] - seg[c]) * step > 0]
            if len(cross) != 1:
                ok = False
                break
            c = cross[0] + a
            frac = (z - v[c]) / (v[c + 1] - v[c])
            found.append(FrontPoint(position=float(x[c] + frac * h),
                                    transition=trans, sign=step))
        if not ok:
            merging = True
            continue
        pts.extend(found)
    pts.sort(key=lambda p: p.position)

    half_span = (f.grid.x_max - f.grid.x_min) / 2
    d_min = d_att = d_rep = 2 * half_span
    if len(pts) >= 2:
        gaps = np.diff([p.position for p in pts])
        d_min = float(np.min(gaps))
        att = [g for g, p0, p1 in zip(gaps, pts[:-1], pts[1:]) if p0.sign != p1.sign]
        rep = [g for g, p0, p1 in zip(gaps, pts[:-1], pts[1:]) if p0.sign == p1.sign]
        if att:
            d_att = float(np.min(att))
        if rep:
            d_rep = float(np.min(rep))
    return TrackedFronts(intervals=intervals, points=tuple(pts), merging=merging,
                         d_min=d_min, d_min_att=d_att, d_min_rep=d_rep)


def wpi_distance(potential: Potential, f: Field, tracked: TrackedFronts,
                 delta: float) -> np.ndarray:
    """Inner preparedness: per-front C^1_eps distance to the translated
    stationary profile over [a_k - delta, a_k + delta]."""
    if tracked.count >= 2:
        gaps = np.diff(tracked.positions())
        if np.min(gaps) <= 2 * delta:
            raise ValueError("front windows overlap; reduce delta")
    x = f.grid.x
    v = f.values
    dv = gradient(v, f.grid.h)
    out = np.empty(tracked.count)
    for k, p in enumerate(tracked.points):
        prof = build_front(potential, p.transition, p.sign)
        sel = (x >= p.position - delta) & (x <= p.position + delta)
        y = (x[sel] - p.position) / f.eps
        ref = prof(y)
        ref_d = prof.derivative(y) / f.eps
        out[k] = float(np.max(np.abs(v[sel] - ref))
                       + f.eps * np.max(np.abs(dv[sel] - ref_d)))
    return out


def wpo_energy(potential: Potential, f: Field, tracked: TrackedFronts,
               delta: float) -> tuple[float, float]:
    """Outer preparedness: energy off the front cores, with its reference
    scale (eps/delta)^omega."""
    x = f.grid.x
    dens = energy_density(potential, f)
    mask = np.ones(x.size, dtype=bool)
    for p in tracked.points:
        mask &= ~((x >= p.position - delta) & (x <= p.position + delta))
    val = float(np.trapezoid(np.where(mask, dens, 0.0), dx=f.grid.h))
    return val, (f.eps / delta) ** f.omega
