"""Stationary heteroclinic fronts between adjacent wells.

The increasing profile through transition i solves the first-integral
relation z' = sqrt(2 V(z)) and is obtained by inverting

    gamma_i(u) = integral from z_i to u of ds / sqrt(2 V(s)),

which maps (sigma_i, sigma_i+1) one-to-one onto the line. gamma diverges at
the wells like dist^-(theta-1); the table therefore switches to the power
coordinate tau = dist^-(theta-1) near each well, where gamma is asymptotically
affine, and to closed-form power tails beyond the tabulated range.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .pgl_sim import Field, Grid1D
from .potential import Potential
from .quadrature import gauss_panels, tanh_sinh

_TABLE_NODES_MID = 2048
_TABLE_NODES_TAIL = 1024
_TABLE_X_MAX = 1.0e4


def _sqrt2v(potential: Potential, u: np.ndarray) -> np.ndarray:
    return np.sqrt(2.0) * np.abs(potential.core(u)) ** potential.theta


def _tail_speed(potential: Potential, well_index: int) -> float:
    """(theta-1) * sqrt(2 lambda) at the given well: gamma's slope in tau."""
    lam = potential.wells[well_index].coefficient
    return (potential.theta - 1) * np.sqrt(2.0 * lam)


def gamma(potential: Potential, i: int, u: float, tol: float = 1e-12) -> float:
    """Position coordinate gamma_i(u) of the increasing front, by quadrature.

    Splits at distance mu0/2 from each well; the near-well pieces are
    integrated in the tau = dist^-(theta-1) coordinate, where the integrand
    1/g is smooth and tends to 1, and the middle piece with tanh-sinh.
    """
    lo = potential.wells[i].position
    hi = potential.wells[i + 1].position
    if not lo < u < hi:
        raise ValueError(f"u = {u} outside the open transition interval ({lo}, {hi})")
    z = potential.separators[i]
    theta = potential.theta
    cut = potential.mu0 / 2

    def regular(a, b):
        if a == b:
            return 0.0
        return tanh_sinh(lambda s: 1.0 / _sqrt2v(potential, s), a, b, tol=tol)

    a_reg = lo + cut
    b_reg = hi - cut

    if a_reg <= u <= b_reg:
        return regular(z, u)
    if u < a_reg:
        # gamma(u) = gamma(a_reg) - integral_u^a_reg; tau-substitution near lo
        qs = abs(potential.core_over_gap(i, np.array([lo]))[0])
        speed = _tail_speed(potential, i)
        tau_u = (u - lo) ** (-(theta - 1))
        tau_a = cut ** (-(theta - 1))

        def inv_g(tau):
            t = tau ** (-1.0 / (theta - 1))
            q = np.abs(potential.core_over_gap(i, lo + t))
            return (qs / q) ** theta

        inner = tanh_sinh(inv_g, tau_a, tau_u, tol=tol) / speed
        return regular(z, a_reg) - inner
    # u > b_reg: mirror at the upper well
    qs = abs(potential.core_over_gap(i + 1, np.array([hi]))[0])
    speed = _tail_speed(potential, i + 1)
    tau_u = (hi - u) ** (-(theta - 1))
    tau_b = cut ** (-(theta - 1))

    def inv_g_hi(tau):
        t = tau ** (-1.0 / (theta - 1))
        q = np.abs(potential.core_over_gap(i + 1, hi - t))
        return (qs / q) ** theta

    inner = tanh_sinh(inv_g_hi, tau_b, tau_u, tol=tol) / speed
    return regular(z, b_reg) + inner


def transition_energy(potential: Potential, i: int, tol: float = 1e-10) -> float:
    """Energy of the front between wells i and i+1: int sqrt(2 V) du."""
    lo = potential.wells[i].position
    hi = potential.wells[i + 1].position
    return tanh_sinh(lambda u: _sqrt2v(potential, u), lo, hi, tol=tol)


@dataclass(frozen=True)
class FrontProfile:
    """Tabulated monotone front with closed-form power tails.

    The table stores the increasing orientation; the decreasing profile is
    its exact reflection, value(x) = table(-x).
    """

    potential: Potential
    transition: int
    orientation: int  # +1 increasing, -1 decreasing
    x: np.ndarray
    u: np.ndarray
    energy: float
    tail_coeff_lo: float  # matched so the tail is continuous at the table edge
    tail_coeff_hi: float

    def __post_init__(self):
        object.__setattr__(self, "_spline", CubicSpline(self.x, self.u))

    @property
    def theta(self) -> int:
        return self.potential.theta

    @property
    def separator(self) -> float:
        return self.potential.separators[self.transition]

    def flipped(self) -> "FrontProfile":
        from dataclasses import replace

        return replace(self, orientation=-self.orientation)

    def _table_value(self, y: np.ndarray) -> np.ndarray:
        lo = self.potential.wells[self.transition].position
        hi = self.potential.wells[self.transition + 1].position
        p = -1.0 / (self.theta - 1)
        out = np.empty_like(y)
        edge = self.x[-1]
        inside = np.abs(y) <= edge
        out[inside] = self._spline(y[inside])
        upper = y > edge
        out[upper] = hi - self.tail_coeff_hi * y[upper] ** p
        lower = y < -edge
        out[lower] = lo + self.tail_coeff_lo * (-y[lower]) ** p
        return out

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        y = self.orientation * np.atleast_1d(x)
        out = self._table_value(y)
        return float(out[0]) if scalar else out

    def derivative(self, x):
        """Exact slope from the first integral: +-sqrt(2 V(value))."""
        vals = self(x)
        d = self.orientation * _sqrt2v(self.potential, np.asarray(vals))
        return float(d) if np.ndim(vals) == 0 else d

    def scaled(self, eps: float):
        """Return callables (value, slope) of the eps-width front value(x/eps)."""
        return (lambda x: self(np.asarray(x) / eps),
                lambda x: self.derivative(np.asarray(x) / eps) / eps)


def _chebyshev(a: float, b: float, n: int) -> np.ndarray:
    k = np.arange(n)
    return 0.5 * (a + b) + 0.5 * (b - a) * np.cos(np.pi * (n - 1 - k) / (n - 1))


@functools.lru_cache(maxsize=32)
def _build_table(potential: Potential, i: int) -> tuple:
    theta = potential.theta
    lo = potential.wells[i].position
    hi = potential.wells[i + 1].position
    z = potential.separators[i]
    cut = potential.mu0 / 2

    # middle zone, Chebyshev nodes with the separator pinned to a node
    mid_lo, mid_hi = lo + cut, hi - cut
    nodes = _chebyshev(mid_lo, mid_hi, _TABLE_NODES_MID)
    nodes = np.unique(np.concatenate([nodes, [z]]))
    inv_speed = lambda s: 1.0 / _sqrt2v(potential, s)
    cum = gauss_panels(inv_speed, nodes)
    x_mid = cum - cum[np.searchsorted(nodes, z)]
    u_mid = nodes

    def tail(well_index: int, anchor_u: float, anchor_x: float, side: int):
        """side = -1 tail toward `lo`, +1 toward `hi`; log-spaced tau nodes."""
        speed = _tail_speed(potential, well_index)
        well = potential.wells[well_index].position
        qs = abs(potential.core_over_gap(well_index, np.array([well]))[0])
        tau0 = cut ** (-(theta - 1))
        tau1 = speed * _TABLE_X_MAX
        taus = np.geomspace(tau0, tau1, _TABLE_NODES_TAIL)

        def inv_g(tau):
            t = tau ** (-1.0 / (theta - 1))
            q = np.abs(potential.core_over_gap(well_index, well - side * t))
            return (qs / q) ** theta

        cum_tau = gauss_panels(inv_g, taus)
        xs = anchor_x + side * cum_tau / speed
        us = well - side * taus ** (-1.0 / (theta - 1))
        return xs[1:], us[1:]

    x_lo, u_lo = tail(i, mid_lo, x_mid[0], side=-1)
    x_hi, u_hi = tail(i + 1, mid_hi, x_mid[-1], side=+1)

    x = np.concatenate([x_lo[::-1], x_mid, x_hi])
    u = np.concatenate([u_lo[::-1], u_mid, u_hi])
    if np.any(np.diff(x) <= 0) or np.any(np.diff(u) <= 0):
        raise RuntimeError("front table lost monotonicity")

    p = theta - 1
    c_lo = (u[0] - lo) * (-x[0]) ** (1.0 / p)
    c_hi = (hi - u[-1]) * x[-1] ** (1.0 / p)
    return x, u, c_lo, c_hi


def build_front(potential: Potential, i: int, orientation: int = +1) -> FrontProfile:
    """Tabulate the front through transition i (between wells i and i+1)."""
    if not 0 <= i < potential.q - 1:
        raise ValueError(f"no transition {i} in a {potential.q}-well potential")
    if orientation not in (+1, -1):
        raise ValueError("orientation must be +1 or -1")
    x, u, c_lo, c_hi = _build_table(potential, i)
    return FrontProfile(potential=potential, transition=i, orientation=orientation,
                        x=x, u=u, energy=transition_energy(potential, i),
                        tail_coeff_lo=c_lo, tail_coeff_hi=c_hi)


def window_energy(profile: FrontProfile, eps: float, r: float) -> float:
    """Energy of the eps-width front inside |x| <= r.

    With vanishing discrepancy the energy density equals 2V, so the window
    integral reduces to int sqrt(2V) du between the window's endpoint values;
    equivalently the full energy minus the two tail defects, each O((eps/r)^omega).
    """
    if r <= 0 or not 0 < eps < 1:
        raise ValueError("need r > 0 and 0 < eps < 1")
    pot = profile.potential
    i = profile.transition
    lo = pot.wells[i].position
    hi = pot.wells[i + 1].position
    big = r / eps
    u_left = profile._table_value(np.array([-big]))[0]
    u_right = profile._table_value(np.array([big]))[0]
    f = lambda s: _sqrt2v(pot, s)
    defect_lo = tanh_sinh(f, lo, u_left, tol=1e-12)
    defect_hi = tanh_sinh(f, u_right, hi, tol=1e-12)
    return profile.energy - defect_lo - defect_hi


def glue_chain(potential: Potential, positions, well_path, eps: float,
               grid: Grid1D, t_phys: float = 0.0) -> Field:
    """Superpose translated fronts into well-prepared initial data.

    v(x) = sigma_first + sum_k [front_k((x - a_k)/eps) - left_limit_k], a
    telescoping sum equal to the expected well on every inter-front plateau
    up to tail overlaps. Fronts must be separated by at least 20 eps and the
    grid must extend max(1, 5 * max gap) beyond the outermost fronts.
    """
    positions = np.asarray(positions, dtype=float)
    path = [int(w) for w in well_path]
    if len(path) != positions.size + 1:
        raise ValueError("well_path must have one more entry than positions")
    if any(not 0 <= w < potential.q for w in path):
        raise ValueError("well_path index out of range")
    if any(abs(b - a) != 1 for a, b in zip(path[:-1], path[1:])):
        raise ValueError("well_path must move between adjacent wells")
    if positions.size and np.any(np.diff(positions) <= 0):
        raise ValueError("front positions must be strictly increasing")
    x = grid.x
    vals = np.full(grid.n, potential.wells[path[0]].position)
    if positions.size:
        gaps = np.diff(positions)
        if gaps.size and np.min(gaps) < 20 * eps:
            raise ValueError(f"front gap below 20 eps = {20 * eps:g}; profiles would overlap")
        margin = max(1.0, 5.0 * (np.max(gaps) if gaps.size else 0.0))
        if positions[0] - grid.x_min < margin or grid.x_max - positions[-1] < margin:
            raise ValueError(f"grid margin around the chain is below {margin:g}")
        for k, a in enumerate(positions):
            left, right = path[k], path[k + 1]
            i = min(left, right)
            orientation = +1 if right == left + 1 else -1
            prof = build_front(potential, i, orientation)
            left_limit = potential.wells[left].position
            vals = vals + prof((x - a) / eps) - left_limit
    return Field(grid=grid, values=vals, eps=eps, omega=potential.omega, t_phys=t_phys)
