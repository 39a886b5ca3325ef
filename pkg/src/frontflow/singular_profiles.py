"""Blow-up boundary-value profiles that set the front interaction constants.

Both profiles solve U'' = 2 theta U^(2 theta - 1) on (-1, 1) with infinite
boundary data: the even one (both endpoints +inf, minimum m > 0 at the
origin) drives attraction, the odd one (-inf to +inf) drives repulsion. The
first integral Xi = U'^2 / 2 - U^(2 theta) is constant; the interaction
constants are |Xi|, computed from one-dimensional quadratures:

    attraction: m^(theta-1) = I_theta,  I_theta = int_1^inf dv / sqrt(2(v^(2 theta) - 1)),
                constant = m^(2 theta)
    repulsion:  Xi^((theta-1)/(2 theta)) = J_theta,
                J_theta = int_0^inf dw / sqrt(2(w^(2 theta) + 1))

A shooting construction of the same profiles (integrate the second-order ODE
from the center, bisect on the center data until blow-up lands at x = 1) is
kept as an independent oracle.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .quadrature import tanh_sinh

VEE = "vee"  # even profile, both boundaries +inf
ODD = "odd"  # odd profile, -inf to +inf

_TABLE_EDGE_GAP = 1e-4  # table truncation distance from the blow-up ends


def omega_exponent(theta: int) -> float:
    """Renormalized-time exponent (theta + 1)/(theta - 1)."""
    if theta < 2 or int(theta) != theta:
        raise ValueError(f"theta must be an integer >= 2, got {theta}")
    return (theta + 1) / (theta - 1)


def _power_sum(u: np.ndarray, m: float, n: int) -> np.ndarray:
    """(u^n - m^n) / (u - m) = sum u^j m^(n-1-j), stable near u = m."""
    out = np.zeros_like(u)
    for j in range(n):
        out = out + u**j * m ** (n - 1 - j)
    return out


@functools.lru_cache(maxsize=None)
def i_integral(theta: int, tol: float = 1e-14) -> float:
    """I_theta = int_1^inf dv / sqrt(2 (v^(2 theta) - 1)).

    Mapped by v = 1/t onto (0, 1] and desingularized at t = 1 with
    t = 1 - r^2, leaving a smooth integrand for tanh-sinh.
    """
    n = 2 * theta

    def f(r):
        t = 1.0 - r**2
        s = _power_sum(t, 1.0, n)  # (1 - t^n)/(1 - t)
        return 2.0 * t ** (theta - 2) / np.sqrt(2.0 * s)

    return tanh_sinh(f, 0.0, 1.0, tol=tol)


@functools.lru_cache(maxsize=None)
def j_integral(theta: int, tol: float = 1e-14) -> float:
    """J_theta = int_0^inf dw / sqrt(2 (w^(2 theta) + 1))."""
    n = 2 * theta
    inner = tanh_sinh(lambda w: 1.0 / np.sqrt(2.0 * (w**n + 1.0)), 0.0, 1.0, tol=tol)
    outer = tanh_sinh(lambda t: t ** (theta - 2) / np.sqrt(2.0 * (1.0 + t**n)), 0.0, 1.0, tol=tol)
    return inner + outer


def attraction_constant(theta: int) -> float:
    """|Xi| of the even profile: the attractive interaction constant."""
    omega_exponent(theta)
    return i_integral(theta) ** (2 * theta / (theta - 1))


def repulsion_constant(theta: int) -> float:
    """Xi of the odd profile: the repulsive interaction constant."""
    omega_exponent(theta)
    return j_integral(theta) ** (2 * theta / (theta - 1))


@dataclass(frozen=True)
class InteractionConstants:
    theta: int
    omega: float
    attraction: float
    repulsion: float

    def as_dict(self) -> dict:
        return {"theta": self.theta, "omega": self.omega,
                "A": self.attraction, "B": self.repulsion}


def interaction_constants(theta: int) -> InteractionConstants:
    return InteractionConstants(theta=theta, omega=omega_exponent(theta),
                                attraction=attraction_constant(theta),
                                repulsion=repulsion_constant(theta))


# ---------------------------------------------------------------------------
# profiles from the first integral

def _vee_position(theta: int, m: float, u: np.ndarray) -> np.ndarray:
    """x(U) = int_m^U du / sqrt(2 (u^(2 theta) - m^(2 theta))) for U >= m.

    Desingularized at u = m by u = m + (U - m) r^2.
    """
    n = 2 * theta
    u = np.atleast_1d(u)
    out = np.empty_like(u)
    for idx, top in enumerate(u):
        if top == m:
            out[idx] = 0.0
            continue

        def f(r, top=top):
            uu = m + (top - m) * r**2
            d = _power_sum(uu, m, n)  # (u^n - m^n)/(u - m) > 0
            return 2.0 * np.sqrt(top - m) / np.sqrt(2.0 * d)

        out[idx] = tanh_sinh(f, 0.0, 1.0, tol=1e-13)
    return out


def _odd_position(theta: int, xi: float, u: np.ndarray) -> np.ndarray:
    """x(U) = int_0^U du / sqrt(2 (u^(2 theta) + xi)); regular integrand."""
    n = 2 * theta
    u = np.atleast_1d(u)
    out = np.empty_like(u)
    for idx, top in enumerate(u):
        out[idx] = tanh_sinh(lambda s: 1.0 / np.sqrt(2.0 * (s**n + xi)), 0.0, top, tol=1e-13)
    return out


@dataclass(frozen=True)
class BlowupProfile:
    """Tabulated singular profile on |x| <= 1 - 1e-4 with its discrepancy.

    xi is signed: negative for the even (attractive) profile, positive for
    the odd one. center_value holds m for the even profile and the center
    slope sqrt(2 Xi) for the odd one.
    """

    kind: str
    theta: int
    center_value: float
    x: np.ndarray
    u: np.ndarray
    xi: float

    def __post_init__(self):
        half = self.x >= 0
        center_slope = 0.0 if self.kind == VEE else float(np.sqrt(2.0 * self.xi))
        spline = CubicSpline(self.x[half], self.u[half],
                             bc_type=((1, center_slope), "not-a-knot"))
        object.__setattr__(self, "_spline", spline)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        xv = np.atleast_1d(x)
        if np.any(np.abs(xv) > self.x[-1]):
            raise ValueError("outside the tabulated range |x| <= 1 - 1e-4")
        vals = self._spline(np.abs(xv))
        if self.kind == ODD:
            vals = np.sign(xv) * vals
        return float(vals[0]) if scalar else vals

    def derivative(self, x):
        """Slope from the first integral (sign fixed by symmetry)."""
        x = np.asarray(x, dtype=float)
        vals = np.atleast_1d(self(x))
        mag = np.sqrt(np.maximum(2.0 * (vals ** (2 * self.theta) + self.xi), 0.0))
        if self.kind == VEE:
            mag = mag * np.sign(np.atleast_1d(x))
        out = mag
        return float(out[0]) if x.ndim == 0 else out

    def scaled(self, r: float, lam: float = 1.0) -> "ScaledProfile":
        if r <= 0 or lam <= 0:
            raise ValueError("need r > 0 and lambda > 0")
        return ScaledProfile(base=self, r=r, lam=lam)


@dataclass(frozen=True)
class ScaledProfile:
    """lam^(-1/(2(theta-1))) r^(-1/(theta-1)) U(x/r) on |x| < r.

    Solves U'' = 2 theta lam U^(2 theta - 1); its discrepancy
    U'^2/2 - lam U^(2 theta) scales as lam^(-1/(theta-1)) r^-(omega+1) Xi.
    """

    base: BlowupProfile
    r: float
    lam: float

    @property
    def amplitude(self) -> float:
        t = self.base.theta
        return self.lam ** (-1.0 / (2 * (t - 1))) * self.r ** (-1.0 / (t - 1))

    @property
    def discrepancy(self) -> float:
        t = self.base.theta
        omega = omega_exponent(t)
        return self.lam ** (-1.0 / (t - 1)) * self.r ** (-(omega + 1)) * self.base.xi

    def __call__(self, x):
        return self.amplitude * self.base(np.asarray(x) / self.r)

    def derivative(self, x):
        return self.amplitude / self.r * self.base.derivative(np.asarray(x) / self.r)


@functools.lru_cache(maxsize=None)
def build_blowup_profile(kind: str, theta: int, nodes: int = 1024) -> BlowupProfile:
    """Tabulate a profile from its first integral on |x| <= 1 - 1e-4.

    Nodes are exact (x(U), U) pairs on a grid geometric in U, which makes
    the x spacing shrink in proportion to the distance from the blow-up
    walls; a spline through such graded data stays uniformly accurate.
    """
    omega_exponent(theta)
    edge = 1.0 - _TABLE_EDGE_GAP
    if kind == VEE:
        m = i_integral(theta) ** (1.0 / (theta - 1))
        xi = -(m ** (2 * theta))
        umax = _vee_value_at(theta, m, edge)
        ug = np.concatenate([[m], m + (umax - m) * np.geomspace(1e-9, 1.0, nodes - 1)])
        xg = _vee_position(theta, m, ug)
        x = np.concatenate([-xg[:0:-1], xg])
        u = np.concatenate([ug[:0:-1], ug])
        return BlowupProfile(kind=VEE, theta=theta, center_value=m, x=x, u=u, xi=xi)
    if kind == ODD:
        xi = repulsion_constant(theta)
        umax = _odd_value_at(theta, xi, edge)
        ug = np.concatenate([[0.0], umax * np.geomspace(1e-9, 1.0, nodes - 1)])
        xg = _odd_position(theta, xi, ug)
        x = np.concatenate([-xg[:0:-1], xg])
        u = np.concatenate([-ug[:0:-1], ug])
        return BlowupProfile(kind=ODD, theta=theta, center_value=np.sqrt(2.0 * xi),
                             x=x, u=u, xi=xi)
    raise ValueError(f"unknown profile kind {kind!r}")


def _vee_value_at(theta: int, m: float, x_target: float) -> float:
    hi = m * 1.5
    while _vee_position(theta, m, np.array([hi]))[0] < x_target:
        hi *= 2.0
    return brentq(lambda u: _vee_position(theta, m, np.array([u]))[0] - x_target, m * (1 + 1e-12), hi, xtol=1e-14)


def _odd_value_at(theta: int, xi: float, x_target: float) -> float:
    hi = 1.0
    while _odd_position(theta, xi, np.array([hi]))[0] < x_target:
        hi *= 2.0
    return brentq(lambda u: _odd_position(theta, xi, np.array([u]))[0] - x_target, 0.0, hi, xtol=1e-14)


def halfline_blowup(theta: int, x):
    """Exact one-wall solution [sqrt(2) (theta-1) x]^(-1/(theta-1)) on x > 0.

    Solves the same ODE with a single blow-up endpoint and zero discrepancy;
    it bounds every profile from below near its walls and caps the even one
    by the sum of its two translates.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("the one-wall solution lives on x > 0")
    return (np.sqrt(2.0) * (theta - 1) * x) ** (-1.0 / (theta - 1))


# ---------------------------------------------------------------------------
# shooting oracle

def _blowup_x(theta: int, center_u: float, center_du: float,
              u_big: float = 1e3, rtol: float = 1e-13) -> float:
    """x at which the solution from (u, u') at 0 reaches u = +inf.

    Integrates the second-order ODE until u = u_big, then adds the remaining
    width analytically: with s = u'^2/2 - u^(2 theta) evaluated from the cut
    state (a local conserved quantity of this same trajectory),

        remaining = int_{u_big}^inf du / sqrt(2 (u^(2 theta) + s))
                  ~ u^(1-theta)/((theta-1) sqrt 2) - s u^(1-3 theta)/(2 sqrt 2 (3 theta - 1)),

    with the truncation beyond the second term around 1e-30 for u_big = 1e3.
    """
    n = 2 * theta

    def rhs(x, y):
        return [y[1], n * y[0] ** (n - 1)]

    def hit(x, y):
        return y[0] - u_big

    hit.terminal = True
    hit.direction = 1
    sol = solve_ivp(rhs, (0.0, 10.0), [center_u, center_du], rtol=rtol, atol=1e-13,
                    events=hit, method="DOP853", max_step=0.1)
    if not sol.t_events[0].size:
        raise RuntimeError("no blow-up before x = 10; bad shooting parameters")
    x_big = sol.t_events[0][0]
    u_cut, du_cut = sol.y_events[0][0]
    s_loc = du_cut**2 / 2 - u_cut**n
    rem = u_cut ** (1 - theta) / ((theta - 1) * np.sqrt(2.0))
    rem -= s_loc * u_cut ** (1 - 3 * theta) / (2 * np.sqrt(2.0) * (3 * theta - 1))
    return x_big + rem


@functools.lru_cache(maxsize=None)
def shooting_constant(theta: int, kind: str, tol: float = 1e-12) -> float:
    """Interaction constant via shooting: bisect the center datum until the
    blow-up lands at x = 1. Independent of the quadrature route."""
    omega_exponent(theta)
    if kind == VEE:
        f = lambda m: _blowup_x(theta, m, 0.0) - 1.0
        lo, hi = 0.05, 50.0
        m = brentq(f, lo, hi, xtol=tol)
        return m ** (2 * theta)
    if kind == ODD:
        f = lambda b: _blowup_x(theta, 0.0, np.sqrt(2.0 * b)) - 1.0
        lo, hi = 1e-3, 1e4
        return brentq(f, lo, hi, xtol=tol)
    raise ValueError(f"unknown profile kind {kind!r}")
