"""Multi-well potentials V(u) = (scale * prod(u - root_i))^(2 theta).

All wells vanish to the same even order 2*theta (theta >= 2 integer), which
makes every well degenerate: V'' = 0 there. The factored closed form gives
exact roots and exact nonnegativity, both of which the downstream separation
of variables quadratures rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Well:
    """A zero of V: location and leading coefficient of (u - position)^(2 theta)."""

    position: float
    coefficient: float

    def __post_init__(self):
        if not self.coefficient > 0:
            raise ValueError(f"well coefficient must be positive, got {self.coefficient}")


@dataclass(frozen=True)
class Potential:
    """Validated multi-well potential with factored polynomial core.

    V(u) = (scale * prod_j (u - roots[j]))^(2 theta); wells sit at the roots,
    separators at the interior critical points of the core polynomial.
    """

    theta: int
    roots: tuple[float, ...]
    scale: float = 1.0
    wells: tuple[Well, ...] = field(init=False)
    separators: tuple[float, ...] = field(init=False)
    mu0: float = field(init=False)

    def __post_init__(self):
        if self.theta < 2 or int(self.theta) != self.theta:
            raise ValueError(f"theta must be an integer >= 2, got {self.theta}")
        if len(self.roots) < 2:
            raise ValueError("need at least two wells")
        r = np.asarray(self.roots, dtype=float)
        if np.any(np.diff(r) <= 0):
            raise ValueError("well locations must be strictly increasing")
        wells = tuple(
            Well(position=float(s), coefficient=float(self._core_slope(s) ** (2 * self.theta)))
            for s in r
        )
        object.__setattr__(self, "wells", wells)
        object.__setattr__(self, "separators", self._find_separators())
        object.__setattr__(self, "mu0", select_mu0(self))
        self._validate()

    # -- factored core -------------------------------------------------

    def core(self, u):
        """P(u) = scale * prod (u - root_j); V = P^(2 theta)."""
        u = np.asarray(u, dtype=float)
        p = np.full_like(u, self.scale)
        for s in self.roots:
            p = p * (u - s)
        return p

    def core_prime(self, u):
        u = np.asarray(u, dtype=float)
        total = np.zeros_like(u)
        for k in range(len(self.roots)):
            term = np.full_like(u, self.scale)
            for j, s in enumerate(self.roots):
                if j != k:
                    term = term * (u - s)
            total = total + term
        return total

    def core_over_gap(self, i: int, u):
        """P(u) / (u - roots[i]) evaluated stably from the factored form."""
        u = np.asarray(u, dtype=float)
        p = np.full_like(u, self.scale)
        for j, s in enumerate(self.roots):
            if j != i:
                p = p * (u - s)
        return p

    def _core_slope(self, s: float) -> float:
        out = self.scale
        for r in self.roots:
            if r != s:
                out *= s - r
        return abs(out)

    # -- public surface -------------------------------------------------

    @property
    def q(self) -> int:
        """Number of wells."""
        return len(self.roots)

    @property
    def omega(self) -> float:
        """Renormalized-time exponent (theta + 1) / (theta - 1)."""
        return (self.theta + 1) / (self.theta - 1)

    def v(self, u):
        return self.core(u) ** (2 * self.theta)

    def dv(self, u):
        p = self.core(u)
        return 2 * self.theta * p ** (2 * self.theta - 1) * self.core_prime(u)

    def eval(self, u):
        """Return (V(u), V'(u)) from the closed form."""
        p = self.core(u)
        dp = self.core_prime(u)
        return p ** (2 * self.theta), 2 * self.theta * p ** (2 * self.theta - 1) * dp

    def well_positions(self) -> np.ndarray:
        return np.array([w.position for w in self.wells])

    def dist_to_wells(self, u):
        u = np.asarray(u, dtype=float)
        return np.min(np.abs(u[..., None] - self.well_positions()), axis=-1)

    def descriptor(self) -> dict:
        return {"family": "polynomial", "theta": self.theta,
                "coeffs": list(self.roots), "scale": self.scale}

    # -- construction-time validation ------------------------------------

    def _find_separators(self) -> tuple[float, ...]:
        # Critical points of the core interlace its roots; one per gap.
        from scipy.optimize import brentq

        dcoef = np.polynomial.polynomial.polyder(
            np.polynomial.polynomial.polyfromroots(self.roots) * self.scale
        )
        seps = []
        for lo, hi in zip(self.roots[:-1], self.roots[1:]):
            z = brentq(lambda x: np.polynomial.polynomial.polyval(x, dcoef), lo + 1e-14, hi - 1e-14)
            seps.append(float(z))
        return tuple(seps)

    def _validate(self):
        grid = np.linspace(self.roots[0] - 0.5, self.roots[-1] + 0.5, 2001)
        vals = self.v(grid)
        if np.any(vals < 0):
            raise ValueError("potential is negative on the validation grid")
        for z, lo, hi in zip(self.separators, self.roots[:-1], self.roots[1:]):
            if not (lo < z < hi):
                raise ValueError("separator escaped its well gap")
            probe = np.linspace(max(lo, z - 0.05 * (hi - lo)), min(hi, z + 0.05 * (hi - lo)), 41)
            if self.v(z) < np.max(self.v(probe)) - 1e-12 * max(1.0, self.v(z)):
                raise ValueError("separator is not a local max of V")


def double_well(theta: int = 2) -> Potential:
    """V(u) = (1 - u^2)^(2 theta): wells at -1 and +1, separator at 0."""
    return Potential(theta=theta, roots=(-1.0, 1.0), scale=1.0)


def triple_well(theta: int = 2) -> Potential:
    """V(u) = u^(2 theta) (1 - u^2)^(2 theta): wells at -1, 0, +1.

    Needed to realize repulsive front pairs, which require at least three
    wells (two same-orientation transitions sharing the middle well).
    """
    return Potential(theta=theta, roots=(-1.0, 0.0, 1.0), scale=1.0)


def polynomial_well(roots, theta: int, scale: float = 1.0) -> Potential:
    """User-supplied factored potential V = (scale * prod(u - r_j))^(2 theta)."""
    return Potential(theta=theta, roots=tuple(float(r) for r in roots), scale=float(scale))


def from_descriptor(d: dict) -> Potential:
    """Build a potential from the run-config descriptor.

    Accepted forms: {"family": "double_well"|"triple_well", "theta": n} and
    {"family": "polynomial", "theta": n, "coeffs": [roots...], "scale": c}.
    """
    family = d["family"]
    theta = int(d["theta"])
    if family == "double_well":
        return double_well(theta)
    if family == "triple_well":
        return triple_well(theta)
    if family == "polynomial":
        return polynomial_well(d["coeffs"], theta, float(d.get("scale", 1.0)))
    raise ValueError(f"unknown potential family {family!r}")


def select_mu0(potential: Potential, samples: int = 1000) -> float:
    """Largest mu0 from the grid gap/4 * 2^-j, j = 0..20, for which the
    four-sided control chain

        lam/2 (u-s)^(2t) <= V <= V'(u)(u-s)/t <= 4V <= 8 lam (u-s)^(2t)

    holds at `samples` points on each side of every well.
    """
    gaps = np.diff(potential.well_positions())
    cap = float(np.min(gaps)) / 4.0
    theta = potential.theta
    for j in range(21):
        mu = cap * 2.0 ** (-j)
        ok = True
        for well in potential.wells:
            for sign in (-1.0, 1.0):
                u = well.position + sign * np.linspace(mu / samples, mu, samples)
                v, dv = potential.eval(u)
                h = u - well.position
                mono = dv * h / theta
                lead = well.coefficient * h ** (2 * theta)
                slack = 1e-12 * np.maximum(v, 1e-300)
                if not (
                    np.all(0.5 * lead <= v + slack)
                    and np.all(v <= mono + slack)
                    and np.all(mono <= 4.0 * v + slack)
                    and np.all(4.0 * v <= 8.0 * lead + slack)
                ):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return mu
    raise ValueError("no mu0 in the search grid satisfies the control chain; malformed potential")
