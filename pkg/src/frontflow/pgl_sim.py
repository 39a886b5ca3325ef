"""Finite-difference solver for v_t - v_xx = -eps^-2 V'(v) on an interval.

Backward Euler in time with the reaction treated implicitly (per-step Newton
on the full nonlinear system, tridiagonal Jacobian), homogeneous Neumann
boundaries via mirrored ghost nodes. Time is reported both in physical units
and in the renormalized scale s = eps^omega * t on which front motion is
order one.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import solve_banded

from .potential import Potential


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if self.n < 64:
            raise ValueError("grid needs at least 64 points")
        if not self.x_max > self.x_min:
            raise ValueError("empty grid interval")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)


@dataclass(frozen=True)
class Field:
    """Discretized solution snapshot with physical and renormalized stamps."""

    grid: Grid1D
    values: np.ndarray
    eps: float
    omega: float
    t_phys: float = 0.0

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if self.grid.h > self.eps / 8 * (1 + 1e-9):
            raise ValueError(f"grid spacing {self.grid.h:g} exceeds eps/8 = {self.eps / 8:g}")
        if self.values.shape != (self.grid.n,):
            raise ValueError("field values do not match the grid")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite field values")

    @property
    def s(self) -> float:
        """Renormalized time s = eps^omega * t."""
        return self.eps**self.omega * self.t_phys

    def with_values(self, values: np.ndarray, t_phys: float) -> "Field":
        return replace(self, values=values, t_phys=t_phys)


@dataclass
class SimParams:
    """Time-stepping policy knobs (defaults follow the solver contract)."""

    newton_tol: float = 1e-12
    newton_maxiter: int = 25
    max_halvings: int = 10
    energy_drop_frac: float = 0.01  # max fraction of E shed per accepted step
    grow_threshold: float = 0.25    # grow dt when the shed fraction of the cap is below this
    grow_factor: float = 1.3
    time_resolution: int = 512       # cap dt so >= this many steps span s_max
    max_rejects: int = 60
    # The drop cap compares against max(E, energy_floor_frac * E_initial):
    # once every front is gone E decays toward zero and a cap proportional
    # to the current energy would refine a featureless relaxation forever.
    energy_floor_frac: float = 0.02


@dataclass
class SimResult:
    snapshots: list            # Field at the requested renormalized times
    s_series: np.ndarray
    energy_series: np.ndarray  # discrete solver energy at accepted steps
    dissipation_series: np.ndarray  # cumulative eps * int |v_t|^2
    final: "Field"
    steps: int


def gradient(values: np.ndarray, h: float) -> np.ndarray:
    """Centered differences, one-sided at the boundary."""
    return np.gradient(values, h)


def energy_density(potential: Potential, f: Field) -> np.ndarray:
    vx = gradient(f.values, f.grid.h)
    return f.eps * vx**2 / 2 + potential.v(f.values) / f.eps


def energy(potential: Potential, f: Field) -> float:
    """E_eps = int eps v_x^2/2 + V(v)/eps by the trapezoid rule."""
    return float(np.trapezoid(energy_density(potential, f), dx=f.grid.h))


def localized_energy(potential: Potential, f: Field, chi: np.ndarray) -> float:
    """int chi(x) e_eps(v) dx for a test-function sampled on the grid."""
    if chi.shape != f.values.shape:
        raise ValueError("chi must be sampled on the field grid")
    return float(np.trapezoid(chi * energy_density(potential, f), dx=f.grid.h))


def discrepancy_field(potential: Potential, f: Field) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise xi_eps = eps v_x^2/2 - V(v)/eps and its renormalization.

    The renormalized eps^-omega xi_eps is the quantity whose inter-front
    plateau encodes the interaction force.
    """
    vx = gradient(f.values, f.grid.h)
    xi = f.eps * vx**2 / 2 - potential.v(f.values) / f.eps
    return xi, xi * f.eps ** (-f.omega)


def _discrete_energy(potential: Potential, values: np.ndarray, eps: float, h: float) -> float:
    """Energy whose L2(trapezoid) gradient flow the scheme discretizes.

    Kinetic part sums edge differences; potential part uses trapezoid
    weights. Backward Euler decreases this quantity exactly (up to the
    saddle-curvature threshold), which powers the step-acceptance test.
    """
    kin = eps * np.sum(np.diff(values) ** 2) / (2 * h)
    pot = np.trapezoid(potential.v(values), dx=h) / eps
    return float(kin + pot)


def _reaction_terms(potential: Potential, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(V'(w), V''(w)) from the factored core in one pass."""
    p = potential.core(w)
    dp = potential.core_prime(w)
    ddp = _core_second(potential, w)
    t2 = 2 * potential.theta
    pm2 = p ** (t2 - 2)
    pm1 = pm2 * p
    dv = t2 * pm1 * dp
    d2v = t2 * ((t2 - 1) * pm2 * dp**2 + pm1 * ddp)
    return dv, d2v


def _newton_step(potential, v, dt, eps, h, tol, maxiter):
    """Solve w - v = dt (w_xx - eps^-2 V'(w)) for w; None on failure.

    Convergence is declared on the Newton update (state units); the raw
    residual scales with dt/eps^2 and is not machine-reachable for large
    steps.
    """
    n = v.size
    r = dt / h**2
    w = v.copy()
    inv_eps2 = 1.0 / eps**2
    ab = np.zeros((3, n))
    ab[0, 1:] = -r
    ab[2, :-1] = -r
    ab[0, 1] = -2 * r
    ab[2, -2] = -2 * r
    last = np.inf
    for _ in range(maxiter):
        lap = np.empty_like(w)
        lap[1:-1] = w[:-2] - 2 * w[1:-1] + w[2:]
        lap[0] = 2 * (w[1] - w[0])
        lap[-1] = 2 * (w[-2] - w[-1])
        lap /= h**2
        dpv, d2v = _reaction_terms(potential, w)
        g = w - v - dt * (lap - inv_eps2 * dpv)
        res = np.max(np.abs(g))
        if not np.isfinite(res):
            return None
        if res < tol:
            return w
        ab[1] = 1 + 2 * r + dt * inv_eps2 * d2v
        try:
            delta = solve_banded((1, 1), ab, g, overwrite_b=False, check_finite=False)
        except np.linalg.LinAlgError:
            return None
        w = w - delta
        step_norm = float(np.max(np.abs(delta)))
        if step_norm < tol:
            return w
        # round-off floor: |g| scales with dt and stops decreasing while the
        # update dithers near machine noise; accept the stalled iterate
        if step_norm < 1e-9 and step_norm > 0.25 * last:
            return w
        last = step_norm
    return None


def _core_second(potential: Potential, u: np.ndarray) -> np.ndarray:
    """P''(u) for the factored core, as a sum over root pairs."""
    roots = potential.roots
    total = np.zeros_like(u)
    for a in range(len(roots)):
        for b in range(len(roots)):
            if a == b:
                continue
            term = np.full_like(u, potential.scale)
            for j, s in enumerate(roots):
                if j != a and j != b:
                    term = term * (u - s)
            total = total + term
    return total


def step(potential: Potential, f: Field, dt: float,
         params: SimParams | None = None) -> tuple[Field, float]:
    """One backward-Euler step; halves dt on Newton failure (<= max_halvings).

    Returns the new field and the dt actually taken.
    """
    params = params or SimParams()
    dt_try = dt
    for _ in range(params.max_halvings + 1):
        w = _newton_step(potential, f.values, dt_try, f.eps, f.grid.h,
                         params.newton_tol, params.newton_maxiter)
        if w is not None:
            return f.with_values(w, f.t_phys + dt_try), dt_try
        dt_try /= 2
    raise RuntimeError("time step underflow: Newton failed after max halvings")


def run(potential: Potential, initial: Field, s_max: float,
        output_times_s=(), params: SimParams | None = None,
        observer=None, stop_when=None) -> SimResult:
    """Advance to renormalized time s_max with the adaptive-dt policy.

    dt starts at eps^2/4, grows while steps shed little energy, and is
    rejected/halved whenever a step drops more than `energy_drop_frac` of
    the current energy (or raises it beyond round-off). A renormalized-time
    cap keeps at least `time_resolution` steps over the horizon so the
    quasi-static phase, where energy is quantized and nearly flat, stays
    resolved. Snapshots at `output_times_s` are linear-in-time interpolants
    of the bracketing accepted states. `observer(field)` runs after every
    accepted step; `stop_when(field)`, if given, ends the run early (used to
    cut the post-annihilation decay, where the energy cap otherwise burns
    steps on a featureless relaxation).
    """
    params = params or SimParams()
    out_s = np.asarray(sorted(output_times_s), dtype=float)
    if np.any(np.diff(out_s) <= 0):
        raise ValueError("output times must be strictly increasing")
    if out_s.size and out_s[-1] > s_max * (1 + 1e-12):
        raise ValueError("output time beyond the horizon")

    eps_w = initial.eps ** initial.omega
    t_end = s_max / eps_w
    dt_cap = (s_max / params.time_resolution) / eps_w
    dt = min(initial.eps**2 / 4, dt_cap)

    f = initial
    e = _discrete_energy(potential, f.values, f.eps, f.grid.h)
    e_floor = params.energy_floor_frac * max(e, 1e-300)
    snapshots: list[Field] = []
    s_hist = [f.s]
    e_hist = [e]
    d_hist = [0.0]
    dissip = 0.0
    next_out = 0
    steps = 0
    if observer is not None:
        observer(f)

    while f.t_phys < t_end * (1 - 1e-14):
        dt = min(dt, dt_cap, t_end - f.t_phys)
        rejects = 0
        while True:
            new, dt_taken = step(potential, f, dt, params)
            e_new = _discrete_energy(potential, new.values, new.eps, new.grid.h)
            drop = e - e_new
            cap = params.energy_drop_frac * max(e, e_floor)
            if drop > cap or drop < -1e-12 * max(e, 1.0):
                rejects += 1
                if rejects > params.max_rejects:
                    raise RuntimeError("time step underflow under the energy cap")
                dt = dt_taken / 2
                continue
            break

        # snapshot interpolation between the bracketing accepted states
        while next_out < out_s.size and new.s >= out_s[next_out] * (1 - 1e-14):
            s0, s1 = f.s, new.s
            lam = 0.0 if s1 == s0 else (out_s[next_out] - s0) / (s1 - s0)
            lam = min(max(lam, 0.0), 1.0)
            vals = (1 - lam) * f.values + lam * new.values
            snapshots.append(f.with_values(vals, out_s[next_out] / eps_w))
            next_out += 1

        dissip += f.eps * np.trapezoid(((new.values - f.values) / dt_taken) ** 2,
                                   dx=f.grid.h) * dt_taken
        f, e = new, e_new
        steps += 1
        s_hist.append(f.s)
        e_hist.append(e)
        d_hist.append(dissip)
        if observer is not None:
            observer(f)
        if stop_when is not None and stop_when(f):
            break
        if drop < params.grow_threshold * params.energy_drop_frac * max(e, e_floor):
            dt = dt_taken * params.grow_factor
        else:
            dt = dt_taken

    return SimResult(snapshots=snapshots, s_series=np.array(s_hist),
                     energy_series=np.array(e_hist),
                     dissipation_series=np.array(d_hist), final=f, steps=steps)


def energy_identity_residual(result: SimResult) -> float:
    """|E(T2) + dissip - E(T1)| / E(T1) over the whole run."""
    e1 = result.energy_series[0]
    e2 = result.energy_series[-1]
    d = result.dissipation_series[-1]
    if e1 == 0:
        return abs(e2 + d - e1)
    return abs(e2 + d - e1) / abs(e1)
