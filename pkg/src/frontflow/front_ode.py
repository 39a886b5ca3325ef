"""The limiting front system: nearest-neighbor interactions with signed
power-law couplings, integrated through collisions.

Masses are the stationary-front energies. The coupling across the well
between fronts k and k+1 is

    B_{k+1/2} = sign * 2^p * lambda_mid^(-1/(theta-1)) * (attraction | repulsion constant),

positive (attractive) when the two fronts have opposite orientations,
negative (repulsive) when they share one; p defaults to omega. Velocities
follow

    S_k da_k/ds = B_{k+1/2} g_{k+1/2}^-(omega+1) - B_{k-1/2} g_{k-1/2}^-(omega+1)

with positive gaps g and vanishing boundary couplings; the flow decreases
F = -sum_k B_{k+1/2} g^-omega / omega. Attractive pairs reach contact in
finite time: once a gap falls below a threshold the colliding cluster is
finished with the separable two-body law, removed pairwise, and integration
restarts with the surviving chain.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field, replace

import numpy as np

from .potential import Potential
from .singular_profiles import InteractionConstants
from . import stationary_fronts

ATTRACTIVE = +1
REPULSIVE = -1

# Dormand-Prince 5(4) tableau
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
                   187 / 2100, 1 / 40])
_DP_ERR = _DP_B5 - _DP_B4


@functools.lru_cache(maxsize=128)
def _mass(potential: Potential, transition: int) -> float:
    return stationary_fronts.transition_energy(potential, transition)


def couplings(potential: Potential, constants: InteractionConstants, well_path,
              prefactor_exponent: float | None = None) -> np.ndarray:
    """Signed pair couplings B_{k+1/2}; lambda is read at the well between
    the two fronts. 2^p prefactor with p = omega unless overridden."""
    path = [int(w) for w in well_path]
    theta = constants.theta
    p = constants.omega if prefactor_exponent is None else prefactor_exponent
    signs = np.diff(path)
    if signs.size and np.any(np.abs(signs) != 1):
        raise ValueError("well_path must move between adjacent wells")
    out = np.empty(max(len(path) - 2, 0), dtype=float)
    for k in range(out.size):
        lam = potential.wells[path[k + 1]].coefficient
        eps_pair = -signs[k] * signs[k + 1]
        mag = constants.attraction if eps_pair == ATTRACTIVE else constants.repulsion
        out[k] = eps_pair * 2.0**p * lam ** (-1.0 / (theta - 1)) * mag
    return out


@dataclass(frozen=True, eq=False)
class FrontChain:
    """Ordered front positions with well labels, masses and couplings."""

    potential: Potential
    constants: InteractionConstants
    positions: np.ndarray
    well_path: tuple[int, ...]
    prefactor_exponent: float | None = None
    masses: np.ndarray = field(init=False)
    pair_couplings: np.ndarray = field(init=False)

    def __post_init__(self):
        a = np.asarray(self.positions, dtype=float)
        object.__setattr__(self, "positions", a)
        path = tuple(int(w) for w in self.well_path)
        object.__setattr__(self, "well_path", path)
        if len(path) != a.size + 1:
            raise ValueError("well_path must have one more entry than positions")
        if any(not 0 <= w < self.potential.q for w in path):
            raise ValueError("well_path index out of range")
        if any(abs(b - c) != 1 for b, c in zip(path[:-1], path[1:])):
            raise ValueError("multiplicity-one violated: well_path steps must be +-1")
        if a.size >= 2 and np.any(np.diff(a) <= 0):
            raise ValueError("front positions must be strictly increasing")
        masses = np.array([_mass(self.potential, min(path[k], path[k + 1]))
                           for k in range(a.size)])
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "pair_couplings",
                           couplings(self.potential, self.constants, path,
                                     self.prefactor_exponent))

    @property
    def size(self) -> int:
        return self.positions.size

    @property
    def omega(self) -> float:
        return self.constants.omega

    @property
    def signs(self) -> np.ndarray:
        """Front orientations: +1 if the well index increases across it."""
        return np.diff(np.asarray(self.well_path))

    @property
    def gaps(self) -> np.ndarray:
        return np.diff(self.positions)

    def pair_kinds(self) -> np.ndarray:
        """+1 attractive / -1 repulsive per adjacent pair."""
        s = self.signs
        return (-s[:-1] * s[1:]).astype(int)

    def with_positions(self, a) -> "FrontChain":
        return replace(self, positions=np.asarray(a, dtype=float))

    def remove_cluster(self, first_pair: int, last_pair: int, location: float) -> "FrontChain":
        """Remove the cancelling fronts spanning pairs first_pair..last_pair
        (fronts first_pair..last_pair+1); an odd cluster leaves one survivor
        of the net orientation at `location`."""
        path = list(self.well_path)
        left_well = path[first_pair]
        right_well = path[last_pair + 2]
        net = right_well - left_well
        if abs(net) > 1:
            raise ValueError("cluster is not pairwise cancelling")
        keep_pos = list(self.positions[:first_pair])
        if net != 0:
            keep_pos.append(location)
        keep_pos += list(self.positions[last_pair + 2:])
        if net == 0:
            new_path = path[: first_pair + 1] + path[last_pair + 3:]
        else:
            new_path = path[: first_pair + 1] + path[last_pair + 2:]
        return replace(self, positions=np.array(keep_pos), well_path=tuple(new_path))


def velocities(chain: FrontChain) -> np.ndarray:
    """Right-hand side of the front system."""
    return _velocities(chain.positions, chain.masses, chain.pair_couplings, chain.omega)


def _velocities(a, masses, b, omega):
    g = np.diff(a)
    if g.size and np.min(g) <= 0:
        raise FloatingPointError("non-positive front gap")
    out = np.zeros_like(a)
    if g.size:
        force = b * g ** (-(omega + 1.0))
        out[:-1] += force
        out[1:] -= force
    return out / masses


def interaction_energy(chain: FrontChain) -> float:
    """Lyapunov function F = -sum_k B_{k+1/2} gap^-omega / omega."""
    g = chain.gaps
    if g.size == 0:
        return 0.0
    return float(np.sum(-chain.pair_couplings * g ** (-chain.omega)) / chain.omega)


def interaction_gradient(chain: FrontChain) -> np.ndarray:
    """dF/da_k; the flow is masses * da/ds = -grad F."""
    g = chain.gaps
    out = np.zeros(chain.size)
    if g.size:
        force = chain.pair_couplings * g ** (-(chain.omega + 1.0))
        out[:-1] -= force
        out[1:] += force
    return out


def decompose_chains(chain: FrontChain) -> list[tuple[str, tuple[int, ...]]]:
    """Maximal runs of same-kind pair interactions.

    Entries are ("attractive"|"repulsive", front indices); adjacent maximal
    chains share exactly one front index.
    """
    kinds = chain.pair_kinds()
    if kinds.size == 0:
        return []
    out = []
    start = 0
    for k in range(1, kinds.size + 1):
        if k == kinds.size or kinds[k] != kinds[start]:
            label = "attractive" if kinds[start] == ATTRACTIVE else "repulsive"
            out.append((label, tuple(range(start, k + 1))))
            start = k
    return out


# ---------------------------------------------------------------------------
# two-body closed forms (also the analytic finishing law)

def pair_rate(chain: FrontChain, pair: int) -> float:
    """kappa = B (1/m_k + 1/m_k+1): gap law d(g^(omega+2))/ds = -(omega+2) kappa."""
    b = chain.pair_couplings[pair]
    return b * (1.0 / chain.masses[pair] + 1.0 / chain.masses[pair + 1])


def pair_gap(g0: float, kappa: float, omega: float, s) -> np.ndarray:
    """Isolated-pair gap: (g0^(omega+2) - (omega+2) kappa s)^(1/(omega+2))."""
    s = np.asarray(s, dtype=float)
    core = g0 ** (omega + 2.0) - (omega + 2.0) * kappa * s
    return np.maximum(core, 0.0) ** (1.0 / (omega + 2.0))


def pair_collision_time(g0: float, kappa: float, omega: float) -> float:
    """Contact time of an isolated attractive pair (inf if kappa <= 0)."""
    if kappa <= 0:
        return np.inf
    return g0 ** (omega + 2.0) / ((omega + 2.0) * kappa)


# ---------------------------------------------------------------------------
# trajectory containers

@dataclass(frozen=True)
class CollisionEvent:
    time: float
    removed_indices: tuple[int, ...]
    location: float
    survivor: bool
    post_size: int


@dataclass
class Segment:
    chain: FrontChain          # labels/masses valid throughout the segment
    times: np.ndarray          # accepted-step times
    positions: np.ndarray      # (n_times, n_fronts)
    velocities: np.ndarray     # (n_times, n_fronts), for Hermite sampling

    def sample(self, s: float) -> np.ndarray:
        """Cubic-Hermite interpolation between accepted steps."""
        k = np.searchsorted(self.times, s)
        if k == 0:
            return self.positions[0]
        if k >= self.times.size:
            return self.positions[-1]
        t0, t1 = self.times[k - 1], self.times[k]
        h = t1 - t0
        if h == 0:
            return self.positions[k]
        u = (s - t0) / h
        h00 = (1 + 2 * u) * (1 - u) ** 2
        h10 = u * (1 - u) ** 2
        h01 = u**2 * (3 - 2 * u)
        h11 = u**2 * (u - 1)
        return (h00 * self.positions[k - 1] + h * h10 * self.velocities[k - 1]
                + h01 * self.positions[k] + h * h11 * self.velocities[k])


@dataclass
class Trajectory:
    segments: list[Segment]
    events: list[CollisionEvent]
    s_end: float

    @property
    def final_chain(self) -> FrontChain:
        seg = self.segments[-1]
        return seg.chain.with_positions(seg.positions[-1])

    def segment_at(self, s: float) -> Segment:
        for seg, nxt in zip(self.segments, self.segments[1:]):
            if s < nxt.times[0]:
                return seg
        return self.segments[-1]

    def sample(self, s: float) -> np.ndarray:
        return self.segment_at(s).sample(s)

    def front_count(self, s: float) -> int:
        return self.segment_at(s).chain.size


# ---------------------------------------------------------------------------
# the integrator

def _step_cap(gaps: np.ndarray, masses: np.ndarray, b: np.ndarray, omega: float) -> float:
    if gaps.size == 0:
        return np.inf
    bmax = np.max(np.abs(b))
    if bmax == 0:
        return np.inf
    return 0.02 * np.min(gaps) ** (omega + 2.0) * np.min(masses) / (bmax * (omega + 2.0))


def integrate(chain: FrontChain, s_end: float, tol: float = 1e-8,
              s_start: float = 0.0) -> Trajectory:
    """Advance the front system to s_end with an embedded 4/5 pair.

    Attractive gaps below g_stop trigger analytic two-body finishing and a
    collision event; clusters of sub-threshold gaps are removed pairwise
    (survivor at the mass-weighted centroid when the count is odd).
    Repulsive gaps must not underflow; that signals a defect.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    segments: list[Segment] = []
    events: list[CollisionEvent] = []
    s = s_start
    current = chain

    while True:
        if current.size <= 1 or s >= s_end:
            seg_times = [s, s_end] if s < s_end else [s]
            pos = np.tile(current.positions, (len(seg_times), 1))
            segments.append(Segment(chain=current, times=np.array(seg_times),
                                    positions=pos, velocities=np.zeros_like(pos)))
            break
        seg = _integrate_segment(current, s, s_end, tol)
        segments.append(seg.segment)
        s = seg.segment.times[-1]
        current = current.with_positions(seg.segment.positions[-1])
        if seg.cluster is None:
            break
        first, last = seg.cluster
        ds, location = _finish_cluster(current, first, last)
        s_col = s + ds
        survivor = current.well_path[first] != current.well_path[last + 2]
        removed = tuple(range(first, last + 2))
        post = current.remove_cluster(first, last, location)
        events.append(CollisionEvent(time=s_col, removed_indices=removed,
                                     location=location, survivor=survivor,
                                     post_size=post.size))
        # other fronts are frozen over the (tiny) finishing interval
        s = s_col
        current = post
        if s >= s_end:
            segments.append(Segment(chain=current, times=np.array([s]),
                                    positions=current.positions[None, :].copy(),
                                    velocities=np.zeros((1, current.size))))
            break

    return Trajectory(segments=segments, events=events, s_end=s_end)


@dataclass
class _SegmentResult:
    segment: Segment
    cluster: tuple[int, int] | None  # (first_pair, last_pair) below g_stop


def _finish_cluster(chain: FrontChain, first_pair: int, last_pair: int) -> tuple[float, float]:
    """Remaining time and contact location for a sub-threshold cluster."""
    ds = min(
        pair_collision_time(chain.gaps[p], pair_rate(chain, p), chain.omega)
        for p in range(first_pair, last_pair + 1)
    )
    lo, hi = first_pair, last_pair + 1
    m = chain.masses[lo:hi + 1]
    a = chain.positions[lo:hi + 1]
    return ds, float(np.sum(m * a) / np.sum(m))


def _integrate_segment(chain: FrontChain, s0: float, s_end: float, tol: float):
    omega = chain.omega
    masses = chain.masses
    b = chain.pair_couplings
    kinds = chain.pair_kinds()
    attractive = np.where(kinds == ATTRACTIVE)[0]
    repulsive = np.where(kinds == REPULSIVE)[0]
    g_init = chain.gaps
    g_stop = max(1e-4 * float(np.min(g_init)), 10.0 * tol ** (1.0 / (omega + 2.0)))

    a = chain.positions.copy()
    s = s0
    times = [s]
    history = [a.copy()]
    vel_history = []
    span = max(np.ptp(a), 1.0)
    atol = tol * span

    f = _velocities(a, masses, b, omega)
    vel_history.append(f.copy())
    h = min(_step_cap(np.diff(a), masses, b, omega), s_end - s0)
    cluster = None

    while s < s_end * (1 - 1e-15):
        h = min(h, s_end - s, _step_cap(np.diff(a), masses, b, omega))
        if s + h == s or not np.isfinite(h):
            raise RuntimeError("step-size underflow in the front integrator")
        k = np.empty((7, a.size))
        k[0] = f
        try:
            for i in range(1, 7):
                y = a + h * (_DP_A[i] @ k[:i])
                k[i] = _velocities(y, masses, b, omega)
        except FloatingPointError:
            h /= 2
            continue
        err = h * (_DP_ERR @ k)
        a5 = a + h * (_DP_B5 @ k)
        scale = atol + tol * np.maximum(np.abs(a), np.abs(a5))
        enorm = float(np.max(np.abs(err) / scale)) if a.size else 0.0
        if enorm > 1.0:
            h *= max(0.2, 0.9 * enorm ** -0.2)
            continue
        s += h
        a = a5
        f = k[6]  # FSAL
        times.append(s)
        history.append(a.copy())
        vel_history.append(f.copy())
        g = np.diff(a)
        if repulsive.size and np.any((g[repulsive] < g_stop)
                                     & (g[repulsive] < 0.25 * g_init[repulsive])):
            raise RuntimeError("repulsive gap underflow: repulsive gaps must grow")
        if attractive.size:
            below = g[attractive] < g_stop
            if np.any(below):
                pairs = attractive[below]
                first = last = pairs[0]
                while last + 1 in set(attractive[below]):
                    last += 1
                cluster = (int(first), int(last))
                break
        if enorm > 0:
            h *= min(5.0, 0.9 * enorm ** -0.2)
        else:
            h *= 5.0

    seg = Segment(chain=chain, times=np.array(times), positions=np.array(history),
                  velocities=np.array(vel_history))
    return _SegmentResult(segment=seg, cluster=cluster)


# ---------------------------------------------------------------------------
# splitting initial data

def split_initial(potential: Potential, constants: InteractionConstants,
                  points, multiplicities, offset: float, base_well: int = 0,
                  prefactor_exponent: float | None = None) -> FrontChain:
    """Resolve multiplicities into simple fronts separated by `offset`.

    A point of multiplicity m is replaced by |m| fronts centered on it with
    spacing `offset`, labels ascending if m > 0 and descending otherwise;
    m = 0 points are ghosts and contribute nothing.
    """
    if offset <= 0:
        raise ValueError("offset must be positive")
    points = np.asarray(points, dtype=float)
    mult = [int(m) for m in multiplicities]
    if points.size != len(mult):
        raise ValueError("need one multiplicity per point")
    if np.any(np.diff(points) <= 0):
        raise ValueError("points must be strictly increasing")
    positions = []
    path = [int(base_well)]
    for a, m in zip(points, mult):
        if m == 0:
            continue
        step = 1 if m > 0 else -1
        for p in range(abs(m)):
            positions.append(a + offset * (p - (abs(m) - 1) / 2))
            nxt = path[-1] + step
            if not 0 <= nxt < potential.q:
                raise ValueError("splitting walks outside the well range")
            path.append(nxt)
    return FrontChain(potential=potential, constants=constants,
                      positions=np.array(positions), well_path=tuple(path),
                      prefactor_exponent=prefactor_exponent)


# ---------------------------------------------------------------------------
# envelope diagnostics

@dataclass(frozen=True)
class EnvelopeFit:
    slope: float
    intercept: float
    r_squared: float


@dataclass(frozen=True)
class EnvelopeReport:
    attracting: EnvelopeFit | None
    repelling: EnvelopeFit | None
    ordered: bool          # attracting slope < 0 < repelling slope (when both exist)
    never_collides: bool   # pure repulsive chain that ran to s_end without event


def _affine_fit(s: np.ndarray, y: np.ndarray) -> EnvelopeFit:
    coef = np.polyfit(s, y, 1)
    resid = y - np.polyval(coef, s)
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return EnvelopeFit(slope=float(coef[0]), intercept=float(coef[1]), r_squared=r2)


def envelope_report(trajectory: Trajectory) -> EnvelopeReport:
    """Fit d+-(s)^(omega+2) against affine-in-s models on the first segment.

    d- is the minimal attractive (front/anti-front) gap, d+ the minimal
    repulsive one; the attractive envelope must shrink and the repulsive one
    grow.
    """
    seg = trajectory.segments[0]
    if seg.times.size < 20:
        raise ValueError("need at least 20 samples for the envelope fit")
    kinds = seg.chain.pair_kinds()
    omega = seg.chain.omega
    gaps = np.diff(seg.positions, axis=1)
    fits = {}
    for name, mask in (("att", kinds == ATTRACTIVE), ("rep", kinds == REPULSIVE)):
        if np.any(mask):
            d = np.min(gaps[:, mask], axis=1) ** (omega + 2.0)
            fits[name] = _affine_fit(seg.times, d)
        else:
            fits[name] = None
    att, rep = fits["att"], fits["rep"]
    ordered = True
    if att is not None and rep is not None:
        ordered = att.slope < 0.0 < rep.slope
    elif att is not None:
        ordered = att.slope < 0.0
    elif rep is not None:
        ordered = rep.slope > 0.0
    never = (att is None) and not trajectory.events and trajectory.segments[-1].times[-1] >= trajectory.s_end
    return EnvelopeReport(attracting=att, repelling=rep, ordered=ordered, never_collides=never)
