"""Lower Dini directional derivative estimation on a geometric step schedule.

The lower Dini derivative of phi at t in direction u is the liminf of the
difference quotients [phi(t + s u) - phi(t)] / s as s -> 0+.  It is
estimated by the minimum quotient over the trailing half of a geometric
step schedule, probing along the unit direction and rescaling by |u|
afterwards so that decisions are invariant to the magnitude of u.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .domain import Interval, SampledDomain

__all__ = [
    "DiniSchedule",
    "DiniEstimate",
    "DiniDomainError",
    "lower_dini",
    "lower_dini_along",
    "is_stationary",
    "StationarityCheck",
    "GridDiniProfile",
    "grid_dini_profile",
]

_INF = float("inf")

# Factor separating a genuine jump (function difference bounded away from
# zero while the step vanishes) from a steep smooth slope; see _finish.
_JUMP_FACTOR = 10.0


class DiniDomainError(ValueError):
    pass


@dataclass(frozen=True)
class DiniSchedule:
    """Geometric probe steps t0 * ratio^k for k = 0 .. steps-1."""

    t0: float = 1e-2
    ratio: float = 0.6
    steps: int = 40
    dini_tol: float = 1e-7

    def __post_init__(self) -> None:
        if not (self.t0 > 0):
            raise ValueError(f"t0 must be positive, got {self.t0}")
        if not (0 < self.ratio < 1):
            raise ValueError(f"ratio must be in (0,1), got {self.ratio}")
        if self.steps < 2:
            raise ValueError(f"steps must be >= 2, got {self.steps}")
        smallest = self.t0 * self.ratio ** (self.steps - 1)
        if smallest < 1e-12:
            raise ValueError(
                f"smallest step {smallest:.3e} below 1e-12; shorten the schedule"
            )
        if not (self.dini_tol > 0):
            raise ValueError(f"dini_tol must be positive, got {self.dini_tol}")

    def step_sizes(self) -> np.ndarray:
        return self.t0 * self.ratio ** np.arange(self.steps)


@dataclass(frozen=True)
class DiniEstimate:
    """Estimate of the lower Dini derivative at one point and direction.

    ``value`` is scaled by |u|; ``unit_value`` is the unit-direction figure
    used for all sign decisions.  ``tail_min_trace`` is the running minimum
    of the trailing-window quotients (non-increasing by construction);
    ``converged`` says the final step no longer moved the minimum, or that
    the quotients were recognized as diverging to the reported infinity.
    """

    value: float
    unit_value: float
    tail_min_trace: tuple[float, ...]
    converged: bool
    n_probes: int
    all_undefined: bool = False


@dataclass(frozen=True)
class StationarityCheck:
    stationary: bool
    estimates: dict[str, DiniEstimate] = field(default_factory=dict)
    decisive: bool = True


def _finish(
    steps: np.ndarray, diffs: np.ndarray, dini_tol: float
) -> tuple[float, tuple[float, ...], bool, bool]:
    """Turn defined (step, difference) samples into an estimate.

    ``steps`` decreasing, ``diffs`` the corresponding phi differences; both
    restricted to defined probes inside the trailing half of the in-domain
    sequence, except that ``diffs_all``-style screening for jumps uses the
    same arrays.  Returns (unit_value, trace, converged, all_undefined).
    """
    if steps.size == 0:
        return _INF, (), True, True
    quots = diffs / steps
    trace = np.minimum.accumulate(quots)
    value = float(trace[-1])
    if trace.size >= 2:
        converged = bool(abs(trace[-1] - trace[-2]) <= dini_tol)
    else:
        converged = bool(np.isinf(trace[0]))

    # Divergence screen: if the raw differences stay bounded away from zero
    # while the steps vanish, the quotients blow up and the liminf is +-inf.
    # The threshold compares against what a slope of size |value| could
    # produce at the smallest step, so steep smooth functions never trigger.
    if steps.size >= 2:
        s_min = float(steps[-1])
        if value > 0 and np.min(diffs) >= _JUMP_FACTOR * value * s_min:
            return _INF, tuple(trace), True, False
        q_max = float(np.max(quots))
        if q_max < 0 and np.max(diffs) <= _JUMP_FACTOR * q_max * s_min:
            return -_INF, tuple(trace), True, False
    return value, tuple(trace), converged, False


def _estimate_one(
    base: float,
    probe_vals: np.ndarray,
    in_domain: np.ndarray,
    step_sizes: np.ndarray,
    dini_tol: float,
) -> DiniEstimate:
    idx_in = np.flatnonzero(in_domain)
    if idx_in.size == 0:
        raise DiniDomainError("direction leaves domain")
    # trailing half of the in-domain step sequence
    window = idx_in[idx_in.size // 2 :]
    defined_w = window[~np.isnan(probe_vals[window])]
    if defined_w.size == 0:
        defined_in = idx_in[~np.isnan(probe_vals[idx_in])]
        if defined_in.size == 0:
            # every feasible probe left the effective domain of phi
            return DiniEstimate(_INF, _INF, (), True, int(idx_in.size), True)
        defined_w = defined_in[defined_in.size // 2 :]
    steps = step_sizes[defined_w]
    with np.errstate(invalid="ignore"):
        diffs = probe_vals[defined_w] - base
    unit_value, trace, converged, _ = _finish(steps, diffs, dini_tol)
    return DiniEstimate(
        value=unit_value,
        unit_value=unit_value,
        tail_min_trace=trace,
        converged=converged,
        n_probes=int(idx_in.size),
    )


def lower_dini(
    phi: Callable[[np.ndarray], np.ndarray],
    t: float,
    u: float,
    feasible: Interval,
    schedule: DiniSchedule | None = None,
) -> DiniEstimate:
    """Estimate the lower Dini derivative of ``phi`` at ``t`` toward ``u``.

    ``phi`` maps a float64 array to values with NaN for undefined.  The
    direction is normalized to unit length before probing and the returned
    ``value`` is rescaled by |u| (positive homogeneity); ``unit_value``
    keeps the unnormalized-decision figure.  Probe steps that leave
    ``feasible`` are skipped; if none remain, :class:`DiniDomainError` is
    raised.  Undefined probe values are skipped as well, and the estimate
    is +inf only when every feasible probe is undefined.
    """
    if schedule is None:
        schedule = DiniSchedule()
    if u == 0 or not np.isfinite(u):
        raise ValueError(f"direction must be finite and nonzero, got {u}")
    if not feasible.contains(t):
        raise ValueError(f"base point {t} outside feasible interval {feasible}")
    scale = abs(float(u))
    sign = 1.0 if u > 0 else -1.0
    s = schedule.step_sizes()
    probes = t + s * sign
    in_domain = feasible.contains_many(probes)
    base_arr = phi(np.asarray([t], dtype=float))
    base = float(base_arr[0])
    if np.isnan(base):
        raise ValueError(f"phi undefined at base point {t}")
    vals = phi(probes)
    est = _estimate_one(base, vals, in_domain, s, schedule.dini_tol)
    return DiniEstimate(
        value=scale * est.unit_value,
        unit_value=est.unit_value,
        tail_min_trace=est.tail_min_trace,
        converged=est.converged,
        n_probes=est.n_probes,
        all_undefined=est.all_undefined,
    )


def lower_dini_along(
    f: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray,
    u: np.ndarray,
    box: tuple[Interval, ...],
    schedule: DiniSchedule | None = None,
) -> DiniEstimate:
    """Lower Dini derivative of a multivariate ``f`` at ``x`` along ``u``.

    ``f`` maps an (m, n) array of points to (m,) values.  The direction is
    normalized to unit Euclidean length for probing; ``value`` is rescaled
    by |u|.  Probes outside the box are skipped; :class:`DiniDomainError`
    if none stay inside.
    """
    if schedule is None:
        schedule = DiniSchedule()
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    norm = float(np.linalg.norm(u))
    if norm == 0 or not np.isfinite(norm):
        raise ValueError("direction must be finite and nonzero")
    u_hat = u / norm
    s = schedule.step_sizes()
    probes = x[None, :] + s[:, None] * u_hat[None, :]
    in_domain = np.ones(s.shape[0], dtype=bool)
    for i, iv in enumerate(box):
        in_domain &= iv.contains_many(probes[:, i])
    base = float(f(x[None, :])[0])
    if np.isnan(base):
        raise ValueError("f undefined at the base point")
    vals = f(probes)
    est = _estimate_one(base, vals, in_domain, s, schedule.dini_tol)
    return DiniEstimate(
        value=norm * est.unit_value,
        unit_value=est.unit_value,
        tail_min_trace=est.tail_min_trace,
        converged=est.converged,
        n_probes=est.n_probes,
        all_undefined=est.all_undefined,
    )


def is_stationary(
    phi: Callable[[np.ndarray], np.ndarray],
    t: float,
    feasible: Interval,
    schedule: DiniSchedule | None = None,
    stat_tol: float = 1e-7,
) -> StationarityCheck:
    """Check whether no feasible direction descends faster than -stat_tol.

    A direction is feasible when at least one probe step stays inside
    ``feasible``.  Descent along an unfinished trace is still decisive
    (the running minimum can only fall further), but a "no descent"
    conclusion from an unconverged estimate is flagged indecisive.
    """
    if schedule is None:
        schedule = DiniSchedule()
    estimates: dict[str, DiniEstimate] = {}
    stationary = True
    decisive = True
    for label, u in (("+1", 1.0), ("-1", -1.0)):
        try:
            est = lower_dini(phi, t, u, feasible, schedule)
        except DiniDomainError:
            continue
        estimates[label] = est
        if est.unit_value < -stat_tol:
            stationary = False
    if stationary:
        for est in estimates.values():
            if not est.converged:
                decisive = False
    return StationarityCheck(stationary=stationary, estimates=estimates, decisive=decisive)


@dataclass(frozen=True)
class GridDiniProfile:
    """Unit-direction Dini estimates at every grid point, both directions.

    Rows align with ``dom.points``.  ``*_feasible`` marks directions with at
    least one in-domain probe; infeasible entries carry NaN values and are
    never consulted by the classifiers.
    """

    minus_value: np.ndarray
    plus_value: np.ndarray
    minus_converged: np.ndarray
    plus_converged: np.ndarray
    minus_feasible: np.ndarray
    plus_feasible: np.ndarray

    def descent(self, stat_tol: float) -> tuple[np.ndarray, np.ndarray]:
        """Boolean (minus, plus) arrays: direction descends beyond stat_tol."""
        with np.errstate(invalid="ignore"):
            m = self.minus_feasible & (self.minus_value < -stat_tol)
            p = self.plus_feasible & (self.plus_value < -stat_tol)
        return m, p

    def stationary_mask(self, stat_tol: float) -> np.ndarray:
        m, p = self.descent(stat_tol)
        return ~(m | p)


def grid_dini_profile(
    phi: Callable[[np.ndarray], np.ndarray],
    dom: SampledDomain,
    schedule: DiniSchedule | None = None,
) -> GridDiniProfile:
    """Batch unit-direction estimates for every grid point of ``dom``.

    Numerically identical to calling :func:`lower_dini` per point with
    u = +-1; the probe matrix is evaluated in one vectorized pass.
    """
    if schedule is None:
        schedule = DiniSchedule()
    pts = dom.points
    n = pts.shape[0]
    s = schedule.step_sizes()
    base = phi(pts)

    out: dict[str, np.ndarray] = {}
    for label, sign in (("minus", -1.0), ("plus", 1.0)):
        probes = pts[:, None] + sign * s[None, :]
        in_domain = dom.interval.contains_many(probes)
        vals = phi(probes.reshape(-1)).reshape(n, s.shape[0])
        value = np.full(n, np.nan)
        conv = np.zeros(n, dtype=bool)
        feas = np.zeros(n, dtype=bool)

        # fast path: rows with every probe in-domain and defined share one
        # fixed trailing window, so the whole batch reduces to array ops
        # that reproduce _estimate_one exactly
        clean = in_domain.all(axis=1) & ~np.isnan(vals).any(axis=1) & ~np.isnan(base)
        if s.shape[0] - s.shape[0] // 2 < 2:
            clean[:] = False  # window too short for the batched form
        if clean.any():
            k0 = s.shape[0] // 2
            w_steps = s[k0:]
            diffs = vals[np.ix_(clean, np.arange(k0, s.shape[0]))] - base[clean, None]
            quots = diffs / w_steps[None, :]
            trace = np.minimum.accumulate(quots, axis=1)
            v = trace[:, -1].copy()
            c = np.abs(trace[:, -1] - trace[:, -2]) <= schedule.dini_tol
            s_min = float(w_steps[-1])
            up = (v > 0) & (np.min(diffs, axis=1) >= _JUMP_FACTOR * v * s_min)
            q_max = np.max(quots, axis=1)
            down = (q_max < 0) & (np.max(diffs, axis=1) <= _JUMP_FACTOR * q_max * s_min)
            v[up] = _INF
            v[down] = -_INF
            c[up | down] = True
            value[clean] = v
            conv[clean] = c
            feas[clean] = True

        for i in np.flatnonzero(~clean):
            if not in_domain[i].any() or np.isnan(base[i]):
                continue
            feas[i] = True
            est = _estimate_one(float(base[i]), vals[i], in_domain[i], s, schedule.dini_tol)
            value[i] = est.unit_value
            conv[i] = est.converged
        out[label + "_value"] = value
        out[label + "_converged"] = conv
        out[label + "_feasible"] = feas
    return GridDiniProfile(
        minus_value=out["minus_value"],
        plus_value=out["plus_value"],
        minus_converged=out["minus_converged"],
        plus_converged=out["plus_converged"],
        minus_feasible=out["minus_feasible"],
        plus_feasible=out["plus_feasible"],
    )
