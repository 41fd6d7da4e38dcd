"""Self-similar ODE integration in the variable s = t/x.

The reduced system for (u, rho)(s) is

    du/ds   = 2 c2 u s / D,      drho/ds = 2 rho u (1 - u s) / D,
    D       = s^2 c2 - (1 - u s)^2,      c2 = dp/drho,

singular on the sonic surface D = 0.  The sonic gap function
h(rho, s) = 1/s - sqrt(c2) classifies the sign of D: subsonic arcs keep
u < h and D < 0.  Integration runs an embedded Dormand-Prince 4(5) pair
with dense output; terminal events (sonic approach, vacuum, plateau
edges, range end) are located on the dense output by bisection.

A velocity parametrization ds/du, drho/du is provided to continue
trajectories through sonic tangency points, where the s-form blows up
but the u-form stays regular.
"""

import bisect as _bisect
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from .errors import (
    DegenerateParametrization,
    DomainError,
    NoExit,
    SonicSingularity,
    StepFailure,
)

EPS_SONIC = 1e-10      # relative sonic guard band on |D|
EPS_EVENT = 1e-12      # event bisection width in s
RHO_VAC_REL = 1e-12    # vacuum threshold relative to the data density
EPS_U = 1e-4           # velocity band for classifying sonic stops


@dataclass(frozen=True)
class State:
    u: float
    rho: float

    @property
    def tau(self):
        return math.inf if self.rho == 0.0 else 1.0 / self.rho


@dataclass(frozen=True)
class SelfSimilarPoint:
    s: float
    state: State


class EventKind(str, Enum):
    SONIC_VACUUM = "sonic_vacuum"
    QUIET_STATE = "quiet_state"
    SONIC_INTERIOR = "sonic_interior"
    SUPERSONIC_EDGE = "supersonic_edge"
    PLATEAU_EDGE = "plateau_edge"
    MAX_S_REACHED = "max_s_reached"


@dataclass(frozen=True)
class TerminalEvent:
    kind: EventKind
    at: SelfSimilarPoint
    detail: str = ""


class SegmentKind(str, Enum):
    SMOOTH_ARC = "smooth_arc"
    CONSTANT_STATE = "constant_state"
    PRESSURE_PLATEAU = "pressure_plateau"
    VACUUM = "vacuum"


class DenseTrack:
    """Per-step quartic interpolants of one integration run."""

    def __init__(self, records):
        # record: (s0, s_full_end, u0, rho0, qu, qr); steps tile contiguously
        self.records = records
        self.forward = records[-1][1] >= records[0][0] if records else True
        sgn = 1.0 if self.forward else -1.0
        self.keys = [sgn * r[0] for r in records]
        self._sgn = sgn

    def eval(self, s):
        i = _bisect.bisect_right(self.keys, self._sgn * s) - 1
        i = min(max(i, 0), len(self.records) - 1)
        s0, s1, u0, r0, qu, qr = self.records[i]
        theta = 0.0 if s1 == s0 else (s - s0) / (s1 - s0)
        theta = min(max(theta, 0.0), 1.0)
        return _poly_eval(u0, qu, theta), _poly_eval(r0, qr, theta)


@dataclass
class Segment:
    kind: SegmentKind
    s_range: Tuple[float, float]
    samples: Optional[List[SelfSimilarPoint]] = None
    state: Optional[State] = None
    plateau_params: Optional[Tuple[float, float, float]] = None  # (u_const, rho_start, s_start)
    dense: Optional[DenseTrack] = field(default=None, repr=False)

    def eval_at(self, s):
        """State at s inside the segment's range."""
        if self.kind in (SegmentKind.CONSTANT_STATE, SegmentKind.VACUUM):
            return self.state
        if self.kind is SegmentKind.PRESSURE_PLATEAU:
            u, rho0, s0 = self.plateau_params
            return State(u, plateau_rho(u, rho0, s0, s))
        if self.dense is not None:
            u, rho = self.dense.eval(s)
            return State(u, rho)
        return _sample_interp(self.samples, s)


@dataclass(frozen=True)
class Controls:
    """Integration and fitting tolerances; defaults match the shipped tests."""

    rtol: float = 1e-11
    atol: float = 1e-14
    eps_sonic: float = EPS_SONIC
    eps_sonic_floor: float = 1e-5
    eps_event: float = EPS_EVENT
    rho_vac_rel: float = RHO_VAC_REL
    eps_u: float = EPS_U
    s_max: float = 1e3
    max_steps: int = 2_000_000
    family_samples: int = 65
    eps_entropy: float = 1e-10
    eps_fit: float = 1e-9
    eps_bc: float = 1e-4


# ---------------------------------------------------------------------------
# right-hand sides


def sonic_h(eos, rho, s):
    """Sonic gap 1/s - sqrt(dp/drho); its zero against u degenerates the ODE."""
    return 1.0 / s - eos.sound_speed_rho(rho)


h = sonic_h


def sonic_D(eos, s, u, rho):
    c2 = eos.dp_rho(rho)
    w = 1.0 - u * s
    return s * s * c2 - w * w


def rhs_s(eos, s, u, rho, eps_sonic=EPS_SONIC):
    """du/ds and drho/ds; raises SonicSingularity inside the guard band."""
    c2 = eos.dp_rho(rho)
    w = 1.0 - u * s
    D = s * s * c2 - w * w
    if abs(D) <= eps_sonic * max(1.0, w * w):
        raise SonicSingularity(f"|D|={abs(D)} within guard band at s={s}")
    return 2.0 * c2 * u * s / D, 2.0 * rho * u * w / D


def rhs_u(eos, u, s, rho, eps_degenerate=1e-12):
    """ds/du and drho/du; regular across the sonic surface, but not at u = 0."""
    if abs(u) <= eps_degenerate:
        raise DegenerateParametrization(f"u={u} too close to zero")
    c2 = eos.dp_rho(rho)
    if c2 <= 0.0:
        raise DomainError("velocity parametrization needs dp/drho > 0")
    w = 1.0 - u * s
    D = s * s * c2 - w * w
    return D / (2.0 * c2 * u * s), rho * w / (c2 * s)


# ---------------------------------------------------------------------------
# Dormand-Prince 4(5) with dense output

_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)
_P = (
    (1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432),
    (0.0, 0.0, 0.0, 0.0),
    (0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799),
    (0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072),
    (0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632),
    (0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844),
    (0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423),
)

_FAIL = (SonicSingularity, DomainError, DegenerateParametrization, OverflowError,
         ValueError, ZeroDivisionError)


def _dense_coeffs(h_step, K):
    qu = [0.0, 0.0, 0.0, 0.0]
    qr = [0.0, 0.0, 0.0, 0.0]
    for i in range(7):
        ku, kr = K[i]
        prow = _P[i]
        for j in range(4):
            qu[j] += prow[j] * ku
            qr[j] += prow[j] * kr
    return tuple(c * h_step for c in qu), tuple(c * h_step for c in qr)


def _poly_eval(y0, q, theta):
    acc = 0.0
    for j in (3, 2, 1, 0):
        acc = (acc + q[j]) * theta
    return y0 + acc


def _sample_interp(samples, s):
    ss = [p.s for p in samples]
    i = max(1, min(_bisect.bisect_left(ss, s), len(ss) - 1))
    a, b = samples[i - 1], samples[i]
    t = 0.0 if b.s == a.s else (s - a.s) / (b.s - a.s)
    return State(
        a.state.u + t * (b.state.u - a.state.u),
        a.state.rho + t * (b.state.rho - a.state.rho),
    )


class _Event:
    __slots__ = ("name", "fn", "baseline")

    def __init__(self, name, fn):
        self.name = name
        self.fn = fn
        self.baseline = 0.0


def _integrate_core(f, s0, y0, s_end, events, rtol, atol, max_steps, eps_event):
    """Adaptive DP45 run from s0 to s_end (either direction).

    ``f(x, y0, y1) -> (dy0, dy1)`` may raise; a raising stage fails the
    step.  Events fire on a sign flip against the sign each event first
    exhibits.  Returns (points, dense_records, fired_name, endpoint);
    fired_name is None when s_end was reached, "__step_floor__" when the
    controller pinned against a singular surface.
    """
    direction = 1.0 if s_end >= s0 else -1.0
    u, rho = y0
    evs = [_Event(n, fn) for n, fn in events]
    for ev in evs:
        ev.baseline = ev.fn(s0, u, rho)

    try:
        fu, fr = f(s0, u, rho)
    except _FAIL as exc:
        raise StepFailure(f"right side not evaluable at the start: {exc}") from exc

    scale_u = atol + rtol * max(abs(u), 1.0)
    scale_r = atol + rtol * max(abs(rho), 1.0)
    d0 = math.sqrt(((u / scale_u) ** 2 + (rho / scale_r) ** 2) / 2.0)
    d1 = math.sqrt(((fu / scale_u) ** 2 + (fr / scale_r) ** 2) / 2.0)
    h_abs = 1e-6 if d1 < 1e-30 else min(0.01 * d0 / d1, 0.1 * abs(s_end - s0) + 1e-12)
    h_abs = max(min(h_abs, abs(s_end - s0)), 1e-13)

    points = [(s0, u, rho)]
    dense = []
    s = s0
    for _ in range(max_steps):
        if direction * (s_end - s) <= 0.0:
            return points, dense, None, (s, u, rho)
        h_abs = min(h_abs, abs(s_end - s))
        h_step = direction * h_abs

        K = [(fu, fr)]
        failed = False
        u1 = r1 = 0.0
        for i in range(1, 7):
            arow = _A[i]
            du_acc = 0.0
            dr_acc = 0.0
            for j in range(i):
                du_acc += arow[j] * K[j][0]
                dr_acc += arow[j] * K[j][1]
            su = u + h_step * du_acc
            sr = rho + h_step * dr_acc
            if i == 6:
                u1, r1 = su, sr  # row 6 is the 5th-order combination (FSAL node)
            try:
                ki = f(s + _C[i] * h_step, su, sr)
            except _FAIL:
                failed = True
                break
            K.append(ki)

        err = math.inf
        if not failed:
            err_u = 0.0
            err_r = 0.0
            for j in range(7):
                err_u += _E[j] * K[j][0]
                err_r += _E[j] * K[j][1]
            err_u *= h_step
            err_r *= h_step
            sc_u = atol + rtol * max(abs(u), abs(u1), 1e-300)
            sc_r = atol + rtol * max(abs(rho), abs(r1), 1e-300)
            err = math.sqrt(((err_u / sc_u) ** 2 + (err_r / sc_r) ** 2) / 2.0)
            failed = not (err <= 1.0 and math.isfinite(u1) and math.isfinite(r1))

        if failed:
            h_abs *= 0.25
            if h_abs < 1e-15 * max(1.0, abs(s)):
                return points, dense, "__step_floor__", (s, u, rho)
            continue

        qu, qr = _dense_coeffs(h_step, K)
        s1 = s + h_step

        fired = None
        fired_s = None
        for ev in evs:
            g1 = ev.fn(s1, u1, r1)
            if ev.baseline == 0.0:
                ev.baseline = g1
                continue
            if g1 != 0.0 and (g1 > 0.0) == (ev.baseline > 0.0):
                continue

            def g_dense(theta, _ev=ev):
                uu = _poly_eval(u, qu, theta)
                rr = _poly_eval(rho, qr, theta)
                return _ev.fn(s + theta * h_step, uu, rr)

            a_th, b_th = 0.0, 1.0
            ga = g_dense(a_th)
            if ga == 0.0:
                ga = ev.baseline
            for _ in range(200):
                if abs(b_th - a_th) * h_abs <= eps_event * max(1.0, abs(s)):
                    break
                m_th = 0.5 * (a_th + b_th)
                gm = g_dense(m_th)
                if gm == 0.0:
                    b_th = m_th
                    break
                if (gm > 0.0) == (ga > 0.0):
                    a_th, ga = m_th, gm
                else:
                    b_th = m_th
            s_hit = s + b_th * h_step
            if fired is None or direction * (s_hit - fired_s) < 0.0:
                fired = ev.name
                fired_s = s_hit

        if fired is not None:
            theta = (fired_s - s) / h_step
            ue = _poly_eval(u, qu, theta)
            re = _poly_eval(rho, qr, theta)
            dense.append((s, s1, u, rho, qu, qr))
            points.append((fired_s, ue, re))
            return points, dense, fired, (fired_s, ue, re)

        dense.append((s, s1, u, rho, qu, qr))
        points.append((s1, u1, r1))
        s, u, rho = s1, u1, r1
        fu, fr = K[6]
        err = max(err, 1e-10)
        h_abs *= min(5.0, max(0.2, 0.9 * err ** -0.2))
    raise StepFailure(f"step budget exhausted at s={s}")


# ---------------------------------------------------------------------------
# public integration with terminal-event classification


def integrate_until_event(
    eos,
    start: SelfSimilarPoint,
    direction: int = 1,
    s_max: Optional[float] = None,
    controls: Optional[Controls] = None,
    *,
    supersonic: bool = False,
    rho_ref: Optional[float] = None,
):
    """Advance a smooth arc from ``start`` until a terminal event.

    The start must be strictly subsonic (u < h, D < 0), or lie in the
    supersonic band with ``supersonic=True``.  Returns (Segment,
    TerminalEvent); segment samples are the accepted steps and the event
    location is refined on the dense output to the event tolerance.
    """
    controls = controls or Controls()
    if direction >= 0:
        s_end = controls.s_max if s_max is None else s_max
    else:
        s_end = 0.0 if s_max is None or s_max >= start.s else s_max
    rho_ref = start.state.rho if rho_ref is None else rho_ref
    rho_vac = controls.rho_vac_rel * rho_ref
    eps_guard = controls.eps_sonic * 1e-3

    def f(s, u, rho):
        return rhs_s(eos, s, u, rho, eps_sonic=eps_guard)

    sgn = -1.0 if not supersonic else 1.0

    def g_sonic(s, u, rho):
        # signed distance to the guard band: also fires when a step tunnels
        # across the surface onto the other sheet
        w2 = (1.0 - u * s) ** 2
        return sgn * sonic_D(eos, s, u, rho) / max(1.0, w2) - controls.eps_sonic

    events = [
        ("sonic", g_sonic),
        ("vacuum", lambda s, u, rho: rho - rho_vac),
        ("ucross", lambda s, u, rho: u),
    ]
    lm = eos.landmarks()
    if lm.taut1 is not None:
        events.append(("plateau1", lambda s, u, rho: rho - 1.0 / lm.taut1))
        events.append(("plateau2", lambda s, u, rho: rho - 1.0 / lm.taut2))

    s0 = start.s
    u0, rho0 = start.state.u, start.state.rho
    if s0 > 0.0:
        D0 = sonic_D(eos, s0, u0, rho0)
        if not supersonic and D0 >= 0.0:
            raise SonicSingularity(f"start not subsonic: D={D0} at s={s0}")
        if supersonic and D0 <= 0.0:
            raise SonicSingularity(f"start not in the supersonic band: D={D0}")

    points, dense, name, (se, ue, rhoe) = _integrate_core(
        f, s0, (u0, rho0), s_end,
        events, controls.rtol, controls.atol, controls.max_steps, controls.eps_event,
    )
    samples = [SelfSimilarPoint(s, State(u, r)) for s, u, r in points]
    seg = Segment(
        kind=SegmentKind.SMOOTH_ARC,
        s_range=(min(s0, se), max(s0, se)),
        samples=samples,
        dense=DenseTrack(dense) if dense else None,
    )
    end_pt = SelfSimilarPoint(se, State(ue, rhoe))

    if name is None:
        ev = TerminalEvent(EventKind.MAX_S_REACHED, end_pt)
    elif name == "vacuum":
        ev = TerminalEvent(EventKind.SONIC_VACUUM, end_pt)
    elif name == "plateau1":
        ev = TerminalEvent(EventKind.PLATEAU_EDGE, end_pt, detail="taut1")
    elif name == "plateau2":
        ev = TerminalEvent(EventKind.PLATEAU_EDGE, end_pt, detail="taut2")
    elif name == "ucross":
        # u = 0 is invariant for the exact flow; a numerical crossing only
        # happens at a quiet sonic contact
        ev = TerminalEvent(EventKind.QUIET_STATE, end_pt, detail="u-crossing")
    elif name in ("sonic", "__step_floor__"):
        if name == "__step_floor__":
            # tangential sonic contacts leave the |D| band unreachable in s;
            # a pinned controller close to the surface is the same event
            w2 = (1.0 - ue * se) ** 2
            gap = abs(sonic_D(eos, se, ue, rhoe)) / max(1.0, w2)
            if gap > controls.eps_sonic_floor:
                raise StepFailure(
                    f"step floor away from the sonic surface at s={se} (|D|/norm={gap})"
                )
        ev = _classify_sonic(eos, end_pt, controls, supersonic)
    else:
        raise StepFailure(f"unexpected event {name}")
    return seg, ev


def _classify_sonic(eos, pt, controls, supersonic):
    s, u, rho = pt.s, pt.state.u, pt.state.rho
    c = eos.sound_speed_rho(rho)
    if supersonic:
        if abs(u - (1.0 / s + c)) <= abs(u - (1.0 / s - c)):
            return TerminalEvent(EventKind.SUPERSONIC_EDGE, pt)
        return TerminalEvent(EventKind.SONIC_INTERIOR, pt, detail="lower-edge")
    if abs(u) < controls.eps_u:
        return TerminalEvent(EventKind.QUIET_STATE, pt)
    if abs(1.0 / s - u) < controls.eps_u:
        return TerminalEvent(EventKind.SONIC_VACUUM, pt)
    return TerminalEvent(EventKind.SONIC_INTERIOR, pt)


def continue_past_sonic(
    eos,
    s0,
    u0,
    rho0,
    du_direction,
    controls: Optional[Controls] = None,
    clear_band: float = 1e-6,
):
    """Short velocity-parametrized leg through a sonic tangency.

    Starting from a (numerically) sonic point, integrate in u until the
    denominator has cleared the guard band on the subsonic side.  Returns
    the list of (s, u, rho) points, the last of which is strictly subsonic.
    """
    controls = controls or Controls()

    def f(uu, s, rho):
        return rhs_u(eos, uu, s, rho)

    def g_clear(uu, s, rho):
        # negative near the sonic surface and on its supersonic side,
        # positive once -D clears the band
        w2 = (1.0 - uu * s) ** 2
        return -sonic_D(eos, s, uu, rho) / max(1.0, w2) - clear_band

    u_end = u0 + du_direction * 10.0 * (1.0 + abs(u0) + 1.0 / s0)
    points, _, name, _ = _integrate_core(
        f, u0, (s0, rho0), u_end,
        [("clear", g_clear)], controls.rtol, controls.atol, controls.max_steps,
        controls.eps_event,
    )
    if name != "clear":
        raise StepFailure("sonic continuation never cleared the guard band")
    return [(s, u, rho) for u, s, rho in points]


# ---------------------------------------------------------------------------
# constant-pressure traversal


def plateau_rho(u_const, rho_start, s_start, s):
    """Closed-form density along a constant-pressure band."""
    return rho_start * ((1.0 - u_const * s) / (1.0 - u_const * s_start)) ** 2


def plateau_exit_s(u_const, rho_start, s_start, rho_target):
    if u_const == 0.0:
        raise NoExit("zero velocity never leaves the plateau")
    if u_const > 0.0 and rho_target >= rho_start:
        raise NoExit("rising target density unreachable with u > 0")
    if u_const < 0.0 and rho_target <= rho_start:
        raise NoExit("falling target density unreachable with u < 0")
    r = math.sqrt(rho_target / rho_start)
    s_end = (1.0 - r * (1.0 - u_const * s_start)) / u_const
    if s_end <= s_start or (u_const > 0.0 and u_const * s_end >= 1.0):
        raise NoExit("plateau edge not reached before u*s -> 1")
    return s_end


def plateau_segment(u_const, rho_start, s_start, rho_target):
    """Segment covering the band until the density reaches ``rho_target``."""
    s_end = plateau_exit_s(u_const, rho_start, s_start, rho_target)
    return Segment(
        kind=SegmentKind.PRESSURE_PLATEAU,
        s_range=(s_start, s_end),
        plateau_params=(u_const, rho_start, s_start),
    )
