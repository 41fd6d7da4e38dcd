"""Assembly of complete self-similar wave solutions.

``solve`` dispatches on the sign of the inflow velocity, the law kind and
the position of the data volume among the landmark volumes, then

* advances smooth arcs until a terminal event,
* traverses constant-pressure bands in closed form,
* fits shocks along one-parameter families so the terminal state is quiet
  (u = 0), a vacuum, or a decaying smooth tail, and
* escalates to a second shock when the back-velocity family jumps across
  zero at a branch switch.

Every returned solution tiles (0, s_max] with segments joined either
continuously or by exactly one shock per junction.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from .errors import (
    BracketInvalid,
    ConstructionFailed,
    DomainError,
    EmptyFamily,
    NoRoot,
    NoSignChange,
    WindowEmpty,
)
from .eos import EosKind, EosSpec, tangent_map
from .hugoniot import (
    Carrier,
    ShockRecord,
    admissible_branches,
    make_shock_record,
    shock_family,
)
from .roots import bisect
from .selfsim import (
    Controls,
    EventKind,
    SegmentKind,
    Segment,
    SelfSimilarPoint,
    State,
    TerminalEvent,
    continue_past_sonic,
    integrate_until_event,
    plateau_segment,
    sonic_D,
)

MAX_DEPTH = 4


class Classification(str, Enum):
    CONTINUOUS_VACUUM = "ContinuousVacuum"
    CONTINUOUS_QUIET = "ContinuousQuiet"
    GLOBAL_SMOOTH = "GlobalSmooth"
    RAREFACTION_SHOCK_THEN_VACUUM = "RarefactionShockThenVacuum"
    RAREFACTION_SHOCK_THEN_QUIET = "RarefactionShockThenQuiet"
    RAREFACTION_SHOCK_THEN_SMOOTH = "RarefactionShockThenSmooth"
    SINGLE_COMPRESSION_SHOCK = "SingleCompressionShock"
    TWO_COMPRESSION_SHOCKS = "TwoCompressionShocks"
    PLATEAU_COMPOSITE = "PlateauComposite"


@dataclass
class WaveSolution:
    data: Tuple[float, float]
    eos: EosSpec
    segments: List[Segment]
    shocks: List[ShockRecord]
    classification: Classification
    diagnostics: dict = field(default_factory=dict)
    controls: Controls = field(default_factory=Controls)


# ---------------------------------------------------------------------------
# small helpers


def _diag_put(diag, key, value):
    k = key
    n = 2
    while k in diag:
        k = f"{key}_{n}"
        n += 1
    diag[k] = value


def _truncate_at(segments, s_cut):
    out = []
    for seg in segments:
        lo, hi = seg.s_range
        if hi <= s_cut:
            out.append(seg)
            continue
        if lo >= s_cut:
            break
        if seg.kind is SegmentKind.SMOOTH_ARC:
            samples = [p for p in seg.samples if p.s < s_cut]
            samples.append(SelfSimilarPoint(s_cut, seg.eval_at(s_cut)))
            out.append(
                Segment(SegmentKind.SMOOTH_ARC, (lo, s_cut), samples=samples, dense=seg.dense)
            )
        else:
            out.append(
                Segment(
                    seg.kind,
                    (lo, s_cut),
                    samples=seg.samples,
                    state=seg.state,
                    plateau_params=seg.plateau_params,
                    dense=seg.dense,
                )
            )
        break
    return out


def _quiet_tail(back: State, s_from, controls):
    return Segment(SegmentKind.CONSTANT_STATE, (s_from, controls.s_max), state=back)


def _vacuum_tail(s_star, controls):
    return Segment(
        SegmentKind.VACUUM, (s_star, controls.s_max), state=State(1.0 / s_star, 0.0)
    )


def _merge_uleg_into_arc(uleg_points, arc):
    """Prepend a velocity-parametrized leg to the arc that continues it."""
    pts = [SelfSimilarPoint(s, State(u, rho)) for s, u, rho in uleg_points]
    # keep s strictly increasing across the junction
    merged = []
    for p in pts:
        if not merged or p.s > merged[-1].s:
            merged.append(p)
    for p in arc.samples:
        if p.s > merged[-1].s:
            merged.append(p)
    return Segment(
        SegmentKind.SMOOTH_ARC,
        (merged[0].s, arc.s_range[1]),
        samples=merged,
        dense=arc.dense,
    )


def _plateau_edges(eos):
    lm = eos.landmarks()
    return lm.taut1, lm.taut2, lm.b1, lm.b2


def _inside_plateau(eos, tau):
    if eos.kind is not EosKind.TYPE_III:
        return False
    lm = eos.landmarks()
    return lm.taut1 < tau < lm.taut2


# ---------------------------------------------------------------------------
# family zero fitting


def _branches_at(eos, carrier, s, side, controls):
    front = carrier.eval(s)
    sigma = 1.0 / s
    if sigma <= front.u:
        return front, ()
    branches = admissible_branches(eos, front, sigma, controls.eps_entropy)
    if side == "compression":
        branches = tuple(b for b in branches if b.tau2 < front.tau)
    else:
        branches = tuple(b for b in branches if b.tau2 > front.tau)
    return front, branches


def _fit_zero(eos, carrier, s_lo, s_hi, side, controls, n=None):
    """Largest-s zero of the back velocity on a continuous branch.

    Returns (s_s, front, back_state, label) or None.  Walks the sampled
    family from the top; a bracket requires the back volume to vary
    continuously between its endpoints.
    """
    n = n or controls.family_samples
    samples = []
    for k in range(n):
        s = s_lo + (s_hi - s_lo) * k / (n - 1) if n > 1 else s_hi
        _, branches = _branches_at(eos, carrier, s, side, controls)
        samples.append((s, branches))

    for k in range(n - 1, 0, -1):
        s_b, br_b = samples[k]
        s_a, br_a = samples[k - 1]
        for bb in br_b:
            for ba in br_a:
                if ba.state.u == bb.state.u:
                    continue
                if (ba.state.u > 0.0) == (bb.state.u > 0.0):
                    continue
                gap = abs(ba.tau2 - bb.tau2)
                if gap > 0.5 * max(ba.tau2, bb.tau2):
                    continue  # branch switch, not a zero crossing
                hit = _bisect_branch_zero(eos, carrier, s_a, s_b, ba, bb, side, controls)
                if hit is not None:
                    return hit
    return None


def _bisect_branch_zero(eos, carrier, s_a, s_b, ba, bb, side, controls):
    t_lo = min(ba.tau2, bb.tau2)
    t_hi = max(ba.tau2, bb.tau2)
    pad = 0.6 * (t_hi - t_lo) + 1e-9 * t_hi
    window = (t_lo - pad, t_hi + pad)

    def pick(s):
        _, branches = _branches_at(eos, carrier, s, side, controls)
        cands = [b for b in branches if window[0] <= b.tau2 <= window[1]]
        if not cands:
            return None
        mid = 0.5 * (window[0] + window[1])
        return min(cands, key=lambda b: abs(b.tau2 - mid))

    ua = ba.state.u
    lo, hi = s_a, s_b
    chosen = bb
    for _ in range(200):
        if abs(hi - lo) <= 1e-12 * max(1.0, abs(hi)):
            break
        mid = 0.5 * (lo + hi)
        b = pick(mid)
        if b is None:
            return None
        if (b.state.u > 0.0) == (ua > 0.0):
            lo = mid
        else:
            hi, chosen = mid, b
    s_s = 0.5 * (lo + hi)
    b = pick(s_s) or chosen
    if abs(b.state.u) > max(controls.eps_fit, 1e-6 * (abs(ba.state.u) + abs(bb.state.u))):
        return None
    front = carrier.eval(s_s)
    return s_s, front, b.state, b.label


# ---------------------------------------------------------------------------
# forward flow (u0 > 0 and post-rarefaction continuations)


def _evolve_forward(eos, start, controls, diag, depth, uleg=None):
    if depth > MAX_DEPTH:
        raise ConstructionFailed("continuation recursion exceeded the depth cap")

    tau = start.state.tau
    if _inside_plateau(eos, tau) and start.state.u > 0.0:
        tt1, tt2, b1, b2 = _plateau_edges(eos)
        pl = plateau_segment(start.state.u, start.state.rho, start.s, 1.0 / tt2)
        s_star = pl.s_range[1]
        _diag_put(diag, "s_star", s_star)
        u_c = start.state.u
        if u_c < 1.0 / s_star - b2:
            nxt = SelfSimilarPoint(s_star, State(u_c, (1.0 / tt2) * (1.0 - 1e-12)))
            segs, shocks = _evolve_forward(eos, nxt, controls, diag, depth)
            return [pl] + segs, shocks
        return _fit_rarefaction(eos, [pl], controls, diag, depth)

    seg, ev = integrate_until_event(eos, start, s_max=controls.s_max, controls=controls)
    if uleg:
        seg = _merge_uleg_into_arc(uleg, seg)
    kind = ev.kind
    if kind is EventKind.SONIC_VACUUM:
        _diag_put(diag, "s_star", ev.at.s)
        return [seg, _vacuum_tail(ev.at.s, controls)], []
    if kind is EventKind.QUIET_STATE:
        _diag_put(diag, "s_star", ev.at.s)
        return [seg, _quiet_tail(State(0.0, ev.at.state.rho), ev.at.s, controls)], []
    if kind is EventKind.MAX_S_REACHED:
        return [seg], []
    if kind is EventKind.PLATEAU_EDGE and ev.detail == "taut1":
        _diag_put(diag, "s_1", ev.at.s)
        tt1 = eos.landmarks().taut1
        nxt = SelfSimilarPoint(ev.at.s, State(ev.at.state.u, 1.0 / tt1))
        segs, shocks = _evolve_forward(eos, nxt, controls, diag, depth)
        return [seg] + segs, shocks
    if kind is EventKind.SONIC_INTERIOR:
        _diag_put(diag, "s_star", ev.at.s)
        return _fit_rarefaction(eos, [seg], controls, diag, depth)
    raise ConstructionFailed(
        f"unexpected terminal event {kind.value} in the outflow construction",
        trace=[ev],
    )


def rarefaction_shock_construction(eos, carrier_segments, controls=None, diag=None, depth=0):
    """Fit a rarefaction shock on the admissibility window of a carrier.

    Either lands a quiet state directly, or shocks at the window edge and
    continues through the sonic tangency.  Returns (segments, shocks).
    """
    controls = controls or Controls()
    diag = {} if diag is None else diag
    return _fit_rarefaction(eos, list(carrier_segments), controls, diag, depth)


def _fit_rarefaction(eos, carrier_segs, controls, diag, depth):
    carrier = Carrier(carrier_segs)
    fam = shock_family(eos, carrier, "rarefaction_window", controls)
    if fam.window is None:
        raise WindowEmpty("no admissibility window on the carrier")
    s_lo_w, s_hi_w = fam.window
    _diag_put(diag, "s_star_star", s_lo_w)

    fit = _fit_zero(eos, carrier, s_lo_w * (1.0 + 1e-10), s_hi_w, "rarefaction", controls)
    if fit is not None:
        s_s, front, back, label = fit
        _diag_put(diag, "s_s", s_s)
        rec = make_shock_record(eos, s_s, front, back, controls, label=label)
        segs = _truncate_at(carrier_segs, s_s)
        return segs + [_quiet_tail(back, s_s, controls)], [rec]

    # no zero: shock at the window edge, back state sonic-tangent
    s_cut = s_lo_w
    front = carrier.eval(s_cut)
    _, branches = _branches_at(eos, carrier, s_cut, "rarefaction", controls)
    if not branches:
        # nudge inside the window where the tangency root is clean
        s_cut = s_lo_w * (1.0 + 1e-9) + 1e-15
        front = carrier.eval(s_cut)
        _, branches = _branches_at(eos, carrier, s_cut, "rarefaction", controls)
    if not branches:
        raise ConstructionFailed("window-edge tangency state not recovered")
    back = max(branches, key=lambda b: b.tau2)
    rec = make_shock_record(eos, s_cut, front, back.state, controls, label=back.label)
    uleg = continue_past_sonic(eos, s_cut, back.state.u, back.state.rho, -1.0, controls)
    s1, u1, rho1 = uleg[-1]
    segs, shocks = _evolve_forward(
        eos, SelfSimilarPoint(s1, State(u1, rho1)), controls, diag, depth + 1, uleg=uleg
    )
    return _truncate_at(carrier_segs, s_cut) + segs, [rec] + shocks


# ---------------------------------------------------------------------------
# inflow flow (u0 < 0)


def _build_negative_carrier(eos, start, controls, diag):
    """Arcs and plateau bands up to the point where no subsonic continuation
    exists; returns (segments, s_end) or a finished continuous solution."""
    segs = []
    cur = start
    for _ in range(8):
        tau = cur.state.tau
        if _inside_plateau(eos, tau) or (
            eos.kind is EosKind.TYPE_III
            and abs(tau - eos.landmarks().taut2) <= 1e-11 * tau
        ):
            tt1, tt2, b1, b2 = _plateau_edges(eos)
            pl = plateau_segment(cur.state.u, cur.state.rho, cur.s, 1.0 / tt1)
            segs.append(pl)
            s_exit = pl.s_range[1]
            u_c = cur.state.u
            _diag_put(diag, "s_star", s_exit)
            if u_c >= 1.0 / s_exit - b1:
                return segs, s_exit, None
            cur = SelfSimilarPoint(s_exit, State(u_c, (1.0 / tt1) * (1.0 + 1e-12)))
            continue

        near_sonic = False
        if cur.s > 0.0:
            w2 = (1.0 - cur.state.u * cur.s) ** 2
            near_sonic = abs(sonic_D(eos, cur.s, cur.state.u, cur.state.rho)) / max(1.0, w2) < 1e-6
        uleg = None
        if near_sonic:
            uleg = continue_past_sonic(
                eos, cur.s, cur.state.u, cur.state.rho, +1.0, controls
            )
            s1, u1, r1 = uleg[-1]
            cur = SelfSimilarPoint(s1, State(u1, r1))

        seg, ev = integrate_until_event(eos, cur, s_max=controls.s_max, controls=controls)
        if uleg:
            seg = _merge_uleg_into_arc(uleg, seg)
        if ev.kind is EventKind.QUIET_STATE:
            segs.append(seg)
            _diag_put(diag, "s_star", ev.at.s)
            return segs, ev.at.s, "quiet"
        if ev.kind is EventKind.SONIC_INTERIOR:
            segs.append(seg)
            _diag_put(diag, "s_star", ev.at.s)
            return segs, ev.at.s, None
        if ev.kind is EventKind.PLATEAU_EDGE and ev.detail == "taut2":
            segs.append(seg)
            _diag_put(diag, "s_1", ev.at.s)
            tt2 = eos.landmarks().taut2
            cur = SelfSimilarPoint(ev.at.s, State(ev.at.state.u, 1.0 / tt2))
            continue
        raise ConstructionFailed(
            f"unexpected terminal event {ev.kind.value} on an inflow carrier",
            trace=[ev],
        )
    raise ConstructionFailed("inflow carrier alternated too many times")


def _evolve_negative(eos, start, controls, diag, depth):
    if depth > MAX_DEPTH:
        raise ConstructionFailed("continuation recursion exceeded the depth cap")

    segs, s_end, terminal = _build_negative_carrier(eos, start, controls, diag)
    if terminal == "quiet":
        last = segs[-1].eval_at(s_end)
        return segs + [_quiet_tail(State(0.0, last.rho), s_end, controls)], []

    carrier = Carrier(segs)
    fam = shock_family(eos, carrier, "compression_fit", controls)
    s_floor = max(start.s, s_end / (1000.0 * controls.family_samples))
    if start.s > 0.0:
        s_floor = start.s + (s_end - start.s) * 1e-9
    fit = _fit_zero(eos, carrier, s_floor, s_end, "compression", controls)
    if fit is not None:
        s_s, front, back, label = fit
        _diag_put(diag, "s_s", s_s)
        rec = make_shock_record(eos, s_s, front, back, controls, label=label)
        return _truncate_at(segs, s_s) + [_quiet_tail(back, s_s, controls)], [rec]

    return two_shock_construction(eos, segs, fam, controls, diag, depth)


def two_shock_construction(eos, carrier_segs, family, controls=None, diag=None, depth=0):
    """Escalation when the back-velocity family jumps across zero.

    Places the first shock at the branch-switch location (back state on
    the tangency/plateau-edge branch, moving inward), then restarts the
    inflow construction from that state.  Returns (segments, shocks).
    """
    controls = controls or Controls()
    diag = {} if diag is None else diag
    carrier = Carrier(carrier_segs)
    if not family.jumps:
        raise NoSignChange(
            "back-velocity family has no zero and no branch switch to escalate through"
        )
    for s_up in sorted(family.jumps, reverse=True):
        _, branches = _branches_at(eos, carrier, s_up, "compression", controls)
        if len(branches) < 2:
            continue
        b_minus = max(branches, key=lambda b: b.tau2)
        b_plus = min(branches, key=lambda b: b.tau2)
        if not (b_minus.state.u < 0.0 < b_plus.state.u):
            continue
        _diag_put(diag, "s_up", s_up)
        front = carrier.eval(s_up)
        rec1 = make_shock_record(eos, s_up, front, b_minus.state, controls, label=b_minus.label)
        nxt = SelfSimilarPoint(s_up, b_minus.state)
        segs2, shocks2 = _evolve_negative(eos, nxt, controls, diag, depth + 1)
        return _truncate_at(carrier_segs, s_up) + segs2, [rec1] + shocks2
    raise ConstructionFailed("no branch switch straddles zero; construction exhausted")


def fit_quiet_shock(eos, family_or_carrier, controls=None):
    """Zero of the back-velocity family (speed fit to a quiet state).

    Accepts a carrier (or its segments); returns (s_s, ShockRecord).
    Raises NoSignChange when every continuous branch keeps one sign.
    """
    controls = controls or Controls()
    carrier = (
        family_or_carrier
        if isinstance(family_or_carrier, Carrier)
        else Carrier(family_or_carrier)
    )
    s_hi = carrier.s_hi
    s_lo = max(carrier.s_lo, s_hi / (1000.0 * controls.family_samples))
    if carrier.s_lo > 0.0:
        s_lo = carrier.s_lo * (1.0 + 1e-9)
    fit = _fit_zero(eos, carrier, s_lo, s_hi, "compression", controls)
    if fit is None:
        raise NoSignChange("no zero of the back velocity on any continuous branch")
    s_s, front, back, label = fit
    return s_s, make_shock_record(eos, s_s, front, back, controls, label=label)


# ---------------------------------------------------------------------------
# classification and entry points


def _classify(segments, shocks, controls):
    n_shock = len(shocks)
    last = segments[-1]
    if n_shock == 0:
        if any(s.kind is SegmentKind.PRESSURE_PLATEAU for s in segments):
            return Classification.PLATEAU_COMPOSITE
        if last.kind is SegmentKind.VACUUM:
            return Classification.CONTINUOUS_VACUUM
        if last.kind is SegmentKind.CONSTANT_STATE:
            return Classification.CONTINUOUS_QUIET
        return Classification.GLOBAL_SMOOTH
    if n_shock == 1:
        if shocks[0].kind == "rarefaction":
            if last.kind is SegmentKind.VACUUM:
                return Classification.RAREFACTION_SHOCK_THEN_VACUUM
            if last.kind is SegmentKind.CONSTANT_STATE:
                return Classification.RAREFACTION_SHOCK_THEN_QUIET
            return Classification.RAREFACTION_SHOCK_THEN_SMOOTH
        return Classification.SINGLE_COMPRESSION_SHOCK
    if n_shock == 2 and all(r.kind == "compression" for r in shocks):
        return Classification.TWO_COMPRESSION_SHOCKS
    raise ConstructionFailed(f"unclassifiable wave structure with {n_shock} shocks")


def _case_tag(eos, u0, tau0):
    lm = eos.landmarks()
    if u0 == 0.0:
        return "constant"
    if eos.kind is EosKind.TYPE_I:
        return "§3.1" if u0 > 0 else "§4.1"
    if eos.kind is EosKind.TYPE_II:
        if u0 > 0:
            if tau0 >= lm.tau2_i:
                return "§3.2.1"
            if tau0 >= lm.tau1_i:
                return "§3.2.2"
            return "§3.2.3"
        if tau0 <= lm.tau1_i:
            return "§4.2.1"
        if tau0 < lm.tau2_i:
            return "§4.2.2"
        return "§4.2.3"
    if u0 > 0:
        if tau0 >= lm.taut2:
            return "§3.3.1"
        if tau0 > lm.taut1:
            return "§3.3.2"
        return "§3.3.3"
    if tau0 <= lm.taut1:
        return "§4.3.1"
    if tau0 <= lm.taut2:
        return "§4.3.2"
    return "§4.3.3"


def _nudge_off_landmarks(eos, rho0, diag):
    lm = eos.landmarks()
    tau0 = 1.0 / rho0
    for name, v in lm.as_dict().items():
        if name in ("b1", "b2"):
            continue
        if v > 0 and abs(tau0 - v) <= 1e-12 * v and tau0 != v * (1.0 + 1e-12):
            tau0 = v * (1.0 + 1e-12)
            _diag_put(diag, "nudged_off", name)
            return 1.0 / tau0
    return rho0


def solve(eos: EosSpec, u0: float, rho0: float, controls: Optional[Controls] = None):
    """Complete self-similar solution for the data (u0, rho0).

    Raises ConstructionFailed when the realized event sequence leaves the
    implemented case table; never silently returns a bad structure.
    """
    controls = controls or Controls()
    if rho0 <= 0.0:
        raise DomainError("rho0 must be positive")
    diag = {}
    rho0 = _nudge_off_landmarks(eos, rho0, diag)
    tau0 = 1.0 / rho0
    lo, hi = eos.tau_domain
    if not (lo < tau0 < hi):
        raise DomainError(f"tau0={tau0} outside the law domain ({lo}, {hi})")
    diag["case"] = _case_tag(eos, u0, tau0)

    if u0 == 0.0:
        segs = [
            Segment(
                SegmentKind.CONSTANT_STATE, (0.0, controls.s_max), state=State(0.0, rho0)
            )
        ]
        shocks = []
    elif u0 > 0.0:
        segs, shocks = _evolve_forward(
            eos, SelfSimilarPoint(0.0, State(u0, rho0)), controls, diag, depth=0
        )
    else:
        segs, shocks = _evolve_negative(
            eos, SelfSimilarPoint(0.0, State(u0, rho0)), controls, diag, depth=0
        )

    cls = _classify(segs, shocks, controls)
    return WaveSolution(
        data=(u0, rho0),
        eos=eos,
        segments=segs,
        shocks=shocks,
        classification=cls,
        diagnostics=diag,
        controls=controls,
    )


# ---------------------------------------------------------------------------
# compression impossibility probe (negative test support)


def probe_compression_deadend(eos, carrier_segments, s1, controls: Optional[Controls] = None):
    """Post-shock evolution of a compression fitted inside a sonic-interior
    carrier: the back state sits in the supersonic band and must exit
    through its upper edge, leaving no admissible continuation."""
    controls = controls or Controls()
    carrier = Carrier(carrier_segments)
    front = carrier.eval(s1)
    _, branches = _branches_at(eos, carrier, s1, "compression", controls)
    if not branches:
        raise NoRoot(f"no admissible compression at s={s1}")
    back = branches[0].state
    rec = make_shock_record(eos, s1, front, back, controls, label=branches[0].label)
    seg, ev = integrate_until_event(
        eos,
        SelfSimilarPoint(s1, back),
        s_max=controls.s_max,
        controls=controls,
        supersonic=True,
    )
    return rec, seg, ev


# ---------------------------------------------------------------------------
# critical inflow velocity


def critical_u0(
    eos,
    rho0,
    bracket: Tuple[float, float],
    controls: Optional[Controls] = None,
    tol: float = 1e-6,
):
    """Bisection on the terminal-event class between quiet and vacuum data.

    Returns (interval, trace, WaveSolution): the interval has width <= tol;
    the solution is the global smooth run at the refined midpoint,
    integrated to controls.s_max.  The endpoints must classify as
    QuietState (lower) and SonicVacuum (upper).
    """
    controls = controls or Controls()
    s_cls_cap = 1e9

    def classify(u0):
        s_cls = controls.s_max
        while True:
            _, ev = integrate_until_event(
                eos, SelfSimilarPoint(0.0, State(u0, rho0)), s_max=s_cls, controls=controls
            )
            if ev.kind in (EventKind.SONIC_VACUUM, EventKind.QUIET_STATE):
                return ev.kind
            if ev.kind is not EventKind.MAX_S_REACHED or s_cls >= s_cls_cap:
                return ev.kind
            s_cls *= 32.0

    lo, hi = bracket
    trace = []
    k_lo = classify(lo)
    k_hi = classify(hi)
    if k_lo is not EventKind.QUIET_STATE:
        raise BracketInvalid(f"lower endpoint classifies as {k_lo.value}, not quiet")
    if k_hi is not EventKind.SONIC_VACUUM:
        raise BracketInvalid(f"upper endpoint classifies as {k_hi.value}, not vacuum")
    trace.append((lo, k_lo.value))
    trace.append((hi, k_hi.value))

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        k = classify(mid)
        trace.append((mid, k.value))
        if k is EventKind.SONIC_VACUUM:
            hi = mid
        elif k is EventKind.QUIET_STATE:
            lo = mid
        else:
            break  # unresolvable at the classification cap: mid is critical
    interval = (lo, hi)

    # refine further until the midpoint survives to s_max untriggered
    d_lo, d_hi = lo, hi
    for _ in range(60):
        mid = 0.5 * (d_lo + d_hi)
        _, ev = integrate_until_event(
            eos, SelfSimilarPoint(0.0, State(mid, rho0)), s_max=controls.s_max,
            controls=controls,
        )
        if ev.kind is EventKind.MAX_S_REACHED:
            break
        k = classify(mid)
        if k is EventKind.SONIC_VACUUM:
            d_hi = mid
        elif k is EventKind.QUIET_STATE:
            d_lo = mid
        else:
            break
    else:
        raise ConstructionFailed("no midpoint reaches s_max inside the bracket")

    solution = solve(eos, mid, rho0, controls)
    return interval, trace, solution
