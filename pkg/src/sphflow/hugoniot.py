"""Forward shock relations, entropy admissibility and shock families.

A forward discontinuity with speed sigma, front state (u1, tau1) and back
state (u2, tau2) satisfies

    sigma = u1 + tau1 * sqrt(-m) = u2 + tau2 * sqrt(-m),
    u2    = u1 + (tau1 - tau2) * sqrt(-m),        m = chord(tau1, tau2) < 0.

Admissibility is the chord test: the chord magnitude to the back volume
must dominate the chord magnitude to every intermediate volume.  For
nonconvex laws the back-state equation can have up to three roots; the
set of admissible back volumes is a union of at most two intervals whose
endpoints are tangency constructions from the front volume.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .eos import EosKind, tangent_map
from .errors import DomainError, EmptyFamily, InvalidChord, NoRoot, RootNotBracketed
from .roots import bisect, geometric_grid, refine_minimum, scan_sign_changes
from .selfsim import Controls, Segment, State

EPS_ENTROPY = 1e-10
DOUBLE_ROOT_REL = 1e-8
_SCAN_CELLS = 256


@dataclass(frozen=True)
class ShockRecord:
    s_shock: float
    sigma: float
    front: State
    back: State
    kind: str                 # "compression" | "rarefaction"
    entropy_margin: float
    branch_label: str = "single"
    boundary_admissible: bool = False


@dataclass(frozen=True)
class BackBranch:
    state: State
    tau2: float
    label: str
    margin: float
    double_root: bool = False


@dataclass(frozen=True)
class FamilySample:
    s: float
    front: State
    xi_hat: Optional[float]
    F: float
    branches: Tuple[BackBranch, ...]


@dataclass
class ShockFamily:
    kind: str                          # "compression_fit" | "rarefaction_window"
    samples: List[FamilySample]
    jumps: List[float] = field(default_factory=list)       # zeros of F
    window: Optional[Tuple[float, float]] = None           # [s_star2, s_star]


@dataclass(frozen=True)
class AdmissibleSets:
    front: State
    compression_intervals: Tuple[Tuple[float, float], ...]
    rarefaction_intervals: Tuple[Tuple[float, float], ...]
    boundary_volumes: dict


class Carrier:
    """Contiguous run of segments acting as the front-state curve of a family."""

    def __init__(self, segments):
        if isinstance(segments, Segment):
            segments = [segments]
        self.segments = list(segments)
        self.s_lo = self.segments[0].s_range[0]
        self.s_hi = self.segments[-1].s_range[1]

    def eval(self, s):
        for seg in self.segments:
            if s <= seg.s_range[1] or seg is self.segments[-1]:
                return seg.eval_at(min(max(s, seg.s_range[0]), seg.s_range[1]))
        return self.segments[-1].eval_at(s)


# ---------------------------------------------------------------------------
# pointwise relations


def shock_speed(eos, front: State, tau_back):
    """Forward speed of the shock joining ``front`` to the volume tau_back."""
    tau1 = front.tau
    m = eos.chord(tau1, tau_back)
    if m >= 0.0:
        raise InvalidChord(f"chord slope {m} >= 0 between {tau1} and {tau_back}")
    return front.u + tau1 * math.sqrt(-m)


def back_velocity(eos, front: State, tau_back):
    tau1 = front.tau
    m = eos.chord(tau1, tau_back)
    if m >= 0.0:
        raise InvalidChord(f"chord slope {m} >= 0 between {tau1} and {tau_back}")
    return front.u + (tau1 - tau_back) * math.sqrt(-m)


def back_state(eos, front: State, sigma, controls: Optional[Controls] = None):
    """All back states of a forward shock with the given speed.

    Roots tau2 of tau1^2 * (-chord(tau1, tau2)) = (sigma - u1)^2 over the
    law's domain, each paired with the velocity from the jump relations.
    Returns a list of (State, label) ordered by tau2; labels are
    "single" or "plus"/"middle"/"minus" (ascending tau2).  The velocity is
    formed with the root identity, so both speed forms hold to root
    tolerance.  Raises NoRoot when no volume matches.
    """
    branches = _back_roots(eos, front, sigma)
    if not branches:
        raise NoRoot(f"no back state at sigma={sigma} from front tau={front.tau}")
    labels = _branch_labels(len(branches))
    du = sigma - front.u
    tau1 = front.tau
    out = []
    for tau2, label in zip(branches, labels):
        u2 = front.u + (tau1 - tau2) * du / tau1
        out.append((State(u2, 1.0 / tau2), label))
    return out


def _branch_labels(n):
    if n == 1:
        return ["single"]
    if n == 2:
        return ["plus", "minus"]
    if n == 3:
        return ["plus", "middle", "minus"]
    return [f"root{i}" for i in range(n)]


def _back_roots(eos, front: State, sigma):
    tau1 = front.tau
    if not sigma > front.u:
        raise DomainError(f"forward shock needs sigma > u1 ({sigma} <= {front.u})")
    rhs = (sigma - front.u) ** 2
    p1 = eos.p(tau1)
    lo_dom, hi_dom = eos.tau_domain

    def G(t2):
        return -tau1 * tau1 * eos.chord(tau1, t2) - rhs

    scale = max(rhs, tau1 * tau1 * abs(eos.dp(tau1)), 1e-300)
    tol_g = 1e-9 * scale

    grid = _composite_grid(eos, tau1, p1, rhs, lo_dom, hi_dom)
    roots = []
    for a, b, _, _ in scan_sign_changes(G, grid):
        roots.append(a if a == b else bisect(G, a, b, rel_tol=1e-13))

    for cand in _tangency_candidates(eos, tau1):
        roots.extend(_probe_touch(G, cand, tol_g))

    roots = sorted(set(roots))
    merged = []
    for r in roots:
        if merged and abs(r - merged[-1]) <= DOUBLE_ROOT_REL * max(abs(r), 1.0):
            continue
        merged.append(r)
    return merged


def _composite_grid(eos, tau1, p1, rhs, lo_dom, hi_dom):
    """Scan nodes: log offsets from tau1 both ways, refined across any
    concave band or plateau, floored where the pressure exceeds the chord
    demand and capped where the chord magnitude falls below it."""
    # deep-compression floor: p(lo) > p1 + rhs/tau1 guarantees a positive G
    lo = None
    for k in range(2, 120):
        t = lo_dom + (tau1 - lo_dom) * 2.0 ** (-k) if math.isfinite(lo_dom) else tau1 * 2.0 ** (-k)
        if t <= lo_dom:
            break
        try:
            if eos.p(t) > p1 + rhs / tau1:
                lo = t
                break
        except DomainError:
            break
    if lo is None:
        lo = lo_dom + (tau1 - lo_dom) * 1e-12 if lo_dom > 0 else tau1 * 1e-12
        lo = max(lo, lo_dom * (1.0 + 1e-12)) if lo_dom > 0 else lo

    # rarefaction cap: chord magnitude decays like (p1 - p)/(t - tau1)
    hi = 4.0 * tau1
    while hi < (hi_dom if math.isfinite(hi_dom) else 1e12):
        try:
            if tau1 * tau1 * (p1 - eos.p(hi)) / (hi - tau1) < 0.5 * rhs:
                break
        except DomainError:
            break
        hi *= 2.0
    hi = min(hi, hi_dom * (1.0 - 1e-12) if math.isfinite(hi_dom) else hi)

    nodes = set()
    span_lo = tau1 - lo
    if span_lo > 0:
        for d in geometric_grid(1e-12 * tau1, span_lo, _SCAN_CELLS):
            nodes.add(tau1 - d)
    span_hi = hi - tau1
    if span_hi > 0:
        for d in geometric_grid(1e-12 * tau1, span_hi, _SCAN_CELLS):
            nodes.add(tau1 + d)
    nodes.add(lo)

    lm = eos.landmarks()
    bands = []
    if lm.tau1_i is not None:
        bands.append((lm.tau1_i, lm.tau2_i))
        bands.append((lm.tau2_i, lm.tauhat2 * 1.2))
    if lm.taut1 is not None:
        bands.append((lm.taut1 * 0.95, lm.taut2 * 1.05))
    for a, b in bands:
        a = max(a, lo)
        b = min(b, hi)
        if a < b:
            for k in range(129):
                nodes.add(a + (b - a) * k / 128.0)
    return sorted(t for t in nodes if lo_dom < t and t < hi_dom)


def _tangency_candidates(eos, tau1):
    lm = eos.landmarks()
    cands = []
    if eos.kind is EosKind.TYPE_II:
        if lm.tau2_i < tau1 < lm.tau3:
            try:
                cands.append(tangent_map(eos, "psi", tau1))
            except (DomainError, RootNotBracketed):
                pass
        if lm.tauhat1 <= tau1 < lm.tau2_i:
            try:
                cands.append(tangent_map(eos, "f", tau1))
            except (DomainError, RootNotBracketed):
                pass
    elif eos.kind is EosKind.TYPE_III:
        if lm.taut1 <= tau1 <= lm.taut2:
            try:
                cands.append(tangent_map(eos, "g", tau1))
            except (DomainError, RootNotBracketed):
                pass
        if tau1 > lm.taut2:
            cands.append(lm.taut2)
            cands.append(lm.taut1)
    return cands


def _probe_touch(G, cand, tol_g):
    """Roots hiding in a tangential touch of G near the candidate volume."""
    w = 2e-4 * max(abs(cand), 1.0)
    a, b = cand - w, cand + w
    try:
        ga, gb = G(a), G(b)
    except DomainError:
        return []
    xm, gm = refine_minimum(lambda t: abs(G(t)), a, b)
    g_signed = G(xm)
    if abs(g_signed) <= tol_g:
        return [xm]
    if g_signed < 0.0 < min(ga, gb):
        out = []
        out.append(bisect(G, a, xm, rel_tol=1e-13))
        out.append(bisect(G, xm, b, rel_tol=1e-13))
        return out
    return []


# ---------------------------------------------------------------------------
# entropy condition


def entropy_E(eos, front: State, tau_back, n=512, eps=EPS_ENTROPY):
    """Chord test between the front volume and tau_back.

    Returns (admissible, margin): margin is the minimum over interior
    volumes of |chord to back| - |chord to intermediate|, sampled on an
    n-point open grid with golden-section refinement at interior minima.
    """
    tau1 = front.tau
    if abs(tau_back - tau1) <= 1e-12 * max(tau1, 1.0):
        return True, 0.0
    m_back = eos.chord(tau1, tau_back)
    if m_back >= 0.0:
        return False, -math.inf

    def margin_at(t):
        return eos.chord(tau1, t) - m_back  # == (-m_back) - (-chord(tau1, t))

    lo, hi = (tau_back, tau1) if tau_back < tau1 else (tau1, tau_back)
    vals = []
    for k in range(n):
        t = lo + (hi - lo) * (k + 0.5) / n
        vals.append((margin_at(t), t))
    m_min, t_min = min(vals)
    i_min = int((t_min - lo) / (hi - lo) * n - 0.5)
    if 0 < i_min < n - 1:
        a = lo + (hi - lo) * (i_min - 0.5) / n
        b = lo + (hi - lo) * (i_min + 1.5) / n
        _, m_ref = refine_minimum(margin_at, a, b)
        m_min = min(m_min, m_ref)
    return m_min >= -eps, m_min


# ---------------------------------------------------------------------------
# admissible sets (corollary table)


def _chord_cross(eos, tau1, slope, lo, hi, n=1024, pick="first"):
    """Volume x in (lo, hi) where chord(x, tau1) equals ``slope``."""

    def T(x):
        return eos.chord(x, tau1) - slope

    lo = max(lo, eos.tau_domain[0] * (1.0 + 1e-12)) if eos.tau_domain[0] > 0 else max(lo, 1e-12)
    cells = scan_sign_changes(T, geometric_grid(lo, hi, n))
    if not cells:
        raise RootNotBracketed(f"no chord crossing at slope {slope} in ({lo}, {hi})")
    a, b, _, _ = cells[0] if pick == "first" else cells[-1]
    return a if a == b else bisect(T, a, b)


def _deep_floor(eos, tau1, slope):
    """A volume small enough that the chord from tau1 is steeper than ``slope``."""
    lo_dom = eos.tau_domain[0]
    p1 = eos.p(tau1)
    for k in range(2, 200):
        t = lo_dom + (tau1 - lo_dom) * 2.0 ** (-k) if math.isfinite(lo_dom) else tau1 * 2 ** (-k)
        if t <= lo_dom:
            break
        if eos.chord(t, tau1) < slope:
            return t
    raise RootNotBracketed("domain floor never steepens the chord past the slope")


def admissible_sets(eos, front: State, controls: Optional[Controls] = None):
    """Intervals of back volumes reachable by admissible forward shocks."""
    memo = getattr(eos, "_adm_memo", None)
    if memo is None:
        memo = {}
        eos._adm_memo = memo
    tau1 = front.tau
    cached = memo.get(tau1)
    if cached is None:
        cached = _admissible_sets_tau(eos, tau1)
        memo[tau1] = cached
    comp, rare, bvols = cached
    return AdmissibleSets(
        front=front,
        compression_intervals=comp,
        rarefaction_intervals=rare,
        boundary_volumes=dict(bvols),
    )


def _admissible_sets_tau(eos, tau1):
    lo_dom = eos.tau_domain[0]
    lm = eos.landmarks()
    bvols = {}

    if eos.kind is EosKind.TYPE_I:
        return ((lo_dom, tau1),), (), bvols

    if eos.kind is EosKind.TYPE_II:
        t1i, t2i, th1, th2, t3 = lm.tau1_i, lm.tau2_i, lm.tauhat1, lm.tauhat2, lm.tau3
        comp: tuple
        if tau1 <= t1i or tau1 >= t3:
            comp = ((lo_dom, tau1),)
        elif tau1 <= t2i:
            slope = eos.dp(tau1)
            tau_a = _chord_cross(eos, tau1, slope, _deep_floor(eos, tau1, slope), t1i)
            bvols["tau1a"] = tau_a
            comp = ((lo_dom, tau_a),)
        else:
            tau_c_ = tangent_map(eos, "psi", tau1)
            slope = eos.dp(tau_c_)
            tau_b = _chord_cross(eos, tau1, slope, _deep_floor(eos, tau1, slope), t1i)
            bvols["tau1b"] = tau_b
            bvols["tau1c"] = tau_c_
            comp = ((lo_dom, tau_b), (tau_c_, tau1))

        rare: tuple = ()
        if th1 < tau1 <= t1i:
            # the tangent at tau1 re-crosses the graph beyond the left
            # inflection; scanning from there skips the tangency at tau1
            slope = eos.dp(tau1)
            tau_d = _chord_cross(eos, tau1, slope, t1i * (1.0 + 1e-9), th2 * 1.05)
            tau_f = tangent_map(eos, "f", tau1)
            bvols["tau1d"] = tau_d
            bvols["tau1f"] = tau_f
            rare = ((tau_d, tau_f),)
        elif t1i < tau1 < t2i:
            tau_g = tangent_map(eos, "f", tau1)
            bvols["tau1g"] = tau_g
            rare = ((tau1, tau_g),)
        return comp, rare, bvols

    # type3
    tt1, tt2 = lm.taut1, lm.taut2
    if tau1 <= tt2:
        comp = ((lo_dom, min(tt1, tau1)),)
    else:
        kappa = tangent_map(eos, "kappa", tau1)
        tau_h = _chord_cross(eos, tau1, kappa, _deep_floor(eos, tau1, kappa), tt1)
        bvols["tau1h"] = tau_h
        comp = ((lo_dom, tau_h), (tt2, tau1))
    rare = ()
    if tt1 < tau1 < tt2:
        tau_i = tangent_map(eos, "g", tau1)
        bvols["tau1i"] = tau_i
        rare = ((tt2, tau_i),)
    return comp, rare, bvols


# ---------------------------------------------------------------------------
# shock families along a carrier


def family_xi_hat(eos, front: State, family_kind):
    """Tangency-bound speed at this front, or None when no bound applies."""
    lm = eos.landmarks()
    tau1 = front.tau
    try:
        if family_kind == "compression_fit":
            if eos.kind is EosKind.TYPE_II and lm.tau2_i < tau1 < lm.tau3:
                psi = tangent_map(eos, "psi", tau1)
                return front.u + tau1 * math.sqrt(-eos.dp(psi))
            if eos.kind is EosKind.TYPE_III and tau1 > lm.taut2:
                kappa = tangent_map(eos, "kappa", tau1)
                return front.u + tau1 * math.sqrt(-kappa)
            return None
        if eos.kind is EosKind.TYPE_II and lm.tauhat1 <= tau1 < lm.tau2_i:
            fv = tangent_map(eos, "f", tau1)
            return front.u + tau1 * math.sqrt(-eos.dp(fv))
        if eos.kind is EosKind.TYPE_III and lm.taut1 <= tau1 <= lm.taut2:
            gv = tangent_map(eos, "g", tau1)
            return front.u + tau1 * math.sqrt(-eos.dp(gv, side=+1))
        return None
    except (DomainError, RootNotBracketed):
        return None


def admissible_branches(eos, front: State, sigma, eps_entropy=EPS_ENTROPY, n_margin=256):
    """Back-state branches at this speed that pass the chord test."""
    try:
        candidates = back_state(eos, front, sigma)
    except NoRoot:
        return ()
    out = []
    tau1 = front.tau
    for st, label in candidates:
        ok, margin = entropy_E(eos, front, st.tau, n=n_margin, eps=eps_entropy)
        if ok:
            out.append(
                BackBranch(
                    state=st,
                    tau2=st.tau,
                    label=label,
                    margin=margin,
                    double_root=False,
                )
            )
    return tuple(out)


def shock_family(eos, carrier, family_kind, controls: Optional[Controls] = None):
    """Sampled one-parameter family of candidate shocks along a carrier.

    family_kind "compression_fit" samples the admissible compression
    branches and the branch-jump function F; "rarefaction_window" also
    locates the window [s_star2, s_star] where rarefaction shocks are
    admissible.  Raises EmptyFamily when nothing on the carrier admits a
    shock.
    """
    controls = controls or Controls()
    if not isinstance(carrier, Carrier):
        carrier = Carrier(carrier)
    n = controls.family_samples
    s_hi = carrier.s_hi
    s_lo = max(carrier.s_lo, s_hi / (1000.0 * n))
    samples = []
    for k in range(n):
        s = s_lo + (s_hi - s_lo) * k / (n - 1)
        front = carrier.eval(s)
        xi = family_xi_hat(eos, front, family_kind)
        F = math.inf if xi is None else 1.0 / s - xi
        sigma = 1.0 / s
        branches = ()
        if sigma > front.u:
            branches = admissible_branches(eos, front, sigma, controls.eps_entropy)
            if family_kind == "compression_fit":
                branches = tuple(b for b in branches if b.tau2 < front.tau)
            else:
                branches = tuple(b for b in branches if b.tau2 > front.tau)
        samples.append(FamilySample(s=s, front=front, xi_hat=xi, F=F, branches=branches))

    fam = ShockFamily(kind=family_kind, samples=samples)

    def F_of(s):
        front = carrier.eval(s)
        xi = family_xi_hat(eos, front, family_kind)
        return math.inf if xi is None else 1.0 / s - xi

    finite = [(p.s, p.F) for p in samples if math.isfinite(p.F)]
    for (sa, fa), (sb, fb) in zip(finite[:-1], finite[1:]):
        if fa == 0.0 or (fb != 0.0 and (fa > 0.0) != (fb > 0.0)):
            fam.jumps.append(bisect(F_of, sa, sb, rel_tol=1e-12) if fa != 0.0 else sa)

    if family_kind == "rarefaction_window":
        if not finite or all(f > 0.0 for _, f in finite):
            raise EmptyFamily("no carrier point admits a rarefaction shock")
        s_star2 = fam.jumps[-1] if fam.jumps else None
        if s_star2 is None:
            # window extends to the sampled floor
            s_star2 = finite[0][0]
        fam.window = (s_star2, s_hi)

    if family_kind == "compression_fit" and all(not p.branches for p in samples):
        raise EmptyFamily("no carrier point admits a compression shock")
    return fam


def make_shock_record(eos, s, front: State, back: State, controls: Optional[Controls] = None,
                      label="single", n_margin=512):
    """Assemble the final record for a fitted shock at s (speed 1/s)."""
    controls = controls or Controls()
    sigma = 1.0 / s
    ok, margin = entropy_E(eos, front, back.tau, n=n_margin, eps=controls.eps_entropy)
    kind = "compression" if back.tau < front.tau else "rarefaction"
    return ShockRecord(
        s_shock=s,
        sigma=sigma,
        front=front,
        back=back,
        kind=kind,
        entropy_margin=margin,
        branch_label=label,
        boundary_admissible=abs(margin) < 10.0 * controls.eps_entropy,
    )
