"""Pressure laws p(tau), their structural validation, and landmark volumes.

Three families are supported, classified by the sign pattern of p' and p''
in the specific volume tau = 1/rho:

* type1 -- p' < 0 and p'' > 0 on the whole domain (convex laws);
* type2 -- p' < 0 everywhere, p'' changes sign exactly twice (a concave
  band between two inflection volumes);
* type3 -- p constant on a plateau [taut1, taut2], strictly decreasing and
  convex on both sides (a simple phase-transition model).

Landmark volumes (inflections, the double-tangent pair, tangency bounds,
plateau edges and their one-sided sound speeds) drive the shock
admissibility case analysis, so they are solved here once per law by
bracketed bisection and cached.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import DomainError, EosValidationError, LandmarkNotFound, RootNotBracketed
from .roots import bisect, geometric_grid, offset_geometric_grid, scan_sign_changes

# |tau_a - tau_b| below this (relative) switches the secant to a midpoint tangent
CHORD_SPLIT_REL = 1e-9

_LANDMARK_SCAN_N = 4096


class EosKind(str, Enum):
    TYPE_I = "type1"
    TYPE_II = "type2"
    TYPE_III = "type3"


# ---------------------------------------------------------------------------
# pressure laws


class PowerLaw:
    """p(tau) = K * tau**(-alpha), K > 0, alpha > 0, domain (0, inf)."""

    name = "power"

    def __init__(self, K=1.0, alpha=2.0):
        if K <= 0.0 or alpha <= 0.0:
            raise EosValidationError("power law needs K > 0 and alpha > 0")
        self.K = float(K)
        self.alpha = float(alpha)
        self.domain = (0.0, math.inf)

    def params(self):
        return {"K": self.K, "alpha": self.alpha}

    def eval(self, tau, side=0):
        a = self.alpha
        p = self.K * tau ** (-a)
        dp = -a * p / tau
        d2p = a * (a + 1.0) * p / (tau * tau)
        return p, dp, d2p


class VdwLaw:
    """p(tau) = A/(tau-1)**gamma - 1/tau**2 on (1, inf).

    A > 0 and 1 < gamma <= 5/3.  Depending on A the law is strictly
    decreasing (usable as type1/type2) or has a rising middle branch, in
    which case it only enters as the backbone of a plateau law.
    """

    name = "vdw"

    def __init__(self, A, gamma):
        if A <= 0.0:
            raise EosValidationError("van der Waals law needs A > 0")
        if not 1.0 < gamma <= 5.0 / 3.0:
            raise EosValidationError("van der Waals law needs 1 < gamma <= 5/3")
        self.A = float(A)
        self.gamma = float(gamma)
        self.domain = (1.0, math.inf)

    def params(self):
        return {"A": self.A, "gamma": self.gamma}

    def eval(self, tau, side=0):
        g = self.A * (tau - 1.0) ** (-self.gamma)
        p = g - tau**-2.0
        dp = -self.gamma * g / (tau - 1.0) + 2.0 * tau**-3.0
        d2p = self.gamma * (self.gamma + 1.0) * g / (tau - 1.0) ** 2 - 6.0 * tau**-4.0
        return p, dp, d2p


class MaxwellPlateauLaw:
    """A van der Waals backbone with its middle branch bridged by a constant.

    The plateau endpoints are caller-supplied equal-pressure volumes on the
    outer falling branches.  The right branch is shifted by the (tiny)
    residual pressure mismatch so the law is exactly continuous; the
    mismatch must not exceed ``continuity_tol`` relative.
    """

    name = "maxwell"

    def __init__(self, A, gamma, taut1, taut2, continuity_tol=1e-6):
        self.backbone = VdwLaw(A, gamma)
        if not (1.0 < taut1 < taut2):
            raise EosValidationError("plateau needs 1 < taut1 < taut2")
        self.A = self.backbone.A
        self.gamma = self.backbone.gamma
        self.taut1 = float(taut1)
        self.taut2 = float(taut2)
        self.domain = (1.0, math.inf)
        p1 = self.backbone.eval(self.taut1)[0]
        p2 = self.backbone.eval(self.taut2)[0]
        scale = max(abs(p1), abs(p2), 1e-300)
        if abs(p1 - p2) > continuity_tol * scale:
            raise EosValidationError(
                f"plateau endpoints are not an equal-pressure pair: "
                f"p({taut1})={p1}, p({taut2})={p2}"
            )
        self.plateau_p = p1
        self._right_shift = p1 - p2

    def params(self):
        return {"A": self.A, "gamma": self.gamma, "taut1": self.taut1, "taut2": self.taut2}

    def eval(self, tau, side=0):
        t1, t2 = self.taut1, self.taut2
        near1 = abs(tau - t1) <= 1e-12 * t1
        near2 = abs(tau - t2) <= 1e-12 * t2
        if tau < t1 and not near1 or (near1 and side < 0):
            return self.backbone.eval(tau)
        if tau > t2 and not near2 or (near2 and side > 0):
            p, dp, d2p = self.backbone.eval(tau)
            return p + self._right_shift, dp, d2p
        return self.plateau_p, 0.0, 0.0


class TabulatedLaw:
    """Strictly decreasing samples (tau_i, p_i) under a C2 cubic spline.

    The spline is not monotonicity-preserving by construction; the eos
    validation rejects tables whose interpolant oscillates.
    """

    name = "table"

    def __init__(self, taus, ps):
        import numpy as np
        from scipy.interpolate import CubicSpline

        taus = np.asarray(taus, dtype=float)
        ps = np.asarray(ps, dtype=float)
        if taus.ndim != 1 or taus.shape != ps.shape or len(taus) < 4:
            raise EosValidationError("table needs >= 4 (tau, p) rows")
        if not np.all(np.diff(taus) > 0.0):
            raise EosValidationError("table tau column must be strictly increasing")
        if not np.all(np.diff(ps) < 0.0):
            raise EosValidationError("table p column must be strictly decreasing")
        self.taus = taus
        self.ps = ps
        self._spline = CubicSpline(taus, ps)
        self._d1 = self._spline.derivative(1)
        self._d2 = self._spline.derivative(2)
        self.domain = (float(taus[0]), float(taus[-1]))

    def params(self):
        return {"taus": [float(t) for t in self.taus], "ps": [float(p) for p in self.ps]}

    def eval(self, tau, side=0):
        return float(self._spline(tau)), float(self._d1(tau)), float(self._d2(tau))


# ---------------------------------------------------------------------------
# landmark record


@dataclass(frozen=True)
class EosLandmarks:
    """Volumes that partition the shock case analysis.  Fields not
    meaningful for the law's kind are None."""

    tau1_i: Optional[float] = None   # inflection volumes (type2)
    tau2_i: Optional[float] = None
    tauhat1: Optional[float] = None  # double-tangent pair (type2)
    tauhat2: Optional[float] = None
    tau3: Optional[float] = None     # chord-from-tau1_i tangency bound (type2)
    taut1: Optional[float] = None    # plateau edges (type3)
    taut2: Optional[float] = None
    tau_c: Optional[float] = None    # tangency from taut1 to the right branch (type3)
    b1: Optional[float] = None       # one-sided sound speeds at the plateau edges
    b2: Optional[float] = None

    def as_dict(self):
        return {k: v for k, v in self.__dict__.items() if v is not None}


# ---------------------------------------------------------------------------
# EosSpec


class EosSpec:
    """A validated pressure law plus its kind, decay exponent and domain.

    Immutable after construction; landmark and tangency solves are cached
    internally, so instances are safe to share across concurrent reads.
    """

    def __init__(self, kind, law, nu, label=None, validate=True):
        self.kind = EosKind(kind)
        self.law = law
        self.nu = float(nu)
        self.tau_domain = law.domain
        self.label = label or f"{self.kind.value}-{law.name}"
        self._landmarks = None
        self._tangent_memo = {}
        if self.nu <= 0.0:
            raise EosValidationError("nu must be positive")
        if validate:
            _validate(self)

    # -- basic evaluation ---------------------------------------------------

    def _check_domain(self, tau):
        lo, hi = self.tau_domain
        if not (lo < tau < hi) and not (
            math.isclose(tau, lo, rel_tol=1e-12) or math.isclose(tau, hi, rel_tol=1e-12)
        ):
            raise DomainError(f"tau={tau} outside domain ({lo}, {hi})")

    def eval(self, tau, side=0):
        """Pressure and its first two tau-derivatives at tau.

        ``side`` selects the one-sided derivatives at a plateau edge
        (-1: limit from smaller tau, +1: from larger tau); it is ignored
        elsewhere.
        """
        self._check_domain(tau)
        return self.law.eval(tau, side)

    def p(self, tau, side=0):
        return self.eval(tau, side)[0]

    def dp(self, tau, side=0):
        return self.eval(tau, side)[1]

    def d2p(self, tau, side=0):
        return self.eval(tau, side)[2]

    def dp_rho(self, rho, side=0):
        """dp/drho at rho, equal to -tau^2 p'(tau); the squared sound speed."""
        if rho <= 0.0:
            raise DomainError("rho must be positive")
        tau = 1.0 / rho
        return -tau * tau * self.dp(tau, side)

    def sound_speed_rho(self, rho, side=0):
        """sqrt(dp/drho); zero on a plateau interior."""
        c2 = self.dp_rho(rho, side)
        if c2 < 0.0:
            if c2 > -1e-14 * max(1.0, abs(c2)):
                return 0.0
            raise DomainError(f"dp/drho < 0 at rho={rho}")
        return math.sqrt(c2)

    def chord(self, tau_a, tau_b):
        """Secant slope (p(b) - p(a)) / (b - a).

        Coincident or nearly coincident volumes fall back to the tangent at
        the midpoint, which avoids catastrophic cancellation.
        """
        self._check_domain(tau_a)
        self._check_domain(tau_b)
        if abs(tau_a - tau_b) <= CHORD_SPLIT_REL * max(1.0, abs(tau_a), abs(tau_b)):
            return self.dp(0.5 * (tau_a + tau_b))
        pa = self.p(tau_a)
        pb = self.p(tau_b)
        return (pb - pa) / (tau_b - tau_a)

    # -- landmarks ----------------------------------------------------------

    def landmarks(self):
        if self._landmarks is None:
            self._landmarks = _compute_landmarks(self)
        return self._landmarks

    # -- serialization ------------------------------------------------------

    def describe(self):
        d = {"kind": self.kind.value, "law": self.law.name, "nu": self.nu}
        d.update(self.law.params())
        return d


# module-level aliases matching the operation names used by callers
def eval_eos(eos, tau, side=0):
    return eos.eval(tau, side)


def sound_speed_rho(eos, rho, side=0):
    return eos.sound_speed_rho(rho, side)


def chord_slope(eos, tau_a, tau_b):
    return eos.chord(tau_a, tau_b)


def compute_landmarks(eos):
    return eos.landmarks()


# ---------------------------------------------------------------------------
# validation


def _scan_window(eos):
    lo, hi = eos.tau_domain
    lo_eff = lo * (1.0 + 1e-9) if lo > 0.0 else 1e-6
    hi_eff = hi * (1.0 - 1e-12) if math.isfinite(hi) else max(1e3, 10.0 * lo_eff)
    return lo_eff, hi_eff


def _a1_check(eos):
    """Numerical check that dp/drho / rho^nu falls off toward vacuum."""
    lo, hi = eos.tau_domain
    rho_hi = 1.0 if not math.isfinite(hi) else 0.999 / lo if lo > 0 else 1.0
    rho_ref = min(1.0, rho_hi)
    rho_lo = max(1e-8, 1.0 / hi * 1.001 if math.isfinite(hi) else 1e-8)
    if rho_lo >= rho_ref:
        raise EosValidationError("domain leaves no room for the vacuum-decay check")
    grid = geometric_grid(rho_lo, rho_ref, 64)
    qs = [eos.dp_rho(r) / r**eos.nu for r in grid]
    rho_th = min(1e-3, 0.01 * rho_ref)
    tail = [(r, q) for r, q in zip(grid, qs) if r <= rho_th]
    if len(tail) < 4:
        tail = list(zip(grid, qs))[: max(4, len(grid) // 4)]
    # toward rho -> 0 the ratio must decrease strictly
    for (r_small, q_small), (r_big, q_big) in zip(tail[:-1], tail[1:]):
        if not q_small < q_big:
            raise EosValidationError(
                f"vacuum decay fails: dp/drho / rho^nu not decreasing near rho={r_small}"
            )


def _validate(eos):
    lo_eff, hi_eff = _scan_window(eos)
    grid = geometric_grid(lo_eff, hi_eff, 512)
    kind = eos.kind
    if kind in (EosKind.TYPE_I, EosKind.TYPE_II):
        for t in grid:
            if eos.dp(t) >= 0.0:
                raise EosValidationError(f"p'(tau) >= 0 at tau={t}; not a falling law")
        if kind is EosKind.TYPE_I:
            for t in grid:
                if eos.d2p(t) <= 0.0:
                    raise EosValidationError(f"p''(tau) <= 0 at tau={t}; not convex")
        else:
            eos.landmarks()  # raises unless exactly two inflections exist
    else:
        law = eos.law
        if not hasattr(law, "taut1"):
            raise EosValidationError("type3 requires a plateau law")
        for t in grid:
            if law.taut1 <= t <= law.taut2:
                continue
            side = -1 if t < law.taut1 else 1
            if eos.dp(t, side) >= 0.0:
                raise EosValidationError(f"p'(tau) >= 0 off the plateau at tau={t}")
            if eos.d2p(t, side) <= 0.0:
                raise EosValidationError(f"p''(tau) <= 0 off the plateau at tau={t}")
        eos.landmarks()  # computes b1/b2, tau_c; enforces the edge-slope condition
    _a1_check(eos)


# ---------------------------------------------------------------------------
# landmark construction


def _expanding_bracket_root(fn, lo, hi_start, hi_cap, n=2048, what="root"):
    """First sign-change root of fn scanning log cells on (lo, hi], expanding hi."""
    hi = hi_start
    while True:
        cells = scan_sign_changes(fn, geometric_grid(lo, hi, n))
        if cells:
            a, b, _, _ = cells[0]
            if a == b:
                return a
            return bisect(fn, a, b)
        if hi >= hi_cap:
            raise LandmarkNotFound(f"could not bracket {what} on ({lo}, {hi_cap})")
        hi = min(hi * 10.0, hi_cap)


def _compute_landmarks(eos):
    if eos.kind is EosKind.TYPE_I:
        return EosLandmarks()
    if eos.kind is EosKind.TYPE_II:
        return _type2_landmarks(eos)
    return _type3_landmarks(eos)


def _type2_landmarks(eos):
    lo_eff, hi_eff = _scan_window(eos)
    hi = hi_eff
    while True:
        cells = scan_sign_changes(lambda t: eos.d2p(t), geometric_grid(lo_eff, hi, _LANDMARK_SCAN_N))
        if len(cells) >= 2 or hi >= 1e6:
            break
        hi *= 10.0
    if len(cells) != 2:
        raise LandmarkNotFound(
            f"type2 law must have exactly two inflection volumes, found {len(cells)}"
        )
    roots = []
    for a, b, _, _ in cells:
        roots.append(a if a == b else bisect(lambda t: eos.d2p(t), a, b))
    tau1_i, tau2_i = roots

    # double-tangent pair: outer bisection on the left touch volume, inner
    # solve of the matching-slope volume on the right branch
    def right_slope_match(slope, hint_hi):
        h = hint_hi
        while eos.dp(h) <= slope:
            h *= 2.0
            if h > 1e9:
                raise LandmarkNotFound("no right-branch volume matches the slope")
        return bisect(lambda t: eos.dp(t) - slope, tau2_i * (1.0 + 1e-12), h)

    a_min = bisect(lambda t: eos.dp(t) - eos.dp(tau2_i), lo_eff, tau1_i * (1.0 - 1e-12))

    def double_tangent_residual(a):
        b = right_slope_match(eos.dp(a), 2.0 * tau2_i)
        return eos.chord(a, b) - eos.dp(a)

    grid = [a_min + (tau1_i - a_min) * k / 256.0 for k in range(1, 256)]
    cells = scan_sign_changes(double_tangent_residual, grid)
    if not cells:
        raise LandmarkNotFound("double-tangent residual has no sign change")
    a, b, _, _ = cells[0]
    tauhat1 = a if a == b else bisect(double_tangent_residual, a, b)
    tauhat2 = right_slope_match(eos.dp(tauhat1), 2.0 * tau2_i)

    # chord from the left inflection tangent at the left inflection
    slope_i = eos.dp(tau1_i)
    tau3 = _expanding_bracket_root(
        lambda t: eos.chord(tau1_i, t) - slope_i,
        tau2_i * (1.0 + 1e-12),
        max(4.0 * tauhat2, 2.0 * tau2_i),
        1e9,
        what="tau3",
    )
    if not tauhat1 < tau1_i < tau2_i < tauhat2:
        raise LandmarkNotFound("double-tangent pair does not straddle the inflections")
    if tau3 <= tau2_i:
        raise LandmarkNotFound("tau3 must exceed the right inflection")
    return EosLandmarks(
        tau1_i=tau1_i, tau2_i=tau2_i, tauhat1=tauhat1, tauhat2=tauhat2, tau3=tau3
    )


def _type3_landmarks(eos):
    law = eos.law
    t1, t2 = law.taut1, law.taut2
    b1 = t1 * math.sqrt(-eos.dp(t1, side=-1))
    b2 = t2 * math.sqrt(-eos.dp(t2, side=+1))
    if not (b1 > b2 > 0.0 and math.isfinite(b1)):
        raise EosValidationError(f"plateau edge speeds must satisfy b1 > b2 > 0, got {b1}, {b2}")

    def resid(t):
        return eos.chord(t1, t) - eos.dp(t, side=+1)

    tau_c = _expanding_bracket_root(
        resid,
        t2 + max(1e-9 * t2, 1e-12),
        10.0 * t2,
        1e9,
        what="tau_c",
    )
    if eos.dp(t1, side=-1) >= eos.dp(tau_c, side=+1):
        raise EosValidationError(
            "left plateau edge slope must lie strictly below the tangency slope"
        )
    return EosLandmarks(taut1=t1, taut2=t2, tau_c=tau_c, b1=b1, b2=b2)


# ---------------------------------------------------------------------------
# tangency maps


def tangent_map(eos, which, tau1):
    """Tangency construction from a front volume tau1.

    which = "f"     touch volume beyond the right inflection (front in the
                    concave band or between the double tangent and the band)
    which = "g"     touch volume beyond the right plateau edge (front on the
                    plateau)
    which = "psi"   touch volume inside the concave band (front right of the
                    band, below tau3)
    which = "kappa" slope of the chord to the right plateau edge (a slope,
                    not a volume)
    """
    memo = eos._tangent_memo
    key = (which, tau1)
    if key in memo:
        return memo[key]
    val = _tangent_map_impl(eos, which, tau1)
    memo[key] = val
    return val


def _first_crossing(fn, grid, what):
    cells = scan_sign_changes(fn, grid)
    if not cells:
        raise RootNotBracketed(f"no sign change while solving {what}")
    a, b, _, _ = cells[0]
    return a if a == b else bisect(fn, a, b)


def _tangent_map_impl(eos, which, tau1):
    lm = eos.landmarks()
    if which == "kappa":
        if eos.kind is not EosKind.TYPE_III or not tau1 > lm.taut2:
            raise DomainError("kappa needs a type3 law and tau1 > taut2")
        return eos.chord(lm.taut2, tau1)

    def touch_resid(x):
        return eos.chord(tau1, x) - eos.dp(x, side=+1 if eos.kind is EosKind.TYPE_III else 0)

    if which == "f":
        if eos.kind is not EosKind.TYPE_II:
            raise DomainError("f is defined for type2 laws")
        if not lm.tauhat1 <= tau1 < lm.tau2_i:
            raise DomainError(f"f domain is [{lm.tauhat1}, {lm.tau2_i}), got {tau1}")
        if math.isclose(tau1, lm.tauhat1, rel_tol=1e-14):
            return lm.tauhat2
        grid = offset_geometric_grid(
            lm.tau2_i, 1e-12 * lm.tau2_i, 1.5 * lm.tauhat2 - lm.tau2_i, 2048
        )
        return _first_crossing(touch_resid, grid, "f")

    if which == "g":
        if eos.kind is not EosKind.TYPE_III:
            raise DomainError("g is defined for type3 laws")
        if not lm.taut1 <= tau1 <= lm.taut2:
            raise DomainError(f"g domain is [{lm.taut1}, {lm.taut2}], got {tau1}")
        if math.isclose(tau1, lm.taut2, rel_tol=1e-14):
            return lm.taut2  # tangency collapses onto the plateau edge
        grid = offset_geometric_grid(
            lm.taut2, 1e-12 * lm.taut2, 1.5 * lm.tau_c - lm.taut2, 2048
        )
        return _first_crossing(touch_resid, grid, "g")

    if which == "psi":
        if eos.kind is not EosKind.TYPE_II:
            raise DomainError("psi is defined for type2 laws")
        if not lm.tau2_i < tau1 < lm.tau3:
            raise DomainError(f"psi domain is ({lm.tau2_i}, {lm.tau3}), got {tau1}")
        # scan downward from the right inflection: the relevant touch is the
        # largest root in the concave band
        width = lm.tau2_i - lm.tau1_i
        grid = [lm.tau2_i - d for d in geometric_grid(1e-12 * width, width * (1 - 1e-12), 2048)]
        return _first_crossing(touch_resid, grid, "psi")

    raise DomainError(f"unknown tangency map {which!r}")


# ---------------------------------------------------------------------------
# built-in instances and helpers


def solve_equal_pressure_pair(A, gamma, plateau_p):
    """Outer equal-pressure volumes of a non-monotone van der Waals law.

    Returns (taut1, taut2) with p(taut1) = p(taut2) = plateau_p, taut1 on
    the left falling branch and taut2 on the right one.
    """
    law = VdwLaw(A, gamma)

    def dp(t):
        return law.eval(t)[1]

    def presid(t):
        return law.eval(t)[0] - plateau_p

    cells = scan_sign_changes(dp, geometric_grid(1.0 + 1e-9, 1e4, _LANDMARK_SCAN_N))
    if len(cells) != 2:
        raise EosValidationError("backbone law is not non-monotone; no plateau possible")
    sp1 = bisect(dp, cells[0][0], cells[0][1])
    sp2 = bisect(dp, cells[1][0], cells[1][1])
    p_min = law.eval(sp1)[0]
    p_max = law.eval(sp2)[0]
    if not p_min < plateau_p < p_max:
        raise EosValidationError(
            f"plateau pressure must lie in ({p_min}, {p_max}), got {plateau_p}"
        )
    taut1 = bisect(presid, 1.0 + 1e-9, sp1)
    hi = sp2 * 2.0
    while presid(hi) > 0.0:
        hi *= 2.0
        if hi > 1e12:
            raise EosValidationError("right equal-pressure volume not found")
    taut2 = bisect(presid, sp2, hi)
    return taut1, taut2


def make_power_eos(K=1.0, alpha=2.0, nu=None):
    nu = nu if nu is not None else max(0.5 * (alpha - 1.0), 1e-3)
    return EosSpec(EosKind.TYPE_I, PowerLaw(K, alpha), nu)


def make_vdw_eos(A, gamma, nu=None):
    nu = nu if nu is not None else 0.5 * (gamma - 1.0)
    return EosSpec(EosKind.TYPE_II, VdwLaw(A, gamma), nu)


def make_maxwell_eos(A, gamma, taut1, taut2, nu=None):
    nu = nu if nu is not None else 0.5 * (gamma - 1.0)
    return EosSpec(EosKind.TYPE_III, MaxwellPlateauLaw(A, gamma, taut1, taut2), nu)


def make_table_eos(taus, ps, nu=0.25):
    return EosSpec(EosKind.TYPE_I, TabulatedLaw(taus, ps), nu)


# Frozen parameters of the three stock instances used by tests and the CLI.
# The type2 constants put the van der Waals law in its falling-but-nonconvex
# window; the type3 plateau endpoints are the equal-pressure pair of the
# A=0.3 backbone at plateau pressure 1e-3, solved to machine accuracy.
BUILTIN_TYPE2 = {"A": 0.35, "gamma": 1.5}
BUILTIN_TYPE3 = {"A": 0.3, "gamma": 1.5, "plateau_p": 1e-3}


def builtin_eos(name):
    """Stock instances: "type1-power", "type2-vdw", "type3-maxwell"."""
    if name == "type1-power":
        return make_power_eos(K=1.0, alpha=2.0, nu=0.5)
    if name == "type2-vdw":
        return make_vdw_eos(BUILTIN_TYPE2["A"], BUILTIN_TYPE2["gamma"])
    if name == "type3-maxwell":
        c = BUILTIN_TYPE3
        t1, t2 = solve_equal_pressure_pair(c["A"], c["gamma"], c["plateau_p"])
        return make_maxwell_eos(c["A"], c["gamma"], t1, t2)
    raise KeyError(f"unknown built-in eos {name!r}")
