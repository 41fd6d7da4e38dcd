"""Self-similar solutions of the spherically symmetric Euler equations
for general (convex, nonconvex, phase-transition) equations of state."""

from .eos import (
    EosKind,
    EosLandmarks,
    EosSpec,
    builtin_eos,
    chord_slope,
    compute_landmarks,
    make_maxwell_eos,
    make_power_eos,
    make_table_eos,
    make_vdw_eos,
    sound_speed_rho,
    tangent_map,
)

__version__ = "0.1.0"
