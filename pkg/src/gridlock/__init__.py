"""Grid-alignment graphical authentication toolkit.

A 45-image grid is the authentication surface: the user cyclically shifts
rows and columns until their 4 secret images line up in some window, then
submits. The package bundles the grid model and solver, the challenge and
verification engine, two face-bootstrapping pipelines, an HTTP service, and
a shoulder-surfing attacker simulator that puts numbers on what an observer
actually learns.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .authn import Account, AuthSession, LockoutState, Registration, register
from .geometry import GEOMETRY, Window, enumerate_windows
from .grid import (
    Grid,
    Move,
    apply_move,
    candidates,
    is_aligned,
    replay_moves,
    shuffle_grid,
)
from .observer import (
    AttackReport,
    EffortReport,
    Observation,
    effort_report,
    intersect_sessions,
    keyboard_baseline,
    observe,
    simulate_attacker,
)
from .solver import solve_alignment

__version__ = "0.1.0"

__all__ = [
    "Account",
    "AttackReport",
    "AuthSession",
    "EffortReport",
    "GEOMETRY",
    "Grid",
    "KERNEL_BACKEND",
    "LockoutState",
    "Move",
    "Observation",
    "Registration",
    "Window",
    "apply_move",
    "candidates",
    "effort_report",
    "enumerate_windows",
    "intersect_sessions",
    "is_aligned",
    "keyboard_baseline",
    "observe",
    "register",
    "replay_moves",
    "shuffle_grid",
    "simulate_attacker",
    "solve_alignment",
]
