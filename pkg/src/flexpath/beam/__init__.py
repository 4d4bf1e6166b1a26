"""Rotating clamped-free rod: statics, dynamics, stress and modal analysis."""
from .dynamics import (
    LoadSample,
    Newmark,
    SimulationResult,
    integrate,
    quasi_static_history,
    simulate,
    step_newmark,
    trajectory_load,
)
from .fem import assemble_fem
from .modal import (
    ModalResult,
    ModeGap,
    characteristic_roots,
    discrete_frequencies,
    mode_shape,
    modal_analysis,
    resonance_proximity,
)
from .model import Backend, BeamModel, BeamState, BeamSystem, assemble
from .statics import solve_static, solve_static_state, state_stress, stress

__all__ = [
    "Backend", "BeamModel", "BeamState", "BeamSystem", "LoadSample", "ModalResult", "ModeGap",
    "Newmark", "SimulationResult", "assemble", "assemble_fem", "characteristic_roots",
    "discrete_frequencies", "integrate", "modal_analysis", "mode_shape", "quasi_static_history",
    "resonance_proximity", "simulate", "solve_static", "solve_static_state", "state_stress",
    "step_newmark", "stress", "trajectory_load",
]
