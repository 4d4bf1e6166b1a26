"""Deformation and stress of a thin elastic piece carried by a moving arm.

Subpackages and modules:

* ``trajectory`` - rest-to-rest polynomial paths and jerk peaks
* ``kinematics`` - moving-frame accelerations and the rod load
* ``beam`` - rotating cantilever: statics, Newmark dynamics, modal analysis
* ``plate`` - quasi-static Kirchhoff-Love plate
* ``safety`` - yield/jerk/resonance checks and the minimum-duration search
* ``cli`` - the ``flexpath`` command
"""
from .beam import (
    Backend,
    BeamModel,
    BeamState,
    SimulationResult,
    characteristic_roots,
    modal_analysis,
    mode_shape,
    resonance_proximity,
    simulate,
    solve_static,
    stress,
)
from .errors import (
    ConfigError,
    FlexpathError,
    InfeasibleError,
    InvalidArgumentError,
    InvalidRotationError,
    NumericalFailureError,
    OutOfRangeError,
)
from .plate import PlateModel, solve_plate_static
from .safety import SafetyLimits, evaluate, min_time_search, von_mises
from .trajectory import Trajectory, rest_to_rest

__version__ = "0.1.0"

__all__ = [
    "Backend", "BeamModel", "BeamState", "SimulationResult", "characteristic_roots",
    "modal_analysis", "mode_shape", "resonance_proximity", "simulate", "solve_static", "stress",
    "ConfigError", "FlexpathError", "InfeasibleError", "InvalidArgumentError",
    "InvalidRotationError", "NumericalFailureError", "OutOfRangeError",
    "PlateModel", "solve_plate_static",
    "SafetyLimits", "evaluate", "min_time_search", "von_mises",
    "Trajectory", "rest_to_rest",
]
