"""Casimir forces and non-contact Casimir friction from fluctuation
electrodynamics, with a time-domain virtual dual-cantilever experiment."""

from ._accel import backend
from .errors import (
    CasifricError,
    ConvergenceFailure,
    FitFailure,
    ModeAmbiguity,
    NoCrossings,
    NoSurfaceMode,
    SnapIn,
    StepTooLarge,
    ToneAmbiguity,
)

__all__ = [
    "backend",
    "CasifricError",
    "ConvergenceFailure",
    "FitFailure",
    "ModeAmbiguity",
    "NoCrossings",
    "NoSurfaceMode",
    "SnapIn",
    "StepTooLarge",
    "ToneAmbiguity",
]

__version__ = "0.1.0"
