"""Parameter-free torque clustering with decision-graph cuts."""

from ._torque import (  # noqa: F401
    Connection,
    InputError,
    StateError,
    TorqueResult,
    UnsupportedModeError,
    acc,
    ami,
    fit_predict,
    nmi,
    pairwise_distances,
    project_2d,
    run,
    run_matrix,
)

__all__ = [
    "Connection",
    "InputError",
    "StateError",
    "TorqueResult",
    "UnsupportedModeError",
    "acc",
    "ami",
    "fit_predict",
    "nmi",
    "pairwise_distances",
    "project_2d",
    "run",
    "run_matrix",
]
