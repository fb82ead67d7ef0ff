"""Python bindings for the fleetmix solvers."""

from ._fleetmix import (
    GenerationError,
    Instance,
    InstanceError,
    LowerBound,
    Plan,
    Settings,
    gap,
    lower_bound,
    random_instance,
    solve,
)

METHODS = ("uf", "sa", "rmh", "bap")

__all__ = [
    "GenerationError",
    "Instance",
    "InstanceError",
    "LowerBound",
    "METHODS",
    "Plan",
    "Settings",
    "gap",
    "lower_bound",
    "random_instance",
    "solve",
]
