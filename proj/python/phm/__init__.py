"""Reliability, POTC and RUL for robot component models."""

from ._core import (
    DomainError,
    Error,
    LifeModel,
    Model,
    NumericError,
    SchemaError,
    SystemFailedError,
    ValidationError,
    replay,
    validate,
)

__all__ = [
    "DomainError",
    "Error",
    "LifeModel",
    "Model",
    "NumericError",
    "SchemaError",
    "SystemFailedError",
    "ValidationError",
    "replay",
    "validate",
]
