from __future__ import annotations

import logging
import os
from dataclasses import dataclass

from ih_derham.topology.domain.data_types import Coefficients, ValidationError

LOG_LEVELS = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG")


def _env_int(name: str, default: int, minimum: int = 1) -> int:
    v = os.getenv(name)
    if v is None or not v.strip():
        return default
    try:
        value = int(v.strip())
    except ValueError:
        raise ValidationError(f"{name} must be an integer. Got: {v!r}") from None
    if value < minimum:
        raise ValidationError(f"{name} must be at least {minimum}. Got: {value}")
    return value


def parse_log_level(v: str) -> int:
    name = v.strip().upper()
    if name not in LOG_LEVELS:
        raise ValidationError(f"log level must be one of {', '.join(LOG_LEVELS)}. Got: {v!r}")
    return logging.getLevelNamesMapping()[name]


@dataclass(frozen=True)
class ToolSettings:
    log_level: int
    oracle_cap: int
    volume_digits: int
    default_coefficients: Coefficients

    @staticmethod
    def load() -> ToolSettings:
        raw_coefficients = os.getenv("IH_DERHAM_DEFAULT_COEFFICIENTS", Coefficients.INTEGERS.value).strip().lower()
        try:
            coefficients = Coefficients(raw_coefficients)
        except ValueError:
            raise ValidationError(
                f"IH_DERHAM_DEFAULT_COEFFICIENTS must be 'int' or 'rat'. Got: {raw_coefficients!r}"
            ) from None

        return ToolSettings(
            log_level=parse_log_level(os.getenv("IH_DERHAM_LOG_LEVEL", "WARNING")),
            oracle_cap=_env_int("IH_DERHAM_ORACLE_CAP", 2_000_000),
            volume_digits=_env_int("IH_DERHAM_VOLUME_DIGITS", 12),
            default_coefficients=coefficients,
        )
