import os
from typing import Optional

from dotenv import load_dotenv

# Load .env at import time so local runs pick up MOLIEN_CAP
load_dotenv()

SUBGROUP_CAP = 10_000_000
ORACLE_CAP = 1_000_000
MAX_BINOMIAL_ORDER = 720


class CapacityError(RuntimeError):
    """Raised when an enumeration would exceed its configured cap."""


def _env_int(name: str) -> Optional[int]:
    raw = os.environ.get(name, "").strip()
    if not raw:
        return None
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{name} must be a positive integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError(f"{name} must be a positive integer, got {raw!r}")
    return value


def resolve_cap(cap: Optional[int], default: int) -> int:
    """Explicit cap first, then MOLIEN_CAP from the environment, then the default."""
    if cap is not None:
        if cap <= 0:
            raise ValueError(f"cap must be positive, got {cap}")
        return cap
    env_cap = _env_int("MOLIEN_CAP")
    return env_cap if env_cap is not None else default


def max_binomial_order() -> int:
    value = _env_int("MOLIEN_MAX_BINOMIAL_ORDER")
    return value if value is not None else MAX_BINOMIAL_ORDER


def ensure_within(count: int, cap: int, what: str) -> None:
    if count > cap:
        raise CapacityError(f"{what}: {count} exceeds the enumeration cap {cap}")
