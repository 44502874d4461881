import os
from typing import Optional

from dotenv import load_dotenv

load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


class TopologyConfig:
    # Search
    NODE_BUDGET = _int_env("COVERBORD_NODE_BUDGET", 10_000_000)

    # Exact geometry retries
    REGULAR_VALUE_ATTEMPTS = _int_env("COVERBORD_REGULAR_VALUE_ATTEMPTS", 64)
    PROJECTION_ATTEMPTS = _int_env("COVERBORD_PROJECTION_ATTEMPTS", 32)

    # Homology matrices larger than this (rows or columns) raise SizeLimit
    HOMOLOGY_MAX_CELLS = _int_env("COVERBORD_HOMOLOGY_MAX_CELLS", 4000)

    THREADS = _int_env("COVERBORD_THREADS", 1)
    SUBDIVIDE = _int_env("COVERBORD_SUBDIVIDE", 0)

    LOG_LEVEL = os.getenv("COVERBORD_LOG_LEVEL", "INFO")
    LOG_FILE: Optional[str] = os.getenv("COVERBORD_LOG_FILE") or None

    SCHEMA_VERSION = 1
