import os

DEFAULT_TRUNCATION = 6

# Per-level element cap for exhaustive constructions; override with
# ETALECOB_BUDGET in the environment.
DEFAULT_BUDGET = 10 ** 6


def budget(override: int | None = None) -> int:
    if override is not None:
        return int(override)
    env = os.environ.get("ETALECOB_BUDGET")
    return int(env) if env else DEFAULT_BUDGET
