"""Exception types shared across the package."""

import os

DEFAULT_MAX_STATES = 10**7
DEFAULT_MAX_ORDER = 10_000


class ShagraphError(Exception):
    """Domain error carrying a short machine-readable ``code``."""

    def __init__(self, code, message=None):
        self.code = code
        self.message = message or code
        super().__init__(f"{code}: {self.message}")


class ModelError(ShagraphError):
    def __init__(self, code, message=None, line=None, column=None):
        self.line = line
        self.column = column
        super().__init__(code, message)

    def __str__(self):
        where = ""
        if self.line is not None:
            where = f" (line {self.line}, column {self.column})"
        return f"{self.code}: {self.message}{where}"


class GroupError(ShagraphError):
    pass


class StateCapError(ShagraphError):
    def __init__(self, needed, cap):
        self.needed = needed
        self.cap = cap
        super().__init__(
            "state-cap-exceeded", f"enumeration needs {needed} states, cap is {cap}"
        )


def max_states(override=None):
    """Resolve the enumeration cap: explicit override, then SHAGRAPH_MAX_STATES."""
    if override is not None:
        return int(override)
    env = os.environ.get("SHAGRAPH_MAX_STATES")
    if env:
        return int(env)
    return DEFAULT_MAX_STATES


def check_states(needed, cap=None):
    cap = max_states(cap)
    if needed > cap:
        raise StateCapError(needed, cap)
