"""Error types shared across the package.

Two failure families matter to callers: bad configuration (wrong keys,
unparseable values, missing sections) and violated numerical contracts
(non-physical loss fractions, integrator drift, broken passivity).  The
CLI maps them to distinct exit codes.
"""


class ConfigError(Exception):
    """Configuration file is missing, malformed, or inconsistent."""


class NumericsError(Exception):
    """A numerical result violated a contract it is required to satisfy."""
