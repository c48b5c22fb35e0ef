"""Error types shared across the package.

The CLI and the HTTP service map these onto exit codes and status codes:
usage problems are distinct from violated mathematical preconditions.
"""

from __future__ import annotations


class UsageError(ValueError):
    """Malformed request: bad flags, unparseable input, wrong shapes."""


class PreconditionError(ValueError):
    """Input is well-formed but violates a mathematical precondition."""
