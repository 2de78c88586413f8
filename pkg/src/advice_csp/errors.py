"""Exception hierarchy shared by all solver modules and the CLI.

The CLI maps these onto process exit codes: input problems exit 1,
budget refusals exit 2, internal consistency failures exit 3.
"""


class AdviceCspError(Exception):
    """Base class for all library errors."""


class InputError(AdviceCspError):
    """Invalid argument, dimension mismatch, or malformed input."""


class ParseError(InputError):
    """Malformed text file; message names the file and line number."""

    def __init__(self, path, lineno, message):
        self.path = str(path)
        self.lineno = lineno
        super().__init__(f"{self.path}:{lineno}: {message}")


class ConstructionError(InputError):
    """A generator could not realize the requested parameters."""


class BudgetError(AdviceCspError):
    """A computation was refused because its projected cost exceeds the cap."""


class InternalError(AdviceCspError):
    """An internal consistency check failed; indicates a bug, not bad input."""
