"""Exception hierarchy shared by the library and the CLI."""


class PkgNetError(Exception):
    """Base class for all errors raised by pkgnet."""

    exit_code = 1


class InputError(PkgNetError, ValueError):
    """Bad input: unreadable file, invalid arguments, or schema mismatch."""

    exit_code = 2


class EmptyParseError(PkgNetError):
    """The input parsed cleanly but produced no package records."""

    exit_code = 3


class InvariantError(PkgNetError):
    """An internal consistency check failed."""

    exit_code = 4


class GraphError(PkgNetError, ValueError):
    """A graph operation was asked for something the graph cannot provide."""

    exit_code = 2


class FitError(PkgNetError, ValueError):
    """A power-law fit could not be computed from the given histogram."""

    exit_code = 2
