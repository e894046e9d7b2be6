"""
Exception hierarchy shared by the simulator services.
"""


class RingSimError(ValueError):
    """Base class for every error raised by the simulator."""


class CircuitError(RingSimError):
    """A circuit-model invariant is violated."""


class PathError(RingSimError):
    """A path does not fit the mesh it is evaluated on."""


class PortError(RingSimError):
    """A port is missing or switched off."""


class SweepError(RingSimError):
    """A sweep grid or gain ladder is unusable."""


class OutOfBandError(RingSimError):
    """A frequency lies outside the spin-wave band of a medium."""


class FixtureError(RingSimError):
    """Unknown built-in fixture name."""


class CircuitFileError(RingSimError):
    """A circuit description file cannot be loaded.

    `field` names the offending entry (e.g. ``nodes[3].filter``) and `line`
    is set for JSON syntax errors.
    """

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(field)
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(f"{prefix}{message}")
