"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class Wf2PowlError(Exception):
    """Base class for every error raised by this package."""


# -- nets -------------------------------------------------------------------

class InvalidNet(Wf2PowlError, ValueError):
    """The triple (P, T, F) is not a well-formed Petri net."""


class NotInNet(Wf2PowlError, KeyError):
    def __init__(self, node: str) -> None:
        super().__init__(node)
        self.node = node

    def __str__(self) -> str:
        return f"node {self.node!r} is not part of the net"


class NotWorkflowNet(Wf2PowlError, ValueError):
    """Raised when a net violates the workflow-net shape."""


class NoUniqueSource(NotWorkflowNet):
    pass


class NoUniqueSink(NotWorkflowNet):
    pass


class DisconnectedNode(NotWorkflowNet):
    def __init__(self, node: str) -> None:
        super().__init__(f"node {node!r} is not on a path from source to sink")
        self.node = node


# -- token game -------------------------------------------------------------

class NotEnabled(Wf2PowlError):
    def __init__(self, transition: str) -> None:
        super().__init__(f"transition {transition!r} is not enabled")
        self.transition = transition


class BoundExceeded(Wf2PowlError):
    """State-space exploration crossed a configured limit."""


class UnsafeDetected(Wf2PowlError):
    def __init__(self, place: str) -> None:
        super().__init__(f"place {place!r} can hold more than one token")
        self.place = place


class NotSound(Wf2PowlError):
    def __init__(self, report) -> None:
        super().__init__(f"net is not sound: {report.summary()}")
        self.report = report


# -- POWL -------------------------------------------------------------------

class InvalidModel(Wf2PowlError, ValueError):
    pass


class BadArity(InvalidModel):
    pass


class NotStrict(InvalidModel):
    def __init__(self, index: int) -> None:
        super().__init__(f"order is not strict: element {index} precedes itself")
        self.index = index


# -- files ------------------------------------------------------------------

class ParseError(Wf2PowlError, ValueError):
    def __init__(self, message: str, location: str | None = None) -> None:
        text = f"{location}: {message}" if location else message
        super().__init__(text)
        self.location = location


class Unsupported(ParseError):
    """Input uses a feature outside the supported subset (e.g. arc weights)."""
