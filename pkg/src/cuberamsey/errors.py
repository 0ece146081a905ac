"""Exception types shared across the package.

Three failure modes are distinguished because callers react differently
to each: a hypothesis violation means the *input* never qualified for the
algorithm, a stage failure means a qualified input defeated a stage of the
construction, and a parse error means we never got a graph at all.
"""

from __future__ import annotations


class CubeRamseyError(Exception):
    """Base class for all package-specific errors."""


class HypothesisError(CubeRamseyError):
    """An input fails a precondition an algorithm needs to run.

    ``hypothesis`` is a short machine-readable tag, ``details`` a human
    sentence, ``witness`` an optional structure (vertices, edges, a count)
    demonstrating the violation.
    """

    def __init__(self, hypothesis: str, details: str, witness=None):
        super().__init__(f"{hypothesis}: {details}")
        self.hypothesis = hypothesis
        self.details = details
        self.witness = witness


class StageFailure(CubeRamseyError):
    """A construction stage ran out of room on a qualifying input.

    ``stage`` names the stage (e.g. ``"snake-walk"``, ``"gap-selection"``),
    ``details`` says what ran out, ``data`` carries whatever partial state
    is useful for diagnosis.
    """

    def __init__(self, stage: str, details: str, data=None):
        super().__init__(f"{stage}: {details}")
        self.stage = stage
        self.details = details
        self.data = data


class GraphParseError(CubeRamseyError):
    """A graph file or stream is malformed.

    ``line`` is the 1-based line number at which parsing gave up, or None
    when the problem is not tied to a single line.
    """

    def __init__(self, message: str, line=None):
        self.message = message
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
