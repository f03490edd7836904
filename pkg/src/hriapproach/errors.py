"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class ApproachError(Exception):
    """Base class for all errors raised by :mod:`hriapproach`."""


class OutOfBounds(ApproachError, IndexError):
    """A world point or cell index lies outside the map."""


class InvalidParameter(ApproachError, ValueError):
    """A parameter violates its documented range."""


class ParseError(ApproachError, ValueError):
    """A map or scenario file is malformed.

    ``line`` is 1-based; ``offset`` is the 0-based character (or byte) offset
    within that line, when known.
    """

    def __init__(self, message: str, line: int | None = None, offset: int | None = None):
        self.line = line
        self.offset = offset
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", offset {offset})" if offset is not None else ")")
        super().__init__(message + where)


class RobotInLethalCell(ApproachError):
    """The robot's start cell cannot be traversed."""


class DegenerateGeometry(ApproachError):
    """The chosen goal cell coincides with the human, so no heading exists."""


class NoGoalFound(ApproachError):
    """The candidate container became empty.

    ``stage`` names the pipeline step that removed the last cell: one of
    ``"search_area"``, ``"costmap"``, ``"path"``.
    """

    def __init__(self, stage: str, message: str | None = None):
        self.stage = stage
        super().__init__(message or f"no reachable goal: candidate set empty after stage '{stage}'")
