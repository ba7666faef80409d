"""Exception hierarchy shared by every cellsurvey module.

The CLI reports the class name of any ``CellSurveyError`` on stderr and exits
with status 1, so leaf names are part of the user-facing surface.
"""


class CellSurveyError(Exception):
    """Base class for all domain errors."""


# Campaign model

class CampaignError(CellSurveyError):
    pass


class SchemaError(CampaignError):
    """Configuration document is missing a field, has a wrong type or an unknown key."""


class BoundsError(CampaignError):
    """A position lies outside the campaign area."""


class DuplicateId(CampaignError):
    pass


class DuplicateVisit(CampaignError):
    """The same measurement point appears twice in a visiting order."""


# Planning (dominance + routing)

class PlanningError(CellSurveyError):
    pass


class EmptySensorSet(PlanningError):
    pass


class EmptyPointSet(PlanningError):
    pass


class MismatchedIdSets(PlanningError):
    """Crossover parents are not permutations of the same id set."""


class TooManyPoints(PlanningError):
    """Exhaustive search requested over more points than the guard allows."""


class InvalidParameter(PlanningError):
    pass


# Protocol

class ProtocolError(CellSurveyError):
    pass


class ParseError(ProtocolError):
    def __init__(self, offset: int, reason: str):
        super().__init__(f"at offset {offset}: {reason}")
        self.offset = offset
        self.reason = reason


class UnknownSensor(ProtocolError):
    pass


class TraceViolation(ProtocolError):
    """A recorded message trace breaks the conversation or closest base station rules."""


# Telemetry

class TelemetryError(CellSurveyError):
    pass


class ChecksumMismatch(TelemetryError):
    pass


class UnsupportedSentence(TelemetryError):
    pass


class MalformedField(TelemetryError):
    pass


class OutOfRange(TelemetryError):
    pass


class MissingKey(TelemetryError):
    pass


class EmptyBsTable(TelemetryError):
    pass


# Coverage

class CoverageError(CellSurveyError):
    pass


class OutOfExtent(CoverageError):
    pass


class GeometryMismatch(CoverageError):
    pass


class UnknownCell(CoverageError):
    pass
