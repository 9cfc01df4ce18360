"""Exception types shared across the pipeline."""


class CrewlensError(Exception):
    """Base class for all errors this package raises on purpose."""


class NotARepositoryError(CrewlensError):
    """The given path is not a readable Git repository."""


class EmptyRepositoryError(CrewlensError):
    """The repository has no commits on its default branch."""


class GitObjectError(CrewlensError):
    """A Git object could not be read; the message names the object."""


class CorruptHistoryError(CrewlensError):
    """The commit graph contains a cycle or a dangling parent."""


class OwnershipError(CrewlensError):
    """Line-ownership replay went out of sync with the diffed content."""


class FactsFormatError(CrewlensError):
    """A commit-facts fixture record violates the schema."""

    def __init__(self, line_no: int, field: str, message: str):
        self.line_no = line_no
        self.field = field
        super().__init__(f"line {line_no}, field {field!r}: {message}")


class ConfigError(CrewlensError):
    """The run configuration document is invalid."""


class TeamMapError(CrewlensError):
    """The team-map document is invalid."""
