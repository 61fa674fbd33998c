"""Exception types shared across the pipeline."""


class TripmdError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(TripmdError):
    """A parameter, reference, or precondition is invalid."""


class TripLoadError(TripmdError):
    """A trip file is missing, empty, or malformed."""


class MetadataError(TripmdError):
    """The trip metadata table is missing, malformed, or incomplete."""
