"""Exception types raised across the toolkit."""


class GazexError(Exception):
    """Base class for all toolkit errors."""


class DuplicateLabel(GazexError):
    """A (parent, category) pair appears more than once in a taxonomy source."""


class MalformedRecord(GazexError):
    """A taxonomy record is structurally invalid (missing field, empty label)."""


class EmptyTaxonomy(GazexError):
    """The taxonomy source contains no category records."""


class ProviderUnavailable(GazexError):
    """The related-word endpoint could not be reached or kept failing."""


class ProtocolError(GazexError):
    """The related-word provider returned a body we cannot interpret."""


class CorpusIoError(GazexError):
    """A corpus file could not be read or written; message names the path."""


class UnsortedGazetteer(GazexError):
    """A gazetteer violates the sorted-entries invariant required for lookup."""


class EmptyRelationSet(GazexError):
    """Configuration enumeration was asked for zero relations."""


class MissingRelationCorpus(GazexError):
    """A combination references a single-relation corpus that was not built."""


class MissingBaseline(GazexError):
    """A delta report was requested without a baseline evaluation."""


class GroundTruthFormatError(GazexError):
    """A ground-truth line does not match the expected tab-separated layout."""


class NoSuchSession(GazexError):
    """An annotation session id is unknown to the store."""


class NoSuchParent(GazexError):
    """A parent label is not part of the loaded taxonomy."""


class InvalidChoice(GazexError):
    """An annotation names a category that does not exist under its parent."""


class AlreadyAnnotated(GazexError):
    """The same annotator already submitted a choice for this query."""
