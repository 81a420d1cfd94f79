"""Exception types shared across the package."""


class CiteworthError(Exception):
    """Base class for all citeworth errors."""


class MalformedXml(CiteworthError):
    """The input could not be parsed as XML."""


class EmptyArticle(CiteworthError):
    """An article contained no paragraph text."""


class InsufficientData(CiteworthError):
    """Too few articles (or samples) to carry out the operation."""


class EmptyVocabulary(CiteworthError):
    """Vocabulary fitting filtered out every term."""


class DimensionMismatch(CiteworthError):
    """Vector or matrix dimensions do not agree."""


class FeatureSpaceMismatch(CiteworthError):
    """Two models were not trained on the same feature space."""


class SingleClass(CiteworthError):
    """Training data contains only one class."""


class NonFinite(CiteworthError):
    """An optimizer produced a non-finite value."""


class NonFiniteLoss(NonFinite):
    """Neural training loss diverged; the model keeps its last finite state."""


class LengthMismatch(CiteworthError):
    """Paired sequences have different lengths."""


class FormatMismatch(CiteworthError):
    """An input file or corpus does not follow the expected format."""


class EmptyInput(CiteworthError):
    """The current sentence has no tokens to classify."""


class RatioUnreachable(UserWarning):
    """Requested down-sampling ratio exceeds the natural class ratio."""
