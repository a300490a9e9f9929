"""Exception hierarchy shared across the package.

Everything raised on purpose derives from :class:`PxfesError`, so callers
(and the CLI) can catch one base class.  Precondition violations that a
caller could have checked trivially (negative sizes, bad enum strings)
raise plain ``ValueError`` instead.
"""


class PxfesError(Exception):
    """Base class for all pxfes errors."""


# --- image codecs -------------------------------------------------------

class UnsupportedFormat(PxfesError):
    """File format, sample depth, or channel layout we do not handle."""


class CorruptHeader(PxfesError):
    """Malformed or truncated image file."""


class IoFailure(PxfesError):
    """Output path could not be written."""


# --- datasets -----------------------------------------------------------

class MissingCounterpart(PxfesError):
    """A filename present in one dataset directory is absent in the other."""


class EmptyDataset(PxfesError):
    """No usable image pairs were found."""


class InvalidFoldSpec(PxfesError):
    """Fold count or fold index outside the valid range for the dataset."""


class IndexOutOfRange(PxfesError, IndexError):
    """Pixel position index outside [0, H*W*C)."""


# --- regression ---------------------------------------------------------

class GeometryMismatch(PxfesError):
    """Image or model geometries that were required to agree do not."""


class SingularSystem(PxfesError):
    """Normal equations are singular (reachable only without regularization)."""


class DimensionTooLarge(PxfesError):
    """Dense full-image solve requested beyond the desk-scale guard."""


class InvalidBandwidth(PxfesError):
    """Gaussian kernel bandwidth must be strictly positive."""


class SolveFailure(PxfesError):
    """Kernel system lost positive definiteness (non-finite inputs)."""


# --- evaluation ---------------------------------------------------------

class RaggedGrid(PxfesError):
    """Montage rows of unequal length."""


# --- model files --------------------------------------------------------

class ModelFormatError(PxfesError):
    """Base class for model file decoding failures."""


class BadMagic(ModelFormatError):
    """File does not start with the expected magic string."""


class UnsupportedVersion(ModelFormatError):
    """Model file version byte not understood by this build."""


class UnknownModelKind(ModelFormatError):
    """Model kind byte does not name a known regressor."""


class TruncatedPayload(ModelFormatError):
    """Model file payload shorter or longer than the header implies."""
