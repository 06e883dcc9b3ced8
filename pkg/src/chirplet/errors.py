"""Exception types shared across the chirplet package."""


class ChirpletError(Exception):
    """Base class for every error raised by this package."""


class InvalidParams(ChirpletError, ValueError):
    """Chirp kernel parameters violate their invariants."""


class UnsupportedOrder(ChirpletError, ValueError):
    """Requested sweep order is outside the supported set."""


class InvalidConfig(ChirpletError, ValueError):
    """Bank, plan, or smoothing configuration violates its invariants."""


class PlanMismatch(ChirpletError, ValueError):
    """Convolution plan was built for a different kernel length."""


class SizeGuard(ChirpletError, ValueError):
    """Input exceeds the size guard of the direct convolution oracle."""


class InvalidWidth(ChirpletError, ValueError):
    """Low-pass kernel width is too small for the sampling rate."""


class EmptyInput(ChirpletError, ValueError):
    """Operation received an empty signal or matrix."""


class SampleRateMismatch(ChirpletError, ValueError):
    """Audio sampling rate differs from the filter bank's rate."""


class UnsupportedFormat(ChirpletError, ValueError):
    """Audio encoding or sampling rate is not supported."""


class CorruptFile(ChirpletError, ValueError):
    """File contents do not match the expected container layout."""


class InvalidSegmentation(ChirpletError, ValueError):
    """Segmentation window or overlap parameters are out of range."""


class ContextMismatch(ChirpletError, ValueError):
    """Detector segment and file context are incompatible."""


class InvalidInput(ChirpletError, ValueError):
    """Export received an empty or inconsistent chirpletgram."""
