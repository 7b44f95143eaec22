"""Exception hierarchy shared by every lottie_forge module."""


class LottieError(Exception):
    """Base class for all errors raised by lottie_forge."""


class JsonSyntaxError(LottieError, ValueError):
    """Input text is not valid JSON (or SVG/XML for the svg bridge)."""


class SchemaError(LottieError, ValueError):
    """JSON parsed, but does not describe a valid Lottie document."""


class UnsupportedFeature(LottieError):
    """Input uses a feature outside the supported subset."""


class UnsupportedSvgFeature(UnsupportedFeature):
    pass


class MalformedStream(LottieError, ValueError):
    """Token stream is not well formed (unknown token, bad literal, arity mismatch)."""


class Truncated(MalformedStream):
    """Token stream ended in the middle of a block."""


class DomainError(LottieError, ValueError):
    """Numeric argument outside the function's domain."""
