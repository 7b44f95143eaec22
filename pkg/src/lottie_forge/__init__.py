"""Parse, compress, tokenize, evaluate and score Lottie vector animations."""
from .errors import (
    DomainError, JsonSyntaxError, LottieError, MalformedStream, SchemaError, Truncated,
    UnsupportedFeature, UnsupportedSvgFeature,
)
from .model import LottieDocument, canonical_equal, parse, parse_obj, serialize, to_obj

__version__ = "0.1.0"

__all__ = [
    "DomainError", "JsonSyntaxError", "LottieDocument", "LottieError", "MalformedStream",
    "SchemaError", "Truncated", "UnsupportedFeature", "UnsupportedSvgFeature", "canonical_equal",
    "parse", "parse_obj", "serialize", "to_obj",
]
