"""Compact token stream encoding of Lottie documents."""
from .codec import detokenize, detokenize_obj, token_count, tokenize
from .presets import PRESETS, ease_preset_lookup
from .tokens import Token, TokenKind, TokenStream, parse_text, render_text
from .vocab import VOCAB, Vocabulary, vocabulary_markdown

__all__ = [
    "PRESETS", "Token", "TokenKind", "TokenStream", "VOCAB", "Vocabulary", "detokenize",
    "detokenize_obj", "ease_preset_lookup", "parse_text", "render_text", "token_count",
    "tokenize", "vocabulary_markdown",
]
