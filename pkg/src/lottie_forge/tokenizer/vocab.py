"""The fixed structural-token vocabulary.

Groups are laid out in a stable order so token ids never change between runs:
hierarchy markers, property/keyframe markers, generic JSON markers, easing
presets, digit tokens for quantized numbers, schema field tags, then reserved
slots up to 441 entries, followed by 35 padding entries.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from ..model import SUPPORTED_SHAPES

STRUCTURAL_SIZE = 441
PADDING_SIZE = 35

HIERARCHY = (
    ["M", "END", "ASSET", "ASSET_END", "LAYER", "LAYER_KS"]
    + [f"ITEM_{ty}" for ty in SUPPORTED_SHAPES]
    + ["GR_START", "GR_END"]
)
PROPERTY = [
    "KS_STATIC", "PROP_ANIMATED", "PROP_KF_START", "PROP_KF_END",
    "t", "ease", "SCALAR", "ARRAY", "PROP_X", "PATH_X",
]
JSON_MARKERS = ["X", "LIST", "LIST_END", "OBJ", "OBJ_END", "true", "false", "null"]
PRESETS = [f"EASE_{n}" for n in range(1, 15)]
DIGIT_CHARS = {**{str(d): f"NUM_{d}" for d in range(10)},
               "-": "NUM_NEG", ".": "NUM_DOT", "e": "NUM_EXP", "E": "NUM_EXP", "+": "NUM_POS"}
DIGITS = [f"NUM_{d}" for d in range(10)] + ["NUM_NEG", "NUM_DOT", "NUM_EXP", "NUM_POS"]

# Lottie schema keys that get their own tag; anything else is spelled out after <|X|>.
FIELD_TAGS = [
    # animation root
    "v", "fr", "ip", "op", "w", "h", "ddd", "nm", "mn", "layers", "assets", "markers",
    "fonts", "chars", "meta", "metadata", "props", "slots",
    # layers
    "ty", "ind", "parent", "st", "bm", "sr", "ao", "ks", "shapes", "refId", "tt", "tp",
    "td", "ct", "hasMask", "masksProperties", "ef", "cl", "ln", "sc", "sw", "sh", "tm",
    "hd", "cp",
    # transforms
    "p", "a", "s", "r", "o", "sk", "sa", "rx", "ry", "rz", "or", "px", "py", "pz",
    # properties and keyframes
    "k", "x", "ix", "l", "sid", "i", "e", "to", "ti", "n",
    # shape items
    "it", "np", "d", "c", "lc", "lj", "ml", "ml2", "g", "hl", "ha", "sy", "pt", "ir",
    "is", "os", "cix", "m",
    # assets, markers, masks, effects
    "id", "u", "cm", "dr", "inv", "mode", "en",
]
TAG_NAMES = frozenset(FIELD_TAGS) | {"t"}


def _entries() -> list[str]:
    names = HIERARCHY + PROPERTY + JSON_MARKERS + PRESETS + DIGITS + FIELD_TAGS
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise AssertionError(f"duplicate vocabulary entries: {dupes}")
    if len(names) > STRUCTURAL_SIZE:
        raise AssertionError("vocabulary overflow")
    names += [f"RESERVED_{k}" for k in range(STRUCTURAL_SIZE - len(names))]
    return names


@dataclass(frozen=True)
class Vocabulary:
    entries: tuple[str, ...]
    padding_count: int = PADDING_SIZE

    @cached_property
    def ids(self) -> dict[str, int]:
        return {name: k for k, name in enumerate(self.entries)}

    def __contains__(self, name: str) -> bool:
        return name in self.ids

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def total_size(self) -> int:
        return len(self.entries) + self.padding_count

    def id(self, name: str) -> int:
        return self.ids[name]

    def padding(self) -> list[str]:
        return [f"PAD_{k}" for k in range(self.padding_count)]

    def digit_ids(self, literal: str) -> list[int]:
        """Ids of the per-character tokens spelling a numeric literal."""
        return [self.ids[DIGIT_CHARS[c]] for c in literal]

    def group_of(self, name: str) -> str:
        for label, group in (("hierarchy", HIERARCHY), ("property", PROPERTY),
                             ("json", JSON_MARKERS), ("preset", PRESETS), ("digit", DIGITS),
                             ("field", FIELD_TAGS)):
            if name in group:
                return label
        return "reserved"


VOCAB = Vocabulary(tuple(_entries()))


def vocabulary_markdown(vocab: Vocabulary = VOCAB) -> str:
    lines = [
        "# Token vocabulary",
        "",
        f"{len(vocab)} structural entries (ids 0-{len(vocab) - 1}) followed by "
        f"{vocab.padding_count} padding entries (ids {len(vocab)}-{vocab.total_size - 1}).",
        "Numeric and text literals are not vocabulary entries; quantized numbers are",
        "spelled with the `NUM_*` digit tokens when mapped to ids.",
        "",
        "| id | token | group |",
        "|---:|---|---|",
    ]
    for name in vocab.entries:
        lines.append(f"| {vocab.id(name)} | `<|{name}|>` | {vocab.group_of(name)} |")
    for k, name in enumerate(vocab.padding()):
        lines.append(f"| {len(vocab) + k} | `<|{name}|>` | padding |")
    return "\n".join(lines) + "\n"
