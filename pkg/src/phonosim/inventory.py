"""Phoneme inventories: feature tables and bit-parallel set operations.

A feature table maps each phoneme symbol to a set of short feature codes
(place, manner, voicing, vowel quality). Feature sets are stored as bit
vectors over the inventory's feature universe so that intersection,
union, and cardinality are single integer operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

MAX_FEATURES = 128

# injected around every word by the similarity layer; never valid in files
BEG_SYMBOL = "BEG"
END_SYMBOL = "END"
BEG_FEATURE = "beg"
END_FEATURE = "end"
VOWEL_FEATURE = "vwl"

RESERVED_FEATURES = (BEG_FEATURE, END_FEATURE)
RESERVED_SYMBOLS = (BEG_SYMBOL, END_SYMBOL)


class InventoryError(ValueError):
    """Malformed feature table or invalid feature-set operation."""


@dataclass(frozen=True)
class Feature:
    """A single feature code, compared by exact match."""

    code: str


class FeatureSet:
    """An immutable set of features packed into one integer bitmask.

    Bit i corresponds to feature_universe[i] of the owning inventory.
    All set algebra is bitwise, so results agree exactly with abstract
    set semantics as long as both operands share a universe.
    """

    __slots__ = ("bits", "_universe")

    def __init__(self, bits: int, universe: tuple[str, ...]):
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "_universe", universe)

    def __setattr__(self, name, value):
        raise AttributeError("FeatureSet is immutable")

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __contains__(self, code) -> bool:
        if isinstance(code, Feature):
            code = code.code
        try:
            idx = self._universe.index(code)
        except ValueError:
            return False
        return bool(self.bits >> idx & 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FeatureSet):
            return NotImplemented
        return self.bits == other.bits and self._universe is other._universe

    def __hash__(self) -> int:
        return hash(self.bits)

    def __or__(self, other: "FeatureSet") -> "FeatureSet":
        self._check_same_universe(other)
        return FeatureSet(self.bits | other.bits, self._universe)

    def __and__(self, other: "FeatureSet") -> "FeatureSet":
        self._check_same_universe(other)
        return FeatureSet(self.bits & other.bits, self._universe)

    union = __or__
    intersection = __and__

    def codes(self) -> tuple[str, ...]:
        """Feature codes present, in universe order."""
        return tuple(c for i, c in enumerate(self._universe)
                     if self.bits >> i & 1)

    def _check_same_universe(self, other: "FeatureSet") -> None:
        if self._universe is not other._universe:
            raise InventoryError(
                "feature sets come from different inventories")

    def __repr__(self) -> str:
        return f"FeatureSet({{{', '.join(self.codes())}}})"


def jaccard(a: FeatureSet, b: FeatureSet) -> float:
    """|a ∩ b| / |a ∪ b| via bitwise AND/OR and population count."""
    a._check_same_universe(b)
    union = a.bits | b.bits
    if union == 0:
        raise InventoryError("jaccard undefined for two empty feature sets")
    inter = a.bits & b.bits
    return inter.bit_count() / union.bit_count()


@dataclass(frozen=True)
class Phoneme:
    """One inventory symbol with its feature set."""

    symbol: str
    features: FeatureSet
    is_vowel: bool


class Inventory:
    """Immutable phoneme → feature-set table for one language.

    The feature universe is ordered by first appearance in the source
    file, with the word-boundary features appended last. The two dummy
    phones BEG and END exist as attributes, not as table entries, so
    lexicon files can never reference them.
    """

    def __init__(self, language: str, phonemes: dict[str, Phoneme],
                 codes: tuple[str, ...], beg: Phoneme, end: Phoneme):
        self.language = language
        self.phonemes = phonemes
        self._codes = codes
        self.feature_universe = tuple(Feature(c) for c in codes)
        self.beg = beg
        self.end = end

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.phonemes

    def __getitem__(self, symbol: str) -> Phoneme:
        try:
            return self.phonemes[symbol]
        except KeyError:
            raise InventoryError(
                f"phoneme {symbol!r} not in {self.language} inventory"
            ) from None

    def __len__(self) -> int:
        return len(self.phonemes)

    @property
    def width(self) -> int:
        return len(self.feature_universe)

    def feature_set(self, codes: Iterable[str]) -> FeatureSet:
        """Build a FeatureSet from codes; unknown codes are an error."""
        universe = self._codes
        bits = 0
        for code in codes:
            try:
                bits |= 1 << universe.index(code)
            except ValueError:
                raise InventoryError(
                    f"feature {code!r} not in {self.language} universe"
                ) from None
        return FeatureSet(bits, universe)

    def canonical_content(self) -> str:
        """Stable text rendering used for config fingerprints."""
        lines = [f"language {self.language}"]
        lines += [f"universe {' '.join(f.code for f in self.feature_universe)}"]
        lines += [f"{s} {' '.join(p.features.codes())}"
                  for s, p in sorted(self.phonemes.items())]
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return (f"Inventory({self.language!r}, {len(self.phonemes)} phonemes, "
                f"{self.width} features)")


def load_inventory(source, language: str = "") -> Inventory:
    """Parse a feature-table file into an Inventory.

    Format: one phoneme per line, whitespace-separated tokens, first
    token the symbol and the rest its feature codes; "#" comments and
    blank lines ignored. All errors carry the offending line number.
    """
    if hasattr(source, "read"):
        name = getattr(source, "name", "<stream>")
        lines = source.read().splitlines()
    else:
        name = str(source)
        with open(source, encoding="utf-8") as fh:
            lines = fh.read().splitlines()

    rows: list[tuple[int, str, list[str]]] = []
    order: list[str] = []
    seen_symbols: set[str] = set()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        symbol, codes = tokens[0], tokens[1:]
        if symbol in RESERVED_SYMBOLS:
            raise InventoryError(
                f"{name}:{lineno}: symbol {symbol!r} is reserved")
        if symbol in seen_symbols:
            raise InventoryError(
                f"{name}:{lineno}: duplicate phoneme symbol {symbol!r}")
        if not codes:
            raise InventoryError(
                f"{name}:{lineno}: phoneme {symbol!r} has no features")
        for code in codes:
            if code in RESERVED_FEATURES:
                raise InventoryError(
                    f"{name}:{lineno}: feature {code!r} is reserved")
            if code not in order:
                order.append(code)
        seen_symbols.add(symbol)
        rows.append((lineno, symbol, codes))

    if not rows:
        raise InventoryError(f"{name}: no phonemes defined")

    order.extend(RESERVED_FEATURES)
    if len(order) > MAX_FEATURES:
        raise InventoryError(
            f"{name}: {len(order)} features exceed the {MAX_FEATURES}-bit cap")
    universe = tuple(order)

    phonemes: dict[str, Phoneme] = {}
    for lineno, symbol, codes in rows:
        bits = 0
        for code in codes:
            bits |= 1 << universe.index(code)
        fs = FeatureSet(bits, universe)
        phonemes[symbol] = Phoneme(symbol, fs, VOWEL_FEATURE in codes)

    beg = Phoneme(BEG_SYMBOL,
                  FeatureSet(1 << universe.index(BEG_FEATURE), universe),
                  False)
    end = Phoneme(END_SYMBOL,
                  FeatureSet(1 << universe.index(END_FEATURE), universe),
                  False)
    return Inventory(language or name, phonemes, universe, beg, end)


def load_bundled_inventory(lang: str) -> Inventory:
    """Load the feature table shipped with the package for lang."""
    from phonosim import _data

    return load_inventory(_data.inventory_path(lang), language=lang)
