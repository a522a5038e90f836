"""Pronunciation dictionaries: CMU 0.7b layout and a plain TSV layout.

Every pronunciation is validated against a phoneme inventory at parse
time. A handful of bad lines is tolerated and reported; more than 0.1%
bad lines aborts the parse, since that pattern means the file and the
inventory do not belong together.
"""

from __future__ import annotations

import re
from typing import Iterable, Optional

from phonosim.inventory import Inventory

Pronunciation = tuple[str, ...]

_VARIANT_RE = re.compile(r"\((\d+)\)$")
_BAD_LINE_LIMIT = 0.001

# headwords made only of these count as plain words for the filter option
_WORD_CHARS_RE = re.compile(r"^[a-z'\-.]+$")


class LexiconError(ValueError):
    """Unparseable dictionary file or too many invalid lines."""


class Lexicon:
    """Immutable word → pronunciations map bound to an Inventory.

    word_list preserves file order of first appearance and is the row
    order of any embedding trained from this lexicon. entry_count is
    the number of entry lines parsed (variant lines included), which is
    how pronunciation dictionaries usually advertise their size;
    distinct_word_count counts folded headwords.
    """

    def __init__(self, inventory: Inventory,
                 entries: dict[str, list[Pronunciation]],
                 word_list: tuple[str, ...], entry_count: int,
                 skipped: list[str]):
        self.inventory = inventory
        self.entries = entries
        self.word_list = word_list
        self.entry_count = entry_count
        self.skipped = skipped

    @property
    def distinct_word_count(self) -> int:
        return len(self.word_list)

    def lookup(self, word: str) -> list[Pronunciation]:
        """All pronunciations of word, case-insensitive; [] if absent."""
        return list(self.entries.get(word.lower(), ()))

    def primary(self, word: str) -> Optional[Pronunciation]:
        """First-listed pronunciation, or None if the word is absent."""
        prons = self.entries.get(word.lower())
        return prons[0] if prons else None

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.entries

    def __len__(self) -> int:
        return len(self.word_list)

    def __repr__(self) -> str:
        return (f"Lexicon({self.inventory.language!r}, "
                f"{self.distinct_word_count} words, "
                f"{self.entry_count} entries)")


def _strip_stress(token: str) -> str:
    # stress is a single trailing digit 0/1/2 on vowel tokens
    if len(token) >= 2 and token[-1] in "012":
        return token[:-1]
    return token


def _build(inventory: Inventory,
           parsed: Iterable[tuple[int, str, list[str]]],
           bad: list[str], total_lines: int, source_name: str,
           word_filter: bool) -> Lexicon:
    entries: dict[str, list[Pronunciation]] = {}
    word_list: list[str] = []
    entry_count = 0
    for _, word, phones in parsed:
        if word_filter and not _WORD_CHARS_RE.match(word):
            continue
        entry_count += 1
        if word not in entries:
            entries[word] = []
            word_list.append(word)
        entries[word].append(tuple(phones))

    if total_lines and len(bad) > _BAD_LINE_LIMIT * total_lines:
        preview = "; ".join(bad[:5])
        raise LexiconError(
            f"{source_name}: {len(bad)} of {total_lines} entry lines invalid "
            f"(limit {_BAD_LINE_LIMIT:.1%}): {preview}")
    if not entries:
        raise LexiconError(f"{source_name}: no entries parsed")
    return Lexicon(inventory, entries, tuple(word_list), entry_count, bad)


def parse_cmu(source, inventory: Inventory,
              word_filter: bool = False) -> Lexicon:
    """Parse a CMU 0.7b layout dictionary.

    ";;;" comment lines are skipped, "WORD(n)" variant headwords fold
    into WORD as additional pronunciations, stress digits are stripped,
    headwords are lower-cased. word_filter=True drops headwords that
    contain characters other than letters, apostrophe, hyphen, period.
    """
    if hasattr(source, "read"):
        name = getattr(source, "name", "<stream>")
        lines = source.read().splitlines()
    else:
        name = str(source)
        with open(source, encoding="utf-8") as fh:
            lines = fh.read().splitlines()

    parsed: list[tuple[int, str, list[str]]] = []
    bad: list[str] = []
    total = 0
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip() or raw.startswith(";;;"):
            continue
        total += 1
        head, sep, tail = raw.partition("  ")
        if not sep or not head or not tail.strip():
            bad.append(f"line {lineno}: not a 'WORD  PH PH' entry")
            continue
        word = _VARIANT_RE.sub("", head).lower()
        phones = [_strip_stress(t) for t in tail.split()]
        unknown = [p for p in phones if p not in inventory]
        if unknown:
            bad.append(f"line {lineno}: unknown phoneme {unknown[0]!r}")
            continue
        parsed.append((lineno, word, phones))

    return _build(inventory, parsed, bad, total, name, word_filter)


def parse_plain(source, inventory: Inventory,
                word_filter: bool = False) -> Lexicon:
    """Parse a "word<TAB>ph1 ph2 ..." dictionary (no stress handling).

    Duplicate word lines append pronunciations in file order. "#"
    comment lines and blank lines are ignored.
    """
    if hasattr(source, "read"):
        name = getattr(source, "name", "<stream>")
        lines = source.read().splitlines()
    else:
        name = str(source)
        with open(source, encoding="utf-8") as fh:
            lines = fh.read().splitlines()

    parsed: list[tuple[int, str, list[str]]] = []
    bad: list[str] = []
    total = 0
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip() or raw.startswith("#"):
            continue
        total += 1
        word, sep, tail = raw.partition("\t")
        if not sep or not word.strip() or not tail.split():
            bad.append(f"line {lineno}: not a 'word<TAB>phonemes' entry")
            continue
        phones = tail.split()
        unknown = [p for p in phones if p not in inventory]
        if unknown:
            bad.append(f"line {lineno}: unknown phoneme {unknown[0]!r}")
            continue
        parsed.append((lineno, word.strip().lower(), phones))

    return _build(inventory, parsed, bad, total, name, word_filter)


def serialize_plain(lexicon: Lexicon, dest) -> None:
    """Write the lexicon in the plain TSV layout, preserving order.

    Re-parsing the output with parse_plain yields identical entries.
    """
    own = not hasattr(dest, "write")
    fh = open(dest, "w", encoding="utf-8") if own else dest
    try:
        for word in lexicon.word_list:
            for pron in lexicon.entries[word]:
                fh.write(f"{word}\t{' '.join(pron)}\n")
    finally:
        if own:
            fh.close()


def load_bundled_lexicon(lang: str, inventory: Inventory,
                         word_filter: bool = False) -> Lexicon:
    """Parse the dictionary shipped with the package for lang."""
    from phonosim import _data

    path = _data.lexicon_path(lang)
    if lang == "en":
        return parse_cmu(path, inventory, word_filter)
    return parse_plain(path, inventory, word_filter)
