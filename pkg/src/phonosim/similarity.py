"""Word-level phonetic similarity via penalized sequence alignment.

Words become element sequences (raw phonemes, or boundary-padded
bigrams), each element carrying the union of its phones' feature sets.
Element similarity is feature Jaccard, optionally vowel-weighted. The
alignment accumulates element similarities through a dynamic program
whose non-diagonal moves are penalized, and the final cell is
normalized by the longer sequence length.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass

import numpy as np

from phonosim import _kernels
from phonosim.inventory import Inventory, Phoneme, jaccard
from phonosim.lexicon import Lexicon, Pronunciation

GRAM_MODES = ("unigram", "bigram")
PATH_MODES = ("min", "max")

_MASK64 = (1 << 64) - 1


class SimilarityError(ValueError):
    """Invalid configuration or unusable pronunciation."""


@dataclass(frozen=True)
class Bigram:
    """Adjacent phone pair; features are the union of both phones'."""

    first: Phoneme
    second: Phoneme

    @property
    def features(self):
        return self.first.features | self.second.features


@dataclass(frozen=True)
class SimilarityConfig:
    """Scoring knobs.

    gram_mode selects raw phonemes or boundary-padded bigrams; penalty
    divides similarity contributions of non-diagonal alignment moves
    (p >= 2 keeps scores bounded by 1); vowel_weighted applies the
    same-final-vowel boost and is only defined on bigrams. path_mode
    picks which accumulated neighbor a penalized cell extends and is an
    experimental escape hatch; the default "min" matches the published
    recurrence.
    """

    gram_mode: str = "bigram"
    penalty: float = 2.5
    vowel_weighted: bool = True
    path_mode: str = "min"

    def __post_init__(self):
        if self.gram_mode not in GRAM_MODES:
            raise SimilarityError(
                f"gram_mode must be one of {GRAM_MODES}, got {self.gram_mode!r}")
        if self.path_mode not in PATH_MODES:
            raise SimilarityError(
                f"path_mode must be one of {PATH_MODES}, got {self.path_mode!r}")
        if not self.penalty >= 1.0:
            raise SimilarityError(f"penalty must be >= 1, got {self.penalty}")
        if self.vowel_weighted and self.gram_mode != "bigram":
            raise SimilarityError(
                "vowel weighting is defined on bigrams only")

    def canonical_text(self) -> str:
        """Stable rendering used in embedding fingerprints."""
        return (f"gram_mode={self.gram_mode} penalty={self.penalty!r} "
                f"vowel_weighted={self.vowel_weighted} "
                f"path_mode={self.path_mode}")


def to_bigram_sequence(pron: Pronunciation,
                       inventory: Inventory) -> list[Bigram]:
    """Boundary-padded bigrams of a pronunciation, length n+1.

    Phonemes a1..an give (BEG,a1), (a1,a2), ..., (an-1,an), (an,END).
    """
    if not pron:
        raise SimilarityError("empty pronunciation has no bigram sequence")
    phones = [inventory[s] for s in pron]
    seq = [Bigram(inventory.beg, phones[0])]
    seq += [Bigram(a, b) for a, b in zip(phones, phones[1:])]
    seq.append(Bigram(phones[-1], inventory.end))
    return seq


def bigram_similarity(x: Bigram, y: Bigram) -> float:
    """Feature Jaccard of two bigrams."""
    return jaccard(x.features, y.features)


def vowel_weighted_similarity(x: Bigram, y: Bigram) -> float:
    """Bigram similarity boosted toward shared final vowels.

    sqrt(s) when x's second phone is a vowel equal to y's second phone,
    s squared otherwise. The equality makes the rule symmetric.
    """
    s = bigram_similarity(x, y)
    if x.second.is_vowel and x.second.symbol == y.second.symbol:
        return math.sqrt(s)
    return s * s


def _elements(pron: Pronunciation, cfg: SimilarityConfig,
              inventory: Inventory) -> list[tuple]:
    """(features, last phone) per alignment element."""
    if not pron:
        raise SimilarityError("empty pronunciation cannot be scored")
    if cfg.gram_mode == "bigram":
        return [(bg.features, bg.second) for bg in
                to_bigram_sequence(pron, inventory)]
    phones = [inventory[s] for s in pron]
    return [(p.features, p) for p in phones]


def _element_sim(a: tuple, b: tuple, cfg: SimilarityConfig) -> float:
    s = jaccard(a[0], b[0])
    if cfg.vowel_weighted:
        if a[1].is_vowel and a[1].symbol == b[1].symbol:
            return math.sqrt(s)
        return s * s
    return s


@dataclass
class AlignmentTable:
    """Accumulated-score table with an instrumentation counter.

    Readable reference path for the fast kernel; cells_filled counts
    table writes, which must equal n * m.
    """

    d: np.ndarray
    cells_filled: int

    @property
    def score(self) -> float:
        n, m = self.d.shape
        return self.d[n - 1, m - 1] / max(n, m)


def alignment_table(a: Pronunciation, b: Pronunciation,
                    cfg: SimilarityConfig,
                    inventory: Inventory) -> AlignmentTable:
    """Fill the full alignment table in pure Python.

    First row and column are cumulative element-similarity sums with no
    penalty. An interior cell extends the diagonal by 1 on an exact
    match, otherwise adds sim/penalty to the min (or max, per
    path_mode) of its upper and left neighbors.
    """
    ea = _elements(a, cfg, inventory)
    eb = _elements(b, cfg, inventory)
    n, m = len(ea), len(eb)
    pick = max if cfg.path_mode == "max" else min
    d = np.empty((n, m), dtype=np.float64)
    cells = 0

    d[0, 0] = _element_sim(ea[0], eb[0], cfg)
    cells += 1
    for j in range(1, m):
        d[0, j] = d[0, j - 1] + _element_sim(ea[0], eb[j], cfg)
        cells += 1
    for i in range(1, n):
        d[i, 0] = d[i - 1, 0] + _element_sim(ea[i], eb[0], cfg)
        cells += 1
        for j in range(1, m):
            s = _element_sim(ea[i], eb[j], cfg)
            if s == 1.0:
                d[i, j] = 1.0 + d[i - 1, j - 1]
            else:
                d[i, j] = s / cfg.penalty + pick(d[i - 1, j], d[i, j - 1])
            cells += 1
    return AlignmentTable(d, cells)


# ---------------------------------------------------------------------------
# packing for the compiled kernels

class PackedSequences:
    """Flat element arrays for a batch of pronunciations.

    Element e of word w lives at offsets[w] <= e < offsets[w + 1] and
    carries its feature bits split into two uint64 lanes, the id of its
    last phone, and whether that phone is a vowel.
    """

    __slots__ = ("lo", "hi", "end", "vow", "offsets")

    def __init__(self, lo, hi, end, vow, offsets):
        self.lo = lo
        self.hi = hi
        self.end = end
        self.vow = vow
        self.offsets = offsets

    def word(self, w: int):
        a, b = self.offsets[w], self.offsets[w + 1]
        return (self.lo[a:b], self.hi[a:b], self.end[a:b], self.vow[a:b])


class _IdTables:
    """Per-inventory phoneme ids and feature lookup arrays."""

    def __init__(self, inventory: Inventory):
        symbols = sorted(inventory.phonemes)
        self.ids = {s: i for i, s in enumerate(symbols)}
        self.beg_id = len(symbols)
        self.end_id = len(symbols) + 1
        bits = [inventory.phonemes[s].features.bits for s in symbols]
        bits += [inventory.beg.features.bits, inventory.end.features.bits]
        self.lo = np.array([b & _MASK64 for b in bits], dtype=np.uint64)
        self.hi = np.array([b >> 64 for b in bits], dtype=np.uint64)
        vow = [inventory.phonemes[s].is_vowel for s in symbols]
        self.vow = np.array(vow + [False, False], dtype=np.bool_)


_id_tables_cache: "weakref.WeakKeyDictionary[Inventory, _IdTables]" = \
    weakref.WeakKeyDictionary()


def _id_tables(inventory: Inventory) -> _IdTables:
    tables = _id_tables_cache.get(inventory)
    if tables is None:
        tables = _IdTables(inventory)
        _id_tables_cache[inventory] = tables
    return tables


def pack_sequences(prons: list[Pronunciation], inventory: Inventory,
                   gram_mode: str) -> PackedSequences:
    """Pack pronunciations into kernel-ready flat arrays."""
    tables = _id_tables(inventory)
    ids = tables.ids
    try:
        flat = np.fromiter((ids[s] for p in prons for s in p),
                           dtype=np.int32)
    except KeyError as exc:
        raise SimilarityError(f"phoneme {exc.args[0]!r} not in inventory") \
            from None
    lens = np.fromiter((len(p) for p in prons), dtype=np.int64,
                       count=len(prons))
    if np.any(lens == 0):
        raise SimilarityError("empty pronunciation cannot be packed")
    offsets = np.zeros(len(prons) + 1, dtype=np.int64)
    np.cumsum(lens, out=offsets[1:])

    if gram_mode == "unigram":
        first = flat
        second = flat
        elem_offsets = offsets
    else:
        # bigram element count per word is len + 1; scatter BEG at word
        # starts and END at word ends, the raw sequence fills the rest
        total = offsets[-1] + len(prons)
        elem_offsets = offsets + np.arange(len(prons) + 1, dtype=np.int64)
        starts = elem_offsets[:-1]
        ends = elem_offsets[1:] - 1
        first = np.empty(total, dtype=np.int32)
        second = np.empty(total, dtype=np.int32)
        is_start = np.zeros(total, dtype=bool)
        is_start[starts] = True
        is_end = np.zeros(total, dtype=bool)
        is_end[ends] = True
        first[is_start] = tables.beg_id
        first[~is_start] = flat
        second[is_end] = tables.end_id
        second[~is_end] = flat

    lo = tables.lo[first] | tables.lo[second]
    hi = tables.hi[first] | tables.hi[second]
    end = second.astype(np.int32, copy=False)
    vow = tables.vow[second]
    return PackedSequences(lo, hi, end, vow, elem_offsets)


_packed_lexicon_cache: "weakref.WeakKeyDictionary[Lexicon, dict]" = \
    weakref.WeakKeyDictionary()


def pack_lexicon(lexicon: Lexicon, gram_mode: str) -> PackedSequences:
    """Primary pronunciations of a lexicon, packed and memoized."""
    per_mode = _packed_lexicon_cache.setdefault(lexicon, {})
    packed = per_mode.get(gram_mode)
    if packed is None:
        prons = [lexicon.entries[w][0] for w in lexicon.word_list]
        packed = pack_sequences(prons, lexicon.inventory, gram_mode)
        per_mode[gram_mode] = packed
    return packed


def word_similarity(a: Pronunciation, b: Pronunciation,
                    cfg: SimilarityConfig, inventory: Inventory) -> float:
    """Alignment similarity of two pronunciations under cfg."""
    packed = pack_sequences([tuple(a), tuple(b)], inventory, cfg.gram_mode)
    return float(_kernels.align_score(
        *packed.word(0), *packed.word(1),
        cfg.penalty, cfg.vowel_weighted, cfg.path_mode == "max"))


def pair_similarities(lexicon: Lexicon, iidx: np.ndarray, jidx: np.ndarray,
                      cfg: SimilarityConfig) -> np.ndarray:
    """Scores for word-index pairs over primary pronunciations."""
    packed = pack_lexicon(lexicon, cfg.gram_mode)
    return _kernels.pair_scores(
        np.ascontiguousarray(iidx, dtype=np.int64),
        np.ascontiguousarray(jidx, dtype=np.int64),
        packed.lo, packed.hi, packed.end, packed.vow, packed.offsets,
        cfg.penalty, cfg.vowel_weighted, cfg.path_mode == "max")


def scan_scores(query: Pronunciation, lexicon: Lexicon,
                cfg: SimilarityConfig) -> np.ndarray:
    """Scores of query against every primary pronunciation, file order."""
    if len(lexicon.word_list) == 0:
        return np.empty(0, dtype=np.float64)
    packed = pack_lexicon(lexicon, cfg.gram_mode)
    q = pack_sequences([tuple(query)], lexicon.inventory, cfg.gram_mode)
    return _kernels.scan_scores(
        *q.word(0), packed.lo, packed.hi, packed.end, packed.vow,
        packed.offsets, cfg.penalty, cfg.vowel_weighted,
        cfg.path_mode == "max")


def similarity_scan(query: Pronunciation, lexicon: Lexicon,
                    cfg: SimilarityConfig) -> list[tuple[str, float]]:
    """All (word, score) pairs sorted by descending score, then word."""
    scores = scan_scores(query, lexicon, cfg)
    if scores.size == 0:
        return []
    words = np.asarray(lexicon.word_list)
    order = np.lexsort((words, -scores))
    return [(str(words[i]), float(scores[i])) for i in order]


def write_scan_tsv(results: list[tuple[str, float]], dest) -> None:
    """Serialize scan results as "word<TAB>score" with 4 decimals."""
    own = not hasattr(dest, "write")
    fh = open(dest, "w", encoding="utf-8") if own else dest
    try:
        for word, score in results:
            fh.write(f"{word}\t{score:.4f}\n")
    finally:
        if own:
            fh.close()
