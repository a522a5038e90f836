"""Evaluation harnesses: human-judgment correlation and pun separation.

Two benchmarks. First, Pearson correlation between similarity scores
and human 0-4 ratings of how alike comparison words sound to a standard
word. Second, the distribution of cosine similarities over
differently-spelled, alike-sounding word pairs, contrasted with random
pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from phonosim import embedding as emb_mod
from phonosim.embedding import EmbeddingMatrix
from phonosim.lexicon import Lexicon
from phonosim.similarity import SimilarityConfig, word_similarity

HISTOGRAM_BINS = 40

Scorer = Callable[[str, str], float]


class EvaluationError(ValueError):
    """Bad evaluation input: unknown words, degenerate scores."""


@dataclass(frozen=True)
class JudgmentSet:
    """A standard word and human-rated comparison words.

    Scores are stored on [0, 1]; the file format carries the raw 0-4
    means and load_judgment_set scales them.
    """

    standard_word: str
    comparisons: tuple[tuple[str, float], ...]

    def __post_init__(self):
        if not self.comparisons:
            raise EvaluationError(
                f"judgment set {self.standard_word!r} has no comparisons")
        for word, score in self.comparisons:
            if not 0.0 <= score <= 1.0:
                raise EvaluationError(
                    f"score for {word!r} outside [0, 1]: {score}")


@dataclass(frozen=True)
class PunPairSet:
    """Deduplicated list of alike-sounding word pairs."""

    pairs: tuple[tuple[str, str], ...]


@dataclass
class EvalReport:
    """Numbers one harness run produced, plus the config that made them."""

    kind: str
    config: str
    r_values: dict[str, float] = field(default_factory=dict)
    n: int = 0
    skipped: int = 0
    mean: float = float("nan")
    variance: float = float("nan")
    histogram: Optional[np.ndarray] = None
    bin_edges: Optional[np.ndarray] = None
    scored_pairs: Optional[list[tuple[str, str, float]]] = None
    extras: dict[str, float] = field(default_factory=dict)

    def summary(self) -> str:
        lines = [f"report: {self.kind}", f"config: {self.config}"]
        for name, r in self.r_values.items():
            lines.append(f"r[{name}] = {r:.4f}")
        if self.r_values:
            mean_r = sum(self.r_values.values()) / len(self.r_values)
            lines.append(f"mean r = {mean_r:.4f}")
        if self.n:
            lines.append(f"pairs scored = {self.n}, skipped = {self.skipped}")
            lines.append(f"mean = {self.mean:.4f}, "
                         f"variance = {self.variance:.4f}")
        for key, value in self.extras.items():
            lines.append(f"{key} = {value:.4f}")
        return "\n".join(lines) + "\n"


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson product-moment correlation."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise EvaluationError("score sequences must match in length")
    if x.size < 2:
        raise EvaluationError("need at least 2 points for correlation")
    xc = x - x.mean()
    yc = y - y.mean()
    sx = math.sqrt(float(xc @ xc))
    sy = math.sqrt(float(yc @ yc))
    if sx == 0.0 or sy == 0.0:
        raise EvaluationError("correlation undefined for constant scores")
    r = float(xc @ yc) / (sx * sy)
    return max(-1.0, min(1.0, r))


def load_judgment_set(source) -> JudgmentSet:
    """Parse the judgment-set layout.

    "#" comments and blank lines ignored; first content line is the
    standard word; remaining lines "word<TAB>score" with scores on the
    0-4 survey scale, divided by 4 on load.
    """
    own = not hasattr(source, "read")
    fh = open(source, encoding="utf-8") if own else source
    try:
        name = getattr(fh, "name", "<stream>")
        standard = None
        comparisons = []
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if standard is None:
                standard = line.split()[0].lower()
                continue
            word, sep, score_text = line.partition("\t")
            if not sep:
                raise EvaluationError(
                    f"{name}:{lineno}: expected 'word<TAB>score'")
            try:
                score = float(score_text)
            except ValueError:
                raise EvaluationError(
                    f"{name}:{lineno}: bad score {score_text!r}") from None
            if not 0.0 <= score <= 4.0:
                raise EvaluationError(
                    f"{name}:{lineno}: score {score} outside 0-4")
            comparisons.append((word.strip().lower(), score / 4.0))
        if standard is None:
            raise EvaluationError(f"{name}: no standard word")
    finally:
        if own:
            fh.close()
    return JudgmentSet(standard, tuple(comparisons))


def load_bundled_judgment_sets() -> list[JudgmentSet]:
    from phonosim import _data

    return [load_judgment_set(p) for p in _data.judgment_set_paths()]


def load_pun_pairs(source) -> PunPairSet:
    """Parse "word1<TAB>word2" rows, deduplicating unordered pairs."""
    own = not hasattr(source, "read")
    fh = open(source, encoding="utf-8") if own else source
    try:
        name = getattr(fh, "name", "<stream>")
        pairs = []
        seen = set()
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            a, sep, b = line.partition("\t")
            a, b = a.strip().lower(), b.strip().lower()
            if not sep or not a or not b:
                raise EvaluationError(
                    f"{name}:{lineno}: expected 'word1<TAB>word2'")
            key = (a, b) if a <= b else (b, a)
            if key in seen:
                continue
            seen.add(key)
            pairs.append((a, b))
    finally:
        if own:
            fh.close()
    return PunPairSet(tuple(pairs))


def load_bundled_pun_pairs() -> PunPairSet:
    from phonosim import _data

    return load_pun_pairs(_data.pun_pairs_path())


def make_similarity_scorer(lexicon: Lexicon,
                           cfg: SimilarityConfig) -> Scorer:
    """Word-pair scorer over primary pronunciations."""

    def scorer(a: str, b: str) -> float:
        pa = lexicon.primary(a)
        pb = lexicon.primary(b)
        if pa is None:
            raise EvaluationError(f"word {a!r} not in lexicon")
        if pb is None:
            raise EvaluationError(f"word {b!r} not in lexicon")
        return word_similarity(pa, pb, cfg, lexicon.inventory)

    return scorer


def make_embedding_scorer(emb: EmbeddingMatrix) -> Scorer:
    """Word-pair scorer by embedding cosine."""

    def scorer(a: str, b: str) -> float:
        return emb_mod.cosine(emb.vector(a), emb.vector(b))

    return scorer


def vitz_eval(sets: Sequence[JudgmentSet], scorer: Scorer) -> dict[str, float]:
    """Per-set Pearson r between scorer output and human ratings."""
    out = {}
    for js in sets:
        human = [score for _, score in js.comparisons]
        predicted = [scorer(js.standard_word, word)
                     for word, _ in js.comparisons]
        out[js.standard_word] = pearson(predicted, human)
    return out


def penalty_sweep(sets: Sequence[JudgmentSet], p_values: Sequence[float],
                  lexicon: Lexicon,
                  base_cfg: Optional[SimilarityConfig] = None
                  ) -> list[tuple[float, float]]:
    """Mean judgment correlation per penalty value."""
    if not p_values:
        raise EvaluationError("no penalty values given")
    cfg = base_cfg if base_cfg is not None else SimilarityConfig()
    rows = []
    for p in p_values:
        r_values = vitz_eval(sets, make_similarity_scorer(
            lexicon, replace(cfg, penalty=float(p))))
        rows.append((float(p), sum(r_values.values()) / len(r_values)))
    return rows


def _distribution_report(kind: str, config: str, values: np.ndarray,
                         skipped: int) -> EvalReport:
    clipped = np.clip(values, -1.0, 1.0)
    hist, edges = np.histogram(clipped, bins=HISTOGRAM_BINS,
                               range=(-1.0, 1.0))
    return EvalReport(
        kind=kind, config=config, n=int(values.size), skipped=skipped,
        mean=float(values.mean()) if values.size else float("nan"),
        variance=float(values.var()) if values.size else float("nan"),
        histogram=hist, bin_edges=edges)


def pun_eval(pairs: PunPairSet, emb: EmbeddingMatrix,
             lexicon: Optional[Lexicon] = None,
             sim_cfg: Optional[SimilarityConfig] = None) -> EvalReport:
    """Cosine distribution over alike-sounding pairs.

    Pairs with a word missing from the embedding are skipped and
    counted. When a lexicon and similarity config are supplied, the
    report cross-checks the same pairs with raw alignment similarity
    (scored_pairs carries both numbers per pair).
    """
    kept = [(a, b) for a, b in pairs.pairs if a in emb and b in emb]
    skipped = len(pairs.pairs) - len(kept)
    cosines = np.array(
        [emb_mod.cosine(emb.vector(a), emb.vector(b)) for a, b in kept],
        dtype=np.float64)
    report = _distribution_report(
        "pun", f"embedding fingerprint {emb.config_fingerprint}",
        cosines, skipped)
    report.scored_pairs = sorted(
        ((a, b, float(c)) for (a, b), c in zip(kept, cosines)),
        key=lambda t: -t[2])
    if lexicon is not None and sim_cfg is not None:
        raw_scorer = make_similarity_scorer(lexicon, sim_cfg)
        raw = np.array([raw_scorer(a, b) for a, b in kept
                        if a in lexicon and b in lexicon])
        if raw.size:
            report.extras["raw_similarity_mean"] = float(raw.mean())
            report.extras["raw_similarity_variance"] = float(raw.var())
    return report


def random_baseline(lexicon: Lexicon, emb: EmbeddingMatrix, n: int,
                    seed: int) -> EvalReport:
    """Cosine distribution over n seeded random distinct word pairs."""
    if n < 1:
        raise EvaluationError("n must be >= 1")
    k = len(emb.words)
    if k < 2:
        raise EvaluationError("need at least 2 embedded words")
    rng = np.random.default_rng(seed)
    i = rng.integers(0, k, size=n)
    j = (i + 1 + rng.integers(0, k - 1, size=n)) % k
    norms = emb.norms()
    cos = np.einsum("ij,ij->i", emb.vectors[i], emb.vectors[j]) \
        / (norms[i] * norms[j])
    return _distribution_report(
        "random-baseline", f"n={n} seed={seed}",
        cos.astype(np.float64), 0)


def write_histogram_tsv(report: EvalReport, dest) -> None:
    """Serialize histogram as "bin_lo<TAB>bin_hi<TAB>count" rows."""
    if report.histogram is None:
        raise EvaluationError("report has no histogram")
    own = not hasattr(dest, "write")
    fh = open(dest, "w", encoding="utf-8") if own else dest
    try:
        for lo, hi, count in zip(report.bin_edges[:-1],
                                 report.bin_edges[1:], report.histogram):
            fh.write(f"{lo:.4f}\t{hi:.4f}\t{int(count)}\n")
    finally:
        if own:
            fh.close()


def write_pairs_tsv(report: EvalReport, dest) -> None:
    """Serialize per-pair cosines, sorted descending."""
    scored = report.scored_pairs
    if scored is None:
        raise EvaluationError("report has no per-pair scores")
    own = not hasattr(dest, "write")
    fh = open(dest, "w", encoding="utf-8") if own else dest
    try:
        for a, b, c in scored:
            fh.write(f"{a}\t{b}\t{c:.4f}\n")
    finally:
        if own:
            fh.close()


def write_sweep_tsv(rows: list[tuple[float, float]], dest) -> None:
    """Serialize penalty-sweep rows as "p<TAB>mean_r"."""
    own = not hasattr(dest, "write")
    fh = open(dest, "w", encoding="utf-8") if own else dest
    try:
        for p, mean_r in rows:
            fh.write(f"{p:.4f}\t{mean_r:.6f}\n")
    finally:
        if own:
            fh.close()
