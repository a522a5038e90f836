"""Dense word vectors fitted so dot products reproduce word similarity.

For a k-word lexicon the implicit similarity matrix M has
M[i, j] = similarity(word_i, word_j). V (k x d) is learned by SGD on
||M - V V^T||^2 with M entries computed on the fly, so M is never
materialized. Queries use cosine, matching how the vectors are
evaluated downstream.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from phonosim import _kernels
from phonosim.lexicon import Lexicon
from phonosim.similarity import SimilarityConfig, pair_similarities


class EmbeddingError(ValueError):
    """Invalid training configuration or unusable embedding file."""


@dataclass(frozen=True)
class TrainConfig:
    """SGD factorization knobs.

    One epoch samples about one index pair per word (k pairs in
    ceil(k / batch_size) batches), so the 1000-epoch default gives each
    word roughly 2000 appearances. The learning rate decays linearly
    from learning_rate to final_learning_rate across all updates.
    self_pair_fraction of each batch are (i, i) pairs, anchoring vector
    norms to the unit diagonal of the similarity matrix.
    """

    dim: int = 50
    epochs: int = 1000
    batch_size: int = 1024
    learning_rate: float = 0.05
    final_learning_rate: float = 0.001
    self_pair_fraction: float = 0.1
    rng_seed: int = 42

    def __post_init__(self):
        if self.dim <= 0 or self.epochs <= 0 or self.batch_size <= 0:
            raise EmbeddingError(
                "dim, epochs, and batch_size must be positive")
        if self.learning_rate <= 0 or self.final_learning_rate <= 0:
            raise EmbeddingError("learning rates must be positive")
        if not 0.0 <= self.self_pair_fraction <= 1.0:
            raise EmbeddingError("self_pair_fraction must be in [0, 1]")


class EmbeddingMatrix:
    """k x d vectors, one row per word in lexicon order.

    config_fingerprint hashes the inventory content and similarity
    config the vectors were trained against, so downstream consumers
    can detect mismatched metric/embedding combinations.
    """

    def __init__(self, words: tuple[str, ...], vectors: np.ndarray,
                 config_fingerprint: str,
                 loss_history: tuple[float, ...] = ()):
        if vectors.ndim != 2 or vectors.shape[0] != len(words):
            raise EmbeddingError("vectors must be one row per word")
        if not np.all(np.isfinite(vectors)):
            raise EmbeddingError("vectors contain non-finite components")
        self.words = words
        self.vectors = vectors
        self.config_fingerprint = config_fingerprint
        self.loss_history = loss_history
        self._index = {w: i for i, w in enumerate(words)}
        self._norms = None

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word.lower() in self._index

    def row(self, word: str) -> int:
        try:
            return self._index[word.lower()]
        except KeyError:
            raise EmbeddingError(f"word {word!r} has no embedding") from None

    def vector(self, word: str) -> np.ndarray:
        return self.vectors[self.row(word)]

    def norms(self) -> np.ndarray:
        if self._norms is None:
            self._norms = np.linalg.norm(self.vectors, axis=1)
        return self._norms

    def __repr__(self) -> str:
        return (f"EmbeddingMatrix({len(self.words)} words, dim {self.dim}, "
                f"fingerprint {self.config_fingerprint[:12]}...)")


def config_fingerprint(lexicon: Lexicon, sim_cfg: SimilarityConfig) -> str:
    """Hash of the inventory content and similarity config."""
    text = lexicon.inventory.canonical_content() + sim_cfg.canonical_text()
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def target_similarity(i: int, j: int, lexicon: Lexicon,
                      sim_cfg: SimilarityConfig) -> float:
    """One implicit similarity-matrix entry, computed on demand."""
    out = pair_similarities(lexicon,
                            np.array([i], dtype=np.int64),
                            np.array([j], dtype=np.int64), sim_cfg)
    return float(out[0])


def _sample_batch(rng: np.random.Generator, k: int, batch_size: int,
                  self_fraction: float) -> tuple[np.ndarray, np.ndarray]:
    n_self = int(round(batch_size * self_fraction))
    n_cross = batch_size - n_self
    if k == 1:
        idx = np.zeros(batch_size, dtype=np.int64)
        return idx, idx.copy()
    i = rng.integers(0, k, size=n_cross)
    # j drawn from the k-1 non-i indices, keeping i != j exact
    j = (i + 1 + rng.integers(0, k - 1, size=n_cross)) % k
    s = rng.integers(0, k, size=n_self)
    return (np.concatenate([i, s]).astype(np.int64),
            np.concatenate([j, s]).astype(np.int64))


def train(lexicon: Lexicon, sim_cfg: SimilarityConfig,
          train_cfg: TrainConfig, progress=None) -> EmbeddingMatrix:
    """Fit the embedding matrix by seeded mini-batch SGD.

    Samples uniform cross pairs plus a self-pair share per batch,
    computes their similarity targets on the fly, and applies the exact
    batch gradient of sum((v_i . v_j - M_ij)^2). All sampling comes
    from one seeded generator and updates are applied in batch order,
    so a fixed config reproduces the same matrix bit for bit.
    """
    k = len(lexicon.word_list)
    if k == 0:
        raise EmbeddingError("cannot train on an empty lexicon")
    if train_cfg.dim > k:
        raise EmbeddingError(
            f"dim {train_cfg.dim} exceeds word count {k}")

    rng = np.random.default_rng(train_cfg.rng_seed)
    bound = 1.0 / math.sqrt(train_cfg.dim)
    V = rng.uniform(-bound, bound, size=(k, train_cfg.dim))

    batches = max(1, math.ceil(k / train_cfg.batch_size))
    total_steps = train_cfg.epochs * batches
    lr0 = train_cfg.learning_rate
    lr1 = train_cfg.final_learning_rate
    step = 0
    history = []
    for epoch in range(train_cfg.epochs):
        epoch_loss = 0.0
        epoch_pairs = 0
        for _ in range(batches):
            frac = step / (total_steps - 1) if total_steps > 1 else 0.0
            lr = lr0 + (lr1 - lr0) * frac
            iidx, jidx = _sample_batch(rng, k, train_cfg.batch_size,
                                       train_cfg.self_pair_fraction)
            targets = pair_similarities(lexicon, iidx, jidx, sim_cfg)
            loss = _kernels.sgd_apply(V, iidx, jidx, targets, lr)
            if not np.isfinite(loss):
                raise EmbeddingError(
                    f"non-finite loss at epoch {epoch} (lr {lr:.4g}); "
                    "lower the learning rate")
            epoch_loss += loss
            epoch_pairs += len(iidx)
            step += 1
        history.append(epoch_loss / epoch_pairs)
        if progress is not None:
            progress(epoch, history[-1])

    return EmbeddingMatrix(tuple(lexicon.word_list), V,
                           config_fingerprint(lexicon, sim_cfg),
                           tuple(history))


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity; zero vectors are an error."""
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise EmbeddingError("cosine undefined for zero vectors")
    return float(np.dot(u, v) / (nu * nv))


def nearest(query: np.ndarray, emb: EmbeddingMatrix, n: int = 10,
            exclude: set[str] = frozenset()) -> list[tuple[str, float]]:
    """Exact top-n rows by cosine, ties broken by row order."""
    if n < 1:
        raise EmbeddingError("n must be >= 1")
    qn = np.linalg.norm(query)
    if qn == 0.0:
        raise EmbeddingError("cosine undefined for zero query")
    norms = emb.norms()
    with np.errstate(divide="ignore", invalid="ignore"):
        cos = emb.vectors @ query / (norms * qn)
    cos[~np.isfinite(cos)] = -1.0  # zero-norm rows sort last
    order = np.argsort(-cos, kind="stable")
    out = []
    for idx in order:
        word = emb.words[idx]
        if word in exclude:
            continue
        out.append((word, float(cos[idx])))
        if len(out) == n:
            break
    return out


def analogy(a: str, b: str, c: str, emb: EmbeddingMatrix, n: int = 1,
            exclude_inputs: bool = True) -> list[tuple[str, float]]:
    """Nearest words to V(b) - V(a) + V(c).

    The inputs themselves are excluded from the ranking unless
    exclude_inputs is False.
    """
    query = emb.vector(b) - emb.vector(a) + emb.vector(c)
    exclude = {a.lower(), b.lower(), c.lower()} if exclude_inputs else set()
    return nearest(query, emb, n=n, exclude=exclude)


def save(emb: EmbeddingMatrix, dest) -> None:
    """Write the text layout: "k d fingerprint" header, then one
    "word v1 ... vd" line per row with 6-decimal components."""
    own = not hasattr(dest, "write")
    fh = open(dest, "w", encoding="utf-8") if own else dest
    try:
        fh.write(f"{len(emb.words)} {emb.dim} {emb.config_fingerprint}\n")
        for word, row in zip(emb.words, emb.vectors):
            comps = " ".join(f"{x:.6f}" for x in row)
            fh.write(f"{word} {comps}\n")
    finally:
        if own:
            fh.close()


def load(source) -> EmbeddingMatrix:
    """Parse the text layout back; rejects malformed or truncated files."""
    own = not hasattr(source, "read")
    fh = open(source, encoding="utf-8") if own else source
    try:
        header = fh.readline().split()
        if len(header) != 3:
            raise EmbeddingError("malformed header, expected 'k d fingerprint'")
        try:
            k, d = int(header[0]), int(header[1])
        except ValueError:
            raise EmbeddingError("malformed header counts") from None
        fingerprint = header[2]
        words = []
        rows = np.empty((k, d), dtype=np.float64)
        for r in range(k):
            line = fh.readline()
            if not line:
                raise EmbeddingError(
                    f"truncated file: {r} of {k} rows present")
            parts = line.split()
            if len(parts) != d + 1:
                raise EmbeddingError(
                    f"row {r}: expected {d} components, got {len(parts) - 1}")
            words.append(parts[0])
            try:
                rows[r] = [float(x) for x in parts[1:]]
            except ValueError:
                raise EmbeddingError(f"row {r}: non-numeric component") \
                    from None
        if fh.readline().strip():
            raise EmbeddingError(f"trailing content after {k} rows")
    finally:
        if own:
            fh.close()
    return EmbeddingMatrix(tuple(words), rows, fingerprint)
