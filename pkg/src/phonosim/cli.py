"""Command-line interface: score, scan, train, query, evaluate, bench.

Every artifact-producing command writes a flat key=value manifest next
to its output recording the command, resolved config, input digests,
seed, tool version, and wall time, so runs can be reproduced. Exit
codes: 0 success, 1 internal error, 2 user-input error.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from pathlib import Path

import phonosim
from phonosim import _data, _kernels, embedding, evaluation
from phonosim.inventory import InventoryError, load_inventory
from phonosim.lexicon import LexiconError, parse_cmu, parse_plain
from phonosim.similarity import (
    SimilarityConfig,
    SimilarityError,
    similarity_scan,
    word_similarity,
    write_scan_tsv,
)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2


class UserError(Exception):
    """Bad user input: unknown word, missing file, invalid flag combo."""


# ---------------------------------------------------------------------------
# manifests

def _digest(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(out_path: Path, command: str, config: dict,
                   inputs: dict[str, Path], seed, wall_time: float) -> Path:
    """Write out_path.manifest with one key=value pair per line."""
    manifest_path = Path(str(out_path) + ".manifest")
    lines = [f"command={command}", f"version={phonosim.__version__}"]
    for key, value in sorted(config.items()):
        lines.append(f"config.{key}={value}")
    for name, path in sorted(inputs.items()):
        lines.append(f"input.{name}={path}")
        lines.append(f"digest.{name}=sha256:{_digest(Path(path))}")
    lines.append(f"seed={seed if seed is not None else ''}")
    lines.append(f"wall_time_s={wall_time:.3f}")
    manifest_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return manifest_path


# ---------------------------------------------------------------------------
# shared context loading

def _resolve_paths(args) -> tuple[Path, Path]:
    inv_path = Path(args.inventory) if args.inventory \
        else _data.inventory_path(args.lang)
    lex_path = Path(args.lexicon) if args.lexicon \
        else _data.lexicon_path(args.lang)
    for p in (inv_path, lex_path):
        if not p.exists():
            raise UserError(f"input file not found: {p}")
    return inv_path, lex_path


def _load_context(args):
    inv_path, lex_path = _resolve_paths(args)
    inventory = load_inventory(inv_path, language=args.lang)
    parser = parse_cmu if args.lang == "en" and not args.plain_lexicon \
        else parse_plain
    lexicon = parser(lex_path, inventory)
    return inventory, lexicon, inv_path, lex_path


def _sim_config(args) -> SimilarityConfig:
    return SimilarityConfig(
        gram_mode="unigram" if args.unigram else "bigram",
        penalty=args.penalty,
        vowel_weighted=not args.no_vowel_weight and not args.unigram,
        path_mode=args.path_mode)


def _sim_config_dict(cfg: SimilarityConfig) -> dict:
    return {"gram_mode": cfg.gram_mode, "penalty": cfg.penalty,
            "vowel_weighted": cfg.vowel_weighted,
            "path_mode": cfg.path_mode}


def _pron_of(args_word: str, lexicon, phones: bool):
    if phones:
        pron = tuple(args_word.split())
        for s in pron:
            if s not in lexicon.inventory:
                raise UserError(f"unknown phoneme {s!r}")
        if not pron:
            raise UserError("empty phoneme sequence")
        return pron
    pron = lexicon.primary(args_word)
    if pron is None:
        raise UserError(f"word {args_word!r} not in lexicon")
    return pron


# ---------------------------------------------------------------------------
# commands

def cmd_sim(args) -> int:
    _, lexicon, _, _ = _load_context(args)
    cfg = _sim_config(args)
    a = _pron_of(args.word_a, lexicon, args.phones)
    b = _pron_of(args.word_b, lexicon, args.phones)
    score = word_similarity(a, b, cfg, lexicon.inventory)
    print(f"{score:.4f}")
    return EXIT_OK


def cmd_scan(args) -> int:
    start = time.perf_counter()
    _, lexicon, inv_path, lex_path = _load_context(args)
    cfg = _sim_config(args)
    pron = _pron_of(args.word, lexicon, args.phones)
    results = similarity_scan(pron, lexicon, cfg)
    if args.top > 0:
        results = results[:args.top]
    if args.out:
        out = Path(args.out)
        write_scan_tsv(results, out)
        write_manifest(out, "scan", _sim_config_dict(cfg),
                       {"inventory": inv_path, "lexicon": lex_path},
                       None, time.perf_counter() - start)
        print(f"wrote {len(results)} rows to {out}")
    else:
        for word, score in results:
            print(f"{word}\t{score:.4f}")
    return EXIT_OK


def cmd_train(args) -> int:
    start = time.perf_counter()
    _, lexicon, inv_path, lex_path = _load_context(args)
    sim_cfg = _sim_config(args)
    train_cfg = embedding.TrainConfig(
        dim=args.dim, epochs=args.epochs, batch_size=args.batch_size,
        learning_rate=args.learning_rate,
        final_learning_rate=args.final_learning_rate,
        self_pair_fraction=args.self_pair_fraction, rng_seed=args.seed)
    if args.limit:
        lexicon = _limit_lexicon(lexicon, args.limit)

    def progress(epoch, loss):
        if args.quiet:
            return
        if epoch % max(1, args.epochs // 20) == 0 or epoch == args.epochs - 1:
            print(f"epoch {epoch + 1}/{args.epochs} mean loss {loss:.6f}",
                  file=sys.stderr)

    emb = embedding.train(lexicon, sim_cfg, train_cfg, progress=progress)
    out = Path(args.out)
    embedding.save(emb, out)
    config = dict(_sim_config_dict(sim_cfg))
    config.update({"dim": args.dim, "epochs": args.epochs,
                   "batch_size": args.batch_size,
                   "learning_rate": args.learning_rate,
                   "final_learning_rate": args.final_learning_rate,
                   "self_pair_fraction": args.self_pair_fraction,
                   "limit": args.limit, "threads": args.threads})
    write_manifest(out, "train", config,
                   {"inventory": inv_path, "lexicon": lex_path},
                   args.seed, time.perf_counter() - start)
    print(f"wrote {len(emb)} x {emb.dim} embedding to {out}")
    return EXIT_OK


def _limit_lexicon(lexicon, limit: int):
    """First `limit` words of the lexicon, same inventory."""
    from phonosim.lexicon import Lexicon

    words = lexicon.word_list[:limit]
    entries = {w: lexicon.entries[w] for w in words}
    count = sum(len(v) for v in entries.values())
    return Lexicon(lexicon.inventory, entries, tuple(words), count, [])


def _load_embedding(args) -> embedding.EmbeddingMatrix:
    path = Path(args.emb)
    if not path.exists():
        raise UserError(f"embedding file not found: {path}")
    return embedding.load(path)


def cmd_nn(args) -> int:
    emb = _load_embedding(args)
    if args.word.lower() not in emb:
        raise UserError(f"word {args.word!r} has no embedding")
    results = embedding.nearest(emb.vector(args.word), emb,
                                n=args.top + 1)
    shown = 0
    for word, score in results:
        if word == args.word.lower() and not args.include_self:
            continue
        print(f"{word}\t{score:.4f}")
        shown += 1
        if shown == args.top:
            break
    return EXIT_OK


def cmd_analogy(args) -> int:
    emb = _load_embedding(args)
    for w in (args.word_a, args.word_b, args.word_c):
        if w.lower() not in emb:
            raise UserError(f"word {w!r} has no embedding")
    results = embedding.analogy(args.word_a, args.word_b, args.word_c,
                                emb, n=args.top)
    for word, score in results:
        print(f"{word}\t{score:.4f}")
    return EXIT_OK


def cmd_eval(args) -> int:
    start = time.perf_counter()
    if not (args.vitz or args.pun or args.sweep):
        raise UserError("choose one of --vitz, --pun, --sweep")
    _, lexicon, inv_path, lex_path = _load_context(args)
    cfg = _sim_config(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    inputs = {"inventory": inv_path, "lexicon": lex_path}

    if args.vitz:
        sets = evaluation.load_bundled_judgment_sets()
        if args.emb:
            emb = _load_embedding(args)
            scorer = evaluation.make_embedding_scorer(emb)
            config_note = f"embedding {args.emb}"
        else:
            scorer = evaluation.make_similarity_scorer(lexicon, cfg)
            config_note = cfg.canonical_text()
        r_values = evaluation.vitz_eval(sets, scorer)
        report = evaluation.EvalReport(kind="judgment-correlation",
                                       config=config_note,
                                       r_values=r_values)
        out = out_dir / "vitz_report.txt"
        out.write_text(report.summary(), encoding="utf-8")
        sys.stdout.write(report.summary())
        write_manifest(out, "eval --vitz", _sim_config_dict(cfg), inputs,
                       args.seed, time.perf_counter() - start)

    if args.sweep:
        try:
            p_values = [float(p) for p in args.sweep.split(",") if p]
        except ValueError:
            raise UserError(f"bad --sweep list {args.sweep!r}") from None
        sets = evaluation.load_bundled_judgment_sets()
        rows = evaluation.penalty_sweep(sets, p_values, lexicon, cfg)
        out = out_dir / "penalty_sweep.tsv"
        evaluation.write_sweep_tsv(rows, out)
        for p, mean_r in rows:
            print(f"p={p:.2f} mean r={mean_r:.4f}")
        write_manifest(out, "eval --sweep", _sim_config_dict(cfg), inputs,
                       args.seed, time.perf_counter() - start)

    if args.pun:
        if not args.emb:
            raise UserError("--pun requires --emb EMBEDDING_FILE")
        emb = _load_embedding(args)
        pairs = evaluation.load_bundled_pun_pairs()
        report = evaluation.pun_eval(pairs, emb, lexicon, cfg)
        baseline = evaluation.random_baseline(lexicon, emb,
                                              n=len(pairs.pairs),
                                              seed=args.seed)
        report.extras["random_mean"] = baseline.mean
        report.extras["separation"] = report.mean - baseline.mean
        out = out_dir / "pun_report.txt"
        out.write_text(report.summary(), encoding="utf-8")
        evaluation.write_histogram_tsv(report, out_dir / "pun_histogram.tsv")
        evaluation.write_pairs_tsv(report, out_dir / "pun_pairs_scored.tsv")
        evaluation.write_histogram_tsv(baseline,
                                       out_dir / "random_histogram.tsv")
        sys.stdout.write(report.summary())
        write_manifest(out, "eval --pun", _sim_config_dict(cfg), inputs,
                       args.seed, time.perf_counter() - start)

    return EXIT_OK


def cmd_bench(args) -> int:
    _, lexicon, _, _ = _load_context(args)
    cfg = _sim_config(args)
    pron = _pron_of(args.word, lexicon, False)
    if args.limit:
        lexicon = _limit_lexicon(lexicon, args.limit)
    # untimed warm-up run so kernel compilation is not measured
    similarity_scan(pron, lexicon, cfg)
    times = []
    for _ in range(args.repeat):
        t0 = time.perf_counter()
        similarity_scan(pron, lexicon, cfg)
        times.append(time.perf_counter() - t0)
    mean = sum(times) / len(times)
    print(f"words={len(lexicon.word_list)} repeats={args.repeat} "
          f"mean_s={mean:.3f} min_s={min(times):.3f} max_s={max(times):.3f}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phonosim",
        description="Phonetic word similarity and sound-based embeddings")
    parser.add_argument("--version", action="version",
                        version=f"phonosim {phonosim.__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, seed_default=42):
        p.add_argument("--lang", choices=_data.LANGS, default="en",
                       help="bundled language data to use")
        p.add_argument("--inventory", help="feature-table file override")
        p.add_argument("--lexicon", help="dictionary file override")
        p.add_argument("--plain-lexicon", action="store_true",
                       help="parse --lexicon as word<TAB>phonemes")
        p.add_argument("--penalty", type=float, default=2.5,
                       help="non-diagonal penalty p (default 2.5)")
        p.add_argument("--unigram", action="store_true",
                       help="align raw phonemes instead of bigrams")
        p.add_argument("--no-vowel-weight", action="store_true",
                       help="disable the same-final-vowel boost")
        p.add_argument("--path-mode", choices=("min", "max"), default="min",
                       help="experimental: neighbor choice in penalized cells")
        p.add_argument("--threads", type=int, default=0,
                       help="worker threads (0 = all cores)")
        p.add_argument("--seed", type=int, default=seed_default,
                       help="seed for all randomness")

    p = sub.add_parser("sim", help="score two words")
    add_common(p)
    p.add_argument("word_a")
    p.add_argument("word_b")
    p.add_argument("--phones", action="store_true",
                   help="arguments are space-separated phoneme strings")
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("scan", help="score a word against the dictionary")
    add_common(p)
    p.add_argument("word")
    p.add_argument("--phones", action="store_true",
                   help="argument is a space-separated phoneme string")
    p.add_argument("--top", type=int, default=25,
                   help="rows to keep (0 = all)")
    p.add_argument("--out", help="write TSV here instead of stdout")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("train", help="train embeddings")
    add_common(p)
    p.add_argument("--out", required=True, help="embedding file to write")
    p.add_argument("--dim", type=int, default=50)
    p.add_argument("--epochs", type=int, default=1000)
    p.add_argument("--batch-size", type=int, default=1024)
    p.add_argument("--learning-rate", type=float, default=0.05)
    p.add_argument("--final-learning-rate", type=float, default=0.001)
    p.add_argument("--self-pair-fraction", type=float, default=0.1)
    p.add_argument("--limit", type=int, default=0,
                   help="train on only the first N words (0 = all)")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("nn", help="nearest neighbors of a word")
    add_common(p)
    p.add_argument("word")
    p.add_argument("--emb", required=True, help="embedding file")
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--include-self", action="store_true")
    p.set_defaults(func=cmd_nn)

    p = sub.add_parser("analogy", help="a is to b as c is to ?")
    add_common(p)
    p.add_argument("word_a")
    p.add_argument("word_b")
    p.add_argument("word_c")
    p.add_argument("--emb", required=True, help="embedding file")
    p.add_argument("--top", type=int, default=5)
    p.set_defaults(func=cmd_analogy)

    p = sub.add_parser("eval", help="run evaluation harnesses")
    add_common(p)
    p.add_argument("--vitz", action="store_true",
                   help="judgment-correlation report")
    p.add_argument("--pun", action="store_true",
                   help="pun cosine-distribution report (needs --emb)")
    p.add_argument("--sweep", help="comma-separated penalty values")
    p.add_argument("--emb", help="embedding file for cosine scoring")
    p.add_argument("--out-dir", default="eval_out",
                   help="directory for report files")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="time full-dictionary scans")
    add_common(p)
    p.add_argument("--word", default="sinking",
                   help="query word (default sinking)")
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--limit", type=int, default=0,
                   help="bench on only the first N words (0 = all)")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 0) and args.threads > 0:
        _kernels.set_num_threads(args.threads)
    try:
        return args.func(args)
    except UserError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InventoryError, LexiconError, SimilarityError,
            embedding.EmbeddingError, evaluation.EvaluationError,
            FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
