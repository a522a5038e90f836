"""Paths to the data files bundled with the package."""

from importlib import resources
from pathlib import Path

LANGS = ("en", "hi")

_LEXICON_FILES = {
    "en": ("en", "cmudict-0.7b.txt"),
    "hi": ("hi", "lexicon.tsv"),
}


def bundled(*parts: str) -> Path:
    """Absolute path of a file under phonosim/data."""
    root = resources.files("phonosim").joinpath("data")
    path = Path(str(root.joinpath(*parts)))
    if not path.exists():
        raise FileNotFoundError(f"no bundled data file {'/'.join(parts)}")
    return path


def inventory_path(lang: str) -> Path:
    if lang not in LANGS:
        raise ValueError(f"unknown language {lang!r}, expected one of {LANGS}")
    return bundled(lang, "phoneme_features.txt")


def lexicon_path(lang: str) -> Path:
    if lang not in LANGS:
        raise ValueError(f"unknown language {lang!r}, expected one of {LANGS}")
    return bundled(*_LEXICON_FILES[lang])


def judgment_set_paths() -> list[Path]:
    root = bundled("eval", "vitz_winkler")
    return sorted(root.glob("*.tsv"))


def pun_pairs_path() -> Path:
    return bundled("eval", "pun_pairs.tsv")
