import io

import pytest

from phonosim.inventory import load_bundled_inventory, load_inventory
from phonosim.lexicon import Lexicon, load_bundled_lexicon

# Small controlled feature table. Two vowels sharing height so vowel
# weighting can be exercised with known Jaccard values.
TOY_TABLE = """\
# toy inventory for tests
p  stp blb vls
b  stp blb vcd
t  stp alv vls
n  nas alv
a  vwl low fnt
o  vwl low bck
V1 vwl
F1 fnt
VF vwl fnt
B1 vwl fnt bck
"""


@pytest.fixture(scope="session")
def en_inventory():
    return load_bundled_inventory("en")


@pytest.fixture(scope="session")
def en_lexicon(en_inventory):
    return load_bundled_lexicon("en", en_inventory)


@pytest.fixture(scope="session")
def toy_inventory():
    return load_inventory(io.StringIO(TOY_TABLE), "toy")


def make_sublexicon(lexicon, words):
    """Sorted-subset lexicon sharing the parent's pronunciations."""
    words = sorted(set(words))
    return Lexicon(inventory=lexicon.inventory,
                   entries={w: lexicon.entries[w] for w in words},
                   word_list=tuple(words), entry_count=len(words),
                   skipped=[])


@pytest.fixture(scope="session")
def sub_lexicon(en_lexicon):
    def build(words):
        return make_sublexicon(en_lexicon, words)
    return build
