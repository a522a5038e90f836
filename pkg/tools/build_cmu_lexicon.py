#!/usr/bin/env python3
"""Render the npm `cmu-pronouncing-dictionary` data as a classic CMUdict file.

The npm package (https://www.npmjs.com/package/cmu-pronouncing-dictionary,
tracking cmusphinx/cmudict) stores the dictionary as a JS object literal.
This script re-renders it in the traditional release layout:

    ;;; comment lines
    WORD  PH PH PH
    WORD(2)  PH PH PH

i.e. upper-case headwords, two-space separator, stress digits kept, inline
"# ..." annotations stripped.  Entry order is the source order.

Usage:
    python tools/build_cmu_lexicon.py path/to/package/index.js out.txt
"""

import json
import re
import sys

ENTRY = re.compile(r'^\s*"((?:[^"\\]|\\.)*)":\s*"((?:[^"\\]|\\.)*)",?\s*$')


def parse_index_js(path):
    entries = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            m = ENTRY.match(line)
            if not m:
                continue
            word = json.loads('"%s"' % m.group(1))
            pron = json.loads('"%s"' % m.group(2))
            pron = pron.split("#", 1)[0].strip()  # drop "# place, danish" notes
            if pron:
                entries.append((word, pron))
    return entries


def main(argv):
    if len(argv) != 3:
        sys.exit(__doc__)
    entries = parse_index_js(argv[1])
    with open(argv[2], "w", encoding="utf-8") as out:
        out.write(";;; CMU Pronouncing Dictionary (cmusphinx revision)\n")
        out.write(";;; Rendered from the npm package cmu-pronouncing-dictionary 3.0.0\n")
        out.write(";;; by tools/build_cmu_lexicon.py.  See data/PROVENANCE.md.\n")
        for word, pron in entries:
            out.write("%s  %s\n" % (word.upper(), pron))
    print("wrote %d entries" % len(entries))


if __name__ == "__main__":
    main(sys.argv)
