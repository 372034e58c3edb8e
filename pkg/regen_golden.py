#!/usr/bin/env python3
"""
Regenerate the golden traces in corpus/golden/.

Golden files are compared byte for byte by the tests, so run this only when
a change to the reduction engine or the printer is intended.
"""

import os
import sys

# Add the project root to the path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from core.normalizer import normalize
from core.parser import parse_file
from core.records import render_trace

ROOT = os.path.dirname(os.path.abspath(__file__))
CORPUS_DIR = os.path.join(ROOT, "corpus")
GOLDEN_DIR = os.path.join(CORPUS_DIR, "golden")
GOLDEN_SOURCES = ["trace1", "trace2", "trace3"]


def golden_text(name: str) -> str:
    """Untyped trace of corpus/<name>.lct as JSON Lines."""
    lct = parse_file(os.path.join(CORPUS_DIR, f"{name}.lct"))
    return render_trace(normalize(lct.term))


def main() -> int:
    os.makedirs(GOLDEN_DIR, exist_ok=True)
    for name in GOLDEN_SOURCES:
        path = os.path.join(GOLDEN_DIR, f"{name}.jsonl")
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(golden_text(name))
        print(f"  ✓ Wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
