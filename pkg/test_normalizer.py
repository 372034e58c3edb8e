#!/usr/bin/env python3
"""
Test script for the normalizer: fuel, traces, head-normal-form shapes,
and audited normalization of the typed corpus.
"""

import glob
import os
import sys

# Add the project root to the path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from core.errors import NotNormal
from core.models import SystemFlavor, TraceStatus
from core.normalizer import (
    Audit, BareCommVar, NeutralVarHead, StuckAbort, Value, classify_hnf, is_neutral, is_value,
    normalize,
)
from core.parser import parse_file, parse_term
from core.records import parse_record, trace_lines
from core.syntax import Arg, Var
from core.typecheck import Context, elaborate

ROOT = os.path.dirname(os.path.abspath(__file__))
UNTYPED = {"trace1.lct", "trace2.lct", "trace3.lct"}


def typed_corpus():
    for path in sorted(glob.glob(os.path.join(ROOT, "corpus", "**", "*.lct"), recursive=True)):
        if os.path.basename(path) in UNTYPED:
            continue
        lct = parse_file(path)
        ctx = Context(lct.hyps)
        yield path, elaborate(ctx, lct.term, SystemFlavor.LC2_STAR, lct.goal), ctx


def test_fuel():
    """Test fuel exhaustion and determinism."""
    print("⛽ Testing Fuel...")

    omega = parse_term("(fun x => x x) (fun x => x x)")
    trace = normalize(omega, fuel=10)
    assert trace.status is TraceStatus.FUEL_EXHAUSTED
    assert trace.fuel_used == 10 and len(trace) == 10
    print("  ✓ Fuel exhaustion is a status")

    assert normalize(parse_term("z0 par a z0")).fuel_used == 0
    exact = normalize(parse_file(os.path.join(ROOT, "corpus", "trace3.lct")).term, fuel=4)
    assert exact.status is TraceStatus.NORMALIZED
    print("  ✓ Normal forms need no fuel; exact fuel suffices")

    term = parse_file(os.path.join(ROOT, "corpus", "trace1.lct")).term
    assert trace_lines(normalize(term)) == trace_lines(normalize(term))
    print("  ✓ Two runs give identical traces")

    capped = normalize(term, term_cap=1)
    assert all(step.before is None and step.after is None for step in capped.steps)
    records = [parse_record(line) for line in trace_lines(capped)]
    assert records[0]["kind"] == "Beta" and records[0]["term"] is None
    assert records[-1]["term"] == "z0 par a z0"
    print("  ✓ Large terms dropped from the trace, kinds kept")


def test_values():
    """Test value and neutral classification."""
    print("\n🔎 Testing Values...")

    for text in ("fun x => x", "fun @b => h", "Fun X => h", "<x, y>", "inj0 x", "wit c0 x", "efq x", "abort"):
        assert is_value(parse_term(text)), text
        assert not is_neutral(parse_term(text)), text
    for text in ("x", "x y", "x.0", "(fun x => x) y"):
        assert is_neutral(parse_term(text)), text
    assert not is_neutral(parse_term("x par a y"))
    print("  ✓ Values and neutral terms")


def test_hnf_shapes():
    """Test head-normal-form classification."""
    print("\n🧩 Testing HNF Shapes...")

    report = classify_hnf(parse_term("a par a z0"))
    assert report.ok
    assert report.shapes == [((0,), BareCommVar("a")), ((1,), NeutralVarHead("z0", ()))]
    print("  ✓ Bare communication variable and neutral head")

    report = classify_hnf(parse_term("f0 x par a inj0 y"))
    assert report.shapes[0] == ((0,), NeutralVarHead("f0", (Arg(Var("x")),)))
    assert report.shapes[1] == ((1,), Value("Inj"))
    print("  ✓ Neutral process and value")

    report = classify_hnf(parse_term("a.0 par a z0"))
    assert not report.ok and report.violations[0][0] == (0,)
    print("  ✓ Communication variable under a projection is a violation")

    lct = parse_file(os.path.join(ROOT, "corpus", "abort_suite", "abort_mismatch.lct"))
    term = elaborate(Context(lct.hyps), lct.term, SystemFlavor.LC_STAR)
    shape = classify_hnf(term).shapes[0][1]
    assert isinstance(shape, StuckAbort) and shape.arg.name == "h"
    print("  ✓ Stuck abort")

    try:
        classify_hnf(parse_term("(fun x => x) y"))
    except NotNormal:
        print("  ✓ NotNormal on a term with a head redex")
    else:
        raise AssertionError("classify_hnf should refuse a reducible term")


def test_typed_corpus():
    """Test audited normalization of the typed corpus."""
    print("\n📚 Testing Typed Corpus...")

    count = 0
    for path, term, ctx in typed_corpus():
        trace = normalize(term, audit=Audit(ctx))
        assert trace.status is TraceStatus.NORMALIZED, path
        report = classify_hnf(trace.final)
        assert report.ok, f"{path}: {report.violations}"
        count += 1
    assert count >= 10
    print(f"  ✓ {count} typed corpus terms normalize with every step audited")


def main():
    """Run all tests."""
    print("🚀 Starting LC Normalizer Tests\n")

    try:
        test_fuel()
        test_values()
        test_hnf_shapes()
        test_typed_corpus()

        print("\n🎉 All normalizer tests passed!")

    except Exception as e:
        print(f"\n❌ Test failed: {e}")
        import traceback
        traceback.print_exc()
        return 1

    return 0


if __name__ == "__main__":
    sys.exit(main())
