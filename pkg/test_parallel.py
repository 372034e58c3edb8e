#!/usr/bin/env python3
"""
Test script for branch-parallel normalization.
"""

import asyncio
import glob
import os
import sys

# Add the project root to the path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from core.errors import FuelExhausted, TypingError
from core.generator import generate_terms
from core.models import SystemFlavor
from core.normalizer import Audit, classify_hnf, normalize
from core.parallel import (
    compare_strategies, parallel_normalize, parallel_normalize_async, run_left_phase, run_right_phase,
)
from core.parser import parse_file, parse_term
from core.reduction import leftmost_head_redex
from core.syntax import Par, alpha_equal
from core.typecheck import Context, elaborate, typecheck

ROOT = os.path.dirname(os.path.abspath(__file__))


def typed(name):
    lct = parse_file(os.path.join(ROOT, "corpus", name))
    ctx = Context(lct.hyps)
    return elaborate(ctx, lct.term, SystemFlavor.LC2_STAR, lct.goal), Audit(ctx)


def test_phases():
    """Test the left and right phases on their own."""
    print("⚙️  Testing Phases...")

    term = parse_term("(fun x => x) z0 par a (fun y => y) z1")
    left, left_kinds = run_left_phase(term)
    right, right_kinds = run_right_phase(term)
    assert alpha_equal(left, parse_term("z0")) and left_kinds == ["Beta"]
    assert alpha_equal(right, parse_term("z1")) and right_kinds == ["Beta"]
    print("  ✓ Each phase reduces its own branch")

    result = parallel_normalize(term)
    assert alpha_equal(result.term, parse_term("z0 par a z1"))
    assert result.steps == 2
    print("  ✓ Merged result is the par of both phases")


def test_communication_in_phase():
    """Test that a phase follows communication into its branch."""
    print("\n📡 Testing Communication in a Phase...")

    term = parse_file(os.path.join(ROOT, "corpus", "trace3.lct")).term
    result = parallel_normalize(term)
    assert leftmost_head_redex(result.term) is None
    assert "DLeft" in result.left_kinds and "DRight" in result.right_kinds
    assert isinstance(result.term, Par)
    print(f"  ✓ trace3: left {result.left_kinds}, right {result.right_kinds}")


def test_typed_results():
    """Test that parallel normal forms keep their type."""
    print("\n🧮 Testing Typed Results...")

    for name in ("communication.lct", "communication_right.lct", "exists_dummett_wrapped.lct", "weak_em.lct"):
        term, audit = typed(name)
        result = parallel_normalize(term, audit=audit)
        assert classify_hnf(result.term).ok
        before = typecheck(audit.context, term, audit.flavor)
        after = typecheck(audit.context, result.term, audit.flavor)
        assert alpha_equal(before, after)
        print(f"  ✓ {name}: {result.left_steps} left, {result.right_steps} right")

    term, audit = typed("perm_suite/perm_arg.lct")
    result = parallel_normalize(term, audit=audit)
    assert alpha_equal(result.term, normalize(term, audit=audit).final)
    print("  ✓ A term without top-level par falls back to head normalization")


def test_concurrent_runs():
    """Test several parallel normalizations awaited together."""
    print("\n🧵 Testing Concurrent Runs...")

    async def run_all():
        terms = [typed(name) for name in ("communication.lct", "exists_dummett_wrapped.lct")]
        return await asyncio.gather(*(parallel_normalize_async(t, audit=a) for t, a in terms))

    results = asyncio.run(run_all())
    assert all(leftmost_head_redex(r.term) is None for r in results)
    print(f"  ✓ {len(results)} runs finished")


def test_strategy_comparison():
    """Test witness multisets of the two strategies."""
    print("\n⚖️  Testing Strategy Comparison...")

    term, audit = typed("exists_dummett_wrapped.lct")
    comparison = compare_strategies(term, audit=audit)
    assert comparison is not None
    assert comparison.sequential_witnesses == ("c1", "c0")
    assert comparison.same_multiset
    print(f"  ✓ head {comparison.sequential_witnesses}, parallel {comparison.parallel_witnesses}")

    assert compare_strategies(parse_term("z0 par a z1")) is None
    print("  ✓ No comparison without a Herbrand form")


def test_fuel():
    """Test fuel exhaustion in a phase."""
    print("\n⛽ Testing Phase Fuel...")

    omega = parse_term("(fun x => x x) (fun x => x x) par a z0")
    try:
        parallel_normalize(omega, fuel=5)
    except FuelExhausted:
        print("  ✓ FuelExhausted raised")
    else:
        raise AssertionError("a diverging branch should exhaust its fuel")


def merge(term, left, right):
    return Par(term.var, term.left_ann, term.right_ann, left, right)


def phase_order_cases():
    """Top-level par terms from the corpus files and from a generated batch."""
    for path in sorted(glob.glob(os.path.join(ROOT, "corpus", "**", "*.lct"), recursive=True)):
        lct = parse_file(path)
        try:
            term = elaborate(Context(lct.hyps), lct.term, SystemFlavor.LC2_STAR, lct.goal)
        except TypingError:
            term = lct.term
        if isinstance(term, Par):
            yield os.path.relpath(path, ROOT), term
    for index, generated in enumerate(generate_terms(300, 11)):
        term = elaborate(generated.context, generated.term, SystemFlavor.LC)
        if isinstance(term, Par):
            yield f"generated #{index}", term


def test_phase_order():
    """Test that the merged result does not depend on which phase runs first."""
    print("\n🔀 Testing Phase Order...")

    corpus_count = generated_count = 0
    for label, term in phase_order_cases():
        left_first = run_left_phase(term)[0], run_right_phase(term)[0]
        right_right, right_left = run_right_phase(term)[0], run_left_phase(term)[0]
        concurrent = parallel_normalize(term).term
        assert alpha_equal(merge(term, *left_first), concurrent), label
        assert alpha_equal(merge(term, right_left, right_right), concurrent), label
        if label.startswith("generated"):
            generated_count += 1
        else:
            corpus_count += 1
    assert corpus_count >= 5 and generated_count > 0
    print(f"  ✓ {corpus_count} corpus and {generated_count} generated par terms agree in both orders")


def test_nested_par():
    """Test a par nested in a branch."""
    print("\n🪆 Testing Nested par...")

    term = parse_term("((fun x => x) z0 par b z1) par a z2")
    left, kinds = run_left_phase(term)
    assert alpha_equal(left, parse_term("z0 par b z1")) and kinds == ["Beta"]
    result = parallel_normalize(term)
    assert alpha_equal(result.term, parse_term("(z0 par b z1) par a z2"))
    print("  ✓ Inner branch reduced by the outer phase")

    left, kinds = run_left_phase(parse_term("(b z0 par b z1) par a z2"))
    assert alpha_equal(left, parse_term("z1 par b z1")) and kinds == ["DLeft"]
    print("  ✓ Inner communication fires inside the phase")


def main():
    """Run all tests."""
    print("🚀 Starting LC Parallel Engine Tests\n")

    try:
        test_phases()
        test_communication_in_phase()
        test_typed_results()
        test_concurrent_runs()
        test_strategy_comparison()
        test_fuel()
        test_phase_order()
        test_nested_par()

        print("\n🎉 All parallel engine tests passed!")

    except Exception as e:
        print(f"\n❌ Test failed: {e}")
        import traceback
        traceback.print_exc()
        return 1

    return 0


if __name__ == "__main__":
    sys.exit(main())
