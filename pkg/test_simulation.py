#!/usr/bin/env python3
"""
Test script for the simulation lab: every head step of a typed par term
must be reproduced by the abort-based simulation of its communication
variable.
"""

import glob
import os
import sys

# Add the project root to the path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from core.errors import MissingAnnotation, TypeMismatch
from core.models import RedexKind, SystemFlavor
from core.parser import parse_file, parse_term
from core.reduction import RedexSite
from core.simulation import build_instance, check_simulation, site_side
from core.syntax import Abort, App, Lam, Par, contains_abort
from core.typecheck import Context, elaborate, intrinsic_type

ROOT = os.path.dirname(os.path.abspath(__file__))


def typed(name):
    lct = parse_file(os.path.join(ROOT, "corpus", name))
    return elaborate(Context(lct.hyps), lct.term, SystemFlavor.LC2_STAR, lct.goal)


def test_instance():
    """Test the simulating terms built for a par subject."""
    print("🧪 Testing Simulation Instance...")

    subject = typed("communication.lct")
    instance = build_instance(subject)
    assert isinstance(instance.left_sim, Lam) and isinstance(instance.right_sim, Lam)
    assert isinstance(instance.left_sim.body, App) and isinstance(instance.left_sim.body.fun, Abort)
    assert contains_abort(instance.left_sim) and contains_abort(instance.right_sim)
    left_type = intrinsic_type(instance.left_sim)
    right_type = intrinsic_type(instance.right_sim)
    assert left_type == instance.left_hyp and right_type == instance.right_hyp
    print("  ✓ left_sim and right_sim have the hypothesis types")

    try:
        build_instance(typed("perm_suite/perm_arg.lct"))
    except TypeMismatch:
        print("  ✓ Non-par subject rejected")
    else:
        raise AssertionError("simulation needs a par subject")

    try:
        build_instance(parse_term("z par a z"))
    except MissingAnnotation:
        print("  ✓ Unannotated subject rejected")
    else:
        raise AssertionError("simulation needs an annotated subject")


def test_site_side():
    """Test which branch a step rewrites."""
    print("\n↔️  Testing Site Side...")

    assert site_side(RedexSite((), RedexKind.D_LEFT, (0, 0))) == 0
    assert site_side(RedexSite((), RedexKind.D_RIGHT, (1, 0))) == 1
    assert site_side(RedexSite((1, 0), RedexKind.BETA, (1, 0))) == 1
    print("  ✓ Communication and branch-local steps")


def test_communication_steps():
    """Test simulation of both communication directions."""
    print("\n📡 Testing Communication Simulation...")

    report = check_simulation(typed("communication.lct"))
    assert report.subject_normalized
    assert [str(step.site.kind) for step in report.steps] == ["DLeft", "Beta", "Beta"]
    first = report.communication_steps[0]
    assert first.side == 0 and first.abort_firings == 1 and first.simulated_steps == 2
    print(f"  ✓ DLeft simulated in {first.simulated_steps} step(s)")

    report = check_simulation(typed("communication_right.lct"))
    assert [str(step.site.kind) for step in report.steps] == ["DRight"]
    step = report.steps[0]
    assert step.side == 1 and step.abort_firings == 1
    print("  ✓ DRight simulated through abort")

    partial = check_simulation(typed("communication.lct"), max_steps=1)
    assert len(partial.steps) == 1 and not partial.subject_normalized
    print("  ✓ max_steps stops early")


def test_typed_par_corpus():
    """Test simulation on every typed par term of the corpus."""
    print("\n📚 Testing Typed Par Corpus...")

    count = 0
    for path in sorted(glob.glob(os.path.join(ROOT, "corpus", "**", "*.lct"), recursive=True)):
        lct = parse_file(path)
        if lct.goal is None and not lct.hyps:
            continue
        term = elaborate(Context(lct.hyps), lct.term, SystemFlavor.LC2_STAR, lct.goal)
        if not isinstance(term, Par):
            continue
        report = check_simulation(term)
        assert report.subject_normalized, path
        count += 1
    assert count >= 5
    print(f"  ✓ {count} par terms simulated")


def main():
    """Run all tests."""
    print("🚀 Starting LC Simulation Tests\n")

    try:
        test_instance()
        test_site_side()
        test_communication_steps()
        test_typed_par_corpus()

        print("\n🎉 All simulation tests passed!")

    except Exception as e:
        print(f"\n❌ Test failed: {e}")
        import traceback
        traceback.print_exc()
        return 1

    return 0


if __name__ == "__main__":
    sys.exit(main())
