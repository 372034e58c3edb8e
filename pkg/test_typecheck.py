#!/usr/bin/env python3
"""
Test script for the LC type checker.

Covers the four flavors, the side conditions of every rule, elaboration,
intrinsic types and the subject-reduction audit.
"""

import os
import sys

# Add the project root to the path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from core.errors import (
    AbortNotAdmitted, AnnotationMismatch, EfqNonAtomicTarget, EigenvariableViolation,
    MissingAnnotation, ParHypothesesNotDual, SecondOrderNotAdmitted, SubjectReductionViolation,
    TypeMismatch, TypingError, UnboundVariable,
)
from core.generator import generate_terms
from core.models import SystemFlavor
from core.parser import parse_file, parse_formula, parse_term
from core.syntax import Inj, Lam, Par, Var, Witness, alpha_equal, free_var_annotations, subst_proof
from core.typecheck import Context, audit_step, elaborate, intrinsic_type, typecheck

ROOT = os.path.dirname(os.path.abspath(__file__))


def corpus(name):
    return parse_file(os.path.join(ROOT, "corpus", name))


def expect(error_type, thunk):
    try:
        thunk()
    except error_type:
        return
    except TypingError as e:
        raise AssertionError(f"expected {error_type.__name__}, got {type(e).__name__}: {e}")
    raise AssertionError(f"expected {error_type.__name__}, nothing was raised")


def test_corpus_types():
    """Test the typed corpus examples."""
    print("🧮 Testing Corpus Types...")

    lct = corpus("dummett_axiom.lct")
    result = typecheck(Context(lct.hyps), lct.term, SystemFlavor.LC, lct.goal)
    assert alpha_equal(result, parse_formula("(P(c0) -> Q(c1)) | (Q(c1) -> P(c0))"))
    print("  ✓ inj0 a par inj1 a proves the linearity axiom")

    lct = corpus("weak_em.lct")
    result = typecheck(Context(lct.hyps), lct.term, SystemFlavor.LC, lct.goal)
    assert alpha_equal(result, parse_formula("~P(c0) | ~~P(c0)"))
    print("  ✓ Weak excluded middle")

    lct = corpus("exists_dummett.lct")
    result = typecheck(Context(lct.hyps), lct.term, SystemFlavor.LC, lct.goal)
    assert alpha_equal(result, parse_formula("exists a. P(c0) -> P(a)"))
    print("  ✓ Two-witness existential")

    for name in ("perm_suite/perm_arg.lct", "perm_suite/perm_proj.lct",
                 "perm_suite/perm_case.lct", "perm_suite/perm_excase.lct"):
        lct = corpus(name)
        assert alpha_equal(typecheck(Context(lct.hyps), lct.term, SystemFlavor.LC, lct.goal), lct.goal)
    print("  ✓ Permutation suite")


def test_flavors():
    """Test what each flavor admits."""
    print("\n🎚️  Testing Flavors...")

    lct = corpus("abort_suite/abort_fires.lct")
    expect(AbortNotAdmitted, lambda: typecheck(Context(lct.hyps), lct.term, SystemFlavor.LC))
    expect(AbortNotAdmitted, lambda: typecheck(Context(lct.hyps), lct.term, SystemFlavor.LC2))
    assert alpha_equal(typecheck(Context(lct.hyps), lct.term, SystemFlavor.LC_STAR), parse_formula("P(c0)"))
    print("  ✓ abort only in star flavors")

    lct = corpus("second_order/pred_beta.lct")
    expect(SecondOrderNotAdmitted, lambda: typecheck(Context(lct.hyps), lct.term, SystemFlavor.LC, lct.goal))
    expect(SecondOrderNotAdmitted, lambda: typecheck(Context(), Var("h"), SystemFlavor.LC,
                                                     parse_formula("forall2 X. X(c0)")))
    assert alpha_equal(typecheck(Context(lct.hyps), lct.term, SystemFlavor.LC2, lct.goal), lct.goal)
    print("  ✓ Second order only in lc2 flavors")

    lct = corpus("dummett_axiom.lct")
    for flavor in SystemFlavor:
        assert alpha_equal(typecheck(Context(lct.hyps), lct.term, flavor, lct.goal), lct.goal)
    print("  ✓ LC terms check in every flavor")


def test_side_conditions():
    """Test each typing error."""
    print("\n🚧 Testing Side Conditions...")

    p0 = parse_formula("P(c0)")
    expect(UnboundVariable, lambda: typecheck(Context(), parse_term("x")))
    expect(MissingAnnotation, lambda: typecheck(Context(), parse_term("fun x => x")))
    expect(AnnotationMismatch, lambda: typecheck(Context.from_dict({"x": p0}), Var("x", parse_formula("Q(c0)"))))
    expect(TypeMismatch, lambda: typecheck(Context.from_dict({"x": p0}), parse_term("x x")))
    expect(TypeMismatch, lambda: typecheck(Context.from_dict({"x": p0}), parse_term("x.0")))
    print("  ✓ Variables, annotations and eliminations")

    expect(ParHypothesesNotDual,
           lambda: typecheck(Context(), parse_term("inj0 a par[a : P(c0) -> Q(c1), P(c0) -> Q(c1)] inj1 a"),
                             SystemFlavor.LC, parse_formula("(P(c0) -> Q(c1)) | (P(c0) -> Q(c1))")))
    expect(MissingAnnotation, lambda: typecheck(Context(), parse_term("z par a z"), SystemFlavor.LC))
    print("  ✓ par needs dual hypotheses")

    ctx = Context.from_dict({"x": parse_formula("False")})
    expect(EfqNonAtomicTarget, lambda: typecheck(ctx, parse_term("efq[P(c0) & P(c1)] x")))
    assert alpha_equal(typecheck(ctx, parse_term("efq[P(c0)] x")), p0)
    print("  ✓ efq targets atoms")

    h_ctx = Context.from_dict({"h": parse_formula("P(b)")})
    expect(EigenvariableViolation, lambda: typecheck(h_ctx, parse_term("fun @b => h")))
    closed = typecheck(Context.from_dict({"h": p0}), parse_term("fun @b => h"))
    assert alpha_equal(closed, parse_formula("forall b. P(c0)"))
    print("  ✓ forall introduction eigenvariable")

    s_ctx = Context.from_dict({"s": parse_formula("exists b. P(b)")})
    expect(EigenvariableViolation,
           lambda: typecheck(s_ctx, parse_term("excase s of [(e, x : P(e)) => x]")))
    print("  ✓ exists elimination eigenvariable")

    x_hyps = {"h": parse_formula("X(c0)")}
    x_ctx = Context.from_dict(x_hyps)
    expect(EigenvariableViolation,
           lambda: typecheck(x_ctx, parse_term("Fun X => h", hyps=x_hyps), SystemFlavor.LC2))
    expect(EigenvariableViolation,
           lambda: typecheck(x_ctx, parse_term("Fun X => h", hyps=x_hyps), SystemFlavor.LC2,
                             parse_formula("forall2 X. X(c0)")))
    p_hyps = {"h": p0}
    second_order = typecheck(Context.from_dict(p_hyps), parse_term("Fun X => h", hyps=p_hyps), SystemFlavor.LC2)
    assert alpha_equal(second_order, parse_formula("forall2 X. P(c0)"))
    print("  ✓ second-order forall introduction eigenvariable")

    expect(TypeMismatch, lambda: typecheck(Context.from_dict({"h": p0}), parse_term("inj0 h"), goal=p0))
    print("  ✓ Checking mode rejects injections into non-disjunctions")


def test_elaboration():
    """Test that elaboration fills in every annotation."""
    print("\n🧷 Testing Elaboration...")

    lct = corpus("dummett_axiom.lct")
    elaborated = elaborate(Context(lct.hyps), lct.term, SystemFlavor.LC, lct.goal)
    assert isinstance(elaborated, Par)
    assert isinstance(elaborated.left, Inj) and elaborated.left.ann is not None
    assert all(ann is not None for anns in free_var_annotations(elaborated.left.term).values() for ann in anns)
    assert alpha_equal(intrinsic_type(elaborated), lct.goal)
    print("  ✓ Injections carry their disjunction")

    lct = corpus("exists_dummett.lct")
    elaborated = elaborate(Context(lct.hyps), lct.term, SystemFlavor.LC, lct.goal)
    assert isinstance(elaborated.left, Witness) and elaborated.left.ann is not None
    assert intrinsic_type(lct.term) is None
    assert alpha_equal(intrinsic_type(elaborated), lct.goal)
    print("  ✓ Intrinsic type needs complete annotations")

    lam = elaborate(Context(), parse_term("fun x => x"), goal=parse_formula("P(c0) -> P(c0)"))
    assert isinstance(lam, Lam) and lam.ann is not None
    assert lam.body == Var("x", parse_formula("P(c0)"))
    print("  ✓ Checking mode annotates lambdas")


def test_audit():
    """Test the subject-reduction audit."""
    print("\n🔍 Testing Audit...")

    hyps = {"h": parse_formula("P(c0)")}
    ctx = Context.from_dict(hyps)
    before = parse_term("(fun x : P(c0) => x) h", hyps=hyps)
    after = parse_term("h", hyps=hyps)
    assert audit_step(ctx, before, after).ok
    print("  ✓ Beta step preserves the type")

    hyps = {"h": parse_formula("P(c0)"), "q": parse_formula("Q(c1)")}
    ctx = Context.from_dict(hyps)
    try:
        audit_step(ctx, parse_term("h", hyps=hyps), parse_term("q", hyps=hyps))
    except SubjectReductionViolation as e:
        assert e.report is not None and not e.report.ok
        print("  ✓ Type change reported as a kernel bug")
    else:
        raise AssertionError("audit should reject a type change")


PROPERTY_SEED = 7
PROPERTY_COUNT = 200


def test_generated_properties():
    """Test determinism, weakening and the substitution lemma on generated terms."""
    print("\n🎲 Testing Generated Term Properties...")

    batch = list(generate_terms(PROPERTY_COUNT, PROPERTY_SEED))
    for generated in batch:
        ctx, term = generated.context, generated.term
        assert alpha_equal(typecheck(ctx, term), typecheck(ctx, term))
        assert alpha_equal(elaborate(ctx, term), elaborate(ctx, term))
    print(f"  ✓ {len(batch)} terms type check and elaborate the same way twice")

    unused = parse_formula("P(c2) & Q(c1)")
    for generated in batch:
        wider = generated.context.extend("w0", unused)
        assert alpha_equal(typecheck(wider, generated.term), generated.goal)
    print("  ✓ An unused hypothesis does not change any type")

    substituted = 0
    for outer in batch:
        for name, formula in outer.context:
            inner = next((g for g in batch if g is not outer and alpha_equal(g.goal, formula)), None)
            if inner is None:
                continue
            bindings = {n: f for n, f in outer.context if n != name}
            bindings.update(dict(inner.context))
            term = subst_proof(outer.term, name, inner.term)
            assert alpha_equal(typecheck(Context.from_dict(bindings), term), outer.goal)
            substituted += 1
    assert substituted > 0
    print(f"  ✓ {substituted} substitutions of a proof for a hypothesis keep the type")


def main():
    """Run all tests."""
    print("🚀 Starting LC Type Checker Tests\n")

    try:
        test_corpus_types()
        test_flavors()
        test_side_conditions()
        test_elaboration()
        test_audit()
        test_generated_properties()

        print("\n🎉 All type checker tests passed!")

    except Exception as e:
        print(f"\n❌ Test failed: {e}")
        import traceback
        traceback.print_exc()
        return 1

    return 0


if __name__ == "__main__":
    sys.exit(main())
