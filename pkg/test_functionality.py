#!/usr/bin/env python3
"""
LC Proof-Term Kernel - Syntax Test Script

Tests the term language on its own: substitution for the three binding
sorts, alpha-equivalence, signatures, and the parser/printer pair on the
whole corpus.
"""

import glob
import os
import sys

# Add the project root to the path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from core.errors import SignatureError, TermSyntaxError
from core.parser import parse_file, parse_formula, parse_term
from core.printer import print_formula, print_term
from core.syntax import (
    DEFAULT_SIGNATURE, FALSUM, App, Arg, Atom, Const, ExistsInd, ForallInd, ForallPred, FunApp,
    Imp, IndVar, Lam, Par, PredAbs, PredVarAtom, ProjFrame, Signature, Var, alpha_equal,
    apply_stack, canonicalize, children, free_ind_vars, free_pred_vars, free_proof_vars,
    fresh_name, replace_at, subst_ind, subst_pred, subst_proof, subterm_at, term_size, unwind,
)

ROOT = os.path.dirname(os.path.abspath(__file__))
CORPUS_FILES = sorted(glob.glob(os.path.join(ROOT, "corpus", "**", "*.lct"), recursive=True))


def test_proof_substitution():
    """Test capture-avoiding proof substitution."""
    print("🔤 Testing Proof Substitution...")

    identity = Lam("y", None, Var("y"))
    assert subst_proof(Var("x"), "x", identity) == identity
    print("  ✓ x[fun y => y / x] is the identity")

    result = subst_proof(Lam("y", None, App(Var("x"), Var("y"))), "x", Var("y"))
    assert result.var == "y1"
    assert alpha_equal(result, Lam("w", None, App(Var("y"), Var("w"))))
    print("  ✓ Binder renamed to y1 instead of capturing y")

    par = Par("a", None, None, App(Var("a"), Var("t")), Var("z"))
    assert subst_proof(par, "z", Var("w")) == Par("a", None, None, App(Var("a"), Var("t")), Var("w"))
    assert subst_proof(par, "a", Var("w")) == par
    print("  ✓ par binds its variable in both branches")

    captured = subst_proof(par, "z", Var("a"))
    assert captured.var != "a"
    assert "a" in free_proof_vars(captured)
    print("  ✓ par binder renamed when it would capture")

    term = parse_term("fun x => x z")
    assert alpha_equal(subst_proof(term, "z", Var("z")), term)
    print("  ✓ Substituting a variable for itself changes nothing")


def test_individual_and_predicate_substitution():
    """Test substitution of individual terms and predicate abstractions."""
    print("\n🔣 Testing Individual and Predicate Substitution...")

    alpha, beta = IndVar("a"), IndVar("b")
    assert subst_ind(Atom("P", (alpha,)), "a", Const("c0")) == Atom("P", (Const("c0"),))
    bound = ForallInd("a", Atom("P", (alpha,)))
    assert subst_ind(bound, "a", Const("c0")) == bound
    print("  ✓ Bound individual variables are left alone")

    formula = ExistsInd("b", Atom("R", (alpha, beta)))
    result = subst_ind(formula, "a", FunApp("f", (beta,)))
    assert result.var == "b1"
    assert alpha_equal(result, ExistsInd("e", Atom("R", (FunApp("f", (beta,)), IndVar("e")))))
    print("  ✓ exists b renamed to avoid capturing f(b)")

    abs_p = PredAbs("a", Atom("P", (alpha,)))
    assert subst_pred(PredVarAtom("X", Const("c0")), "X", abs_p) == Atom("P", (Const("c0"),))
    assert subst_pred(PredVarAtom("Y", Const("c0")), "X", abs_p) == PredVarAtom("Y", Const("c0"))
    print("  ✓ X(c0) instantiated, Y(c0) unchanged")

    body = ForallInd("a", PredVarAtom("X", alpha))
    result = subst_pred(body, "X", PredAbs("b", Atom("R", (beta, alpha))))
    assert result.var != "a"
    assert alpha_equal(result, ForallInd("e", Atom("R", (IndVar("e"), alpha))))
    print("  ✓ Predicate instance avoids capture under forall")

    second = ForallPred("X", Imp(PredVarAtom("X", alpha), PredVarAtom("Y", alpha)))
    assert free_pred_vars(second) == {"Y"}
    assert free_ind_vars(second) == {"a"}
    print("  ✓ Free individual and predicate variables")


def test_alpha_equivalence():
    """Test canonical forms and alpha-equality."""
    print("\n🔁 Testing Alpha-Equivalence...")

    left = parse_term("fun x : P(c0) => fun y : Q(c1) => x")
    right = parse_term("fun u : P(c0) => fun v : Q(c1) => u")
    assert alpha_equal(left, right)
    assert not alpha_equal(left, parse_term("fun u : P(c0) => fun v : Q(c1) => v"))
    assert canonicalize(canonicalize(left)) == canonicalize(left)
    print("  ✓ Canonicalization is idempotent")

    assert alpha_equal(parse_formula("forall a. exists b. R(a, b)"),
                       parse_formula("forall c. exists d. R(c, d)"))
    assert not alpha_equal(parse_formula("forall a. P(a)"), parse_formula("forall a. Q(a)"))
    print("  ✓ Formula alpha-equality")

    assert fresh_name("y", {"x"}) == "y"
    assert fresh_name("y", {"y"}) == "y1"
    assert fresh_name("y", {"y", "y1"}) == "y2"
    print("  ✓ Fresh names y, y1, y2")


def test_stacks_and_paths():
    """Test stacks, unwinding and positions."""
    print("\n📍 Testing Stacks and Paths...")

    head = Var("h")
    stack = (Arg(Var("x")), ProjFrame(0), Arg(Var("y")))
    term = apply_stack(head, stack)
    assert apply_stack(head, ()) == head
    assert unwind(term) == (head, stack)
    print("  ✓ unwind inverts apply_stack")

    assert subterm_at(term, (0, 0, 0)) == head
    swapped = replace_at(term, (0, 0, 0), Var("g"))
    assert unwind(swapped)[0] == Var("g")
    assert len(children(term)) == 2
    assert term_size(term) == 6
    print("  ✓ Paths address subterms")


def test_signatures():
    """Test signature files and validation."""
    print("\n📜 Testing Signatures...")

    signature = Signature.from_text("# test\nconst k0 k1\nfunc g/2\npred S/0 T/3\n")
    assert signature.constants == ("k0", "k1")
    assert signature.function_arity("g") == 2
    assert signature.predicate_arity("S") == 0
    assert signature.first_constant == Const("k0")
    print("  ✓ Signature file parsed")

    for bad in ("const c0 c0", "func g/0", "pred P/1 P/2", "const par", "const P\npred P/1", "func g"):
        try:
            Signature.from_text(bad)
        except SignatureError:
            continue
        raise AssertionError(f"signature {bad!r} should be rejected")
    print("  ✓ Bad signatures rejected")

    formula = parse_formula("S -> T(k0, g(k1, k0), k1)", signature)
    assert isinstance(formula, Imp)
    for bad in ("U", "T(k0)", "S(k0)", "T(g(k0), k0, k1)"):
        try:
            parse_formula(bad, signature)
        except TermSyntaxError:
            continue
        raise AssertionError(f"formula {bad!r} should be rejected")
    print("  ✓ Arities enforced by the parser")

    sig = Signature.load(os.path.join(ROOT, "corpus", "default.sig"))
    assert sig == DEFAULT_SIGNATURE
    print("  ✓ corpus/default.sig matches the default signature")


def test_parser_and_printer():
    """Test concrete syntax details."""
    print("\n🖨️  Testing Parser and Printer...")

    assert parse_formula("~P(c0)") == Imp(Atom("P", (Const("c0"),)), FALSUM)
    assert print_formula(parse_formula("~P(c0)")) == "~P(c0)"
    assert print_formula(parse_formula("P(c0) -> (Q(c1) -> P(c0))")) == "P(c0) -> Q(c1) -> P(c0)"
    assert print_formula(parse_formula("(P(c0) -> Q(c1)) -> P(c0)")) == "(P(c0) -> Q(c1)) -> P(c0)"
    print("  ✓ Implication is right associative")

    existential = parse_formula("exists2 X. X(c0)")
    assert isinstance(existential, ForallPred)
    print("  ✓ exists2 expands to its second-order encoding")

    term = parse_term("f0 x y")
    assert term == App(App(Var("f0"), Var("x")), Var("y"))
    assert print_term(term) == "f0 x y"
    assert print_term(parse_term("f0 (x y)")) == "f0 (x y)"
    print("  ✓ Application is left associative")

    nested = parse_term("x par a y par b z")
    assert isinstance(nested, Par) and isinstance(nested.right, Par)
    assert print_term(nested) == "x par a y par b z"
    print("  ✓ par is right associative")

    try:
        parse_term("fun x =>\n  ) x")
    except TermSyntaxError as e:
        assert e.line is not None
        print(f"  ✓ Syntax error located: {e}")
    else:
        raise AssertionError("unbalanced parenthesis should not parse")


def test_corpus_round_trip():
    """Test that printing and re-parsing preserves every corpus term."""
    print("\n📚 Testing Corpus Round Trip...")

    assert CORPUS_FILES, "corpus is empty"
    for path in CORPUS_FILES:
        lct = parse_file(path)
        again = parse_term(print_term(lct.term), hyps=lct.hyp_map)
        assert alpha_equal(again, lct.term), f"round trip failed for {path}"
        if lct.goal is not None:
            assert alpha_equal(parse_formula(print_formula(lct.goal)), lct.goal)
    print(f"  ✓ {len(CORPUS_FILES)} corpus files round trip")


def main():
    """Run all tests."""
    print("🚀 Starting LC Kernel Syntax Tests\n")

    try:
        test_proof_substitution()
        test_individual_and_predicate_substitution()
        test_alpha_equivalence()
        test_stacks_and_paths()
        test_signatures()
        test_parser_and_printer()
        test_corpus_round_trip()

        print("\n🎉 All syntax tests passed!")

    except Exception as e:
        print(f"\n❌ Test failed: {e}")
        import traceback
        traceback.print_exc()
        return 1

    return 0


if __name__ == "__main__":
    sys.exit(main())
