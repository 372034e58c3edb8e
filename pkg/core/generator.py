"""Seeded generator of well-typed LC proof terms over the default signature.

Terms are built goal-first: every constructor is chosen so that the result
has the requested type, and the generator deliberately plants redexes
(beta, projection, case, quantifier, communication) so normalization has
work to do. The `max_depth` bound is the depth of the produced syntax tree.

Context hypotheses are always closed. A leaf whose goal mentions an
eigenvariable is proved from the universal closure of the goal.
"""

import random
from dataclasses import dataclass
from typing import Dict, Optional, Set

from core.syntax import (
    FALSUM, And, App, Atom, Case, Const, Efq, ExCase, ExistsInd, ForallInd, Formula, FunApp, Imp,
    IndApp, IndLam, IndVar, Inj, Lam, Or, Pair, Par, ProofTerm, Proj, Var, Witness,
    alpha_equal, free_ind_vars, is_atomic, subst_ind,
)
from core.typecheck import Context

ATOMS = (
    Atom("P", (Const("c0"),)),
    Atom("P", (Const("c1"),)),
    Atom("Q", (Const("c0"),)),
    Atom("Q", (Const("c2"),)),
    Atom("R", (Const("c0"), Const("c1"))),
)

CONSTANTS = ("c0", "c1", "c2")


def open_atoms(var: str):
    v = IndVar(var)
    return (Atom("P", (v,)), Atom("Q", (v,)), Atom("R", (Const("c0"), v)), Atom("R", (v, Const("c1"))))


def constants_of(node) -> Set[str]:
    match node:
        case Const(name):
            return {name}
        case FunApp(_, args) | Atom(_, args):
            return set().union(*(constants_of(a) for a in args))
        case And(l, r) | Or(l, r) | Imp(l, r):
            return constants_of(l) | constants_of(r)
        case ForallInd(_, body) | ExistsInd(_, body):
            return constants_of(body)
    return set()


def abstract_constant(node, name: str, var: str):
    """Replace every occurrence of the constant `name` by the variable `var`."""
    match node:
        case Const(c) if c == name:
            return IndVar(var)
        case FunApp(f, args):
            return FunApp(f, tuple(abstract_constant(a, name, var) for a in args))
        case Atom(pred, args):
            return Atom(pred, tuple(abstract_constant(a, name, var) for a in args))
        case And(l, r) | Or(l, r) | Imp(l, r):
            return type(node)(abstract_constant(l, name, var), abstract_constant(r, name, var))
        case ForallInd(v, body) | ExistsInd(v, body):
            return type(node)(v, abstract_constant(body, name, var))
    return node


@dataclass(frozen=True)
class GeneratedTerm:
    term: ProofTerm
    context: Context
    goal: Formula


class TermGenerator:
    """Random well-typed terms; the same seed gives the same sequence."""

    def __init__(self, seed: int = 0, max_depth: int = 8):
        self.random = random.Random(seed)
        self.max_depth = max_depth
        self.counter = 0
        self.hyps: Dict[str, Formula] = {}

    def fresh(self, prefix: str) -> str:
        self.counter += 1
        return f"{prefix}{self.counter}"

    def atom(self) -> Formula:
        return self.random.choice(ATOMS)

    def constant(self) -> Const:
        return Const(self.random.choice(CONSTANTS))

    def formula(self, level: int = 2) -> Formula:
        if level <= 0 or self.random.random() < 0.4:
            return self.atom()
        if self.random.random() < 0.2:
            var = self.fresh("v")
            quantifier = self.random.choice((ForallInd, ExistsInd))
            return quantifier(var, self.open_formula(var, level - 1))
        connective = self.random.choice((And, Or, Imp))
        return connective(self.formula(level - 1), self.formula(level - 1))

    def open_formula(self, var: str, level: int = 1) -> Formula:
        """A formula in which `var` occurs free."""
        if level <= 0 or self.random.random() < 0.5:
            return self.random.choice(open_atoms(var))
        connective = self.random.choice((And, Or, Imp))
        parts = [self.open_formula(var, level - 1), self.formula(level - 1)]
        self.random.shuffle(parts)
        return connective(*parts)

    def generate(self) -> GeneratedTerm:
        self.hyps = {}
        goal = self.formula()
        term = self.proof(goal, {}, self.max_depth)
        return GeneratedTerm(term, Context.from_dict(self.hyps), goal)

    # leaves ------------------------------------------------------------

    def hypothesis(self, goal: Formula) -> ProofTerm:
        eigen = sorted(free_ind_vars(goal))
        closed = goal
        for var in reversed(eigen):
            closed = ForallInd(var, closed)
        found = None
        for name, formula in self.hyps.items():
            if alpha_equal(formula, closed) and self.random.random() < 0.5:
                found = name
                break
        if found is None:
            found = self.fresh("h")
            self.hyps[found] = closed
        term: ProofTerm = Var(found, self.hyps[found])
        for var in eigen:
            term = IndApp(term, IndVar(var))
        return term

    def leaf(self, goal: Formula, ctx: Dict[str, Formula], depth: int) -> ProofTerm:
        direct = [name for name, formula in ctx.items() if alpha_equal(formula, goal)]
        if direct and self.random.random() < 0.7:
            name = self.random.choice(direct)
            return Var(name, ctx[name])
        if depth >= 2:
            usable = [(name, formula) for name, formula in ctx.items()
                      if isinstance(formula, Imp) and alpha_equal(formula.right, goal)]
            if usable:
                name, formula = self.random.choice(usable)
                return App(Var(name, formula), self.leaf(formula.left, ctx, depth - 1))
        return self.hypothesis(goal)

    # constructors ------------------------------------------------------

    def proof(self, goal: Formula, ctx: Dict[str, Formula], depth: int) -> ProofTerm:
        if depth <= 1:
            return self.leaf(goal, ctx, depth)
        options = ["leaf", "intro", "intro", "apply", "par", "par"]
        if depth >= 3:
            options += ["beta", "proj", "case", "forall", "exists"]
        if isinstance(goal, Atom):
            options.append("efq")
        choice = self.random.choice(options)
        if choice == "intro" and not is_atomic(goal):
            return self.intro(goal, ctx, depth)
        if choice == "apply":
            argument = self.formula(1)
            return App(self.proof(Imp(argument, goal), ctx, depth - 1), self.proof(argument, ctx, depth - 1))
        if choice == "beta":
            argument = self.formula(1)
            x = self.fresh("x")
            body = self.proof(goal, {**ctx, x: argument}, depth - 2)
            return App(Lam(x, argument, body), self.proof(argument, ctx, depth - 1))
        if choice == "par":
            return self.par(goal, ctx, depth)
        if choice == "proj":
            other = self.formula(1)
            if self.random.random() < 0.5:
                return Proj(Pair(self.proof(goal, ctx, depth - 2), self.proof(other, ctx, depth - 2)), 0)
            return Proj(Pair(self.proof(other, ctx, depth - 2), self.proof(goal, ctx, depth - 2)), 1)
        if choice == "case":
            left, right = self.formula(1), self.formula(1)
            disjunction = Or(left, right)
            index = self.random.randint(0, 1)
            scrut = Inj(index, self.proof(left if index == 0 else right, ctx, depth - 2), disjunction)
            x, y = self.fresh("x"), self.fresh("y")
            return Case(scrut, x, left, self.proof(goal, {**ctx, x: left}, depth - 1),
                        y, right, self.proof(goal, {**ctx, y: right}, depth - 1))
        if choice == "forall":
            return self.forall_redex(goal, ctx, depth)
        if choice == "exists":
            return self.exists_redex(goal, ctx, depth)
        if choice == "efq":
            return Efq(goal, self.proof(FALSUM, ctx, depth - 1))
        return self.leaf(goal, ctx, depth)

    def intro(self, goal: Formula, ctx: Dict[str, Formula], depth: int) -> ProofTerm:
        match goal:
            case Imp(left, right):
                x = self.fresh("x")
                return Lam(x, left, self.proof(right, {**ctx, x: left}, depth - 1))
            case And(left, right):
                return Pair(self.proof(left, ctx, depth - 1), self.proof(right, ctx, depth - 1))
            case Or(left, right):
                index = self.random.randint(0, 1)
                return Inj(index, self.proof(left if index == 0 else right, ctx, depth - 1), goal)
            case ForallInd(var, body):
                alpha = self.fresh("b")
                return IndLam(alpha, self.proof(subst_ind(body, var, IndVar(alpha)), ctx, depth - 1))
            case ExistsInd(var, body):
                m = self.constant()
                return Witness(m, self.proof(subst_ind(body, var, m), ctx, depth - 1), goal)
        return self.leaf(goal, ctx, depth)

    def forall_redex(self, goal: Formula, ctx: Dict[str, Formula], depth: int) -> ProofTerm:
        # (fun @b => t) @m, the body proving the goal with m abstracted to b
        alpha = self.fresh("b")
        names = sorted(constants_of(goal))
        m = Const(self.random.choice(names)) if names else self.constant()
        body = abstract_constant(goal, m.name, alpha)
        return IndApp(IndLam(alpha, self.proof(body, ctx, depth - 2)), m)

    def exists_redex(self, goal: Formula, ctx: Dict[str, Formula], depth: int) -> ProofTerm:
        # excase (wit m t) of [(b, x) => u]
        var = self.fresh("v")
        body = self.open_formula(var, 1)
        m = self.constant()
        packed = Witness(m, self.proof(subst_ind(body, var, m), ctx, depth - 2), ExistsInd(var, body))
        alpha, x = self.fresh("b"), self.fresh("x")
        x_type = subst_ind(body, var, IndVar(alpha))
        return ExCase(packed, alpha, x, x_type, self.proof(goal, {**ctx, x: x_type}, depth - 1))

    def par(self, goal: Formula, ctx: Dict[str, Formula], depth: int) -> ProofTerm:
        a = self.fresh("a")
        other = self.atom()
        consequent = goal if is_atomic(goal) else self.atom()
        left_hyp, right_hyp = Imp(other, consequent), Imp(consequent, other)
        left_ctx, right_ctx = {**ctx, a: left_hyp}, {**ctx, a: right_hyp}
        if consequent is goal and depth >= 3 and self.random.random() < 0.6:
            left = App(Var(a, left_hyp), self.proof(other, left_ctx, depth - 2))
        else:
            left = self.proof(goal, left_ctx, depth - 1)
        right = self.proof(goal, right_ctx, depth - 1)
        return Par(a, left_hyp, right_hyp, left, right)


def generate_terms(count: int, seed: int = 0, max_depth: int = 8, generator: Optional[TermGenerator] = None):
    generator = generator or TermGenerator(seed, max_depth)
    for _ in range(count):
        yield generator.generate()
