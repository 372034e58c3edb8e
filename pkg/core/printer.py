"""Text rendering for formulas and proof terms.

Output parses back (see core.parser) to an alpha-equal tree. Parentheses are
inserted only where precedence requires them: quantifiers and binders extend
as far right as possible, `->` and `par` associate to the right, application
associates to the left.
"""

from core.syntax import (
    Abort, And, App, Atom, Case, Const, Efq, ExCase, ExistsInd, Falsum, ForallInd,
    ForallPred, FunApp, Imp, IndApp, IndLam, IndVar, Inj, Lam, Or, Pair, Par, PredAbs,
    PredApp, PredLam, PredVarAtom, Proj, Var, Witness, alpha_equal,
)

# formula levels
_QUANT, _IMP, _OR, _AND, _NOT, _ATOM = range(6)
# term levels
_TOP, _APP, _TERM_ATOM = range(3)


def print_indterm(m) -> str:
    match m:
        case IndVar(name) | Const(name):
            return name
        case FunApp(name, args):
            return f"{name}(" + ", ".join(print_indterm(a) for a in args) + ")"
    raise TypeError(f"not an individual term: {m!r}")


def print_formula(formula) -> str:
    return _formula(formula, _QUANT)


def print_pred_abs(abs_: PredAbs) -> str:
    return "{" + f"{abs_.var}. {print_formula(abs_.body)}" + "}"


def _wrap(text: str, level: int, context: int) -> str:
    return f"({text})" if level < context else text


def _formula(f, context: int) -> str:
    match f:
        case Imp(inner, Falsum()):
            return _wrap("~" + _formula(inner, _NOT), _NOT, context)
        case Falsum():
            return "False"
        case Atom(pred, ()):
            return pred
        case Atom(pred, args):
            return f"{pred}(" + ", ".join(print_indterm(a) for a in args) + ")"
        case PredVarAtom(var, arg):
            return f"{var}({print_indterm(arg)})"
        case And(l, r):
            return _wrap(f"{_formula(l, _AND)} & {_formula(r, _NOT)}", _AND, context)
        case Or(l, r):
            return _wrap(f"{_formula(l, _OR)} | {_formula(r, _AND)}", _OR, context)
        case Imp(l, r):
            return _wrap(f"{_formula(l, _OR)} -> {_formula(r, _IMP)}", _IMP, context)
        case ForallInd(v, body):
            return _wrap(f"forall {v}. {_formula(body, _QUANT)}", _QUANT, context)
        case ExistsInd(v, body):
            return _wrap(f"exists {v}. {_formula(body, _QUANT)}", _QUANT, context)
        case ForallPred(v, body):
            return _wrap(f"forall2 {v}. {_formula(body, _QUANT)}", _QUANT, context)
    raise TypeError(f"not a formula: {f!r}")


def print_term(term) -> str:
    return _term(term, _TOP)


def _annot(formula) -> str:
    return "" if formula is None else f"[{print_formula(formula)}]"


def _binder(name: str, ann) -> str:
    return name if ann is None else f"{name} : {print_formula(ann)}"


def _par_binder(par: Par) -> str:
    if par.left_ann is None:
        return par.var
    if isinstance(par.left_ann, Imp) and par.right_ann is not None \
            and alpha_equal(par.right_ann, Imp(par.left_ann.right, par.left_ann.left)):
        return f"[{par.var} : {print_formula(par.left_ann)}]"
    right = "" if par.right_ann is None else f", {print_formula(par.right_ann)}"
    return f"[{par.var} : {print_formula(par.left_ann)}{right}]"


def _term(t, context: int) -> str:
    match t:
        case Var(name, _):
            return name
        case Lam(x, ann, body):
            return _wrap(f"fun {_binder(x, ann)} => {_term(body, _TOP)}", _TOP, context)
        case IndLam(alpha, body):
            return _wrap(f"fun @{alpha} => {_term(body, _TOP)}", _TOP, context)
        case PredLam(var, body):
            return _wrap(f"Fun {var} => {_term(body, _TOP)}", _TOP, context)
        case Par():
            text = f"{_term(t.left, _APP)} par {_par_binder(t)} {_term(t.right, _TOP)}"
            return _wrap(text, _TOP, context)
        case App(fun, arg):
            return _wrap(f"{_term(fun, _APP)} {_term(arg, _TERM_ATOM)}", _APP, context)
        case IndApp(inner, m):
            return _wrap(f"{_term(inner, _APP)} @{print_indterm(m)}", _APP, context)
        case Proj(inner, index):
            return _wrap(f"{_term(inner, _APP)}.{index}", _APP, context)
        case PredApp(inner, abs_):
            return _wrap(f"{_term(inner, _APP)} {print_pred_abs(abs_)}", _APP, context)
        case Inj(index, inner, ann):
            return _wrap(f"inj{index}{_annot(ann)} {_term(inner, _TERM_ATOM)}", _APP, context)
        case Witness(m, inner, ann):
            text = f"wit{_annot(ann)} {print_indterm(m)} {_term(inner, _TERM_ATOM)}"
            return _wrap(text, _APP, context)
        case Efq(target, inner):
            return _wrap(f"efq{_annot(target)} {_term(inner, _TERM_ATOM)}", _APP, context)
        case Abort(ann):
            return f"abort{_annot(ann)}"
        case Pair(l, r):
            return f"<{_term(l, _TOP)}, {_term(r, _TOP)}>"
        case Case(s, x, xa, l, y, ya, r):
            return (f"case {_term(s, _TOP)} of [{_binder(x, xa)} => {_term(l, _TOP)}"
                    f" | {_binder(y, ya)} => {_term(r, _TOP)}]")
        case ExCase(s, alpha, x, ann, body):
            return f"excase {_term(s, _TOP)} of [({alpha}, {_binder(x, ann)}) => {_term(body, _TOP)}]"
    raise TypeError(f"not a proof term: {t!r}")
