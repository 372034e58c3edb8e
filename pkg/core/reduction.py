"""Redex identification and contraction.

A term is a tree of `par` nodes (the spine) whose leaves are elementary
processes. Each parallel process, that is each spine node and each leaf,
has at most one head redex; the term reduces at the one whose starting
symbol comes first in path order.
"""

import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

from core.errors import AbortTypeMismatch, SiteStale
from core.models import RedexKind
from core.syntax import (
    Abort, App, Arg, Case, CaseFrame, ExCase, ExCaseFrame, Imp, IndApp, IndArg, IndLam, Inj,
    Lam, Pair, Par, PredApp, PredFrame, PredLam, ProjFrame, ProofTerm, Proj, TermPath, Var,
    Witness, alpha_equal, apply_frame, fresh_name, free_proof_vars, rename_proof_var,
    replace_at, subst_ind, subst_pred, subst_proof, subterm_at, unwind,
)
from core.typecheck import intrinsic_type

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RedexSite:
    """Where a redex is: its root, its rule, and its starting symbol."""
    path: TermPath
    kind: RedexKind
    start: TermPath

    def shifted(self, prefix: TermPath) -> "RedexSite":
        return RedexSite(prefix + self.path, self.kind, prefix + self.start)


@dataclass(frozen=True)
class ParallelDecomposition:
    """A term split along its `par` spine."""
    term: ProofTerm
    leaves: Tuple[Tuple[TermPath, ProofTerm], ...]
    pars: Tuple[Tuple[TermPath, str], ...]

    @property
    def processes(self) -> List[ProofTerm]:
        return [leaf for _, leaf in self.leaves]

    @property
    def binders(self) -> List[str]:
        """Binder labels in order, one between each pair of adjacent leaves."""
        labels: List[str] = []

        def walk(node):
            if isinstance(node, Par):
                walk(node.left)
                labels.append(node.var)
                walk(node.right)

        walk(self.term)
        return labels

    def rebuild(self, leaves) -> ProofTerm:
        """The spine with its leaves replaced, in order."""
        leaves = list(leaves)
        if len(leaves) != len(self.leaves):
            raise ValueError(f"expected {len(self.leaves)} leaves, got {len(leaves)}")
        term = self.term
        for (path, _), leaf in zip(self.leaves, leaves):
            term = replace_at(term, path, leaf)
        return term


def decompose(term: ProofTerm) -> ParallelDecomposition:
    leaves: List[Tuple[TermPath, ProofTerm]] = []
    pars: List[Tuple[TermPath, str]] = []

    def walk(node: ProofTerm, path: TermPath) -> None:
        if isinstance(node, Par):
            pars.append((path, node.var))
            walk(node.left, path + (0,))
            walk(node.right, path + (1,))
        else:
            leaves.append((path, node))

    walk(term, ())
    return ParallelDecomposition(term, tuple(leaves), tuple(pars))


def parallel_processes(term: ProofTerm, path: TermPath = ()) -> Iterator[Tuple[TermPath, ProofTerm]]:
    """Every spine node and every leaf, in pre-order."""
    yield path, term
    if isinstance(term, Par):
        yield from parallel_processes(term.left, path + (0,))
        yield from parallel_processes(term.right, path + (1,))


def spine_binders(term: ProofTerm, path: TermPath) -> List[str]:
    """Binders of the `par` nodes strictly above `path`."""
    names = []
    for index in path:
        if not isinstance(term, Par):
            break
        names.append(term.var)
        term = term.left if index == 0 else term.right
    return names


def _bound_processes(branch: ProofTerm, name: str, path: TermPath = ()) -> Iterator[Tuple[TermPath, ProofTerm]]:
    """Leaves of `branch` where `name` still refers to the enclosing binder."""
    if isinstance(branch, Par):
        if branch.var == name:
            return
        yield from _bound_processes(branch.left, name, path + (0,))
        yield from _bound_processes(branch.right, name, path + (1,))
    else:
        yield path, branch


def _communication_start(leaf: ProofTerm, name: str) -> Optional[Tuple[int, ...]]:
    """Offset of `name` inside `leaf` when the leaf is `name w sigma`."""
    head, frames = unwind(leaf)
    if isinstance(head, Var) and head.name == name and frames and isinstance(frames[0], Arg):
        return (0,) * len(frames)
    return None


def _communication_redex(par: Par) -> Optional[RedexSite]:
    for side, branch in enumerate((par.left, par.right)):
        for leaf_path, leaf in _bound_processes(branch, par.var):
            offset = _communication_start(leaf, par.var)
            if offset is not None:
                kind = RedexKind.D_LEFT if side == 0 else RedexKind.D_RIGHT
                return RedexSite((), kind, (side,) + leaf_path + offset)
    return None


def abort_types_agree(process: ProofTerm) -> bool:
    """Whether `abort u sigma` has the type of `u`, read from annotations."""
    head, frames = unwind(process)
    if not isinstance(head, Abort) or not frames or not isinstance(frames[0], Arg):
        return False
    process_type = intrinsic_type(process)
    if process_type is None:
        return False
    arg_type = intrinsic_type(frames[0].term)
    return arg_type is not None and alpha_equal(process_type, arg_type)


def _stack_redex_kind(head: ProofTerm, frame, process: ProofTerm) -> Optional[RedexKind]:
    match head, frame:
        case Lam(), Arg():
            return RedexKind.BETA
        case IndLam(), IndArg():
            return RedexKind.IND_BETA
        case Pair(), ProjFrame():
            return RedexKind.PROJ_PAIR
        case Inj(), CaseFrame():
            return RedexKind.CASE_INJ
        case Witness(), ExCaseFrame():
            return RedexKind.EXCASE_WITNESS
        case PredLam(), PredFrame():
            return RedexKind.PRED_BETA
        case Par(), Arg() | IndArg() | PredFrame():
            return RedexKind.PERM_ARG
        case Par(), ProjFrame():
            return RedexKind.PERM_PROJ
        case Par(), CaseFrame():
            return RedexKind.PERM_CASE
        case Par(), ExCaseFrame():
            return RedexKind.PERM_EXCASE
        case Abort(), Arg():
            return RedexKind.ABORT_RULE if abort_types_agree(process) else None
    return None


def head_redex(process: ProofTerm) -> Optional[RedexSite]:
    """The head redex of a single parallel process, positions relative to it."""
    if isinstance(process, Par):
        return _communication_redex(process)
    head, frames = unwind(process)
    if not frames:
        return None
    kind = _stack_redex_kind(head, frames[0], process)
    if kind is None:
        return None
    if kind is RedexKind.ABORT_RULE:
        return RedexSite((), kind, ())
    path = (0,) * (len(frames) - 1)
    return RedexSite(path, kind, path)


def head_redexes(term: ProofTerm) -> List[RedexSite]:
    sites = []
    for path, process in parallel_processes(term):
        site = head_redex(process)
        if site is not None:
            sites.append(site.shifted(path))
    return sites


def leftmost_head_redex(term: ProofTerm) -> Optional[RedexSite]:
    sites = head_redexes(term)
    if not sites:
        return None
    return min(sites, key=lambda site: site.start)


# ---------------------------------------------------------------------------
# Contraction

def _permute(redex: ProofTerm) -> ProofTerm:
    head, frames = unwind(redex)
    frame = frames[0]
    par = head
    frame_vars = free_proof_vars(frame)
    name, left, right = par.var, par.left, par.right
    if name in frame_vars:
        name = fresh_name(name, frame_vars | free_proof_vars(left) | free_proof_vars(right))
        left = rename_proof_var(left, par.var, name)
        right = rename_proof_var(right, par.var, name)
    return Par(name, par.left_ann, par.right_ann, apply_frame(left, frame), apply_frame(right, frame))


def _freshen_spine(branch: ProofTerm, path: TermPath, avoid) -> ProofTerm:
    """Rename spine binders along `path` that would capture a name in `avoid`."""
    if not path or not isinstance(branch, Par):
        return branch
    name, left, right = branch.var, branch.left, branch.right
    if name in avoid:
        name = fresh_name(name, set(avoid) | free_proof_vars(left) | free_proof_vars(right))
        left = rename_proof_var(left, branch.var, name)
        right = rename_proof_var(right, branch.var, name)
    if path[0] == 0:
        left = _freshen_spine(left, path[1:], avoid)
    else:
        right = _freshen_spine(right, path[1:], avoid)
    return Par(name, branch.left_ann, branch.right_ann, left, right)


def _communicate(par: Par, start: TermPath) -> ProofTerm:
    side = start[0]
    branch, other = (par.left, par.right) if side == 0 else (par.right, par.left)
    leaf_path = None
    for path, leaf in _bound_processes(branch, par.var):
        offset = _communication_start(leaf, par.var)
        if offset is not None and (side,) + path + offset == start:
            leaf_path = path
            break
    if leaf_path is None:
        raise SiteStale(f"no communication on {par.var} starts at {list(start)}")

    branch = _freshen_spine(branch, leaf_path, free_proof_vars(other) - {par.var})
    _, frames = unwind(subterm_at(branch, leaf_path))
    argument = frames[0].term
    hypothesis = par.left_ann if side == 0 else par.right_ann
    dummy_ann = hypothesis.right if isinstance(hypothesis, Imp) else None
    dummy = fresh_name("y", free_proof_vars(argument))
    replacement = subst_proof(other, par.var, Lam(dummy, dummy_ann, argument))
    branch = replace_at(branch, leaf_path, replacement)
    if side == 0:
        return Par(par.var, par.left_ann, par.right_ann, branch, par.right)
    return Par(par.var, par.left_ann, par.right_ann, par.left, branch)


def _contract_node(redex: ProofTerm, kind: RedexKind, start: TermPath) -> ProofTerm:
    match kind, redex:
        case RedexKind.BETA, App(Lam(x, _, body), arg):
            return subst_proof(body, x, arg)
        case RedexKind.IND_BETA, IndApp(IndLam(alpha, body), m):
            return subst_ind(body, alpha, m)
        case RedexKind.PROJ_PAIR, Proj(Pair(left, right), index):
            return left if index == 0 else right
        case RedexKind.CASE_INJ, Case(Inj(index, inner, _), x, _, left, y, _, right):
            return subst_proof(left, x, inner) if index == 0 else subst_proof(right, y, inner)
        case RedexKind.EXCASE_WITNESS, ExCase(Witness(m, inner, _), alpha, x, _, body):
            return subst_proof(subst_ind(body, alpha, m), x, inner)
        case RedexKind.PRED_BETA, PredApp(PredLam(var, body), abs_):
            return subst_pred(body, var, abs_)
        case (RedexKind.PERM_ARG | RedexKind.PERM_PROJ | RedexKind.PERM_CASE | RedexKind.PERM_EXCASE), _:
            return _permute(redex)
        case (RedexKind.D_LEFT | RedexKind.D_RIGHT), Par():
            return _communicate(redex, start)
        case RedexKind.ABORT_RULE, _:
            if not abort_types_agree(redex):
                raise AbortTypeMismatch("abort argument does not have the type of the abort process")
            return unwind(redex)[1][0].term
    raise SiteStale(f"{kind} does not match {type(redex).__name__}")


def contract(term: ProofTerm, site: RedexSite) -> ProofTerm:
    """Apply exactly the rule named by `site`."""
    try:
        redex = subterm_at(term, site.path)
    except (IndexError, TypeError) as e:
        raise SiteStale(f"no subterm at {list(site.path)}") from e
    if site.kind is RedexKind.ABORT_RULE:
        head, frames = unwind(redex)
        if isinstance(head, Abort) and frames and isinstance(frames[0], Arg) and not abort_types_agree(redex):
            raise AbortTypeMismatch("abort argument does not have the type of the abort process")
    expected = head_redex(redex)
    if expected is None or expected.kind != site.kind or expected.path != () \
            or site.path + expected.start != site.start:
        raise SiteStale(f"no {site.kind} redex at {list(site.path)}")
    relative_start = site.start[len(site.path):]
    return replace_at(term, site.path, _contract_node(redex, site.kind, relative_start))


def head_step(term: ProofTerm) -> Optional[Tuple[RedexSite, ProofTerm]]:
    """One step of head reduction, or None on a head normal form."""
    site = leftmost_head_redex(term)
    if site is None:
        return None
    reduct = contract(term, site)
    logger.debug(f"{site.kind} at {list(site.path)}")
    return site, reduct
