"""Exact evaluation of formulas in finite structures.

Truth values are Fractions in [0,1].  The implication evaluates to
``min(1 - lhs + rhs, 1)``, rational constants to themselves, and the
existential quantifier to the maximum over the finite universe (the
supremum is attained).  Satisfaction means value exactly 1.

Evaluation memoizes the values of shared subformulas per restriction of
the assignment to their free variables; expansion of the derived
connectives deliberately shares duplicated operands, so formulas that
would blow up as trees evaluate in time linear in their DAG size.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import EvaluationError, FormulaError
from .rationals import ZERO, ONE
from .syntax import (Atom, Const, Exists, Formula, Geq, Implies, Theory,
                     Var, expand_abbreviations, free_variables)

# An assignment is a plain mapping from free-variable names to element ids.
Assignment = Mapping[str, str]


# Formula analysis depends only on the formula, so it is shared between
# evaluators.  Entries hold the formula itself, which keeps ids stable.
_PREP_CACHE: dict[int, tuple] = {}
_PREP_CACHE_LIMIT = 65536


def _prepare(formula: Formula):
    cached = _PREP_CACHE.get(id(formula))
    if cached is not None:
        return cached
    core = expand_abbreviations(formula)
    shared, fv_map, depth = _analyze(core)
    entry = (formula, core, shared, fv_map, depth)
    if len(_PREP_CACHE) >= _PREP_CACHE_LIMIT:
        _PREP_CACHE.clear()
    _PREP_CACHE[id(formula)] = entry
    return entry


class Evaluator:
    """Reusable evaluation engine for one structure.

    Per-formula preprocessing (expansion, shared-node detection, free
    variables) is cached by formula identity, which makes repeated
    evaluation of one formula corpus against many structures cheap.
    """

    def __init__(self, structure):
        self.structure = structure

    def _prepare(self, formula: Formula):
        return _prepare(formula)

    def value(self, formula: Formula, assignment: Optional[Assignment] = None) -> Fraction:
        _, core, shared, fv_map, depth = self._prepare(formula)
        env = dict(assignment) if assignment else {}
        for name in fv_map[id(core)]:
            if name not in env:
                raise EvaluationError(f"unassigned free variable {name!r}")
            if not self.structure.has_element(env[name]):
                raise EvaluationError(
                    f"assignment sends {name!r} outside the universe: "
                    f"{env[name]!r}")
        needed = 4 * depth + 64
        limit = sys.getrecursionlimit()
        if needed > limit:
            sys.setrecursionlimit(needed)
        try:
            return self._run(core, env, shared, fv_map, {})
        finally:
            if needed > limit:
                sys.setrecursionlimit(limit)

    def _run(self, node, env, shared, fv_map, memo):
        key = None
        if id(node) in shared:
            key = (id(node), tuple(sorted(
                (v, env[v]) for v in fv_map[id(node)])))
            hit = memo.get(key)
            if hit is not None:
                return hit
        if isinstance(node, Atom):
            args = tuple(self._term(t, env) for t in node.args)
            value = self._atom(node.pred, args)
        elif isinstance(node, Const):
            value = node.value
        elif isinstance(node, Implies):
            lhs = self._run(node.lhs, env, shared, fv_map, memo)
            rhs = self._run(node.rhs, env, shared, fv_map, memo)
            value = ONE - lhs + rhs
            if value > ONE:
                value = ONE
        elif isinstance(node, Exists):
            best = ZERO
            inner = dict(env)
            for element in self.structure.universe:
                inner[node.var] = element
                v = self._run(node.body, inner, shared, fv_map, memo)
                if v > best:
                    best = v
                    if best == ONE:
                        break
            value = best
        else:
            raise FormulaError(f"evaluator got a non-core node: {node!r}")
        if key is not None:
            memo[key] = value
        return value

    def _atom(self, pred, args):
        structure = self.structure
        if pred == "d":
            return structure.metric[args]
        table = structure.predicates.get(pred)
        if table is None:
            raise EvaluationError(
                f"predicate {pred!r} missing from the structure")
        try:
            return table[args]
        except KeyError:
            raise EvaluationError(
                f"predicate {pred!r} has no entry for {args}") from None

    def _term(self, term, env):
        if isinstance(term, Var):
            try:
                return env[term.name]
            except KeyError:
                raise EvaluationError(
                    f"unassigned free variable {term.name!r}") from None
        structure = self.structure
        if not term.args:
            try:
                return structure.constants[term.name]
            except KeyError:
                raise EvaluationError(
                    f"constant {term.name!r} missing from the structure") from None
        table = structure.operations.get(term.name)
        if table is None:
            raise EvaluationError(
                f"operation {term.name!r} missing from the structure")
        args = tuple(self._term(t, env) for t in term.args)
        try:
            return table[args]
        except KeyError:
            raise EvaluationError(
                f"operation {term.name!r} has no entry for {args}") from None


def _kids(node):
    if isinstance(node, Implies):
        return (node.lhs, node.rhs)
    if isinstance(node, Exists):
        return (node.body,)
    return ()


def _analyze(core: Formula):
    """Iterative passes: reference counts, per-node free variables, depth."""
    counts: dict[int, int] = {}
    stack = [core]
    while stack:
        node = stack.pop()
        nid = id(node)
        counts[nid] = counts.get(nid, 0) + 1
        if counts[nid] == 1:
            stack.extend(_kids(node))

    # children-before-parents order, each distinct node once
    order: list = []
    seen: set[int] = set()
    work = [(core, False)]
    while work:
        node, expanded = work.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        work.append((node, True))
        for kid in _kids(node):
            work.append((kid, False))

    fv_map: dict[int, frozenset] = {}
    depth_map: dict[int, int] = {}
    for node in order:
        nid = id(node)
        if isinstance(node, Atom):
            names = set()
            for arg in node.args:
                _collect_term_vars(arg, names)
            fv_map[nid] = frozenset(names)
            depth_map[nid] = 1
        elif isinstance(node, Const):
            fv_map[nid] = frozenset()
            depth_map[nid] = 1
        elif isinstance(node, Implies):
            fv_map[nid] = fv_map[id(node.lhs)] | fv_map[id(node.rhs)]
            depth_map[nid] = 1 + max(depth_map[id(node.lhs)],
                                     depth_map[id(node.rhs)])
        elif isinstance(node, Exists):
            fv_map[nid] = fv_map[id(node.body)] - {node.var}
            depth_map[nid] = 1 + depth_map[id(node.body)]
        else:
            raise FormulaError(f"evaluator got a non-core node: {node!r}")
    shared = frozenset(nid for nid, c in counts.items() if c > 1)
    return shared, fv_map, depth_map[id(core)]


def _collect_term_vars(term, out):
    if isinstance(term, Var):
        out.add(term.name)
    else:
        for arg in term.args:
            _collect_term_vars(arg, out)


def evaluate(structure, formula: Formula,
             assignment: Optional[Assignment] = None) -> Fraction:
    """The exact truth value of ``formula`` in ``structure`` under the
    assignment (which must cover its free variables)."""
    return Evaluator(structure).value(formula, assignment)


def satisfies(structure, sentence: Formula) -> bool:
    """True iff the sentence evaluates to exactly 1."""
    if free_variables(sentence):
        raise FormulaError("satisfaction is defined for sentences only")
    return evaluate(structure, sentence) == ONE


@dataclass(frozen=True)
class TheoryReport:
    satisfied: bool
    failing: tuple  # of (sentence, value) with value < 1


def check_theory(structure, theory: Theory) -> TheoryReport:
    """Evaluate every sentence; report each one with value < 1."""
    engine = Evaluator(structure)
    failing = []
    for sentence in theory.sentences:
        value = engine.value(sentence)
        if value != ONE:
            failing.append((sentence, value))
    return TheoryReport(satisfied=not failing, failing=tuple(failing))


@dataclass(frozen=True)
class EntailmentResult:
    holds: bool
    structure: object = None
    assignment: tuple = None
    formula: Formula = None
    value: Fraction = None

    def __bool__(self):
        return self.holds


def entails(family: Sequence, theory: Theory, gamma, sigma) -> EntailmentResult:
    """Finite-family semantic entailment between formula sets.

    True iff in every family member satisfying the theory, every tuple
    realizing ``gamma`` (all members exactly 1) also realizes ``sigma``.
    ``gamma`` and ``sigma`` carry ``variables`` and ``formulas`` and must
    share their variable tuple.  A false verdict returns the first
    counterexample in canonical order.
    """
    if tuple(gamma.variables) != tuple(sigma.variables):
        raise FormulaError(
            f"variable tuples differ: {gamma.variables} vs {sigma.variables}")
    names = tuple(gamma.variables)
    for member in family:
        if not check_theory(member, theory).satisfied:
            continue
        engine = Evaluator(member)
        for tup in itertools.product(member.universe, repeat=len(names)):
            env = dict(zip(names, tup))
            if all(engine.value(f, env) == ONE for f in gamma.formulas):
                for f in sigma.formulas:
                    value = engine.value(f, env)
                    if value != ONE:
                        return EntailmentResult(False, member, tup, f, value)
    return EntailmentResult(True)


@dataclass(frozen=True)
class TarskiVaughtReport:
    passed: bool
    failures: tuple  # of (formula, threshold)


def tarski_vaught_check(structure, subset: Iterable[str],
                        formulas: Sequence[Formula],
                        grid: Sequence[Fraction]) -> TarskiVaughtReport:
    """Finite witness test for one-variable formulas.

    For each formula p(x) with ``E x. p`` of value exactly 1 and each
    threshold r in the grid, some element a of the subset must satisfy
    ``p[a] >= r`` exactly.  Failures list every such (formula, r) pair.
    The test is sound but checks only the supplied formulas and grid.
    """
    subset = list(subset)
    for element in subset:
        if not structure.has_element(element):
            raise EvaluationError(f"subset element {element!r} not in universe")
    for r in grid:
        if not (ZERO < r < ONE):
            raise FormulaError(f"grid threshold outside (0,1): {r}")
    engine = Evaluator(structure)
    failures = []
    for phi in formulas:
        fv = free_variables(phi)
        if len(fv) != 1:
            raise FormulaError(
                f"need exactly one free variable, got {fv}: {phi!r}")
        var = fv[0]
        if engine.value(Exists(var, phi)) != ONE:
            continue
        for r in grid:
            witness = Geq(phi, r)
            if not any(engine.value(witness, {var: a}) == ONE for a in subset):
                failures.append((phi, r))
    return TarskiVaughtReport(passed=not failures, failures=tuple(failures))
