"""Types over finite variable tuples, realization and omission,
finite-family principality oracles, canonical model search that omits
given types, and the distance between realized complete-type records.

Everything here is relative to explicit finite data: a family of
structures stands in for the class of all models, and a search space
enumerates structures over value grids in a canonical order.  A negative
verdict from the oracles is genuine (the counterexample is real); a
positive verdict certifies the property over the supplied family only.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .errors import FormulaError, ResolutionError
from .evaluator import EntailmentResult, Evaluator, check_theory, entails
from .rationals import ZERO, ONE, as_fraction
from .structures import Structure
from .syntax import (Atom, Const, Formula, Geq, Leq, Term, Theory, Var,
                     Vocabulary, free_variables, substitute, term_variables)
from .transforms import thicken


@dataclass(frozen=True)
class TypeSet:
    """A named finite set of formulas in fixed free variables x1..xn."""

    name: str
    variables: tuple
    formulas: tuple

    def __post_init__(self):
        variables = tuple(self.variables)
        formulas = tuple(self.formulas)
        if not variables:
            raise FormulaError("a type needs at least one variable")
        if len(set(variables)) != len(variables):
            raise FormulaError("type variables must be distinct")
        allowed = set(variables)
        for phi in formulas:
            extra = set(free_variables(phi)) - allowed
            if extra:
                raise FormulaError(
                    f"type {self.name!r} has formula with stray free "
                    f"variables {sorted(extra)}")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "formulas", formulas)


def realizes(structure: Structure, elements: Sequence[str], typeset: TypeSet,
             engine: Optional[Evaluator] = None) -> bool:
    """True iff every member formula evaluates to exactly 1 at the tuple."""
    elements = tuple(elements)
    if len(elements) != len(typeset.variables):
        raise FormulaError(
            f"tuple length {len(elements)} != {len(typeset.variables)} variables")
    env = dict(zip(typeset.variables, elements))
    engine = engine or Evaluator(structure)
    return all(engine.value(phi, env) == ONE for phi in typeset.formulas)


@dataclass(frozen=True)
class OmitsReport:
    omitted: bool
    witnesses: Mapping[tuple, tuple]  # tuple -> (formula, value < 1)
    realizer: Optional[tuple] = None

    def __bool__(self):
        return self.omitted


def omits(structure: Structure, typeset: TypeSet) -> OmitsReport:
    """True iff no tuple realizes the type; the report carries, per
    tuple, a member formula with value < 1, or else the first realizer."""
    engine = Evaluator(structure)
    n = len(typeset.variables)
    witnesses = {}
    for tup in itertools.product(structure.universe, repeat=n):
        env = dict(zip(typeset.variables, tup))
        violated = None
        for phi in typeset.formulas:
            value = engine.value(phi, env)
            if value != ONE:
                violated = (phi, value)
                break
        if violated is None:
            return OmitsReport(False, {}, realizer=tup)
        witnesses[tup] = violated
    return OmitsReport(True, witnesses)


def _is_omitted(structure: Structure, typeset: TypeSet,
                engine: Evaluator) -> bool:
    n = len(typeset.variables)
    for tup in itertools.product(structure.universe, repeat=n):
        env = dict(zip(typeset.variables, tup))
        if all(engine.value(phi, env) == ONE for phi in typeset.formulas):
            return False
    return True


# ---------------------------------------------------------------------------
# Generators and principality


@dataclass(frozen=True)
class GeneratorReport:
    generates: bool
    satisfied: bool                      # clause (i): T + Phi realizable
    witness: Optional[tuple] = None      # (structure, tuple) for clause (i)
    entailment: Optional[EntailmentResult] = None

    def __bool__(self):
        return self.generates


def generator_check(family: Sequence[Structure], theory: Theory,
                    phi: TypeSet, sigma: TypeSet) -> GeneratorReport:
    """Family-relative generator test: (i) some family model of the
    theory realizes ``phi``, and (ii) within the family, theory models'
    realizations of ``phi`` all realize ``sigma``."""
    if tuple(phi.variables) != tuple(sigma.variables):
        raise FormulaError(
            f"variable tuples differ: {phi.variables} vs {sigma.variables}")
    witness = None
    for member in family:
        if not check_theory(member, theory).satisfied:
            continue
        engine = Evaluator(member)
        for tup in itertools.product(member.universe,
                                     repeat=len(phi.variables)):
            if realizes(member, tup, phi, engine):
                witness = (member, tup)
                break
        if witness:
            break
    if witness is None:
        return GeneratorReport(False, satisfied=False)
    result = entails(family, theory, phi, sigma)
    return GeneratorReport(result.holds, satisfied=True, witness=witness,
                           entailment=result)


@dataclass(frozen=True)
class OmegaCandidate:
    """A single-formula threshold generator through terms: variables
    y1..ym, terms t1..tn over them, a formula phi(y), and a rational
    threshold r in (0,1)."""

    variables: tuple
    terms: tuple
    formula: Formula
    threshold: Fraction

    def __post_init__(self):
        variables = tuple(self.variables)
        terms = tuple(self.terms)
        threshold = as_fraction(self.threshold)
        if not variables:
            raise FormulaError("candidate needs at least one variable")
        if not (ZERO < threshold < ONE):
            raise FormulaError(f"threshold outside (0,1): {threshold}")
        allowed = set(variables)
        for t in terms:
            extra = term_variables(t) - allowed
            if extra:
                raise FormulaError(
                    f"candidate term uses stray variables {sorted(extra)}")
        extra = set(free_variables(self.formula)) - allowed
        if extra:
            raise FormulaError(
                f"candidate formula uses stray variables {sorted(extra)}")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "threshold", threshold)


@dataclass(frozen=True)
class GeneratorCandidate:
    """A plain formula-set generator attempt over the type's variables."""

    formulas: tuple

    def __post_init__(self):
        object.__setattr__(self, "formulas", tuple(self.formulas))


def substituted_type(sigma: TypeSet, variables: Sequence[str],
                     terms: Sequence[Term]) -> TypeSet:
    """``sigma`` with its variables replaced by terms over new variables."""
    if len(terms) != len(sigma.variables):
        raise FormulaError(
            f"{len(terms)} terms for {len(sigma.variables)} variables")
    mapping = dict(zip(sigma.variables, terms))
    return TypeSet(
        name=f"{sigma.name}[terms]",
        variables=tuple(variables),
        formulas=tuple(substitute(phi, mapping) for phi in sigma.formulas))


@dataclass(frozen=True)
class OmegaPrincipalReport:
    accepted: bool
    generator: GeneratorReport           # clause (a)
    threshold: EntailmentResult          # clause (b)

    def __bool__(self):
        return self.accepted


def omega_principal_check(family: Sequence[Structure], theory: Theory,
                          sigma: TypeSet,
                          candidate: OmegaCandidate) -> OmegaPrincipalReport:
    """Check both clauses of the single-formula principality condition:
    (a) the candidate formula generates the term-substituted type, and
    (b) already its >= r weakening entails that type.  Both clauses are
    reported; acceptance needs both."""
    shifted = substituted_type(sigma, candidate.variables, candidate.terms)
    phi_set = TypeSet(name="candidate", variables=candidate.variables,
                      formulas=(candidate.formula,))
    gen = generator_check(family, theory, phi_set, shifted)
    weakened = TypeSet(
        name="candidate_threshold", variables=candidate.variables,
        formulas=(Geq(candidate.formula, candidate.threshold),))
    thr = entails(family, theory, weakened, shifted)
    return OmegaPrincipalReport(gen.generates and thr.holds, gen, thr)


# ---------------------------------------------------------------------------
# Canonical model search


@dataclass(frozen=True)
class SearchSpace:
    """Finite enumeration space: universe sizes 1..max_size, predicate
    values on {0, 1/g, ..., 1}, distances on {1/m, ..., 1}.

    ``seed`` is carried for reproducible corpus tooling but never
    influences the search: enumeration order is canonical so that
    "first model" is well defined.
    """

    vocabulary: Vocabulary
    max_size: int
    truth_denominator: int
    metric_denominator: int
    seed: int = 0

    def __post_init__(self):
        if self.max_size < 1:
            raise FormulaError("max_size must be >= 1")
        if self.truth_denominator < 1 or self.metric_denominator < 1:
            raise FormulaError("grid denominators must be >= 1")


@dataclass(frozen=True)
class SearchOutcome:
    structure: Optional[Structure]
    examined: int

    @property
    def exhausted(self) -> bool:
        return self.structure is None


def _metric_tables(universe, values):
    pairs = list(itertools.combinations(universe, 2))
    if not pairs:
        yield {}
        return
    for combo in itertools.product(values, repeat=len(pairs)):
        table = dict(zip(pairs, combo))

        def dist(a, b):
            if a == b:
                return ZERO
            value = table.get((a, b))
            return value if value is not None else table[(b, a)]

        ok = True
        for a, b, c in itertools.permutations(universe, 3):
            if dist(a, c) > dist(a, b) + dist(b, c):
                ok = False
                break
        if ok:
            yield table


def enumerate_structures(space: SearchSpace):
    """All structures of the space in canonical order: universe size
    ascending; then the metric table, predicate tables (symbols sorted,
    argument tuples lexicographic), operation tables, and constants,
    each in ascending grid order."""
    vocab = space.vocabulary
    truth_values = [Fraction(i, space.truth_denominator)
                    for i in range(space.truth_denominator + 1)]
    metric_values = [Fraction(i, space.metric_denominator)
                     for i in range(1, space.metric_denominator + 1)]
    pred_names = sorted(vocab.predicates)
    op_names = sorted(n for n, a in vocab.operations.items() if a > 0)
    const_names = sorted(n for n, a in vocab.operations.items() if a == 0)

    for size in range(1, space.max_size + 1):
        universe = tuple(f"e{i}" for i in range(1, size + 1))
        pred_slots = []
        for name in pred_names:
            arity = vocab.predicates[name]
            for args in itertools.product(universe, repeat=arity):
                pred_slots.append((name, args))
        op_slots = []
        for name in op_names:
            arity = vocab.operations[name]
            for args in itertools.product(universe, repeat=arity):
                op_slots.append((name, args))

        for metric in _metric_tables(universe, metric_values):
            for pred_choice in itertools.product(truth_values,
                                                 repeat=len(pred_slots)):
                predicates: dict = {name: {} for name in pred_names}
                for (name, args), value in zip(pred_slots, pred_choice):
                    predicates[name][args] = value
                for op_choice in itertools.product(universe,
                                                   repeat=len(op_slots)):
                    operations: dict = {name: {} for name in op_names}
                    for (name, args), out in zip(op_slots, op_choice):
                        operations[name][args] = out
                    for const_choice in itertools.product(
                            universe, repeat=len(const_names)):
                        constants = dict(zip(const_names, const_choice))
                        yield Structure(universe, metric, predicates,
                                        operations, constants)


def _constants_on_grid(theory: Theory, denominator: int) -> None:
    def scan(node):
        if isinstance(node, Const):
            if (node.value * denominator).denominator != 1:
                raise ResolutionError(
                    f"constant {node.value} is not on the 1/{denominator} grid")
        elif isinstance(node, (Leq, Geq)):
            if (node.bound * denominator).denominator != 1:
                raise ResolutionError(
                    f"bound {node.bound} is not on the 1/{denominator} grid")
            scan(node.body)
        elif hasattr(node, "lhs"):
            scan(node.lhs)
            scan(node.rhs)
        elif hasattr(node, "body"):
            scan(node.body)

    for sentence in theory.sentences:
        scan(sentence)


def search_model(space: SearchSpace, theory: Theory,
                 types: Sequence[TypeSet], workers: int = 1) -> SearchOutcome:
    """Deterministically scan the space for the canonically first
    structure satisfying the theory and omitting every listed type.

    The examined count is the candidate's 1-based canonical index (or
    the total count when exhausted) and is independent of ``workers``;
    worker parallelism only partitions the scan into blocks whose
    results are reduced back in canonical order.
    """
    _constants_on_grid(theory, space.truth_denominator)

    def accepts(candidate: Structure) -> bool:
        engine = Evaluator(candidate)
        if any(engine.value(s) != ONE for s in theory.sentences):
            return False
        return all(_is_omitted(candidate, t, engine) for t in types)

    generator = enumerate_structures(space)
    examined = 0
    if workers <= 1:
        for candidate in generator:
            examined += 1
            if accepts(candidate):
                return SearchOutcome(candidate, examined)
        return SearchOutcome(None, examined)

    block_size = max(64, 16 * workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        while True:
            block = list(itertools.islice(generator, block_size))
            if not block:
                return SearchOutcome(None, examined)
            verdicts = list(pool.map(accepts, block))
            for candidate, ok in zip(block, verdicts):
                examined += 1
                if ok:
                    return SearchOutcome(candidate, examined)


# ---------------------------------------------------------------------------
# Complete-type records and their distance


@dataclass(frozen=True)
class CompleteTypeRecord:
    """The complete description of a tuple in a structure, compared
    against other records through a finite formula corpus."""

    structure: Structure
    elements: tuple

    def __post_init__(self):
        elements = tuple(self.elements)
        for e in elements:
            if not self.structure.has_element(e):
                raise FormulaError(f"record element {e!r} not in the universe")
        object.__setattr__(self, "elements", elements)

    def profile(self, corpus: TypeSet,
                engine: Optional[Evaluator] = None) -> tuple:
        if len(corpus.variables) != len(self.elements):
            raise FormulaError(
                f"corpus has {len(corpus.variables)} variables, record has "
                f"{len(self.elements)} elements")
        env = dict(zip(corpus.variables, self.elements))
        engine = engine or Evaluator(self.structure)
        return tuple(engine.value(phi, env) for phi in corpus.formulas)


def default_record_corpus(vocabulary: Vocabulary, n: int,
                          denominator: int = 4) -> TypeSet:
    """Atomic formulas over the record variables together with their
    threshold closures on the 1/denominator grid."""
    variables = tuple(f"v{i}" for i in range(1, n + 1))
    atoms = []
    for i, j in itertools.combinations(range(n), 2):
        atoms.append(Atom("d", (Var(variables[i]), Var(variables[j]))))
    for name in sorted(vocabulary.predicates):
        arity = vocabulary.predicates[name]
        for args in itertools.product(variables, repeat=arity):
            atoms.append(Atom(name, tuple(Var(v) for v in args)))
    grid = [Fraction(i, denominator) for i in range(denominator + 1)]
    formulas = list(atoms)
    for atom in atoms:
        for r in grid:
            formulas.append(Leq(atom, r))
            formulas.append(Geq(atom, r))
    return TypeSet("record_corpus", variables, tuple(formulas))


@dataclass(frozen=True)
class TypeDistance:
    """``connected`` is False when no family model of the theory realizes
    both records; the value then falls back to the diameter bound 1."""

    value: Fraction
    connected: bool


def type_distance(family: Sequence[Structure], theory: Theory,
                  p: CompleteTypeRecord, q: CompleteTypeRecord,
                  corpus: Optional[TypeSet] = None) -> TypeDistance:
    """Minimum over family models of the theory, and over tuples
    realizing the two records there, of the maximal coordinate distance."""
    n = len(p.elements)
    if len(q.elements) != n:
        raise FormulaError("records have different tuple lengths")
    if corpus is None:
        corpus = default_record_corpus(p.structure.vocabulary(), n)
    p_profile = p.profile(corpus)
    q_profile = q.profile(corpus)
    best: Optional[Fraction] = None
    for member in family:
        if not check_theory(member, theory).satisfied:
            continue
        engine = Evaluator(member)
        profiles = {}
        for tup in itertools.product(member.universe, repeat=n):
            profiles[tup] = CompleteTypeRecord(member, tup).profile(
                corpus, engine)
        p_tuples = [t for t, prof in profiles.items() if prof == p_profile]
        q_tuples = [t for t, prof in profiles.items() if prof == q_profile]
        for a in p_tuples:
            for b in q_tuples:
                gap = max(member.metric[(x, y)] for x, y in zip(a, b))
                if best is None or gap < best:
                    best = gap
    if best is None:
        return TypeDistance(ONE, connected=False)
    return TypeDistance(best, connected=True)


# ---------------------------------------------------------------------------
# Metric principality


@dataclass(frozen=True)
class DeltaVerdict:
    delta: Fraction
    accepted: bool
    detail: object  # GeneratorReport or OmegaPrincipalReport


@dataclass(frozen=True)
class MetricPrincipalReport:
    accepted: bool
    verdicts: tuple

    def __bool__(self):
        return self.accepted


def metrically_principal_check(family: Sequence[Structure], theory: Theory,
                               sigma: TypeSet, deltas: Sequence[Fraction],
                               candidates: Mapping,
                               max_conjunction: Optional[int] = None
                               ) -> MetricPrincipalReport:
    """For each listed delta, thicken the type and test the supplied
    candidate: a ``GeneratorCandidate`` goes through the formula-set
    generator clause, an ``OmegaCandidate`` through the single-formula
    threshold clause.  The report conjoins the per-delta verdicts."""
    verdicts = []
    for delta in deltas:
        delta = as_fraction(delta)
        candidate = candidates.get(delta)
        if candidate is None:
            raise FormulaError(f"no candidate supplied for delta = {delta}")
        thick = thicken(sigma, delta, max_conjunction)
        if isinstance(candidate, GeneratorCandidate):
            phi = TypeSet(name=f"candidate^{delta}", variables=sigma.variables,
                          formulas=candidate.formulas)
            report = generator_check(family, theory, phi, thick)
            verdicts.append(DeltaVerdict(delta, report.generates, report))
        elif isinstance(candidate, OmegaCandidate):
            report = omega_principal_check(family, theory, thick, candidate)
            verdicts.append(DeltaVerdict(delta, report.accepted, report))
        else:
            raise FormulaError(
                f"unknown candidate kind: {type(candidate).__name__}")
    return MetricPrincipalReport(all(v.accepted for v in verdicts),
                                 tuple(verdicts))
