"""Vocabularies, signatures, and the term/formula language.

Formula grammar (UTF-8 text):

    formula   := implies
    implies   := compare ('->' implies)?            right associative
    compare   := or ( ('<=' | '>=') RATIONAL )*
    or        := and ( '\\/' and )*
    and       := unary ( '/\\' unary )*
    unary     := '~' unary | ('E'|'A') VAR '.' implies | atom
    atom      := '(' implies ')' | RATIONAL | 'd' '(' term ',' term ')'
               | PRED '(' term {',' term} ')' | PRED          (0-ary)
    term      := VAR | CONST | OP '(' term {',' term} ')'

Rational literals are ``p/q``, finite decimals, or integers, and must lie
in [0,1].  ``E``/``A`` quantify; ``~``, ``\\/``, ``/\\``, ``<=``, ``>=``
are the derived connectives; the metric atom is ``d(t1,t2)``.

Vocabulary files use one declaration per line::

    pred P 1
    op f 2
    const c
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import FormulaError, ParseError, VocabularyError
from .rationals import ZERO, ONE, as_fraction, in_unit_interval, parse_rational

RESERVED_NAMES = frozenset({"d", "E", "A"})
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _check_symbol_name(name: str) -> None:
    if not isinstance(name, str) or not _NAME_RE.match(name):
        raise VocabularyError(f"bad symbol name: {name!r}")
    if name in RESERVED_NAMES:
        raise VocabularyError(f"symbol name {name!r} is reserved")


def _check_variable_name(name: str) -> None:
    if not isinstance(name, str) or not _NAME_RE.match(name):
        raise FormulaError(f"bad variable name: {name!r}")
    if name in RESERVED_NAMES:
        raise FormulaError(f"variable name {name!r} is reserved")


# ---------------------------------------------------------------------------
# Vocabularies and signatures


@dataclass(frozen=True)
class Vocabulary:
    """Predicate and operation symbols with arities.

    The binary metric symbol ``d`` is implicit and never declared.
    Arity-0 operations are constants.
    """

    predicates: Mapping[str, int]
    operations: Mapping[str, int]

    def __post_init__(self):
        preds = dict(self.predicates)
        ops = dict(self.operations)
        for name, arity in list(preds.items()) + list(ops.items()):
            _check_symbol_name(name)
            if not isinstance(arity, int) or arity < 0:
                raise VocabularyError(f"bad arity for {name!r}: {arity!r}")
        overlap = set(preds) & set(ops)
        if overlap:
            raise VocabularyError(
                f"predicate/operation name clash: {sorted(overlap)}")
        object.__setattr__(self, "predicates", preds)
        object.__setattr__(self, "operations", ops)

    def constants(self) -> list[str]:
        return sorted(n for n, a in self.operations.items() if a == 0)

    def symbols(self) -> set[str]:
        return set(self.predicates) | set(self.operations)

    def contains(self, other: "Vocabulary") -> bool:
        """True when every symbol of ``other`` is here with the same arity."""
        return all(self.predicates.get(n) == a for n, a in other.predicates.items()) \
            and all(self.operations.get(n) == a for n, a in other.operations.items())


@dataclass(frozen=True)
class Signature:
    """A vocabulary plus sampled uniform-continuity data per symbol.

    ``moduli`` maps each non-constant symbol to a finite list of
    ``(epsilon, delta)`` pairs, both in (0,1): whenever two argument
    tuples are within ``delta`` in every coordinate, the symbol's values
    must be within ``epsilon``.  The tables are samples, not closed-form
    moduli; an empty list imposes no constraint.
    """

    vocabulary: Vocabulary
    moduli: Mapping[str, tuple]

    def __post_init__(self):
        vocab = self.vocabulary
        normalized: dict[str, tuple] = {}
        eligible = set(vocab.predicates) | {
            n for n, a in vocab.operations.items() if a > 0}
        for name, pairs in dict(self.moduli).items():
            if name not in eligible:
                raise VocabularyError(
                    f"moduli given for unknown or constant symbol {name!r}")
            clean = []
            for eps, delta in pairs:
                eps, delta = as_fraction(eps), as_fraction(delta)
                if not (ZERO < eps < ONE and ZERO < delta < ONE):
                    raise VocabularyError(
                        f"modulus pair for {name!r} outside (0,1): ({eps}, {delta})")
                clean.append((eps, delta))
            normalized[name] = tuple(clean)
        for name in eligible:
            normalized.setdefault(name, ())
        object.__setattr__(self, "moduli", normalized)


# ---------------------------------------------------------------------------
# Terms


class Term:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str


@dataclass(frozen=True, slots=True)
class Func(Term):
    """Operation application; a constant symbol is ``Func(name)``."""

    name: str
    args: tuple = ()


def term_variables(term: Term) -> set[str]:
    if isinstance(term, Var):
        return {term.name}
    out: set[str] = set()
    for arg in term.args:
        out |= term_variables(arg)
    return out


# ---------------------------------------------------------------------------
# Formulas


class Formula:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    """Predicate application; the metric atom uses the reserved name ``d``."""

    pred: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True, slots=True)
class Const(Formula):
    value: Fraction

    def __post_init__(self):
        value = as_fraction(self.value)
        if not in_unit_interval(value):
            raise FormulaError(f"constant outside [0,1]: {value}")
        object.__setattr__(self, "value", value)


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, slots=True)
class Exists(Formula):
    var: str
    body: Formula


# Derived node kinds.  Parsed trees may contain them; ``expand_abbreviations``
# rewrites them into the four core kinds above.


@dataclass(frozen=True, slots=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, slots=True)
class Leq(Formula):
    body: Formula
    bound: Fraction

    def __post_init__(self):
        bound = as_fraction(self.bound)
        if not in_unit_interval(bound):
            raise FormulaError(f"bound outside [0,1]: {bound}")
        object.__setattr__(self, "bound", bound)


@dataclass(frozen=True, slots=True)
class Geq(Formula):
    body: Formula
    bound: Fraction

    def __post_init__(self):
        bound = as_fraction(self.bound)
        if not in_unit_interval(bound):
            raise FormulaError(f"bound outside [0,1]: {bound}")
        object.__setattr__(self, "bound", bound)


@dataclass(frozen=True, slots=True)
class Forall(Formula):
    var: str
    body: Formula


CORE_KINDS = (Atom, Const, Implies, Exists)


@dataclass(frozen=True)
class Theory:
    """A named, ordered list of sentences (formulas with no free variables)."""

    name: str
    sentences: tuple

    def __post_init__(self):
        sentences = tuple(self.sentences)
        for phi in sentences:
            fv = free_variables(phi)
            if fv:
                raise FormulaError(
                    f"theory {self.name!r} contains a non-sentence "
                    f"(free variables {fv}): {render(phi)}")
        object.__setattr__(self, "sentences", sentences)


# ---------------------------------------------------------------------------
# Structural walks


def free_variables(formula: Formula) -> tuple:
    """Free variables in order of first occurrence (left-to-right)."""
    seen: dict[str, None] = {}

    def walk(node, bound):
        if isinstance(node, Atom):
            for arg in node.args:
                for v in _term_vars_ordered(arg):
                    if v not in bound and v not in seen:
                        seen[v] = None
        elif isinstance(node, Const):
            pass
        elif isinstance(node, (Implies, Or, And)):
            walk(node.lhs, bound)
            walk(node.rhs, bound)
        elif isinstance(node, (Not, Leq, Geq)):
            walk(node.body, bound)
        elif isinstance(node, (Exists, Forall)):
            walk(node.body, bound | {node.var})
        else:
            raise FormulaError(f"not a formula node: {node!r}")

    walk(formula, frozenset())
    return tuple(seen)


def _term_vars_ordered(term):
    if isinstance(term, Var):
        yield term.name
    else:
        for arg in term.args:
            yield from _term_vars_ordered(arg)


def all_variables(formula: Formula) -> set[str]:
    """Every variable name occurring in the formula, bound or free."""
    out: set[str] = set()

    def walk(node):
        if isinstance(node, Atom):
            for arg in node.args:
                out.update(term_variables(arg))
        elif isinstance(node, Const):
            pass
        elif isinstance(node, (Implies, Or, And)):
            walk(node.lhs)
            walk(node.rhs)
        elif isinstance(node, (Not, Leq, Geq)):
            walk(node.body)
        elif isinstance(node, (Exists, Forall)):
            out.add(node.var)
            walk(node.body)

    walk(formula)
    return out


def formula_symbols(formula: Formula) -> set[str]:
    """Predicate and operation names occurring in the formula (``d`` excluded)."""
    out: set[str] = set()

    def walk_term(term):
        if isinstance(term, Func):
            out.add(term.name)
            for arg in term.args:
                walk_term(arg)

    def walk(node):
        if isinstance(node, Atom):
            if node.pred != "d":
                out.add(node.pred)
            for arg in node.args:
                walk_term(arg)
        elif isinstance(node, (Implies, Or, And)):
            walk(node.lhs)
            walk(node.rhs)
        elif isinstance(node, (Not, Leq, Geq)):
            walk(node.body)
        elif isinstance(node, (Exists, Forall)):
            walk(node.body)

    walk(formula)
    return out


def formula_depth(formula: Formula) -> int:
    if isinstance(formula, (Atom, Const)):
        return 0
    if isinstance(formula, (Implies, Or, And)):
        return 1 + max(formula_depth(formula.lhs), formula_depth(formula.rhs))
    if isinstance(formula, (Not, Leq, Geq)):
        return 1 + formula_depth(formula.body)
    return 1 + formula_depth(formula.body)


def is_core(formula: Formula) -> bool:
    """True when no derived node occurs anywhere in the tree."""
    if isinstance(formula, (Atom, Const)):
        return True
    if isinstance(formula, Implies):
        return is_core(formula.lhs) and is_core(formula.rhs)
    if isinstance(formula, Exists):
        return is_core(formula.body)
    return False


def expand_abbreviations(formula: Formula) -> Formula:
    """Rewrite derived nodes into the core connectives.

    Not(p)      -> p -> 0
    Or(p,q)     -> (p -> q) -> q
    And(p,q)    -> ~(~p \\/ ~q)
    Leq(p,r)    -> p -> r
    Geq(p,r)    -> r -> p
    Forall(x,p) -> ~E x. ~p

    Idempotent; subtrees are reused unchanged, and the expansions of
    Or/And deliberately share their duplicated operand so that
    evaluation can memoize it.
    """
    zero = Const(ZERO)

    def expand(node):
        if isinstance(node, (Atom, Const)):
            return node
        if isinstance(node, Implies):
            lhs, rhs = expand(node.lhs), expand(node.rhs)
            if lhs is node.lhs and rhs is node.rhs:
                return node
            return Implies(lhs, rhs)
        if isinstance(node, Exists):
            body = expand(node.body)
            return node if body is node.body else Exists(node.var, body)
        if isinstance(node, Not):
            return Implies(expand(node.body), zero)
        if isinstance(node, Or):
            lhs, rhs = expand(node.lhs), expand(node.rhs)
            return Implies(Implies(lhs, rhs), rhs)
        if isinstance(node, And):
            nl = Implies(expand(node.lhs), zero)
            nr = Implies(expand(node.rhs), zero)
            return Implies(Implies(Implies(nl, nr), nr), zero)
        if isinstance(node, Leq):
            return Implies(expand(node.body), Const(node.bound))
        if isinstance(node, Geq):
            return Implies(Const(node.bound), expand(node.body))
        if isinstance(node, Forall):
            inner = Implies(expand(node.body), zero)
            return Implies(Exists(node.var, inner), zero)
        raise FormulaError(f"not a formula node: {node!r}")

    return expand(formula)


def fresh_variable(base: str, used) -> str:
    """A variable name not in ``used``, derived from ``base``."""
    if base not in used and base not in RESERVED_NAMES:
        return base
    i = 1
    while f"{base}{i}" in used or f"{base}{i}" in RESERVED_NAMES:
        i += 1
    return f"{base}{i}"


def substitute(formula: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Replace free variables by terms, renaming binders to avoid capture."""
    mapping = {k: v for k, v in mapping.items()
               if not (isinstance(v, Var) and v.name == k)}
    if not mapping:
        return formula

    def sub_term(term, m):
        if isinstance(term, Var):
            return m.get(term.name, term)
        return Func(term.name, tuple(sub_term(a, m) for a in term.args))

    def go(node, m):
        if not m:
            return node
        if isinstance(node, Atom):
            return Atom(node.pred, tuple(sub_term(a, m) for a in node.args))
        if isinstance(node, Const):
            return node
        if isinstance(node, (Implies, Or, And)):
            return type(node)(go(node.lhs, m), go(node.rhs, m))
        if isinstance(node, Not):
            return Not(go(node.body, m))
        if isinstance(node, Leq):
            return Leq(go(node.body, m), node.bound)
        if isinstance(node, Geq):
            return Geq(go(node.body, m), node.bound)
        if isinstance(node, (Exists, Forall)):
            inner = {k: v for k, v in m.items() if k != node.var}
            value_vars = set()
            for t in inner.values():
                value_vars |= term_variables(t)
            if node.var in value_vars:
                used = all_variables(node.body) | value_vars | set(inner)
                new_var = fresh_variable(node.var, used)
                inner[node.var] = Var(new_var)
                return type(node)(new_var, go(node.body, inner))
            return type(node)(node.var, go(node.body, inner))
        raise FormulaError(f"not a formula node: {node!r}")

    return go(formula, dict(mapping))


def rename_symbols(formula: Formula, mapping: Mapping[str, str]) -> Formula:
    """Apply a symbol renaming to every atom and term (``d`` is never renamed)."""
    if "d" in mapping:
        raise VocabularyError("the metric symbol d cannot be renamed")

    def ren_term(term):
        if isinstance(term, Var):
            return term
        return Func(mapping.get(term.name, term.name),
                    tuple(ren_term(a) for a in term.args))

    def go(node):
        if isinstance(node, Atom):
            pred = node.pred if node.pred == "d" else mapping.get(node.pred, node.pred)
            return Atom(pred, tuple(ren_term(a) for a in node.args))
        if isinstance(node, Const):
            return node
        if isinstance(node, (Implies, Or, And)):
            return type(node)(go(node.lhs), go(node.rhs))
        if isinstance(node, Not):
            return Not(go(node.body))
        if isinstance(node, Leq):
            return Leq(go(node.body), node.bound)
        if isinstance(node, Geq):
            return Geq(go(node.body), node.bound)
        if isinstance(node, (Exists, Forall)):
            return type(node)(node.var, go(node.body))
        raise FormulaError(f"not a formula node: {node!r}")

    return go(formula)


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<rational>\d+/\d+|\d+\.\d+|\d+)
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<arrow>->)
      | (?P<leq><=)
      | (?P<geq>>=)
      | (?P<or>\\/)
      | (?P<and>/\\)
      | (?P<not>~)
      | (?P<lpar>\()
      | (?P<rpar>\))
      | (?P<comma>,)
      | (?P<dot>\.)
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = match.lastgroup
        if kind != "ws":
            tokens.append((kind, match.group(), pos))
        pos = match.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, vocabulary: Vocabulary):
        self.text = text
        self.vocab = vocabulary
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, offset=0):
        j = min(self.i + offset, len(self.tokens) - 1)
        return self.tokens[j]

    def next(self):
        tok = self.tokens[self.i]
        if tok[0] != "eof":
            self.i += 1
        return tok

    def expect(self, kind, what):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {what}, found {tok[1]!r}", tok[2])
        return tok

    def fail(self, message):
        tok = self.peek()
        raise ParseError(message, tok[2])

    # grammar levels -------------------------------------------------------

    def formula(self):
        out = self.implies()
        tok = self.peek()
        if tok[0] != "eof":
            raise ParseError(f"trailing input {tok[1]!r}", tok[2])
        return out

    def implies(self):
        lhs = self.compare()
        if self.peek()[0] == "arrow":
            self.next()
            return Implies(lhs, self.implies())
        return lhs

    def compare(self):
        out = self.or_level()
        while self.peek()[0] in ("leq", "geq"):
            kind, _, _ = self.next()
            bound = self.rational_literal()
            out = Leq(out, bound) if kind == "leq" else Geq(out, bound)
        return out

    def or_level(self):
        out = self.and_level()
        while self.peek()[0] == "or":
            self.next()
            out = Or(out, self.and_level())
        return out

    def and_level(self):
        out = self.unary()
        while self.peek()[0] == "and":
            self.next()
            out = And(out, self.unary())
        return out

    def unary(self):
        tok = self.peek()
        if tok[0] == "not":
            self.next()
            return Not(self.unary())
        if tok[0] == "name" and tok[1] in ("E", "A") and self.peek(1)[0] == "name":
            self.next()
            var_tok = self.expect("name", "a variable")
            var = var_tok[1]
            if var in RESERVED_NAMES:
                raise ParseError(f"{var!r} cannot be a variable", var_tok[2])
            if var in self.vocab.symbols():
                raise ParseError(
                    f"bound variable {var!r} clashes with a vocabulary symbol",
                    var_tok[2])
            self.expect("dot", "'.' after the bound variable")
            body = self.implies()
            return Exists(var, body) if tok[1] == "E" else Forall(var, body)
        return self.atom()

    def atom(self):
        tok = self.next()
        kind, text, pos = tok
        if kind == "lpar":
            out = self.implies()
            self.expect("rpar", "')'")
            return out
        if kind == "rational":
            value = parse_rational(text)
            if not in_unit_interval(value):
                raise ParseError(f"constant {text} outside [0,1]", pos)
            return Const(value)
        if kind == "name":
            if text == "d":
                self.expect("lpar", "'(' after d")
                t1 = self.term()
                self.expect("comma", "',' between metric arguments")
                t2 = self.term()
                self.expect("rpar", "')'")
                return Atom("d", (t1, t2))
            if text in self.vocab.predicates:
                arity = self.vocab.predicates[text]
                args = self.argument_list(text, arity, pos)
                return Atom(text, args)
            if text in self.vocab.operations:
                raise ParseError(
                    f"operation symbol {text!r} cannot head a formula", pos)
            raise ParseError(f"unknown predicate {text!r}", pos)
        raise ParseError(f"expected a formula, found {text!r}", pos)

    def argument_list(self, name, arity, pos):
        if self.peek()[0] != "lpar":
            if arity == 0:
                return ()
            raise ParseError(
                f"{name!r} needs {arity} argument(s)", self.peek()[2])
        self.next()
        if arity == 0:
            self.expect("rpar", "')'")
            return ()
        args = [self.term()]
        while self.peek()[0] == "comma":
            self.next()
            args.append(self.term())
        end = self.expect("rpar", "')'")
        if len(args) != arity:
            raise ParseError(
                f"{name!r} expects {arity} argument(s), got {len(args)}", pos)
        return tuple(args)

    def term(self):
        tok = self.next()
        kind, text, pos = tok
        if kind != "name":
            raise ParseError(f"expected a term, found {text!r}", pos)
        if text in RESERVED_NAMES:
            raise ParseError(f"{text!r} cannot occur in a term", pos)
        if text in self.vocab.operations:
            arity = self.vocab.operations[text]
            if arity == 0:
                return Func(text)
            self.expect("lpar", f"'(' after operation {text!r}")
            args = [self.term()]
            while self.peek()[0] == "comma":
                self.next()
                args.append(self.term())
            self.expect("rpar", "')'")
            if len(args) != arity:
                raise ParseError(
                    f"{text!r} expects {arity} argument(s), got {len(args)}", pos)
            return Func(text, tuple(args))
        if text in self.vocab.predicates:
            raise ParseError(
                f"predicate {text!r} cannot occur inside a term", pos)
        return Var(text)

    def rational_literal(self):
        tok = self.expect("rational", "a rational literal")
        value = parse_rational(tok[1])
        if not in_unit_interval(value):
            raise ParseError(f"bound {tok[1]} outside [0,1]", tok[2])
        return value


def parse_formula(text: str, vocabulary: Vocabulary) -> Formula:
    """Parse a formula over the given vocabulary; raises ParseError."""
    return _Parser(text, vocabulary).formula()


def parse_term(text: str, vocabulary: Vocabulary) -> Term:
    parser = _Parser(text, vocabulary)
    out = parser.term()
    tok = parser.peek()
    if tok[0] != "eof":
        raise ParseError(f"trailing input {tok[1]!r}", tok[2])
    return out


# ---------------------------------------------------------------------------
# Rendering

_PREC_QUANT = 0
_PREC_IMPLIES = 1
_PREC_COMPARE = 2
_PREC_OR = 3
_PREC_AND = 4
_PREC_UNARY = 5
_PREC_ATOM = 6


def render_term(term: Term) -> str:
    if isinstance(term, Var):
        return term.name
    if not term.args:
        return term.name
    return f"{term.name}({','.join(render_term(a) for a in term.args)})"


def render(formula: Formula) -> str:
    """Text form that reparses to a structurally equal tree."""

    def go(node, min_prec):
        if isinstance(node, Atom):
            text, prec = f"{node.pred}({','.join(render_term(a) for a in node.args)})" \
                if node.args else node.pred, _PREC_ATOM
        elif isinstance(node, Const):
            text, prec = str(node.value), _PREC_ATOM
        elif isinstance(node, Implies):
            text = f"{go(node.lhs, _PREC_COMPARE)} -> {go(node.rhs, _PREC_IMPLIES)}"
            prec = _PREC_IMPLIES
        elif isinstance(node, Leq):
            text = f"{go(node.body, _PREC_OR)} <= {node.bound}"
            prec = _PREC_COMPARE
        elif isinstance(node, Geq):
            text = f"{go(node.body, _PREC_OR)} >= {node.bound}"
            prec = _PREC_COMPARE
        elif isinstance(node, Or):
            text = f"{go(node.lhs, _PREC_OR)} \\/ {go(node.rhs, _PREC_AND)}"
            prec = _PREC_OR
        elif isinstance(node, And):
            text = f"{go(node.lhs, _PREC_AND)} /\\ {go(node.rhs, _PREC_UNARY)}"
            prec = _PREC_AND
        elif isinstance(node, Not):
            text, prec = f"~{go(node.body, _PREC_UNARY)}", _PREC_UNARY
        elif isinstance(node, Exists):
            text, prec = f"E {node.var}. {go(node.body, _PREC_QUANT)}", _PREC_QUANT
        elif isinstance(node, Forall):
            text, prec = f"A {node.var}. {go(node.body, _PREC_QUANT)}", _PREC_QUANT
        else:
            raise FormulaError(f"not a formula node: {node!r}")
        if prec < min_prec:
            return f"({text})"
        return text

    return go(formula, _PREC_QUANT)


# ---------------------------------------------------------------------------
# Vocabulary text format


def parse_vocabulary(text: str) -> Vocabulary:
    """One declaration per line: ``pred P 1``, ``op f 2``, ``const c``."""
    predicates: dict[str, int] = {}
    operations: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "pred" and len(parts) == 3:
                predicates[parts[1]] = int(parts[2])
            elif parts[0] == "op" and len(parts) == 3:
                operations[parts[1]] = int(parts[2])
            elif parts[0] == "const" and len(parts) == 2:
                operations[parts[1]] = 0
            else:
                raise ValueError
        except ValueError:
            raise ParseError(
                f"bad vocabulary declaration on line {lineno}: {raw!r}")
    return Vocabulary(predicates, operations)


def render_vocabulary(vocabulary: Vocabulary) -> str:
    lines = []
    for name in sorted(vocabulary.predicates):
        lines.append(f"pred {name} {vocabulary.predicates[name]}")
    for name in sorted(vocabulary.operations):
        arity = vocabulary.operations[name]
        lines.append(f"const {name}" if arity == 0 else f"op {name} {arity}")
    return "\n".join(lines) + "\n"
