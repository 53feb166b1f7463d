"""The connective algebra generated by implication, rational constants,
and projections, with certified approximation of piecewise-linear targets.

Core facts used throughout:

  * ``x (+) y = (x -> 0) -> y`` evaluates to ``min(x + y, 1)``;
  * ``(u -> v) -> v`` evaluates to ``max(u, v)`` exactly, which both the
    lattice builders and the Lipschitz analysis exploit;
  * halving is approximated by the lattice term
    ``OR_{i=1..n} ( i/n  AND  ~(x -> i/n) )``, whose sup-distance from
    ``x/2`` is at most ``1/n`` with all breakpoints on the ``1/n`` grid.

Terms are built as DAGs: duplicated operands are shared objects, and all
traversals here are iterative and memoized on node identity, so chains of
lattice operations stay linear to evaluate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Optional, Sequence

from .errors import FormulaError
from .rationals import ZERO, ONE, as_fraction, in_unit_interval, is_dyadic
from . import syntax


class ConnectiveTerm:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Proj(ConnectiveTerm):
    """1-based projection onto coordinate ``index`` of ``arity`` inputs."""

    index: int
    arity: int

    def __post_init__(self):
        if not (isinstance(self.index, int) and isinstance(self.arity, int)
                and 1 <= self.index <= self.arity):
            raise FormulaError(
                f"bad projection: index={self.index} arity={self.arity}")


@dataclass(frozen=True, slots=True)
class CConst(ConnectiveTerm):
    value: Fraction

    def __post_init__(self):
        value = as_fraction(self.value)
        if not in_unit_interval(value):
            raise FormulaError(f"connective constant outside [0,1]: {value}")
        object.__setattr__(self, "value", value)


@dataclass(frozen=True, slots=True)
class CImplies(ConnectiveTerm):
    lhs: ConnectiveTerm
    rhs: ConnectiveTerm


_CZERO = CConst(ZERO)


def c_not(t: ConnectiveTerm) -> ConnectiveTerm:
    return CImplies(t, _CZERO)


def c_or(s: ConnectiveTerm, t: ConnectiveTerm) -> ConnectiveTerm:
    # (s -> t) -> t == max(s, t); t is shared so evaluation stays linear.
    return CImplies(CImplies(s, t), t)


def c_and(s: ConnectiveTerm, t: ConnectiveTerm) -> ConnectiveTerm:
    return c_not(c_or(c_not(s), c_not(t)))


def c_oplus(s: ConnectiveTerm, t: ConnectiveTerm) -> ConnectiveTerm:
    """Truncated sum: min(s + t, 1), definable as (~s) -> t."""
    return CImplies(c_not(s), t)


def c_ominus(t: ConnectiveTerm, r: Fraction) -> ConnectiveTerm:
    """Truncated subtraction of a constant: max(t - r, 0)."""
    return c_not(c_oplus(c_not(t), CConst(r)))


def _walk_postorder(term: ConnectiveTerm):
    """Yield each distinct node once, children before parents."""
    seen = set()
    out = []
    stack = [(term, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            out.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        if isinstance(node, CImplies):
            stack.append((node.rhs, False))
            stack.append((node.lhs, False))
    return out


def term_arity(term: ConnectiveTerm) -> Optional[int]:
    """The shared arity of all projections, or None for constant terms."""
    arities = {node.arity for node in _walk_postorder(term)
               if isinstance(node, Proj)}
    if len(arities) > 1:
        raise FormulaError(f"mixed projection arities: {sorted(arities)}")
    return arities.pop() if arities else None


def term_constants(term: ConnectiveTerm) -> list:
    return [node.value for node in _walk_postorder(term)
            if isinstance(node, CConst)]


def dag_size(term: ConnectiveTerm) -> int:
    return len(_walk_postorder(term))


def eval_term(term: ConnectiveTerm, point: Sequence[Fraction]) -> Fraction:
    """Exact structural evaluation at a point of [0,1]^arity."""
    point = tuple(as_fraction(x) for x in point)
    for x in point:
        if not in_unit_interval(x):
            raise FormulaError(f"evaluation point outside [0,1]: {x}")
    declared = term_arity(term)
    if declared is not None and declared != len(point):
        raise FormulaError(
            f"term has arity {declared}, point has length {len(point)}")
    values: dict[int, Fraction] = {}
    for node in _walk_postorder(term):
        if isinstance(node, Proj):
            values[id(node)] = point[node.index - 1]
        elif isinstance(node, CConst):
            values[id(node)] = node.value
        else:
            v = ONE - values[id(node.lhs)] + values[id(node.rhs)]
            values[id(node)] = v if v < ONE else ONE
    return values[id(term)]


def _compile_scaled(term: ConnectiveTerm, denominator: int) -> list:
    """Flatten the DAG into (kind, a, b) slots over ``denominator``-scaled
    integers: kind 0 loads a coordinate, 1 a pre-scaled constant, 2 an
    implication of two earlier slots.  Exact whenever every constant and
    coordinate is a multiple of ``1/denominator``; the Lukasiewicz
    operations preserve that grid."""
    slots: dict[int, int] = {}
    program = []
    for node in _walk_postorder(term):
        if isinstance(node, Proj):
            program.append((0, node.index - 1, 0))
        elif isinstance(node, CConst):
            program.append((1, int(node.value * denominator), 0))
        else:
            program.append((2, slots[id(node.lhs)], slots[id(node.rhs)]))
        slots[id(node)] = len(program) - 1
    return program


def _run_scaled(program: list, point_ints: Sequence[int],
                denominator: int) -> int:
    values = [0] * len(program)
    for i, (kind, a, b) in enumerate(program):
        if kind == 2:
            v = denominator - values[a] + values[b]
            values[i] = v if v < denominator else denominator
        elif kind == 0:
            values[i] = point_ints[a]
        else:
            values[i] = a
    return values[-1]


# ---------------------------------------------------------------------------
# Syntactic Lipschitz bounds


def lipschitz_bounds(term: ConnectiveTerm, arity: Optional[int] = None) -> tuple:
    """Per-argument Lipschitz bounds read off the AST.

    The implication is 1-Lipschitz in each argument, so bounds add
    through a generic implication node.  A node of the exact shape
    ``(u -> v) -> v`` evaluates to ``max(u, v)`` and gets the tighter
    coordinatewise maximum, which keeps lattice combinations from
    inflating the bound.  The result is sound in every case.
    """
    if arity is None:
        arity = term_arity(term) or 0
    zeros = (ZERO,) * arity
    bounds: dict[int, tuple] = {}
    for node in _walk_postorder(term):
        if isinstance(node, Proj):
            bounds[id(node)] = tuple(
                ONE if i == node.index - 1 else ZERO for i in range(arity))
        elif isinstance(node, CConst):
            bounds[id(node)] = zeros
        else:
            right = bounds[id(node.rhs)]
            if isinstance(node.lhs, CImplies) and _same_term(node.lhs.rhs, node.rhs):
                left = bounds[id(node.lhs.lhs)]
                bounds[id(node)] = tuple(max(a, b) for a, b in zip(left, right))
            else:
                left = bounds[id(node.lhs)]
                bounds[id(node)] = tuple(a + b for a, b in zip(left, right))
    return bounds[id(term)]


def _same_term(a: ConnectiveTerm, b: ConnectiveTerm) -> bool:
    if a is b:
        return True
    # Structural fallback for hand-built terms; skipped for large DAGs
    # where the tree expansion of == could blow up.
    if dag_size(a) > 64 or dag_size(b) > 64:
        return False
    return a == b


# ---------------------------------------------------------------------------
# Grids and certification


def grid_axis(spacing: Fraction) -> list:
    """{0, h, 2h, ...} capped to [0,1], always including 1."""
    spacing = as_fraction(spacing)
    if not (ZERO < spacing <= ONE):
        raise FormulaError(f"grid spacing outside (0,1]: {spacing}")
    points = []
    k = 0
    while k * spacing < ONE:
        points.append(k * spacing)
        k += 1
    points.append(ONE)
    return points


def grid_max_error(term: ConnectiveTerm, oracle: Callable, arity: int,
                   spacing: Fraction) -> Fraction:
    """max over the grid of |term - oracle|, computed exactly."""
    declared = term_arity(term)
    if declared is not None and declared != arity:
        raise FormulaError(
            f"term arity {declared} does not match oracle arity {arity}")
    axis = grid_axis(spacing)
    denominator = lcm(spacing.denominator,
                      *(c.denominator for c in term_constants(term)), 1)
    axis_ints = [int(p * denominator) for p in axis]
    program = _compile_scaled(term, denominator)
    worst = ZERO
    for ints in itertools.product(axis_ints, repeat=arity):
        approx = Fraction(_run_scaled(program, ints, denominator), denominator)
        target = as_fraction(oracle(tuple(Fraction(i, denominator) for i in ints)))
        gap = abs(approx - target)
        if gap > worst:
            worst = gap
    return worst


def certify(term: ConnectiveTerm, oracle: Callable, arity: int,
            spacing: Fraction, lipschitz: Fraction) -> Fraction:
    """A sound sup-norm bound on |term - oracle| over [0,1]^arity.

    Returns ``gridmax + (L + L_t) * h / 2`` where the grid maximum is
    exact, ``L`` is the caller's Lipschitz bound for the oracle, and
    ``L_t`` sums the term's syntactic per-argument bounds; any point is
    within ``h/2`` of the grid in every coordinate.
    """
    spacing = as_fraction(spacing)
    if not (ZERO < spacing <= ONE):
        raise FormulaError(f"grid spacing outside (0,1]: {spacing}")
    lipschitz = as_fraction(lipschitz)
    worst = grid_max_error(term, oracle, arity, spacing)
    term_bound = sum(lipschitz_bounds(term, arity), ZERO)
    return worst + (lipschitz + term_bound) * spacing / 2


# ---------------------------------------------------------------------------
# Constructions


def half_approx(n: int) -> ConnectiveTerm:
    """Lattice approximation of x/2 at resolution n.

    The term is ``OR_{i=1..n} ( i/n AND ~(x -> i/n) )`` with the lattice
    connectives expanded into implications; it evaluates to
    ``max_i min(i/n, max(x - i/n, 0))`` and satisfies
    ``|value - x/2| <= 1/n`` on all of [0,1].
    """
    if not isinstance(n, int) or n < 1:
        raise FormulaError(f"resolution must be a positive integer: {n!r}")
    x = Proj(1, 1)
    term = None
    for i in range(1, n + 1):
        level = CConst(Fraction(i, n))
        disjunct = c_and(level, c_not(CImplies(x, level)))
        term = disjunct if term is None else c_or(term, disjunct)
    return term


def substitute_projections(term: ConnectiveTerm,
                           replacements: Sequence[ConnectiveTerm]) -> ConnectiveTerm:
    """Plug terms in for the projections, preserving DAG sharing."""
    rebuilt: dict[int, ConnectiveTerm] = {}
    for node in _walk_postorder(term):
        if isinstance(node, Proj):
            if node.index > len(replacements):
                raise FormulaError(
                    f"projection {node.index} exceeds {len(replacements)} replacements")
            rebuilt[id(node)] = replacements[node.index - 1]
        elif isinstance(node, CConst):
            rebuilt[id(node)] = node
        else:
            rebuilt[id(node)] = CImplies(rebuilt[id(node.lhs)],
                                         rebuilt[id(node.rhs)])
    return rebuilt[id(term)]


def scale_dyadic(p: int, k: int, n: int):
    """A term approximating clamp_[0,1]((p / 2^k) * x), with a certified
    sup-error bound.

    Built as the p-fold truncated sum of the k-fold composition of
    ``half_approx(n)``.  When no halving occurs (p = 0 or k = 0) the
    construction is exact and the bound is 0; otherwise the bound comes
    from ``certify`` on the grid of spacing 1/(8n) with the target's own
    Lipschitz constant p/2^k.
    """
    if not (isinstance(p, int) and p >= 0 and isinstance(k, int) and k >= 0):
        raise FormulaError(f"need integers p >= 0, k >= 0: p={p!r} k={k!r}")
    if not isinstance(n, int) or n < 1:
        raise FormulaError(f"resolution must be a positive integer: {n!r}")
    if p == 0:
        return _CZERO, ZERO
    base: ConnectiveTerm = Proj(1, 1)
    if k > 0:
        halver = half_approx(n)
        for _ in range(k):
            base = substitute_projections(halver, [base])
    term = base
    for _ in range(p - 1):
        term = c_oplus(term, base)
    if k == 0:
        return term, ZERO
    ratio = Fraction(p, 2 ** k)

    def target(point):
        return min(ONE, ratio * point[0])

    bound = certify(term, target, 1, Fraction(1, 8 * n), ratio)
    return term, bound


@dataclass(frozen=True)
class AffinePiece:
    """One truncated affine piece: clamp_[0,1](sum_i c_i x_i + b)."""

    coefficients: tuple
    intercept: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coefficients",
                           tuple(as_fraction(c) for c in self.coefficients))
        object.__setattr__(self, "intercept", as_fraction(self.intercept))

    def value(self, point) -> Fraction:
        raw = sum((c * x for c, x in zip(self.coefficients, point)),
                  self.intercept)
        return min(ONE, max(ZERO, raw))


@dataclass(frozen=True)
class PLSpec:
    """Max-of-min lattice of truncated affine pieces on [0,1]^arity."""

    arity: int
    groups: tuple  # of tuples of AffinePiece

    def __post_init__(self):
        groups = tuple(tuple(g) for g in self.groups)
        if not groups or any(not g for g in groups):
            raise FormulaError("PLSpec needs at least one nonempty group")
        for group in groups:
            for piece in group:
                if len(piece.coefficients) != self.arity:
                    raise FormulaError(
                        f"piece arity {len(piece.coefficients)} != {self.arity}")
        object.__setattr__(self, "groups", groups)

    def value(self, point) -> Fraction:
        return max(min(piece.value(point) for piece in group)
                   for group in self.groups)

    def lipschitz(self) -> Fraction:
        """Sound bound for the max metric: max over pieces of sum |c_i|."""
        return max(sum((abs(c) for c in piece.coefficients), ZERO)
                   for group in self.groups for piece in group)


def _smallest_power_of_two_at_least(value: Fraction) -> int:
    q = 0
    while 2 ** q < value:
        q += 1
    return q


def _realize_piece(piece: AffinePiece, arity: int, n: int):
    """Realize one truncated affine piece; returns (term, exact_flag).

    Negative coefficients go through 1-x: the piece is rewritten as a
    nonnegative combination plus the shifted intercept b'.  Truncated
    sums of nonnegative summands compute the clamped true sum exactly,
    so when b' >= 0 (or the summands cannot exceed 1) the only
    approximation error comes from non-integer scalings.  Otherwise the
    sum is scaled into [0,1], shifted, and blown back up with exact
    doublings ``t (+) t``.
    """
    for c in piece.coefficients:
        if not is_dyadic(c):
            raise FormulaError(f"non-dyadic coefficient: {c}")

    def scaled_argument(c: Fraction, i: int):
        magnitude = abs(c)
        scale, exact = _scale_term(magnitude, n)
        argument = Proj(i + 1, arity) if c > 0 else c_not(Proj(i + 1, arity))
        return substitute_projections(scale, [argument]), exact

    shift = sum((abs(c) for c in piece.coefficients if c < 0), ZERO)
    b_prime = piece.intercept - shift
    total = sum((abs(c) for c in piece.coefficients), ZERO)

    if not any(c != 0 for c in piece.coefficients):
        return CConst(min(ONE, max(ZERO, piece.intercept))), True

    if b_prime >= ZERO or total <= ONE:
        terms = []
        exact = True
        for i, c in enumerate(piece.coefficients):
            if c == 0:
                continue
            t, ok = scaled_argument(c, i)
            terms.append(t)
            exact = exact and ok
        out = terms[0]
        for t in terms[1:]:
            out = c_oplus(out, t)
        if b_prime > ZERO:
            out = c_oplus(out, CConst(min(ONE, b_prime)))
        elif b_prime < ZERO:
            if -b_prime >= ONE:
                return _CZERO, True
            out = c_ominus(out, -b_prime)
        return out, exact

    # General case: scale everything by 2^(q+1) so the shifted sum fits
    # in [0,1] without clamping, then subtract 1/2 and double back up.
    q = _smallest_power_of_two_at_least(total + (-b_prime))
    down = Fraction(1, 2 ** (q + 1))
    terms = []
    exact = True
    for i, c in enumerate(piece.coefficients):
        if c == 0:
            continue
        magnitude = abs(c) * down
        scale, ok = _scale_term(magnitude, n)
        argument = Proj(i + 1, arity) if c > 0 else c_not(Proj(i + 1, arity))
        terms.append(substitute_projections(scale, [argument]))
        exact = exact and ok
    beta = b_prime * down + Fraction(1, 2)
    out = terms[0]
    for t in terms[1:]:
        out = c_oplus(out, t)
    if beta > ZERO:
        out = c_oplus(out, CConst(beta))
    out = c_ominus(out, Fraction(1, 2))
    for _ in range(q + 1):
        out = c_oplus(out, out)
    return out, exact


def _scale_term(magnitude: Fraction, n: int):
    """Unary term for clamp((p/2^k) x) from a dyadic magnitude."""
    if magnitude == 0:
        return _CZERO, True
    k = magnitude.denominator.bit_length() - 1
    p = magnitude.numerator
    term, _ = scale_dyadic(p, k, n)
    return term, k == 0


def approx_lattice(spec: PLSpec, n: int, spacing: Optional[Fraction] = None):
    """Build a connective term approximating the lattice target, plus a
    certified sup-error bound (0 when the construction is exact)."""
    if not isinstance(n, int) or n < 1:
        raise FormulaError(f"resolution must be a positive integer: {n!r}")
    exact = True
    group_terms = []
    for group in spec.groups:
        piece_terms = []
        for piece in group:
            t, ok = _realize_piece(piece, spec.arity, n)
            piece_terms.append(t)
            exact = exact and ok
        g = piece_terms[0]
        for t in piece_terms[1:]:
            g = c_and(g, t)
        group_terms.append(g)
    term = group_terms[0]
    for g in group_terms[1:]:
        term = c_or(term, g)
    if exact:
        return term, ZERO
    spacing = as_fraction(spacing) if spacing is not None else Fraction(1, 8 * n)
    bound = certify(term, spec.value, spec.arity, spacing, spec.lipschitz())
    return term, bound


def apply_connective(term: ConnectiveTerm, formulas: Sequence) -> syntax.Formula:
    """Substitute formulas for the projections, yielding a formula whose
    value equals the term applied to the formulas' values everywhere."""
    declared = term_arity(term)
    if declared is not None and declared != len(formulas):
        raise FormulaError(
            f"term arity {declared} does not match {len(formulas)} formulas")
    rebuilt: dict[int, syntax.Formula] = {}
    for node in _walk_postorder(term):
        if isinstance(node, Proj):
            rebuilt[id(node)] = formulas[node.index - 1]
        elif isinstance(node, CConst):
            rebuilt[id(node)] = syntax.Const(node.value)
        else:
            rebuilt[id(node)] = syntax.Implies(rebuilt[id(node.lhs)],
                                               rebuilt[id(node.rhs)])
    return rebuilt[id(term)]


def rendered_size(term: ConnectiveTerm) -> int:
    """Length of the rendered text, counting shared nodes once per use."""
    sizes: dict[int, int] = {}
    for node in _walk_postorder(term):
        if isinstance(node, Proj):
            sizes[id(node)] = len(f"x{node.index}")
        elif isinstance(node, CConst):
            sizes[id(node)] = len(str(node.value))
        else:
            sizes[id(node)] = sizes[id(node.lhs)] + sizes[id(node.rhs)] + 8
    return sizes[id(term)]


def render_connective(term: ConnectiveTerm, limit: int = 1_000_000) -> str:
    """Formula-grammar text with projections written x1, x2, ...

    Shared subterms are written out at each use, so the text of a heavily
    shared DAG can be much larger than the term; ``limit`` guards that.
    """
    if rendered_size(term) > limit:
        raise FormulaError(
            f"term too large to render ({dag_size(term)} DAG nodes)")
    texts: dict[int, str] = {}
    for node in _walk_postorder(term):
        if isinstance(node, Proj):
            texts[id(node)] = f"x{node.index}"
        elif isinstance(node, CConst):
            texts[id(node)] = str(node.value)
        else:
            lhs = texts[id(node.lhs)]
            if isinstance(node.lhs, CImplies):
                lhs = f"({lhs})"
            texts[id(node)] = f"{lhs} -> {texts[id(node.rhs)]}"
    return texts[id(term)]
