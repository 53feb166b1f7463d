"""Independent reference evaluator used as an oracle.

Deliberately different from the engine: derived connectives are
interpreted directly by their truth functions (no expansion to the core
implication), there is no memoization, no sharing awareness, and the
existential maximum never exits early.  Agreement with the engine
therefore cross-checks both the evaluator and the abbreviation laws.
"""

from fractions import Fraction

from pavelka import syntax

ONE = Fraction(1)
ZERO = Fraction(0)


def naive_term(structure, term, env):
    if isinstance(term, syntax.Var):
        return env[term.name]
    if not term.args:
        return structure.constants[term.name]
    args = tuple(naive_term(structure, a, env) for a in term.args)
    return structure.operations[term.name][args]


def naive_eval(structure, formula, env=None):
    env = dict(env or {})
    node = formula
    if isinstance(node, syntax.Atom):
        args = tuple(naive_term(structure, a, env) for a in node.args)
        if node.pred == "d":
            return structure.metric[args]
        return structure.predicates[node.pred][args]
    if isinstance(node, syntax.Const):
        return node.value
    if isinstance(node, syntax.Implies):
        value = ONE - naive_eval(structure, node.lhs, env) \
            + naive_eval(structure, node.rhs, env)
        return min(ONE, value)
    if isinstance(node, syntax.Not):
        return ONE - naive_eval(structure, node.body, env)
    if isinstance(node, syntax.Or):
        return max(naive_eval(structure, node.lhs, env),
                   naive_eval(structure, node.rhs, env))
    if isinstance(node, syntax.And):
        return min(naive_eval(structure, node.lhs, env),
                   naive_eval(structure, node.rhs, env))
    if isinstance(node, syntax.Leq):
        return min(ONE, ONE - naive_eval(structure, node.body, env) + node.bound)
    if isinstance(node, syntax.Geq):
        return min(ONE, ONE - node.bound + naive_eval(structure, node.body, env))
    if isinstance(node, syntax.Exists):
        values = []
        for element in structure.universe:
            inner = dict(env)
            inner[node.var] = element
            values.append(naive_eval(structure, node.body, inner))
        return max(values)
    if isinstance(node, syntax.Forall):
        values = []
        for element in structure.universe:
            inner = dict(env)
            inner[node.var] = element
            values.append(naive_eval(structure, node.body, inner))
        return min(values)
    raise TypeError(f"unknown node {node!r}")


def naive_satisfies(structure, sentence):
    return naive_eval(structure, sentence) == ONE


def naive_omits(structure, typeset):
    import itertools

    n = len(typeset.variables)
    for tup in itertools.product(structure.universe, repeat=n):
        env = dict(zip(typeset.variables, tup))
        if all(naive_eval(structure, phi, env) == ONE
               for phi in typeset.formulas):
            return False
    return True
