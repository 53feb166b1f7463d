"""JSON file formats for structures, signatures, theories, type sets,
and search spaces; rationals travel as lowest-terms strings.

Structure files::

    {"universe": ["a", "b"],
     "metric": {"a,b": "1"},
     "predicates": {"P": {"a": "1/3", "b": "1"}},
     "operations": {"f": {"a": "b", "b": "a"}},
     "constants": {"c": "a"}}

Tuple keys are comma-joined element ids; the empty key names the empty
tuple of a 0-ary predicate.  Formulas inside theory/type files are
grammar strings and are parsed against a vocabulary, which may be
embedded in the file or inferred from an accompanying structure.
"""

from __future__ import annotations

import json
import os
from typing import Mapping, Optional

from .errors import ParseError
from .omitting import SearchSpace, TypeSet
from .rationals import format_rational, parse_rational
from .structures import Structure
from .syntax import (Formula, Signature, Theory, Vocabulary, parse_formula,
                     parse_vocabulary, render)


def _tuple_key(args: tuple) -> str:
    return ",".join(args)


def _parse_tuple_key(key: str) -> tuple:
    return tuple(key.split(",")) if key else ()


# ---------------------------------------------------------------------------
# Vocabularies and signatures


def vocabulary_to_dict(vocabulary: Vocabulary) -> dict:
    return {"predicates": dict(sorted(vocabulary.predicates.items())),
            "operations": dict(sorted(vocabulary.operations.items()))}


def vocabulary_from_dict(data: Mapping) -> Vocabulary:
    return Vocabulary(dict(data.get("predicates", {})),
                      dict(data.get("operations", {})))


def load_vocabulary(path: str) -> Vocabulary:
    """JSON (by leading '{') or the line-oriented declaration format."""
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    if text.lstrip().startswith("{"):
        return vocabulary_from_dict(json.loads(text))
    return parse_vocabulary(text)


def signature_to_dict(signature: Signature) -> dict:
    return {
        "vocabulary": vocabulary_to_dict(signature.vocabulary),
        "moduli": {name: [[format_rational(e), format_rational(d)]
                          for e, d in pairs]
                   for name, pairs in sorted(signature.moduli.items())},
    }


def signature_from_dict(data: Mapping) -> Signature:
    vocabulary = vocabulary_from_dict(data.get("vocabulary", data))
    moduli = {name: [(parse_rational(e), parse_rational(d))
                     for e, d in pairs]
              for name, pairs in data.get("moduli", {}).items()}
    return Signature(vocabulary, moduli)


def load_signature(path: str) -> Signature:
    with open(path, encoding="utf-8") as handle:
        return signature_from_dict(json.load(handle))


# ---------------------------------------------------------------------------
# Structures


def structure_to_dict(structure: Structure) -> dict:
    metric = {}
    for i, a in enumerate(structure.universe):
        for b in structure.universe[i + 1:]:
            metric[_tuple_key((a, b))] = format_rational(
                structure.metric[(a, b)])
            if structure.metric[(a, b)] != structure.metric[(b, a)]:
                metric[_tuple_key((b, a))] = format_rational(
                    structure.metric[(b, a)])
    for a in structure.universe:
        if structure.metric[(a, a)] != 0:
            metric[_tuple_key((a, a))] = format_rational(
                structure.metric[(a, a)])
    return {
        "universe": list(structure.universe),
        "metric": dict(sorted(metric.items())),
        "predicates": {
            name: {_tuple_key(k): format_rational(v)
                   for k, v in sorted(table.items())}
            for name, table in sorted(structure.predicates.items())},
        "operations": {
            name: {_tuple_key(k): v for k, v in sorted(table.items())}
            for name, table in sorted(structure.operations.items())},
        "constants": dict(sorted(structure.constants.items())),
    }


def structure_from_dict(data: Mapping, label: Optional[str] = None) -> Structure:
    metric = {_parse_tuple_key(k): parse_rational(v)
              for k, v in data.get("metric", {}).items()}
    predicates = {
        name: {_parse_tuple_key(k): parse_rational(v)
               for k, v in table.items()}
        for name, table in data.get("predicates", {}).items()}
    operations = {
        name: {_parse_tuple_key(k): v for k, v in table.items()}
        for name, table in data.get("operations", {}).items()}
    return Structure(tuple(data["universe"]), metric, predicates, operations,
                     dict(data.get("constants", {})), label=label)


def load_structure(path: str) -> Structure:
    with open(path, encoding="utf-8") as handle:
        return structure_from_dict(json.load(handle),
                                   label=os.path.basename(path))


def load_family(path: str) -> list:
    """A directory of ``*.json`` structure files (sorted by name) or a
    single JSON file holding a list of structure objects."""
    if os.path.isdir(path):
        names = sorted(n for n in os.listdir(path) if n.endswith(".json"))
        if not names:
            raise ParseError(f"no structure files in {path!r}")
        return [load_structure(os.path.join(path, n)) for n in names]
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    if not isinstance(data, list):
        raise ParseError(f"family file {path!r} must hold a JSON list")
    return [structure_from_dict(entry, label=f"{os.path.basename(path)}[{i}]")
            for i, entry in enumerate(data)]


# ---------------------------------------------------------------------------
# Theories and type sets


def theory_to_dict(theory: Theory) -> dict:
    return {"name": theory.name,
            "sentences": [render(s) for s in theory.sentences]}


def theory_from_dict(data: Mapping,
                     vocabulary: Optional[Vocabulary] = None) -> Theory:
    if vocabulary is None:
        if "vocabulary" not in data:
            raise ParseError("theory needs a vocabulary (embedded or given)")
        vocabulary = vocabulary_from_dict(data["vocabulary"])
    sentences = tuple(parse_formula(text, vocabulary)
                      for text in data.get("sentences", []))
    return Theory(data.get("name", "theory"), sentences)


def load_theory(path: str, vocabulary: Optional[Vocabulary] = None) -> Theory:
    with open(path, encoding="utf-8") as handle:
        return theory_from_dict(json.load(handle), vocabulary)


def typeset_to_dict(typeset: TypeSet) -> dict:
    return {"name": typeset.name,
            "variables": list(typeset.variables),
            "formulas": [render(f) for f in typeset.formulas]}


def typeset_from_dict(data: Mapping,
                      vocabulary: Optional[Vocabulary] = None) -> TypeSet:
    if vocabulary is None:
        if "vocabulary" not in data:
            raise ParseError("type set needs a vocabulary (embedded or given)")
        vocabulary = vocabulary_from_dict(data["vocabulary"])
    return TypeSet(
        name=data.get("name", "type"),
        variables=tuple(data["variables"]),
        formulas=tuple(parse_formula(text, vocabulary)
                       for text in data.get("formulas", [])))


def load_typesets(path: str,
                  vocabulary: Optional[Vocabulary] = None) -> list:
    """One type-set object, or ``{"types": [...]}`` or a bare list."""
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    if isinstance(data, list):
        entries = data
    elif "types" in data:
        entries = data["types"]
    else:
        entries = [data]
    return [typeset_from_dict(entry, vocabulary) for entry in entries]


# ---------------------------------------------------------------------------
# Search spaces


def space_to_dict(space: SearchSpace) -> dict:
    return {"vocabulary": vocabulary_to_dict(space.vocabulary),
            "max_size": space.max_size,
            "truth_denominator": space.truth_denominator,
            "metric_denominator": space.metric_denominator,
            "seed": space.seed}


def space_from_dict(data: Mapping) -> SearchSpace:
    return SearchSpace(
        vocabulary=vocabulary_from_dict(data["vocabulary"]),
        max_size=int(data["max_size"]),
        truth_denominator=int(data["truth_denominator"]),
        metric_denominator=int(data["metric_denominator"]),
        seed=int(data.get("seed", 0)))


def load_space(path: str) -> SearchSpace:
    with open(path, encoding="utf-8") as handle:
        return space_from_dict(json.load(handle))


def dump_json(payload) -> str:
    """Canonical JSON text: sorted keys, two-space indent, newline end."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
