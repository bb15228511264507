"""Finite interpreted object languages and their true sentences."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .syntax import (
    AND, EXISTS, FORALL, IFF, IMP, OR, Atom, Binary, Formula, Not, Quant,
    Store, Truth, Var, Vocabulary, parse,
)


class ModelError(ValueError):
    pass


class NotAnObjectSentence(ValueError):
    pass


@dataclass(frozen=True)
class Predicate:
    arity: int
    arg_domains: tuple  # one frozenset of elements per argument place
    extension: frozenset


class FiniteModel:
    """Domain, naming function and predicate interpretations.

    Every element must have at least one name.  Each argument place of a
    predicate has its own domain, and quantified variables range over the
    named elements of the places they fill.
    """

    def __init__(self, domain, names: dict, predicates: dict[str, Predicate]):
        self.domain = tuple(domain)
        self.names = dict(names)
        self.predicates = dict(predicates)
        self._validate()

    def _validate(self):
        dom = set(self.domain)
        if not dom:
            raise ModelError("the domain is empty")
        if len(dom) != len(self.domain):
            raise ModelError("duplicate domain elements")
        for n, e in self.names.items():
            if e not in dom:
                raise ModelError(f"name {n!r} denotes {e!r}, which is not in the domain")
        unnamed = dom - set(self.names.values())
        if unnamed:
            raise ModelError(f"unnamed elements: {sorted(map(repr, unnamed))}")
        for p, pred in self.predicates.items():
            if p == "T":
                raise ModelError("T is reserved for truth")
            if len(pred.arg_domains) != pred.arity:
                raise ModelError(f"{p}: {pred.arity} places but {len(pred.arg_domains)} domains")
            for d in pred.arg_domains:
                if not d or not d <= dom:
                    raise ModelError(f"{p}: argument domain must be a nonempty subset of the domain")
            for tup in pred.extension:
                if len(tup) != pred.arity or any(e not in d for e, d in zip(tup, pred.arg_domains)):
                    raise ModelError(f"{p}: tuple {tup!r} lies outside its argument domains")

    @property
    def vocabulary(self) -> Vocabulary:
        return Vocabulary(frozenset(self.names), {p: d.arity for p, d in self.predicates.items()})

    def names_in(self, elements) -> list[str]:
        """Names whose denotation lies in ``elements``, in declaration order."""
        return [n for n, e in self.names.items() if e in elements]

    def name_tuples(self, pred: str) -> list[tuple[str, ...]]:
        """All argument tuples of names for ``pred``."""
        d = self.predicates[pred]
        return list(itertools.product(*(self.names_in(s) for s in d.arg_domains)))

    def to_dict(self) -> dict:
        return {
            "domain": list(self.domain),
            "names": dict(self.names),
            "predicates": {
                p: {
                    "arity": d.arity,
                    "arg_domains": [sorted(s, key=_sort_key) for s in d.arg_domains],
                    "extension": sorted((list(t) for t in d.extension), key=lambda t: [_sort_key(e) for e in t]),
                }
                for p, d in self.predicates.items()
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FiniteModel":
        try:
            domain = [_element(e) for e in data["domain"]]
            names = {n: _element(e) for n, e in data["names"].items()}
            preds = {}
            for p, spec in data["predicates"].items():
                arity = int(spec["arity"])
                doms = spec.get("arg_domains")
                arg_domains = tuple(frozenset(_element(e) for e in d) for d in doms) if doms is not None \
                    else (frozenset(domain),) * arity
                ext = frozenset(tuple(_element(e) for e in t) for t in spec["extension"])
                preds[p] = Predicate(arity, arg_domains, ext)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ModelError):
                raise
            raise ModelError(f"malformed model: {exc}") from exc
        return cls(domain, names, preds)


def _element(e):
    if isinstance(e, list):
        raise ModelError("domain elements must be strings or integers")
    return e


def _sort_key(e):
    return (isinstance(e, str), e)


def load_model(source) -> tuple[FiniteModel, list[str]]:
    """Read a model from a JSON file, a dict, or the name of a bundled model.

    Returns the model and its base sentences (the atoms of the model when
    the file does not list any).
    """
    if isinstance(source, dict):
        data = source
    else:
        path = Path(source)
        if not path.exists() and not path.suffix:
            bundled = resources.files("groundedtruth") / "data" / f"{source}.json"
            if bundled.is_file():
                return load_model(json.loads(bundled.read_text()))
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ModelError(f"cannot read model {source}: {exc}") from exc
    model = FiniteModel.from_dict(data)
    base = data.get("base_sentences")
    if base is None:
        base = [f"{p}({', '.join(t)})" for p in model.predicates for t in model.name_tuples(p)]
    return model, list(base)


def bundled_models() -> list[str]:
    folder = resources.files("groundedtruth") / "data"
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def doubling_model(bound: int) -> tuple[FiniteModel, list[str]]:
    """Finite stand-in for the naturals with ``R(x, y)`` meaning ``x = 2y``.

    Elements are ``0..bound`` named ``n0..n<bound>``.
    """
    if bound < 1:
        raise ModelError("the surrogate bound must be at least 1")
    domain = list(range(bound + 1))
    names = {f"n{i}": i for i in domain}
    ext = frozenset((x, y) for x in domain for y in domain if x == 2 * y)
    model = FiniteModel(domain, names, {"R": Predicate(2, (frozenset(domain),) * 2, ext)})
    return model, ["R(n2, n1)"]


# evaluation

class Evaluator:
    """Truth in a finite model, memoised over closed sentences."""

    def __init__(self, model: FiniteModel):
        self.model = model
        self._cache: dict[int, bool] = {}

    def __call__(self, sentence: Formula) -> bool:
        if sentence.free:
            raise ValueError(f"{sentence} has free variables")
        return self._eval(sentence, {})

    def _range(self, var: str, body: Formula) -> list:
        places = set()
        _places_of(var, body, places)
        m = self.model
        places = {(p, i) for p, i in places if p in m.predicates}
        if places:
            allowed = frozenset.intersection(*(m.predicates[p].arg_domains[i] for p, i in places))
        else:
            allowed = frozenset(m.domain)
        return [e for e in m.domain if e in allowed]

    def _eval(self, f: Formula, env: dict) -> bool:
        closed = not f.free
        if closed:
            hit = self._cache.get(f.id)
            if hit is not None:
                return hit
        result = self._compute(f, env)
        if closed:
            self._cache[f.id] = result
        return result

    def _compute(self, f, env) -> bool:
        if isinstance(f, Atom):
            pred = self.model.predicates.get(f.pred)
            if pred is None:
                raise ModelError(f"unknown predicate {f.pred!r}")
            if len(f.args) != pred.arity:
                raise ModelError(f"{f.pred} takes {pred.arity} arguments")
            values = []
            for i, a in enumerate(f.args):
                if isinstance(a, Var):
                    values.append(env[a.ident])
                    continue
                if a.ident not in self.model.names:
                    raise ModelError(f"unknown name {a.ident!r}")
                e = self.model.names[a.ident]
                if e not in pred.arg_domains[i]:
                    raise ModelError(f"{a.ident} is outside the domain of place {i + 1} of {f.pred}")
                values.append(e)
            return tuple(values) in pred.extension
        if isinstance(f, Not):
            return not self._eval(f.body, env)
        if isinstance(f, Binary):
            a = self._eval(f.left, env)
            b = self._eval(f.right, env)
            if f.op == OR:
                return a or b
            if f.op == AND:
                return a and b
            if f.op == IMP:
                return (not a) or b
            return a == b
        if isinstance(f, Quant):
            values = (self._eval(f.body, {**env, f.var: e}) for e in self._range(f.var, f.body))
            return all(values) if f.q == FORALL else any(values)
        if isinstance(f, Truth):
            raise NotAnObjectSentence(f"{f} mentions T")
        raise TypeError(f)


def _places_of(var, f, out):
    if var not in f.free:
        return
    if isinstance(f, Atom):
        for i, a in enumerate(f.args):
            if isinstance(a, Var) and a.ident == var:
                out.add((f.pred, i))
    elif isinstance(f, Not):
        _places_of(var, f.body, out)
    elif isinstance(f, Binary):
        _places_of(var, f.left, out)
        _places_of(var, f.right, out)
    elif isinstance(f, Quant):
        _places_of(var, f.body, out)


def evaluate(sentence: Formula, model: FiniteModel) -> bool:
    return Evaluator(model)(sentence)


def is_object_sentence(f: Formula) -> bool:
    if isinstance(f, Truth):
        return False
    if isinstance(f, Atom):
        return True
    if isinstance(f, Not) or isinstance(f, Quant):
        return is_object_sentence(f.body)
    if isinstance(f, Binary):
        return is_object_sentence(f.left) and is_object_sentence(f.right)
    return False


# fragments of the object language

PREFIX_VARS = ("x", "y", "z", "u", "v", "w")


def variables(arity: int) -> tuple[str, ...]:
    if arity <= len(PREFIX_VARS):
        return PREFIX_VARS[:arity]
    return tuple(f"x{i}" for i in range(1, arity + 1))


def prefixes(arity: int) -> list[tuple[str, ...]]:
    return list(itertools.product((FORALL, EXISTS), repeat=arity))


def quantify(store: Store, prefix, names, body: Formula) -> Formula:
    for q, v in reversed(list(zip(prefix, names))):
        body = store.quant(q, v, body)
    return body


def quantified_sentences(store: Store, model: FiniteModel) -> list[Formula]:
    """``q…P(x…)`` and ``q…¬P(x…)`` for every predicate and prefix."""
    out = []
    for p, pred in model.predicates.items():
        vs = variables(pred.arity)
        body = store.atom(p, [store.var(v) for v in vs])
        for prefix in prefixes(pred.arity):
            out.append(quantify(store, prefix, vs, body))
            out.append(quantify(store, prefix, vs, store.neg(body)))
    return out


def build_basic_extension(store: Store, model: FiniteModel, base, depth: int) -> list[list[Formula]]:
    """Layered object fragment grown from the base sentences.

    Level 0 holds the base sentences and every quantified predicate
    sentence.  Level k holds ``¬X`` and ``X ∘ B`` for X new at level k-1,
    B a base sentence and ∘ any binary connective.  Returns the levels.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    vocab = model.vocabulary
    base = [parse(b, store, vocab) if isinstance(b, str) else b for b in base]
    for b in base:
        if not is_object_sentence(b):
            raise NotAnObjectSentence(f"base sentence {b} mentions T")
    seen: set[int] = set()
    level0 = []
    for f in base + quantified_sentences(store, model):
        if f.id not in seen:
            seen.add(f.id)
            level0.append(f)
    levels = [level0]
    for _ in range(depth):
        nxt = []
        for x in levels[-1]:
            for f in [store.neg(x)] + [store.binary(op, x, b) for b in base for op in (OR, AND, IMP, IFF)]:
                if f.id not in seen:
                    seen.add(f.id)
                    nxt.append(f)
        levels.append(nxt)
    return levels


def true_sentences(sentences, model: FiniteModel) -> list[Formula]:
    ev = Evaluator(model)
    return [s for s in sentences if is_object_sentence(s) and ev(s)]

