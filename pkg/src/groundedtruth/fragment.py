"""Finite fragments of the truth language and their seed sets.

The full language is infinite, so all computation happens over a finite
*universe* of sentences.  The universe is closed under the dependencies the
closure rules look at: a compound brings in its components and their
negations, ``¬¬A`` brings in ``¬A`` and ``A``, and ``T(⌈A⌉)`` brings in
``A`` and ``¬A``.  Whether a sentence ends up true, false or ungrounded
depends only on those dependencies, so classifying the members of a
dependency-closed universe gives the same answer as working in the whole
language.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

from . import schemas
from .models import (
    Evaluator, FiniteModel, build_basic_extension, is_object_sentence, load_model,
)
from .syntax import Binary, Formula, Not, Numeral, Store, Truth, parse, to_text

log = logging.getLogger(__name__)

DEFAULT_CAP = 400_000
FORMAT = "groundedtruth.fragment/1"


class FragmentTooLarge(RuntimeError):
    def __init__(self, stage: str, size: int, cap: int):
        super().__init__(f"universe exceeded the cap of {cap} sentences while adding {stage} ({size} so far)")
        self.stage = stage
        self.size = size
        self.cap = cap


class FragmentFormatError(ValueError):
    pass


def dependencies(store: Store, f: Formula) -> list[Formula]:
    """Sentences whose status decides the status of ``f``."""
    if isinstance(f, Not):
        return [f.body]
    if isinstance(f, Binary):
        n = store.neg
        return [f.left, f.right, n(f.left), n(f.right)]
    if isinstance(f, Truth) and isinstance(f.arg, Numeral):
        a = store.decode(f.arg.value)
        if a is not None:
            return [a, store.neg(a)]
    return []


class _Closure:
    def __init__(self, store: Store, cap: int):
        self.store = store
        self.cap = cap
        self.members: dict[int, Formula] = {}

    def add(self, roots, stage: str, with_negations=True):
        store = self.store
        todo = []
        for r in roots:
            if not r.closed:
                raise ValueError(f"{to_text(r)} is not a sentence")
            todo.append(r)
            if with_negations:
                todo.append(store.neg(r))
        while todo:
            f = todo.pop()
            if f.id in self.members:
                continue
            self.members[f.id] = f
            if len(self.members) > self.cap:
                raise FragmentTooLarge(stage, len(self.members), self.cap)
            todo.extend(d for d in dependencies(store, f) if d.id not in self.members)

    def truth_atoms(self):
        return [f for f in self.members.values() if isinstance(f, Truth)]


@dataclass
class Fragment:
    """A dependency-closed universe with its seed sets and codes."""

    store: Store
    model: FiniteModel
    universe: list[Formula]
    z: list[Formula]
    z1_fixed: list[Formula]
    z2_fixed: list[Formula]
    z3: list[Formula]
    z4: list[Formula]
    z3_neg: list[Formula] = field(default_factory=list)
    z4_neg: list[Formula] = field(default_factory=list)
    depth: int | None = None
    reflect: int | None = None
    complete_quantifiers: bool = True
    base: list[Formula] = field(default_factory=list)
    levels: list[list[Formula]] = field(default_factory=list)
    pair_pool: list[Formula] = field(default_factory=list)
    unary_pool: list[Formula] = field(default_factory=list)
    designated: dict[str, Formula] = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        enc = self.store.encode
        self._ids = {f.id for f in self.universe}
        self.code_of: dict[int, int] = {f.id: enc(f) for f in self.universe}
        self.by_code: dict[int, Formula] = {c: f for f, c in zip(self.universe, self.code_of.values())}
        if len(self.by_code) != len(self.universe):
            raise AssertionError("two universe sentences share a code")
        # Z1(U) and Z2(U) lookups: which T-atom a code in U switches on
        neg = self.store.lookup
        self.truth_trigger: dict[int, Formula] = {}
        self.falsity_trigger: dict[int, Formula] = {}
        for f in self.universe:
            if isinstance(f, Truth) and isinstance(f.arg, Numeral):
                a = self.store.decode(f.arg.value)
                if a is None:
                    continue
                self.truth_trigger[f.arg.value] = f
                not_t = neg(("not", f.id))
                not_a = neg(("not", a.id))
                if not_t is not None and not_t.id in self._ids and not_a is not None and not_a.id in self._ids:
                    self.falsity_trigger[self.code_of[not_a.id]] = not_t
        self._rule_index = None

    def __contains__(self, f) -> bool:
        return isinstance(f, Formula) and f.id in self._ids

    def __len__(self) -> int:
        return len(self.universe)

    def code(self, f: Formula) -> int:
        return self.code_of[f.id]

    def sentence(self, code: int) -> Formula:
        return self.by_code[code]

    def negation(self, f: Formula) -> Formula | None:
        """``¬f`` if it is in the universe."""
        n = self.store.lookup(("not", f.id))
        return n if n is not None and n.id in self._ids else None

    @property
    def codes(self) -> frozenset:
        return frozenset(self.by_code)

    @property
    def fixed_seeds(self) -> list[Formula]:
        return self.z1_fixed + self.z2_fixed + self.z3 + self.z4 + self.z3_neg + self.z4_neg

    @property
    def lf(self) -> list[Formula]:
        return [f for level in self.levels for f in level]

    def parse(self, text: str) -> Formula:
        return parse(text, self.store, self.model.vocabulary)

    def text(self, f: Formula) -> str:
        return to_text(f)

    # persistence

    def to_json(self) -> dict:
        code = self.code
        ids = lambda fs: [code(f) for f in fs]  # noqa: E731
        return {
            "format": FORMAT,
            "params": dict(self.params),
            "model": self.model.to_dict(),
            "base_sentences": [to_text(f) for f in self.base],
            "designated": {k: {"code": code(f), "text": to_text(f)} for k, f in self.designated.items()},
            "sentences": [{"code": code(f), "text": to_text(f)} for f in self.universe],
            "z_sets": {
                "z": ids(self.z), "z1": ids(self.z1_fixed), "z2": ids(self.z2_fixed),
                "z3": ids(self.z3), "z4": ids(self.z4), "z3_neg": ids(self.z3_neg), "z4_neg": ids(self.z4_neg),
            },
            "pools": {
                "levels": [ids(level) for level in self.levels],
                "pairs": ids(self.pair_pool), "unary": ids(self.unary_pool),
            },
        }

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1, sort_keys=True)
            fh.write("\n")


def load_fragment(path) -> Fragment:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FragmentFormatError(f"cannot read fragment {path}: {exc}") from exc
    return fragment_from_json(data)


def fragment_from_json(data: dict) -> Fragment:
    try:
        if data.get("format") != FORMAT:
            raise FragmentFormatError(f"not a fragment file (format {data.get('format')!r})")
        model, _ = load_model(data["model"])
        store = Store()
        vocab = model.vocabulary
        designated = {}
        for kind, entry in sorted(data["designated"].items()):
            f = parse(entry["text"], store, vocab)
            store.bind_designated(f, int(entry["code"]))
            designated[kind] = f
        by_code = {}
        universe = []
        for entry in data["sentences"]:
            f = parse(entry["text"], store, vocab)
            if store.encode(f) != entry["code"]:
                raise FragmentFormatError(f"code mismatch for {entry['text'][:80]}")
            by_code[entry["code"]] = f
            universe.append(f)
        get = lambda codes: [by_code[c] for c in codes]  # noqa: E731
        zs = data["z_sets"]
        pools = data["pools"]
        params = data["params"]
        frag = Fragment(
            store=store, model=model, universe=universe,
            z=get(zs["z"]), z1_fixed=get(zs["z1"]), z2_fixed=get(zs["z2"]),
            z3=get(zs["z3"]), z4=get(zs["z4"]), z3_neg=get(zs["z3_neg"]), z4_neg=get(zs["z4_neg"]),
            depth=params.get("depth"), reflect=params.get("reflect"),
            complete_quantifiers=params.get("complete_quantifiers", True),
            base=[parse(t, store, vocab) for t in data["base_sentences"]],
            levels=[get(level) for level in pools["levels"]],
            pair_pool=get(pools["pairs"]), unary_pool=get(pools["unary"]),
            designated=designated, params=params,
        )
    except FragmentFormatError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise FragmentFormatError(f"malformed fragment: {exc}") from exc
    return frag


# seed sets

def z1_of(codes, frag: Fragment) -> list[Formula]:
    """``T(⌈A⌉)`` for every code of A in ``codes`` (within the universe)."""
    trig = frag.truth_trigger
    return [trig[c] for c in codes if c in trig]


def z2_of(codes, frag: Fragment) -> list[Formula]:
    """``¬T(⌈A⌉)`` for every code of ``¬A`` in ``codes`` (within the universe)."""
    trig = frag.falsity_trigger
    return [trig[c] for c in codes if c in trig]


def quantified_seed_sets(store: Store, model: FiniteModel, complete=True):
    """Quantified sentences about quoted predicates, split by truth.

    Returns ``(z3, z4, z3_neg, z4_neg)``.  ``z3`` holds the true
    ``q…T(⌈P(ẋ)⌉)`` and ``z4`` the true ``q…¬T(⌈P(ẋ)⌉)``.  With
    ``complete`` the negations of the false ones go into ``z3_neg`` and
    ``z4_neg``; without it they stay empty and the false sentences never
    become false in the fixed point.
    """
    ev = Evaluator(model)
    z3, z4, z3_neg, z4_neg = [], [], [], []
    for sentence, obj, negative in schemas.quantified_truth_sentences(store, model):
        if ev(obj):
            (z4 if negative else z3).append(sentence)
        elif complete:
            (z4_neg if negative else z3_neg).append(store.neg(sentence))
    return z3, z4, z3_neg, z4_neg


def _dedupe(fs):
    seen = set()
    out = []
    for f in fs:
        if f.id not in seen:
            seen.add(f.id)
            out.append(f)
    return out


def _finish(store, model, closure: _Closure, *, complete_quantifiers, **extra) -> Fragment:
    universe = list(closure.members.values())
    ids = closure.members
    ev = Evaluator(model)
    z = [f for f in universe if is_object_sentence(f) and ev(f)]
    first, second = schemas.truth_seed_sentences(store)
    z3, z4, z3_neg, z4_neg = quantified_seed_sets(store, model, complete_quantifiers)
    keep = lambda fs: [f for f in fs if f.id in ids]  # noqa: E731
    return Fragment(
        store=store, model=model, universe=universe, z=z,
        z1_fixed=keep(first), z2_fixed=keep(second), z3=keep(z3), z4=keep(z4),
        z3_neg=keep(z3_neg), z4_neg=keep(z4_neg), complete_quantifiers=complete_quantifiers, **extra,
    )


def fragment_from_roots(store: Store, model: FiniteModel, roots, *, complete_quantifiers=True,
                        with_negations=True, cap=DEFAULT_CAP, designated=None) -> Fragment:
    """Smallest dependency-closed universe containing ``roots``.

    Seed sets are cut down to the universe, so this is the way to build
    tiny fragments for exhaustive checks.
    """
    closure = _Closure(store, cap)
    closure.add(list(roots), "roots", with_negations)
    params = {"kind": "roots", "complete_quantifiers": complete_quantifiers, "cap": cap}
    return _finish(store, model, closure, complete_quantifiers=complete_quantifiers,
                   designated=dict(designated or {}), params=params)


def build_fragment(store: Store, model: FiniteModel, base, depth: int, reflect: int, *,
                   liar=False, truthteller=False, complete_quantifiers=True, schema_instances=True,
                   cap=DEFAULT_CAP) -> Fragment:
    """Build the universe for a model, object depth ``depth`` and reflection depth ``reflect``.

    Roots are the layered object fragment, ``reflect`` rounds of
    ``T(⌈·⌉)`` and ``¬T(⌈·⌉)`` over it, ``T(⌈P(b…)⌉)`` for every predicate
    instance, all seed sentences, the optional liar ``¬T(#λ)`` and
    truth-teller ``T(#τ)``, and (unless ``schema_instances`` is off)
    biconditionals instantiating the derived schemas.  Every T-atom in the
    result also gets its ``T(⌈A⌉) ↔ A`` and ``¬T(⌈A⌉) ↔ A`` instances.
    """
    if reflect < 0:
        raise ValueError("reflection depth must be non-negative")
    levels = build_basic_extension(store, model, base, depth)
    base_sentences = _base_only(store, model, base)
    lf = [f for level in levels for f in level]
    closure = _Closure(store, cap)
    closure.add(lf, "object fragment")

    t, n = store.true_of, store.neg
    previous = lf
    for k in range(reflect):
        cur = []
        for a in previous:
            cur.append(t(a))
            cur.append(n(t(a)))
        closure.add(cur, f"reflection round {k + 1}")
        previous = cur

    for pred in model.predicates:
        closure.add([f for pair in schemas.instance_pairs(store, model, pred) for f in pair],
                    "predicate instances")

    first, second = schemas.truth_seed_sentences(store)
    z3, z4, z3_neg, z4_neg = quantified_seed_sets(store, model, complete=True)
    closure.add(first + second + z3 + z4 + [f.body for f in z3_neg + z4_neg], "seed sentences")

    designated = {}
    if liar:
        designated["liar"], _ = store.register_designated(store.neg(store.truth(store.hole())))
    if truthteller:
        designated["truthteller"], _ = store.register_designated(store.truth(store.hole()))
    closure.add(list(designated.values()), "designated sentences")

    unary_pool = list(lf) + list(designated.values())
    pair_pool = _dedupe(list(levels[0]) + [t(b) for b in base_sentences]
                        + [store.exists("x", store.truth(store.var("x"))),
                           store.forall("x", store.truth(store.var("x")))])
    if schema_instances:
        chains = schema_chains(store, model, unary_pool, pair_pool, reflect)
        closure.add([link for ch in chains for link in schemas.links(store, ch.members)], "schema instances")
        for atom in closure.truth_atoms():
            a = store.decode(atom.arg.value) if isinstance(atom.arg, Numeral) else None
            if a is not None:
                closure.add([store.iff(atom, a), store.iff(n(atom), a)], "truth rule instances")

    params = {
        "kind": "model", "depth": depth, "reflect": reflect, "liar": liar, "truthteller": truthteller,
        "complete_quantifiers": complete_quantifiers, "schema_instances": schema_instances, "cap": cap,
    }
    frag = _finish(store, model, closure, complete_quantifiers=complete_quantifiers,
                   depth=depth, reflect=reflect, base=base_sentences, levels=levels,
                   pair_pool=pair_pool, unary_pool=unary_pool, designated=designated, params=params)
    log.info("fragment: %d sentences, %d true object sentences", len(frag), len(frag.z))
    return frag


def _base_only(store, model, base):
    return [parse(b, store, model.vocabulary) if isinstance(b, str) else b for b in base]


def schema_chains(store: Store, model: FiniteModel, unary_pool, pair_pool, reflect: int) -> list[schemas.Chain]:
    """Every schema instance a fragment is built to contain."""
    chains = []
    if reflect >= 1:
        for a in unary_pool:
            chains.append(schemas.reflection_chain(store, a, reflect))
            chains.append(schemas.negation_chain(store, a))
    for a in pair_pool:
        for b in pair_pool:
            chains.extend(schemas.pair_chains(store, a, b))
    unary_preds = [p for p, d in model.predicates.items() if d.arity == 1]
    for pred in unary_preds + ["T"]:
        chains.extend(schemas.quantifier_chains(store, pred))
    for pred in model.predicates:
        chains.extend(schemas.prefix_chains(store, model, pred))
    return chains
