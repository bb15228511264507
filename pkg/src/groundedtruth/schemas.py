"""Instances of the derived equivalence schemas.

Each function returns chains: lists of sentences that should all receive
the same truth status once the truth extension is built.  A chain
``[X0, X1, …]`` is asserted by the biconditionals ``X0 ↔ X1``, ``X1 ↔ X2``
and so on, produced by :func:`links`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .models import FiniteModel, prefixes, quantify, variables
from .syntax import FORALL, Formula, Store


@dataclass(frozen=True)
class Chain:
    family: str
    members: tuple[Formula, ...]
    params: tuple[Formula, ...] = ()  # sentences the instance is built from


def links(store: Store, members) -> list[Formula]:
    return [store.iff(a, b) for a, b in zip(members, members[1:])]


def reflection_chain(store: Store, sentence: Formula, depth: int) -> Chain:
    """``T(⌈…T(⌈A⌉)…⌉) ↔ … ↔ T(⌈A⌉) ↔ A`` with ``depth`` layers of T."""
    members = [sentence]
    for _ in range(depth):
        members.append(store.true_of(members[-1]))
    return Chain("a0", tuple(reversed(members)), (sentence,))


def negation_chain(store: Store, a: Formula) -> Chain:
    t = store.true_of
    na = store.neg(a)
    return Chain("a1", (store.neg(t(a)), t(na), na), (a,))


def pair_chains(store: Store, a: Formula, b: Formula) -> list[Chain]:
    t, n = store.true_of, store.neg
    chains = []
    for family, op in (("a2", "or"), ("a3", "and"), ("a4", "imp"), ("a5", "iff")):
        chains.append(Chain(family, (store.binary(op, t(a), t(b)), t(store.binary(op, a, b)),
                                     store.binary(op, a, b)), (a, b)))
    ab = store.disj(a, b)
    chains.append(Chain("a6", (n(t(ab)), n(ab), store.conj(n(a), n(b)),
                               store.conj(t(n(a)), t(n(b))), store.conj(n(t(a)), n(t(b)))), (a, b)))
    ab = store.conj(a, b)
    chains.append(Chain("a7", (n(t(ab)), n(ab), store.disj(n(a), n(b)),
                               store.disj(t(n(a)), t(n(b))), store.disj(n(t(a)), n(t(b)))), (a, b)))
    return chains


def unary_body(store: Store, pred: str, var: str = "x") -> Formula:
    """``P(x)``, or ``T(x)`` when ``pred`` is ``"T"``."""
    if pred == "T":
        return store.truth(store.var(var))
    return store.atom(pred, [store.var(var)])


def quantifier_chains(store: Store, pred: str) -> list[Chain]:
    """Quantifier exchange chains for a unary predicate or for T itself."""
    t, n = store.true_of, store.neg
    x = "x"
    p = unary_body(store, pred, x)
    tp = store.truth(store.quote(p))  # T(⌈P(ẋ)⌉)
    all_p, some_p = store.forall(x, p), store.exists(x, p)
    all_np, some_np = store.forall(x, n(p)), store.exists(x, n(p))
    return [
        Chain("a8", (store.forall(x, tp), t(all_p), all_p, n(some_np), t(n(some_np)),
                     n(store.exists(x, n(tp))))),
        Chain("a9", (store.exists(x, tp), t(some_p), some_p, n(all_np), t(n(all_np)),
                     n(store.forall(x, n(tp))))),
        Chain("a10", (n(t(all_p)), t(n(all_p)), n(all_p), some_np, t(some_np))),
        Chain("a11", (n(t(some_p)), t(n(some_p)), n(some_p), all_np, t(all_np))),
    ]


def prefix_chains(store: Store, model: FiniteModel, pred: str) -> list[Chain]:
    """``T(⌈q…P⌉) ↔ q…P ↔ q…T(⌈P(ẋ…)⌉)`` and the same with ¬P, per prefix."""
    arity = model.predicates[pred].arity
    vs = variables(arity)
    p = store.atom(pred, [store.var(v) for v in vs])
    tp = store.truth(store.quote(p))
    chains = []
    for prefix in prefixes(arity):
        tag = "".join("A" if q == FORALL else "E" for q in prefix)
        pos = quantify(store, prefix, vs, p)
        neg = quantify(store, prefix, vs, store.neg(p))
        chains.append(Chain(f"prefix:{pred}:{tag}", (store.true_of(pos), pos, quantify(store, prefix, vs, tp))))
        chains.append(Chain(f"prefix:{pred}:{tag}:neg", (store.true_of(neg), neg,
                                                          quantify(store, prefix, vs, store.neg(tp)))))
    return chains


def instance_pairs(store: Store, model: FiniteModel, pred: str) -> list[tuple[Formula, Formula]]:
    """``(T(⌈P(b…)⌉), P(b…))`` for every tuple of names in the domains of P."""
    out = []
    for names in model.name_tuples(pred):
        atom = store.atom(pred, [store.name(b) for b in names])
        out.append((store.true_of(atom), atom))
    return out


def truth_seed_sentences(store: Store) -> tuple[list[Formula], list[Formula]]:
    """The fixed seed sentences about T itself.

    The first list is ``¬∀xT(x), ∃xT(x), ¬∀x¬T(x), ∃x¬T(x)``; the second has
    ``¬∀xT₁(⌈T₂(ẋ)⌉)`` and ``∃xT₁(⌈T₂(ẋ)⌉)`` for T₁, T₂ each T or ¬T.
    """
    n = store.neg
    tx = store.truth(store.var("x"))
    first = [n(store.forall("x", tx)), store.exists("x", tx),
             n(store.forall("x", n(tx))), store.exists("x", n(tx))]
    second = []
    for inner in (tx, n(tx)):
        quoted = store.truth(store.quote(inner))
        for outer in (quoted, n(quoted)):
            second.append(n(store.forall("x", outer)))
            second.append(store.exists("x", outer))
    return first, second


def quantified_truth_sentences(store: Store, model: FiniteModel):
    """``(q…T(⌈P(ẋ)⌉), q…P)`` and ``(q…¬T(⌈P(ẋ)⌉), q…¬P)`` pairs.

    Yields ``(sentence, object_sentence, negative)`` for every predicate and prefix.
    """
    for pred, spec in model.predicates.items():
        vs = variables(spec.arity)
        p = store.atom(pred, [store.var(v) for v in vs])
        tp = store.truth(store.quote(p))
        for prefix in prefixes(spec.arity):
            yield quantify(store, prefix, vs, tp), quantify(store, prefix, vs, p), False
            yield (quantify(store, prefix, vs, store.neg(tp)),
                   quantify(store, prefix, vs, store.neg(p)), True)


__all__ = [
    "Chain", "links", "reflection_chain", "negation_chain", "pair_chains", "quantifier_chains",
    "prefix_chains", "instance_pairs", "truth_seed_sentences", "quantified_truth_sentences",
    "unary_body",
]
