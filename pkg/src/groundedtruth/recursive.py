"""A second, independent evaluator for groundedness.

This does not reuse the engine's rule index or the fragment's seed lists.
It recognises seed sentences by their shape, evaluates object sentences
directly in the model, and decides membership of compounds by memoised
recursion on their components.  Agreement with the engine is checked in
the tests on every bundled configuration.
"""

from __future__ import annotations

from .fragment import Fragment
from .models import Evaluator, is_object_sentence, prefixes, variables
from .syntax import AND, EXISTS, IFF, IMP, OR, Atom, Binary, Formula, Not, Numeral, Quant, Quote, Truth, Var


class RecursiveEvaluator:
    def __init__(self, frag: Fragment, *, complete_quantifiers: bool | None = None):
        self.frag = frag
        self.store = frag.store
        self.model = frag.model
        self.truth = Evaluator(frag.model)
        self.complete = frag.complete_quantifiers if complete_quantifiers is None else complete_quantifiers
        self._object_cache: dict[int, bool] = {}

    # seeds

    def _object_true(self, f: Formula) -> bool:
        hit = self._object_cache.get(f.id)
        if hit is None:
            hit = self._object_cache[f.id] = is_object_sentence(f) and self.truth(f)
        return hit

    def _quoted_predicate(self, body: Formula):
        """For ``T(⌈P(x…)⌉)`` or ``¬T(⌈P(x…)⌉)`` return the atom ``P(x…)`` and whether T is negated."""
        negative = isinstance(body, Not)
        if negative:
            body = body.body
        if not (isinstance(body, Truth) and isinstance(body.arg, Quote)):
            return None
        inner = body.arg.body
        if isinstance(inner, Atom) and all(isinstance(a, Var) for a in inner.args):
            return inner, negative
        return None

    def _quantified_seed(self, f: Formula) -> bool:
        """Seeds that are quantified sentences about T or quoted predicates."""
        outer_negated = isinstance(f, Not)
        g = f.body if outer_negated else f
        if not isinstance(g, Quant):
            return False
        prefix, vs, body = [], [], g
        while isinstance(body, Quant):
            prefix.append(body.q)
            vs.append(body.var)
            body = body.body
        if len(prefix) == 1:
            kind = _truth_shape(body, vs[0])
            if kind is not None:
                # ∃xT(x), ∃x¬T(x), ∃xT₁(⌈T₂(ẋ)⌉) are true; ∀ versions are false
                return (prefix[0] == EXISTS) != outer_negated
        found = self._quoted_predicate(body)
        if found is None:
            return False
        atom, negative = found
        pred = self.model.predicates.get(atom.pred)
        if pred is None or [a.ident for a in atom.args] != vs or len(set(vs)) != len(vs):
            return False
        if tuple(vs) != variables(pred.arity) or tuple(prefix) not in prefixes(pred.arity):
            return False
        obj = atom if not negative else self.store.neg(atom)
        for q, v in reversed(list(zip(prefix, vs))):
            obj = self.store.quant(q, v, obj)
        value = self.truth(obj)
        if outer_negated:
            return self.complete and not value
        return value

    def is_seed(self, f: Formula, codes: frozenset) -> bool:
        if self._object_true(f):
            return True
        if not codes:
            return False
        if isinstance(f, Truth) and isinstance(f.arg, Numeral):
            return f.arg.value in codes and self.store.decode(f.arg.value) is not None
        if isinstance(f, Not) and isinstance(f.body, Truth) and isinstance(f.body.arg, Numeral):
            a = self.store.decode(f.body.arg.value)
            if a is None:
                return False
            na = self.store.lookup(("not", a.id))
            return na is not None and na in self.frag and self.store.encode(na) in codes
        return self._quantified_seed(f)

    # recursion

    def derivable(self, f: Formula, codes: frozenset, memo: dict) -> bool:
        hit = memo.get(f.id)
        if hit is not None:
            return hit
        result = f in self.frag and (self.is_seed(f, codes) or self._by_rule(f, codes, memo))
        memo[f.id] = result
        return result

    def _by_rule(self, f, codes, memo) -> bool:
        d = lambda g: g is not None and self.derivable(g, codes, memo)  # noqa: E731
        neg = self.frag.negation
        if isinstance(f, Binary):
            a, b = f.left, f.right
            ta, tb, fa, fb = d(a), d(b), d(neg(a)), d(neg(b))
            if f.op == OR:
                return (ta and (tb or fb)) or (fa and tb)
            if f.op == AND:
                return ta and tb
            if f.op == IMP:
                return (fa and (tb or fb)) or (ta and tb)
            if f.op == IFF:
                return (ta and tb) or (fa and fb)
        if isinstance(f, Not):
            g = f.body
            if isinstance(g, Not):
                return d(g.body)
            if isinstance(g, Binary):
                a, b = g.left, g.right
                ta, tb, fa, fb = d(a), d(b), d(neg(a)), d(neg(b))
                if g.op == OR:
                    return fa and fb
                if g.op == AND:
                    return (fa and (tb or fb)) or (ta and fb)
                if g.op == IMP:
                    return ta and fb
                if g.op == IFF:
                    return (ta and fb) or (fa and tb)
        return False

    def step(self, codes: frozenset) -> frozenset:
        memo: dict[int, bool] = {}
        return frozenset(self.store.encode(f) for f in self.frag.universe if self.derivable(f, codes, memo))

    def least_fixpoint(self) -> frozenset:
        u = self.step(frozenset())
        while True:
            v = self.step(u)
            if v == u:
                return u
            u = v

    def negation_derivable(self, f: Formula, codes: frozenset, memo: dict) -> bool:
        """Would ``¬f`` be in ``L(U)``?  Works even when ``¬f`` is outside the universe."""
        n = self.store.neg(f)
        if n in self.frag:
            return self.derivable(n, codes, memo)
        return self.is_seed(n, codes) or self._by_rule(n, codes, memo)

    def classify_all(self) -> dict[int, str]:
        """Verdict for every universe sentence, keyed by code."""
        fixed = self.least_fixpoint()
        memo: dict[int, bool] = {}
        out = {}
        for f in self.frag.universe:
            if self.derivable(f, fixed, memo):
                out[self.store.encode(f)] = "GroundedTrue"
            elif self.negation_derivable(f, fixed, memo):
                out[self.store.encode(f)] = "GroundedFalse"
            else:
                out[self.store.encode(f)] = "Ungrounded"
        return out


def _truth_shape(body: Formula, var: str):
    """Recognise ``T(x)``, ``¬T(x)`` and ``T₁(⌈T₂(ẋ)⌉)`` over the bound variable."""
    inner = body.body if isinstance(body, Not) else body
    if not isinstance(inner, Truth):
        return None
    arg = inner.arg
    if isinstance(arg, Var) and arg.ident == var:
        return "T"
    if isinstance(arg, Quote):
        q = arg.body
        q = q.body if isinstance(q, Not) else q
        if isinstance(q, Truth) and isinstance(q.arg, Var) and q.arg.ident == var:
            return "TT"
    return None

