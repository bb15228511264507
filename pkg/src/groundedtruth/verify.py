"""Classification of sentences and suites that check the derived laws of truth.

Every check is restricted to the instances the fragment can decide: the
sentences an instance mentions, and their negations wherever falsity is
examined, must lie in the universe, and the parameters of an instance must
be grounded.  Reports count what was checked and what was skipped and why.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

from . import schemas
from .engine import NEGATED, FixpointTrace, rule_holds
from .fragment import Fragment, schema_chains
from .models import Evaluator, is_object_sentence, prefixes, quantify, variables
from .syntax import EXISTS, FORALL, IFF, Binary, Formula, Not, Numeral, Truth, to_text


class Verdict(str, Enum):
    TRUE = "GroundedTrue"
    FALSE = "GroundedFalse"
    UNGROUNDED = "Ungrounded"

    def flipped(self) -> "Verdict":
        if self is Verdict.TRUE:
            return Verdict.FALSE
        if self is Verdict.FALSE:
            return Verdict.TRUE
        return self


class SentenceOutsideFragment(LookupError):
    pass


class Valuation:
    """Truth, falsity and groundedness read off the least fixed point.

    A sentence is false when its negation is in ``L(U*)``.  Some universe
    members have no negation in the universe (``¬A`` for a compound A, say);
    whether their negation would be in ``L(U*)`` depends only on sentences
    that are present, so it is decided here with the same rules instead of
    growing the universe.
    """

    def __init__(self, frag: Fragment, trace: FixpointTrace):
        self.frag = frag
        self.trace = trace
        self.L = trace.saturation.L
        self._object_truth = Evaluator(frag.model)
        self.F = frozenset(f for f in frag.universe if self._negation_true(f))

    def _negation_true(self, f: Formula) -> bool:
        frag, L = self.frag, self.L
        n = frag.negation(f)
        if n is not None:
            return n in L
        if is_object_sentence(f):
            return not self._object_truth(f)
        if isinstance(f, Not):
            return f.body in L
        if isinstance(f, Binary):
            return rule_holds(NEGATED[f.op], f.left, f.right, frag.negation(f.left), frag.negation(f.right), L)
        if isinstance(f, Truth) and isinstance(f.arg, Numeral):
            a = frag.store.decode(f.arg.value)
            na = frag.negation(a) if a is not None and a in frag else None
            return na is not None and frag.code(na) in self.trace.fixpoint
        n = frag.store.lookup(("not", f.id))
        return n is not None and bool(self.trace.fixpoint) and n in set(frag.fixed_seeds)

    def classify(self, f: Formula) -> Verdict:
        if f not in self.frag:
            raise SentenceOutsideFragment(to_text(f))
        if f in self.L:
            return Verdict.TRUE
        if f in self.F:
            return Verdict.FALSE
        return Verdict.UNGROUNDED

    def grounded(self, f: Formula) -> bool:
        return f in self.L or f in self.F

    def stage(self, f: Formula) -> int | None:
        """First stage of ``L(U*)`` containing f (or ¬f for false sentences)."""
        stage_of = self.trace.saturation.stage_of
        if f in stage_of:
            return stage_of[f]
        n = self.frag.negation(f)
        return stage_of.get(n) if n is not None else None

    def grounded_sentences(self) -> list[Formula]:
        return [f for f in self.frag.universe if self.grounded(f)]

    def truth_atoms(self):
        """``(T(n), A)`` for every T-atom of the universe whose numeral names a universe sentence."""
        store = self.frag.store
        for f in self.frag.universe:
            if isinstance(f, Truth) and isinstance(f.arg, Numeral):
                a = store.decode(f.arg.value)
                if a is not None and a in self.frag:
                    yield f, a


@dataclass
class Violation:
    check: str
    message: str
    sentences: list[str] = field(default_factory=list)


@dataclass
class Report:
    suite: str
    checked: Counter = field(default_factory=Counter)
    skipped: Counter = field(default_factory=Counter)
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    table: list[dict] | None = None
    discrepancies: list[dict] = field(default_factory=list)
    sampling: dict | None = None

    @property
    def passed(self) -> bool:
        return not self.violations

    def fail(self, check: str, message: str, *sentences: Formula) -> None:
        self.violations.append(Violation(check, message, [_short(s) for s in sentences]))

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checked": dict(sorted(self.checked.items())),
            "skipped": dict(sorted(self.skipped.items())),
            "violations": [v.__dict__ for v in self.violations],
            "notes": list(self.notes),
            "table": self.table,
            "discrepancies": self.discrepancies,
            "sampling": self.sampling,
        }

    def to_text(self) -> str:
        lines = [f"suite {self.suite}: {'ok' if self.passed else 'VIOLATIONS'}"]
        width = max((len(k) for k in list(self.checked) + list(self.skipped)), default=0)
        for k, v in sorted(self.checked.items()):
            lines.append(f"  checked  {k:<{width}}  {v:>8}")
        for k, v in sorted(self.skipped.items()):
            lines.append(f"  skipped  {k:<{width}}  {v:>8}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        if self.sampling:
            lines.append(f"  sampled {self.sampling['kept']} of {self.sampling['total']} (seed {self.sampling['seed']})")
        if self.table and self.suite == "quantifier-table":
            lines.extend("  " + row for row in _table_text(self.table))
        elif self.table:
            lines.extend("  " + ", ".join(f"{k} {v}" for k, v in row.items()) for row in self.table)
        for d in self.discrepancies:
            lines.append(f"  differs from printed table: {d['form']} {d['prefix']} "
                         f"printed {d['printed']} derived {d['derived']}")
        for v in self.violations[:50]:
            lines.append(f"  violation [{v.check}] {v.message}")
            lines.extend(f"      {s}" for s in v.sentences)
        if len(self.violations) > 50:
            lines.append(f"  … {len(self.violations) - 50} more violations")
        return "\n".join(lines)


def _short(f: Formula, limit: int = 160) -> str:
    text = to_text(f)
    return text if len(text) <= limit else text[:limit] + "…"


def _sample(items: list, limit: int | None, seed: int, report: Report) -> list:
    if limit is None or len(items) <= limit:
        return items
    kept = random.Random(seed).sample(items, limit)
    report.sampling = {"total": len(items), "kept": limit, "seed": seed}
    return kept


# T-rule

def t_rule_suite(val: Valuation, *, limit: int | None = None, seed: int = 0) -> Report:
    """``T(⌈A⌉) ↔ A`` is true and ``¬T(⌈A⌉) ↔ A`` false for grounded A.

    Also checks that ``T(⌈A⌉)`` always has the same status as A.
    """
    report = Report("t-rule")
    frag, store = val.frag, val.frag.store
    atoms = _sample(list(val.truth_atoms()), limit, seed, report)
    for t_atom, a in atoms:
        report.checked["transparency"] += 1
        if val.classify(t_atom) != val.classify(a):
            report.fail("transparency", f"T(⌈A⌉) is {val.classify(t_atom).value}, A is {val.classify(a).value}",
                        t_atom, a)
        not_t = frag.negation(t_atom)
        if not_t is not None:
            report.checked["negated transparency"] += 1
            if val.classify(not_t) != val.classify(a).flipped():
                report.fail("negated transparency", "¬T(⌈A⌉) does not have the opposite status of A", not_t, a)
        if not val.grounded(a):
            report.skipped["A ungrounded"] += 1
            continue
        x = store.lookup((IFF, t_atom.id, a.id))
        y = store.lookup((IFF, not_t.id, a.id)) if not_t is not None else None
        if x is None or x not in frag or y is None or y not in frag:
            report.skipped["instance not in fragment"] += 1
            continue
        report.checked["T(A) <-> A true"] += 1
        if val.classify(x) is not Verdict.TRUE:
            report.fail("T(A) <-> A true", f"instance is {val.classify(x).value}", x)
        report.checked["~T(A) <-> A false"] += 1
        if val.classify(y) is not Verdict.FALSE:
            report.fail("~T(A) <-> A false", f"instance is {val.classify(y).value}", y)
    return report


# compositional laws

def rule_suite(val: Valuation, *, limit: int | None = None, seed: int = 0) -> Report:
    """Compositional behaviour of truth on the grounded part of the fragment."""
    report = Report("rules")
    frag = val.frag
    L, F = val.L, val.F
    sentences = _sample(list(frag.universe), limit, seed, report)
    for f in sentences:
        if not val.grounded(f):
            continue
        n = frag.negation(f)
        if n is None:
            report.skipped["negation not in fragment"] += 1
            continue
        nn = frag.negation(n)
        if nn is not None:
            report.checked["double negation"] += 1
            if (nn in L) != (f in L):
                report.fail("double negation", "¬¬A is true exactly when A is", nn, f)
        report.checked["negation"] += 1
        if (f in L) != (n in F) or (f in F) != (n in L):
            report.fail("negation", "A is true iff ¬A is false and false iff ¬A is true", f, n)
    for f in sentences:
        if not isinstance(f, Binary):
            continue
        a, b = f.left, f.right
        if not (val.grounded(a) and val.grounded(b)):
            report.skipped["component ungrounded"] += 1
            continue
        ta, tb = a in L, b in L
        expected = {"or": ta or tb, "and": ta and tb, "imp": (not ta) or tb, "iff": ta == tb}[f.op]
        name = {"or": "disjunction", "and": "conjunction", "imp": "implication", "iff": "biconditional"}[f.op]
        report.checked[name] += 1
        if (f in L) != expected or (f in F) != (not expected):
            report.fail(name, f"compound should be {'true' if expected else 'false'}", f, a, b)
    _truth_quantifiers(val, report)
    _nested_truth_quantifiers(val, report)
    _quoted_predicate_quantifiers(val, report)
    return report


def _quantifier_law(val, report, check, some, every, instances):
    """Relate a quantified sentence to its instances inside the fragment.

    The fragment holds only part of the domain, so a quantified sentence
    can be true (or false) because of an instance that lies outside it.
    What a sub-domain can refute is checked: a true instance makes ``∃``
    true, a false one makes ``∀`` false, a false ``∃`` has only false
    instances and a true ``∀`` only true ones.  A grounded sentence whose
    deciding witness is missing is counted as skipped.
    """
    L, F = val.L, val.F
    if not instances:
        report.skipped[f"{check}: no grounded instances (vacuous)"] += 1
        report.notes.append(f"{check}: no instances in the fragment, law holds vacuously")
        return
    for sentence, is_exists in ((some, True), (every, False)):
        if sentence is None or sentence not in val.frag or not val.grounded(sentence):
            report.skipped[f"{check}: quantified sentence not grounded"] += 1
            continue
        # the status a witness forces, and the status every instance must share otherwise
        forcing, uniform = (L, F) if is_exists else (F, L)
        forced_here, uniform_here = (sentence in L, sentence in F) if is_exists else (sentence in F, sentence in L)
        witness = any(i in forcing for i in instances)
        report.checked[check] += 1
        symbol = "∃" if is_exists else "∀"
        if witness and not forced_here:
            report.fail(check, f"{symbol} ignores a deciding instance", sentence)
        elif uniform_here and not all(i in uniform for i in instances):
            report.fail(check, f"{symbol} disagrees with one of its {len(instances)} instances", sentence)
        elif forced_here and not witness:
            report.skipped[f"{check}: witness outside fragment"] += 1


def _code_domain(val: Valuation) -> list[tuple[Truth, Formula]]:
    """T-atoms ``T(n)`` with n the code of a grounded sentence (the relativized N_T)."""
    return [(t, a) for t, a in val.truth_atoms() if val.grounded(a)]


def _truth_quantifiers(val: Valuation, report: Report) -> None:
    store, frag = val.frag.store, val.frag
    x = store.var("x")
    domain = _code_domain(val)
    report.notes.append(f"truth quantifiers range over {len(domain)} codes of grounded sentences")
    for negated in (False, True):
        body = store.truth(x)
        if negated:
            body = store.neg(body)
        instances = []
        for t_atom, _ in domain:
            inst = frag.negation(t_atom) if negated else t_atom
            if inst is not None and inst in frag:
                instances.append(inst)
        label = "quantified ~T" if negated else "quantified T"
        _quantifier_law(val, report, label, store.exists("x", body), store.forall("x", body), instances)


def _nested_truth_quantifiers(val: Valuation, report: Report) -> None:
    store, frag = val.frag.store, val.frag
    x = store.var("x")
    domain = _code_domain(val)
    for inner_neg, outer_neg in itertools.product((False, True), repeat=2):
        inner = store.truth(x)
        if inner_neg:
            inner = store.neg(inner)
        outer = store.truth(store.quote(inner))
        if outer_neg:
            outer = store.neg(outer)
        instances = []
        for t_atom, _ in domain:
            b = frag.negation(t_atom) if inner_neg else t_atom
            if b is None:
                continue
            num = store.lookup(("num", frag.code(b)))
            t_b = store.lookup(("T", num.id)) if num is not None else None
            if t_b is None or t_b not in frag:
                continue
            inst = frag.negation(t_b) if outer_neg else t_b
            if inst is not None and inst in frag:
                instances.append(inst)
        label = f"quantified {'~' if outer_neg else ''}T({'~' if inner_neg else ''}T)"
        _quantifier_law(val, report, label, store.exists("x", outer), store.forall("x", outer), instances)


def _nested(prefix, lists, test, tuple_so_far=()):
    if not prefix:
        return test(tuple_so_far)
    values = (_nested(prefix[1:], lists[1:], test, tuple_so_far + (v,)) for v in lists[0])
    return all(values) if prefix[0] == FORALL else any(values)


def _dual(prefix):
    return tuple(EXISTS if q == FORALL else FORALL for q in prefix)


def _quoted_predicate_quantifiers(val: Valuation, report: Report) -> None:
    store, frag, model = val.frag.store, val.frag, val.frag.model
    for pred, spec in model.predicates.items():
        vs = variables(spec.arity)
        p = store.atom(pred, [store.var(v) for v in vs])
        tp = store.truth(store.quote(p))
        lists = [model.names_in(d) for d in spec.arg_domains]
        instance = {}
        for names in itertools.product(*lists):
            t_atom = store.true_of(store.atom(pred, [store.name(n) for n in names]))
            instance[names] = (t_atom, frag.negation(t_atom) if t_atom in frag else None)
        for negated in (False, True):
            check = "quantified ~T(P)" if negated else "quantified T(P)"
            body = store.neg(tp) if negated else tp
            for prefix in prefixes(spec.arity):
                sentence = quantify(store, prefix, vs, body)
                insts = {k: (v[1] if negated else v[0]) for k, v in instance.items()}
                if any(i is None or i not in frag for i in insts.values()):
                    report.skipped[f"{check}: instance not in fragment"] += 1
                    continue
                if sentence not in frag or not val.grounded(sentence):
                    report.skipped[f"{check}: quantified sentence not grounded"] += 1
                    continue
                should_true = _nested(prefix, lists, lambda t: insts[t] in val.L)
                should_false = _nested(_dual(prefix), lists, lambda t: insts[t] in val.F)
                report.checked[check] += 1
                if (sentence in val.L) != should_true or (sentence in val.F) != should_false:
                    report.fail(check, "quantified sentence disagrees with its instances", sentence)


# equivalence chains

def check_chain(val: Valuation, chain: schemas.Chain, report: Report, label: str | None = None) -> None:
    """All members share one grounded status and every adjacent link is true."""
    frag, store = val.frag, val.frag.store
    label = label or chain.family
    if any(not val.grounded(p) for p in chain.params if p in frag):
        report.skipped[f"{label}: parameter ungrounded"] += 1
        return
    if any(p not in frag for p in chain.params) or any(m not in frag for m in chain.members):
        report.skipped[f"{label}: member not in fragment"] += 1
        return
    report.checked[label] += 1
    verdicts = [val.classify(m) for m in chain.members]
    if len(set(verdicts)) != 1 or verdicts[0] is Verdict.UNGROUNDED:
        report.fail(label, "members disagree: " + ", ".join(v.value for v in verdicts), *chain.members)
        return
    for a, b in zip(chain.members, chain.members[1:]):
        link = store.lookup((IFF, a.id, b.id))
        if link is None or link not in frag:
            report.skipped[f"{label}: link not in fragment"] += 1
            continue
        report.checked[f"{label} links"] += 1
        if val.classify(link) is not Verdict.TRUE:
            report.fail(label, f"link is {val.classify(link).value}", link)


def equivalence_suite(val: Valuation, *, limit: int | None = None, seed: int = 0) -> Report:
    """Every schema chain the fragment was built with agrees member by member."""
    frag = val.frag
    report = Report("equivalences")
    chains = schema_chains(frag.store, frag.model, frag.unary_pool, frag.pair_pool, frag.reflect or 0)
    for ch in _sample(chains, limit, seed, report):
        check_chain(val, ch, report, label=ch.family.split(":")[0])
    return report


def universal_t_schema(val: Valuation, pred: str | None = None, **_) -> Report:
    """``T(⌈P(b…)⌉) ↔ P(b…)`` for every tuple of names in the domains of P.

    The table row per predicate says whether the universally quantified
    schema holds, judged from its instances.
    """
    frag, store = val.frag, val.frag.store
    report = Report("ut")
    preds = [pred] if pred else list(frag.model.predicates)
    report.notes.append("checked instance by instance; the universally quantified sentence itself has no seed")
    rows = []
    for p in preds:
        before = len(report.violations)
        count = 0
        for t_atom, atom in schemas.instance_pairs(store, frag.model, p):
            if t_atom not in frag or atom not in frag:
                report.skipped["instance not in fragment"] += 1
                continue
            count += 1
            report.checked[p] += 1
            if val.classify(t_atom) != val.classify(atom) or not val.grounded(atom):
                report.fail(p, "T(⌈P(b)⌉) and P(b) differ", t_atom, atom)
            link = store.lookup((IFF, t_atom.id, atom.id))
            if link is not None and link in frag:
                report.checked[f"{p} biconditional"] += 1
                if val.classify(link) is not Verdict.TRUE:
                    report.fail(p, "T(⌈P(b)⌉) ↔ P(b) is not true", link)
        rows.append({"predicate": p, "instances": count, "holds": len(report.violations) == before and count > 0})
    report.table = rows
    return report


# the x = 2y quantifier table

PRINTED_TABLE = {
    # as printed for R(x, y) meaning x = 2y over the naturals
    "T(q R) <-> q R <-> q T(R)": {"AA": False, "AE": True, "EA": False, "EE": True},
    "T(q ~R) <-> q ~R <-> q ~T(R)": {"AA": True, "AE": True, "EA": False, "EE": False},
}


def quantifier_table(val: Valuation, pred: str = "R", **_) -> Report:
    """Chain agreement and derived truth values for every two-quantifier prefix.

    Disagreements with the printed table are listed as discrepancies; they
    do not fail the report.  The member ``¬T(⌈q R⌉)``, printed in the
    negative chain, is reported for information.
    """
    frag, store = val.frag, val.frag.store
    report = Report("quantifier-table")
    if frag.model.predicates.get(pred) is None or frag.model.predicates[pred].arity != 2:
        report.skipped[f"no binary predicate {pred}"] += 1
        return report
    rows = []
    for ch in schemas.prefix_chains(store, frag.model, pred):
        check_chain(val, ch, report)
        _, _, tag, *neg = ch.family.split(":")
        form = "T(q ~R) <-> q ~R <-> q ~T(R)" if neg else "T(q R) <-> q R <-> q T(R)"
        verdicts = [val.classify(m).value if m in frag else "outside fragment" for m in ch.members]
        derived = val.classify(ch.members[1]) is Verdict.TRUE
        row = {"form": form, "prefix": tag, "members": verdicts, "derived": derived,
               "printed": PRINTED_TABLE[form][tag]}
        if neg:
            vs = variables(2)
            pos = quantify(store, [FORALL if c == "A" else EXISTS for c in tag], vs,
                           store.atom(pred, [store.var(v) for v in vs]))
            literal = store.neg(store.true_of(pos))
            row["printed middle member"] = to_text(literal)
            row["printed middle member status"] = val.classify(literal).value if literal in frag else "outside fragment"
        rows.append(row)
        if row["derived"] != row["printed"]:
            report.discrepancies.append({"form": form, "prefix": tag, "printed": row["printed"],
                                         "derived": derived})
    report.table = rows
    return report


def _table_text(rows: list[dict]) -> list[str]:
    out = [f"{'form':<30} {'prefix':<6} {'derived':<8} {'printed':<8} members"]
    for r in rows:
        out.append(f"{r['form']:<30} {r['prefix']:<6} {str(r['derived']):<8} {str(r['printed']):<8} "
                   + ", ".join(r["members"]))
    return out


SUITES = {
    "t-rule": t_rule_suite,
    "rules": rule_suite,
    "equivalences": equivalence_suite,
    "ut": universal_t_schema,
    "quantifier-table": quantifier_table,
}


def run_suites(val: Valuation, names, *, limit=None, seed=0) -> list[Report]:
    reports = []
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
        reports.append(SUITES[name](val, limit=limit, seed=seed))
    return reports


def reports_json(reports: list[Report]) -> str:
    return json.dumps({"passed": all(r.passed for r in reports), "reports": [r.to_json() for r in reports]},
                      indent=1, sort_keys=True, default=str)


def reports_text(reports: list[Report]) -> str:
    return "\n\n".join(r.to_text() for r in reports)

