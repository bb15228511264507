import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from groundedtruth.models import (
    FiniteModel, ModelError, NotAnObjectSentence, Predicate, build_basic_extension, bundled_models,
    doubling_model, evaluate, load_model, quantified_sentences, true_sentences,
)
from groundedtruth.syntax import AND, EXISTS, FORALL, IFF, IMP, OR, Atom, Binary, Not, Quant, Store, parse


def unary(ext, domain=(0, 1)):
    names = {f"e{i}": e for i, e in enumerate(domain)}
    names["a"] = domain[0]
    return FiniteModel(domain, names, {"P": Predicate(1, (frozenset(domain),), frozenset((e,) for e in ext))})


def brute_force(f, model, store):
    """Truth by expanding quantifiers into every name, then truth tables."""
    if isinstance(f, Atom):
        return tuple(model.names[a.ident] for a in f.args) in model.predicates[f.pred].extension
    if isinstance(f, Not):
        return not brute_force(f.body, model, store)
    if isinstance(f, Binary):
        a, b = brute_force(f.left, model, store), brute_force(f.right, model, store)
        return {OR: a or b, AND: a and b, IMP: (not a) or b, IFF: a == b}[f.op]
    if isinstance(f, Quant):
        vals = [brute_force(store.substitute(f.body, f.var, store.name(n)), model, store) for n in model.names]
        return all(vals) if f.q == FORALL else any(vals)
    raise TypeError(f)


def test_unary_examples():
    s = Store()
    m = unary({0})
    assert evaluate(parse("exists x. P(x)", s), m) is True
    assert evaluate(parse("forall x. P(x)", s), m) is False


def test_doubling_surrogate_forall_exists_is_false():
    s = Store()
    m, _ = doubling_model(6)
    f = parse("forall x. exists y. R(x, y)", s)
    # independent check: some x in 0..6 has no y with x = 2y
    expected = all(any(x == 2 * y for y in range(7)) for x in range(7))
    assert expected is False
    assert evaluate(f, m) is expected


@pytest.mark.parametrize("bound", [2, 3, 4, 8, 13])
def test_doubling_prefixes_are_stable(bound):
    s = Store()
    m, _ = doubling_model(bound)
    dom = range(bound + 1)
    combos = {
        "forall x. forall y. R(x, y)": all(x == 2 * y for x in dom for y in dom),
        "forall x. exists y. R(x, y)": all(any(x == 2 * y for y in dom) for x in dom),
        "exists x. forall y. R(x, y)": any(all(x == 2 * y for y in dom) for x in dom),
        "exists x. exists y. R(x, y)": any(x == 2 * y for x in dom for y in dom),
    }
    assert [evaluate(parse(t, s), m) for t in combos] == [False, False, False, True]
    assert list(combos.values()) == [False, False, False, True]


def test_truth_atoms_are_not_object_sentences():
    s = Store()
    with pytest.raises(NotAnObjectSentence):
        evaluate(parse("T(#4) | P(a)", s), unary({0}))


def test_basic_extension_depth_one_membership():
    s = Store()
    m = unary({0})
    levels = build_basic_extension(s, m, ["P(a)"], 1)
    members = {f for level in levels for f in level}
    for text in ["P(a)", "~P(a)", "P(a) | P(a)", "P(a) & P(a)", "P(a) -> P(a)", "P(a) <-> P(a)",
                 "forall x. P(x)", "exists x. P(x)", "forall x. ~P(x)", "exists x. ~P(x)"]:
        assert parse(text, s) in members, text


def test_basic_extension_depth_zero():
    s = Store()
    m = unary({0})
    levels = build_basic_extension(s, m, ["P(a)"], 0)
    assert len(levels) == 1
    assert set(levels[0]) == {parse("P(a)", s), *quantified_sentences(s, m)}


def test_basic_extension_grows_with_depth():
    s = Store()
    m, base = load_model("two")
    sizes = [sum(map(len, build_basic_extension(s, m, base, d))) for d in range(4)]
    assert sizes == sorted(sizes) and len(set(sizes)) == 4


def test_true_set_examples():
    s = Store()
    m = unary({0}, domain=(0,))
    assert parse("forall x. P(x)", s) in true_sentences([parse("forall x. P(x)", s)], m)
    contradiction = parse("P(a) & ~P(a)", s)
    assert true_sentences([contradiction], m) == []


def test_true_set_is_bivalent():
    s = Store()
    m, base = load_model("two")
    levels = build_basic_extension(s, m, base, 2)
    universe = {f for level in levels for f in level}
    truths = set(true_sentences(universe, m))
    for f in universe:
        n = s.neg(f)
        if n in universe:
            assert (f in truths) != (n in truths)


def test_argument_domains_restrict_quantifiers():
    s = Store()
    m = FiniteModel([0, 1, 2], {"a": 0, "b": 1, "c": 2},
                    {"P": Predicate(1, (frozenset({0, 1}),), frozenset({(0,), (1,)}))})
    assert evaluate(parse("forall x. P(x)", s), m) is True


@pytest.mark.parametrize("data, message", [
    ({"domain": [], "names": {}, "predicates": {}}, "empty"),
    ({"domain": [0, 1], "names": {"a": 0}, "predicates": {}}, "unnamed"),
    ({"domain": [0], "names": {"a": 5}, "predicates": {}}, "not in the domain"),
    ({"domain": [0], "names": {"a": 0}, "predicates": {"P": {"arity": 1, "extension": [[3]]}}}, "outside"),
    ({"domain": [0], "names": {"a": 0}, "predicates": {"T": {"arity": 1, "extension": []}}}, "reserved"),
    ({"domain": [0], "names": {"a": 0}, "predicates": {"P": {"extension": []}}}, "malformed"),
])
def test_model_validation(data, message):
    with pytest.raises(ModelError, match=message):
        FiniteModel.from_dict(data)


def test_model_file_roundtrip(tmp_path):
    for name in bundled_models():
        m, base = load_model(name)
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps({**m.to_dict(), "base_sentences": base}))
        again, base2 = load_model(str(path))
        assert again.to_dict() == m.to_dict() and base2 == base


def test_missing_model_file():
    with pytest.raises(ModelError):
        load_model("/nonexistent/model.json")


def test_bundled_models_cover_small_domains():
    sizes = {name: len(load_model(name)[0].domain) for name in bundled_models()}
    assert sorted(sizes.values()) == [1, 2, 3]
    arities = {p.arity for name in bundled_models() for p in load_model(name)[0].predicates.values()}
    assert arities == {1, 2}


# evaluator against quantifier expansion on random models and sentences

ST = Store()
BODIES = [parse(f"forall x. forall y. {t}", ST).body.body for t in [
    "P(x)", "~P(x)", "R(x, y)", "R(y, x)", "P(x) -> R(x, y)", "P(y) <-> ~R(x, y)", "R(x, x) | P(y)",
]]


@st.composite
def model_and_sentence(draw):
    size = draw(st.integers(1, 3))
    dom = tuple(range(size))
    p_ext = draw(st.sets(st.sampled_from(dom)))
    r_ext = draw(st.sets(st.tuples(st.sampled_from(dom), st.sampled_from(dom))))
    names = {f"e{i}": i for i in dom}
    model = FiniteModel(dom, names, {
        "P": Predicate(1, (frozenset(dom),), frozenset((e,) for e in p_ext)),
        "R": Predicate(2, (frozenset(dom),) * 2, frozenset(r_ext)),
    })
    body = draw(st.sampled_from(BODIES))
    q1, q2 = draw(st.sampled_from([FORALL, EXISTS])), draw(st.sampled_from([FORALL, EXISTS]))
    f = ST.quant(q1, "x", ST.quant(q2, "y", body))
    if draw(st.booleans()):
        f = ST.neg(f)
    if draw(st.booleans()):
        other = ST.quant(EXISTS, "x", ST.atom("P", [ST.var("x")]))
        f = ST.binary(draw(st.sampled_from([OR, AND, IMP, IFF])), f, other)
    return model, f


@settings(max_examples=300, deadline=None)
@given(model_and_sentence())
def test_evaluator_matches_quantifier_expansion(case):
    model, f = case
    assert evaluate(f, model) == brute_force(f, model, ST)


@settings(max_examples=200, deadline=None)
@given(model_and_sentence(), model_and_sentence())
def test_de_morgan(c1, c2):
    model, a = c1
    _, b = c2
    lhs = ST.neg(ST.disj(a, b))
    rhs = ST.conj(ST.neg(a), ST.neg(b))
    assert evaluate(lhs, model) == evaluate(rhs, model)


def test_all_tuples_enumerated():
    m, _ = load_model("three")
    assert len(m.name_tuples("R")) == 9
    assert set(itertools.chain.from_iterable(m.name_tuples("R"))) == set(m.names)
