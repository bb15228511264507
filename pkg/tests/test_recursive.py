import pytest

from groundedtruth.recursive import RecursiveEvaluator

from conftest import configured


@pytest.mark.parametrize("cfg", [("one", 1, 1), ("two", 2, 1), ("three", 1, 2)])
def test_oracle_least_fixpoint_matches_engine(cfg):
    frag, trace, _ = configured(*cfg)
    assert RecursiveEvaluator(frag).least_fixpoint() == trace.fixpoint


@pytest.mark.parametrize("cfg", [("one", 2, 2), ("two", 1, 1)])
def test_oracle_classification_matches_valuation(cfg):
    frag, _, val = configured(*cfg)
    oracle = RecursiveEvaluator(frag).classify_all()
    mismatches = [f for f in frag.universe if oracle[frag.code(f)] != val.classify(f).value]
    assert mismatches == []


def test_literal_mode_oracle_agrees():
    frag, trace, val = configured("two", 1, 1, complete=False)
    oracle = RecursiveEvaluator(frag).classify_all()
    assert all(oracle[frag.code(f)] == val.classify(f).value for f in frag.universe)


def test_oracle_sees_liar_as_ungrounded(small):
    frag, _, _ = small
    oracle = RecursiveEvaluator(frag).classify_all()
    assert oracle[frag.code(frag.designated["liar"])] == "Ungrounded"
    assert oracle[frag.code(frag.designated["truthteller"])] == "Ungrounded"
