import functools

import pytest

from groundedtruth import Store, Valuation, build_fragment, doubling_model, load_model, outer_fixpoint

MODELS = ("one", "two", "three")
DEPTHS = (1, 2, 3)
REFLECTS = (1, 2)
CONFIGS = [(m, d, r) for m in MODELS for d in DEPTHS for r in REFLECTS]

# acceptance test name -> outcome, filled in by the acceptance module
ACCEPTANCE: dict[str, str] = {}


@functools.lru_cache(maxsize=None)
def configured(model: str, depth: int, reflect: int, liar=True, truthteller=True, complete=True):
    """Fragment, trace and valuation for a bundled model, built once per session."""
    m, base = load_model(model)
    frag = build_fragment(Store(), m, base, depth, reflect, liar=liar, truthteller=truthteller,
                          complete_quantifiers=complete)
    trace = outer_fixpoint(frag)
    return frag, trace, Valuation(frag, trace)


@functools.lru_cache(maxsize=None)
def surrogate(bound: int, depth=1, reflect=1):
    m, base = doubling_model(bound)
    frag = build_fragment(Store(), m, base, depth, reflect)
    trace = outer_fixpoint(frag)
    return frag, trace, Valuation(frag, trace)


@pytest.fixture(scope="session")
def small():
    return configured("two", 1, 1)


@pytest.fixture(scope="session")
def reflective():
    return configured("two", 2, 2)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda n: int(n.split()[0][2:])):
        terminalreporter.write_line(f"{ACCEPTANCE[name]:<4} {name}")
