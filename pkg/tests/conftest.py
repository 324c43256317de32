import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rbx.base import Algebra, BaseOperator, BasisKey

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("repo", derandomize=True, deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

QX = Algebra.polynomial("x")
QXY = Algebra.polynomial("x", "y")
LAURENT = Algebra.laurent("x")
LAURENT_XY = Algebra.laurent("x", "y")
QUADRATIC = Algebra.localized(("x",), "x", (1, 0, 1))  # s = x^2 + 1

coefficients = st.integers(-5, 5).filter(bool).map(Fraction)


@st.composite
def keys(draw, alg: Algebra, fractional=None, max_exp=2, max_dp=2):
    if fractional is None:
        fractional = alg.denominator is not None and draw(st.booleans())
    exps = [draw(st.integers(0, max_exp)) for _ in alg.variables]
    if not fractional:
        return BasisKey(tuple(exps), 0)
    d = alg.denom_index
    exps[d] = draw(st.integers(0, alg.denominator.degree - 1))
    return BasisKey(tuple(exps), draw(st.integers(1, max_dp)))


@st.composite
def elements(draw, alg: Algebra, max_terms=3, **kw):
    terms = draw(st.dictionaries(keys(alg, **kw), coefficients, min_size=0, max_size=max_terms))
    return alg.element(terms)


@st.composite
def words(draw, alg: Algebra, max_len=3, fractional_tail=False, head_fractional=None, **kw):
    n = draw(st.integers(1, max_len))
    head = draw(keys(alg, fractional=head_fractional, **kw))
    tail = [draw(keys(alg, fractional=True if fractional_tail else None, **kw)) for _ in range(n - 1)]
    return (head, *tail)


@st.composite
def combinations(draw, ring, max_len=3, max_terms=3, fractional_tail=False):
    ws = draw(st.lists(words(ring.algebra, max_len, fractional_tail), min_size=1, max_size=max_terms))
    cs = draw(st.lists(coefficients, min_size=len(ws), max_size=len(ws)))
    terms = {}
    for w, c in zip(ws, cs):
        terms[w] = terms.get(w, 0) + c
    return ring.element(terms)


@pytest.fixture
def integral_x():
    return BaseOperator.integral("x")


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(acceptance.RESULTS, key=lambda c: int(c[1:])):
        ok, detail = acceptance.RESULTS[cid]
        terminalreporter.write_line(f"{cid} {'PASS' if ok else 'FAIL'} {detail}")
