from __future__ import annotations

import numpy as np
import pytest

from quadcodes.code import (
    WeightComparison,
    WeightEnumerator,
    block_trace_dot,
    build_defining_set,
    code_summary,
    codeword,
    enumerate_weights,
    formula_weights,
    hamming_weight,
    make_params,
    minimality_check,
    predicted_weight,
    table_rows,
    weight_distribution,
)
from quadcodes.errors import HypothesisViolated, SizeGuardExceeded

EXPECTED = {
    1: ((80, 5, 51), "1 + 120x^51 + 80x^54 + 42x^60"),
    2: ((80, 5, 48), "1 + 66x^48 + 80x^54 + 96x^57"),
    3: ((80, 5, 45), "1 + 24x^45 + 206x^54 + 12x^63"),
}


@pytest.mark.parametrize("k", [1, 2, 3])
def test_examples_enumeration(example_sets, k):
    D = example_sets[k]
    S = code_summary(D)
    assert (S.n, S.k, S.d) == EXPECTED[k][0]
    assert str(S.enumerator) == EXPECTED[k][1]
    assert S.is_three_weight


@pytest.mark.parametrize("k", [1, 2, 3])
def test_examples_formula(example_sets, k):
    assert str(formula_weights(example_sets[k].params)) == EXPECTED[k][1]


def test_toy_code():
    D = build_defining_set(make_params(3, 1, 1, "square"))
    assert D.n == 2
    # x^2 + y = 0 away from the origin: (1, 2) and (2, 2)
    assert D.points.tolist() == [[1, 2], [2, 2]]


def test_points_satisfy_equation(example_sets):
    D = example_sets[1]
    f, alpha = D.params.form, D.params.alpha
    for x, y in D.pairs():
        assert (f(x) + (alpha * y).trace()) % 3 == 0
    assert len({tuple(z) for z in D.points}) == D.n
    assert [tuple(z) for z in D.points] == sorted(tuple(z) for z in D.points)


def test_codeword_matches_definition(example_sets):
    D = example_sets[2]
    F1, F2 = D.params.field1, D.params.field2
    rng = np.random.default_rng(0)
    pairs = D.pairs()
    for _ in range(10):
        u, v = F1.element(int(rng.integers(81))), F2.element(int(rng.integers(3)))
        direct = [block_trace_dot((u, v), (x, y)) for x, y in pairs]
        assert codeword(D, u, v).tolist() == direct


@pytest.mark.parametrize("k", [1, 2, 3])
def test_predicted_weight_exhaustive(example_sets, k):
    D = example_sets[k]
    F1, F2 = D.params.field1, D.params.field2
    for u in F1.elements():
        for v in F2.elements():
            if u.is_zero() and v.is_zero():
                continue
            assert predicted_weight(D.params, u, v) == hamming_weight(codeword(D, u, v))


def test_predicted_weight_larger_second_block():
    P = make_params(3, 3, 2, "scaled_trace_square", alpha=[1, 1])
    D = build_defining_set(P)
    for u in P.field1.elements():
        for v in P.field2.elements():
            if u.is_zero() and v.is_zero():
                continue
            assert predicted_weight(P, u, v) == hamming_weight(codeword(D, u, v))


@pytest.mark.parametrize(
    "p,s1,s2,form",
    [(3, 2, 1, "trace_square"), (3, 3, 2, "trace_square_quarter"), (5, 2, 2, "scaled_trace_square"),
     (5, 3, 1, "trace_linear_square"), (3, 4, 1, "trace_linear_square"), (7, 2, 1, "trace_square")],
)
def test_formula_matches_enumeration(p, s1, s2, form):
    D = build_defining_set(make_params(p, s1, s2, form))
    cmp = weight_distribution(D, "both")
    assert isinstance(cmp, WeightComparison)
    assert cmp.agree, (cmp.enumerated, cmp.formula)
    W = cmp.enumerated
    assert W.as_dict()[0] == 1 and W.total == p ** (s1 + s2)


def test_table_rows_sum_to_code_size():
    for form in ("trace_square", "scaled_trace_square", "trace_square_quarter"):
        P = make_params(5, 4, 1, form)
        assert sum(r["multiplicity"] for r in table_rows(P)) == 5**5 - 1


def test_rank_zero_is_reported_not_raised():
    D = build_defining_set(make_params(3, 3, 1, "zero"))
    cmp = weight_distribution(D, "both")
    assert not cmp.agree and cmp.formula is None and "rank 0" in cmp.note
    assert cmp.enumerated.k < D.s
    with pytest.raises(HypothesisViolated):
        formula_weights(D.params)


def test_workers_do_not_change_result():
    D = build_defining_set(make_params(5, 3, 2, "trace_square"))
    assert enumerate_weights(D, workers=1) == enumerate_weights(D, workers=4)


def test_enumeration_guard(example_sets):
    with pytest.raises(SizeGuardExceeded):
        enumerate_weights(example_sets[1], max_work=1000)


def test_minimality(example_sets):
    m = minimality_check(code_summary(example_sets[1]).enumerator, 3)
    assert m.ratio_ok and (m.w_min, m.w_max) == (51, 60)
    assert not minimality_check([0, 3, 9], 3).ratio_ok


def test_enumerator_string():
    W = WeightEnumerator.from_dict({0: 1, 4: 1, 6: 2}, 8, 2)
    assert str(W) == "1 + x^4 + 2x^6"
