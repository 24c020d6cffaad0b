import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from groupmcda.errors import DecisionError
from groupmcda.fuzzy import (
    IFV,
    ifv_accuracy,
    ifv_add,
    ifv_compare,
    ifv_scale,
    ifv_score,
    ifwa,
    ifwa_group_rank,
)
from groupmcda.model import CellValue

from conftest import build_problem

ifv_strategy = st.tuples(
    st.floats(min_value=0.0, max_value=1.0), st.floats(min_value=0.0, max_value=1.0)
).map(lambda t: IFV(t[0] * (1.0 - t[1]), t[1]))


def random_ifv(rng: random.Random) -> IFV:
    nu = rng.random()
    mu = rng.random() * (1.0 - nu)
    return IFV(mu, nu)


# -- operators ---------------------------------------------------------------


def test_add_identity_and_absorber():
    x = IFV(0.3, 0.5)
    assert ifv_add(IFV(0.0, 1.0), x) == x
    absorbed = ifv_add(IFV(1.0, 0.0), x)
    assert absorbed.mu == pytest.approx(1.0)
    assert absorbed.nu == pytest.approx(0.0)


def test_add_direct_formula():
    out = ifv_add(IFV(0.5, 0.4), IFV(0.5, 0.4))
    assert out.mu == pytest.approx(0.75)
    assert out.nu == pytest.approx(0.16)


def test_scale_identity():
    v = IFV(0.5, 0.4)
    out = ifv_scale(1.0, v)
    assert out.mu == pytest.approx(v.mu) and out.nu == pytest.approx(v.nu)


def test_scale_two_equals_self_addition():
    v = IFV(0.5, 0.4)
    out = ifv_scale(2.0, v)
    assert out.mu == pytest.approx(0.75) and out.nu == pytest.approx(0.16)


def test_scale_half_inverts_doubling():
    out = ifv_scale(0.5, IFV(0.75, 0.16))
    assert out.mu == pytest.approx(0.5) and out.nu == pytest.approx(0.4)


def test_scale_rejects_nonpositive_lambda():
    with pytest.raises(DecisionError) as err:
        ifv_scale(0.0, IFV(0.5, 0.4))
    assert err.value.code == "BAD_LAMBDA"


def test_scale_matches_repeated_addition():
    rng = random.Random(3)
    for _ in range(25):
        v = random_ifv(rng)
        n = rng.randint(1, 5)
        total = v
        for _ in range(n - 1):
            total = ifv_add(total, v)
        scaled = ifv_scale(float(n), v)
        assert scaled.mu == pytest.approx(total.mu, abs=1e-12)
        assert scaled.nu == pytest.approx(total.nu, abs=1e-12)


# -- IFWA ---------------------------------------------------------------------


def test_ifwa_idempotent():
    v = IFV(0.4, 0.3)
    out = ifwa([v, v, v], [0.2, 0.3, 0.5])
    assert out.mu == pytest.approx(v.mu) and out.nu == pytest.approx(v.nu)


def test_ifwa_worked_value():
    out = ifwa([IFV(0.6, 0.3), IFV(0.4, 0.5)], [0.5, 0.5])
    assert out.mu == pytest.approx(0.51010, abs=1e-5)
    assert out.nu == pytest.approx(0.38730, abs=1e-5)


def test_ifwa_boundary_absorption():
    out = ifwa([IFV(1.0, 0.0), IFV(0.2, 0.5)], [0.5, 0.5])
    assert out.mu == pytest.approx(1.0)


def test_ifwa_dimension_mismatch():
    with pytest.raises(DecisionError) as err:
        ifwa([IFV(0.5, 0.2)], [0.5, 0.5])
    assert err.value.code == "DIMENSION_MISMATCH"


def test_ifwa_permutation_invariance():
    rng = random.Random(5)
    values = [random_ifv(rng) for _ in range(4)]
    raw = [rng.random() + 0.1 for _ in values]
    weights = [w / sum(raw) for w in raw]
    base = ifwa(values, weights)
    paired = list(zip(values, weights))
    rng.shuffle(paired)
    permuted = ifwa([v for v, _ in paired], [w for _, w in paired])
    assert permuted.mu == pytest.approx(base.mu, abs=1e-12)
    assert permuted.nu == pytest.approx(base.nu, abs=1e-12)


@given(st.lists(ifv_strategy, min_size=1, max_size=6))
def test_ifwa_closure_and_boundedness(values):
    weights = [1.0 / len(values)] * len(values)
    out = ifwa(values, weights)
    assert 0.0 <= out.mu <= 1.0 and 0.0 <= out.nu <= 1.0
    assert out.mu + out.nu <= 1.0 + 1e-9
    assert min(v.mu for v in values) - 1e-9 <= out.mu <= max(v.mu for v in values) + 1e-9
    assert min(v.nu for v in values) - 1e-9 <= out.nu <= max(v.nu for v in values) + 1e-9


def test_ifwa_zero_weight_zero_nu_stays_total():
    out = ifwa([IFV(0.5, 0.0), IFV(0.2, 0.3)], [0.0, 1.0])
    assert out.mu == pytest.approx(0.2) and out.nu == pytest.approx(0.3)


# -- score / accuracy / compare ------------------------------------------------


def test_score_accuracy_values():
    assert ifv_score(IFV(0.5, 0.5)) == pytest.approx(0.0)
    assert ifv_accuracy(IFV(0.5, 0.5)) == pytest.approx(1.0)
    assert ifv_score(IFV(0.6, 0.3)) == pytest.approx(0.3)
    assert ifv_accuracy(IFV(0.6, 0.3)) == pytest.approx(0.9)


def test_compare_score_then_accuracy():
    assert ifv_compare(IFV(0.5, 0.2), IFV(0.4, 0.1)) == 1  # same score, higher accuracy
    assert ifv_compare(IFV(0.4, 0.1), IFV(0.5, 0.2)) == -1
    assert ifv_compare(IFV(0.3, 0.2), IFV(0.3, 0.2)) == 0
    assert ifv_compare(IFV(0.9, 0.1), IFV(0.2, 0.1)) == 1


def test_pi_is_hesitation_margin():
    assert IFV(0.6, 0.3).pi == pytest.approx(0.1)


# -- group ranking --------------------------------------------------------------


def ifs_problem(cells_by_maker, weights_by_maker, maker_weights):
    wrapped = {
        m: {a: {c: CellValue.of_ifs(*v) for c, v in row.items()} for a, row in cells.items()}
        for m, cells in cells_by_maker.items()
    }
    return build_problem(wrapped, weights_by_maker, maker_weights)


def test_single_maker_single_criterion_orders_by_compare():
    problem = ifs_problem(
        {"m1": {"a": {"c1": (0.6, 0.3)}, "b": {"c1": (0.2, 0.7)}}},
        {"m1": {"c1": 1.0}},
        {"m1": 1.0},
    )
    res = ifwa_group_rank(problem)
    assert res.order == ["a", "b"]


def test_group_rank_reuses_ifwa_example():
    problem = ifs_problem(
        {
            "m1": {"a": {"c1": (0.6, 0.3)}, "b": {"c1": (0.2, 0.7)}},
            "m2": {"a": {"c1": (0.4, 0.5)}, "b": {"c1": (0.2, 0.7)}},
        },
        {"m1": {"c1": 1.0}, "m2": {"c1": 1.0}},
        {"m1": 0.5, "m2": 0.5},
    )
    res = ifwa_group_rank(problem)
    assert res.order == ["a", "b"]
    assert res.scores["a"] == pytest.approx(0.51010 - 0.38730, abs=1e-4)
    assert res.scores["b"] == pytest.approx(-0.5)
    agg = res.diagnostics["aggregated"]["a"]
    assert agg["mu"] == pytest.approx(0.51010, abs=1e-5)
    assert agg["nu"] == pytest.approx(0.38730, abs=1e-5)


def test_identical_matrices_match_individual_order():
    cells = {"a": {"c1": (0.6, 0.2), "c2": (0.3, 0.4)}, "b": {"c1": (0.5, 0.1), "c2": (0.7, 0.2)}}
    weights = {"c1": 0.4, "c2": 0.6}
    solo = ifwa_group_rank(
        ifs_problem({"m1": cells}, {"m1": weights}, {"m1": 1.0})
    )
    both = ifwa_group_rank(
        ifs_problem(
            {"m1": cells, "m2": cells},
            {"m1": weights, "m2": weights},
            {"m1": 0.5, "m2": 0.5},
        )
    )
    assert solo.order == both.order


def test_group_rank_rejects_non_ifs_cells():
    problem = build_problem(
        {"m1": {"a": {"c1": CellValue.of_crisp(0.5)}, "b": {"c1": CellValue.of_ifs(0.2, 0.3)}}},
        {"m1": {"c1": 1.0}},
        {"m1": 1.0},
    )
    with pytest.raises(DecisionError) as err:
        ifwa_group_rank(problem)
    assert err.value.code == "NON_IFS_CELL"


def test_raising_mu_never_lowers_rank():
    rng = random.Random(9)
    for _ in range(20):
        cells = {
            a: {c: random_ifv(rng) for c in ("c1", "c2")} for a in ("a", "b", "d")
        }
        to_tuple = {
            m: {a: {c: (v.mu, v.nu) for c, v in row.items()} for a, row in cells.items()}
            for m in ("m1",)
        }
        weights = {"m1": {"c1": 0.5, "c2": 0.5}}
        problem = ifs_problem(to_tuple, weights, {"m1": 1.0})
        base = ifwa_group_rank(problem)
        target = rng.choice(["a", "b", "d"])
        crit = rng.choice(["c1", "c2"])
        v = cells[target][crit]
        raised = dict(to_tuple["m1"][target])
        raised[crit] = (min(1.0 - v.nu, v.mu + 0.2), v.nu)
        bumped = {
            "m1": {**to_tuple["m1"], target: raised}
        }
        res = ifwa_group_rank(ifs_problem(bumped, weights, {"m1": 1.0}))
        assert res.order.index(target) <= base.order.index(target)
