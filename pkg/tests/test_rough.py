import random

import pytest

from groupmcda.errors import DecisionError
from groupmcda.model import Criterion
from groupmcda.rough import (
    SortingTable,
    classify_with_rules,
    dominance_cones,
    induce_rules,
    quality_gamma,
    union_approximations,
)


def table_of(values: dict[str, list[float]], classes: dict[str, int], directions=None, m=0):
    directions = directions or []
    n_crit = len(next(iter(values.values())))
    criteria = tuple(
        Criterion(f"c{j}", direction=directions[j] if j < len(directions) else "benefit")
        for j in range(n_crit)
    )
    return SortingTable(
        objects=tuple(sorted(values)),
        criteria=criteria,
        values={o: {c.id: v for c, v in zip(criteria, vals)} for o, vals in values.items()},
        class_assignment=classes,
        num_classes=m,
    )


def random_table(rng: random.Random) -> SortingTable:
    n_obj = rng.randint(2, 10)
    n_crit = rng.randint(1, 3)
    m = rng.randint(2, 3)
    values = {
        f"o{i}": [float(rng.randint(0, 4)) for _ in range(n_crit)] for i in range(n_obj)
    }
    classes = {f"o{i}": rng.randint(1, m) for i in range(n_obj)}
    directions = [rng.choice(["benefit", "cost"]) for _ in range(n_crit)]
    return table_of(values, classes, directions, m)


def dominates(table: SortingTable, y: str, x: str) -> bool:
    """Independent pairwise check: y weakly better than x everywhere."""
    for c in table.criteria:
        vy, vx = table.values[y][c.id], table.values[x][c.id]
        if c.direction == "cost" and vy > vx:
            return False
        if c.direction != "cost" and vy < vx:
            return False
    return True


def oracle_approximations(table: SortingTable):
    """Brute-force pairwise-consistency oracle, no cone sets involved."""
    out = {}
    m = table.num_classes
    objs = table.objects
    cls = table.class_assignment
    for t in range(2, m + 1):
        lower = {
            x for x in objs if all(cls[y] >= t for y in objs if dominates(table, y, x))
        }
        upper = {
            x for x in objs if any(cls[y] >= t for y in objs if dominates(table, x, y))
        }
        out[("atLeast", t)] = (lower, upper)
    for t in range(1, m):
        lower = {
            x for x in objs if all(cls[y] <= t for y in objs if dominates(table, x, y))
        }
        upper = {
            x for x in objs if any(cls[y] <= t for y in objs if dominates(table, y, x))
        }
        out[("atMost", t)] = (lower, upper)
    return out


# -- cones ---------------------------------------------------------------------


def test_single_object_cones_reflexive():
    t = SortingTable(
        objects=("x",),
        criteria=(Criterion("c1"),),
        values={"x": {"c1": 1.0}},
        class_assignment={"x": 1},
        num_classes=2,
    )
    assert dominance_cones(t, "x") == ({"x"}, {"x"})


def test_strictly_better_object_in_cone():
    t = table_of({"x": [1.0], "y": [2.0]}, {"x": 1, "y": 2})
    d_plus, d_minus = dominance_cones(t, "x")
    assert d_plus == {"x", "y"} and d_minus == {"x"}


def test_incomparable_pair_cone():
    t = table_of({"x": [1.0, 2.0], "y": [2.0, 1.0]}, {"x": 1, "y": 2})
    d_plus, _ = dominance_cones(t, "x")
    assert d_plus == {"x"}


def test_unknown_object_rejected():
    t = table_of({"x": [1.0], "y": [2.0]}, {"x": 1, "y": 2})
    with pytest.raises(DecisionError) as err:
        dominance_cones(t, "zz")
    assert err.value.code == "UNKNOWN_OBJECT"


# -- approximations --------------------------------------------------------------


def test_consistent_table_exact_approximations():
    t = table_of({"o1": [1.0], "o2": [2.0], "o3": [3.0]}, {"o1": 1, "o2": 2, "o3": 3})
    for approx in union_approximations(t):
        union = {
            o
            for o in t.objects
            if (
                t.class_assignment[o] >= approx.class_index
                if approx.direction == "atLeast"
                else t.class_assignment[o] <= approx.class_index
            )
        }
        assert approx.lower == approx.upper == frozenset(union)
        assert approx.boundary == frozenset()


def test_inconsistent_pair_in_boundary():
    t = table_of({"x": [2.0], "y": [1.0]}, {"x": 1, "y": 2})
    approx = next(
        a for a in union_approximations(t) if a.direction == "atLeast" and a.class_index == 2
    )
    assert approx.boundary == {"x", "y"}


def test_all_top_class_lower_is_everything():
    t = table_of({"x": [1.0], "y": [2.0]}, {"x": 2, "y": 2})
    approx = next(
        a for a in union_approximations(t) if a.direction == "atLeast" and a.class_index == 2
    )
    assert approx.lower == {"x", "y"}


def test_gamma_values():
    consistent = table_of({"o1": [1.0], "o2": [2.0]}, {"o1": 1, "o2": 2})
    assert quality_gamma(consistent) == 1.0
    broken = table_of({"x": [2.0], "y": [1.0]}, {"x": 1, "y": 2})
    assert quality_gamma(broken) == 0.0
    third = table_of({"x": [2.0], "y": [1.0], "z": [5.0]}, {"x": 1, "y": 2, "z": 2})
    assert quality_gamma(third) == pytest.approx(1 / 3)


def test_approximations_match_oracle_randomized():
    rng = random.Random(43)
    for _ in range(60):
        t = random_table(rng)
        oracle = oracle_approximations(t)
        for approx in union_approximations(t):
            lower, upper = oracle[(approx.direction, approx.class_index)]
            assert approx.lower == frozenset(lower)
            assert approx.upper == frozenset(upper)
            assert approx.lower <= approx.upper
            assert approx.boundary == approx.upper - approx.lower


def test_gamma_one_iff_consistent_randomized():
    rng = random.Random(47)
    for _ in range(60):
        t = random_table(rng)
        inconsistent = any(
            dominates(t, x, y) and t.class_assignment[x] < t.class_assignment[y]
            for x in t.objects
            for y in t.objects
        )
        assert (quality_gamma(t) == 1.0) == (not inconsistent)


def test_boundary_duality_randomized():
    rng = random.Random(53)
    for _ in range(40):
        t = random_table(rng)
        approx = {(a.direction, a.class_index): a for a in union_approximations(t)}
        for tt in range(2, t.num_classes + 1):
            assert approx[("atLeast", tt)].boundary == approx[("atMost", tt - 1)].boundary


def test_relabeling_invariance():
    rng = random.Random(59)
    t = random_table(rng)
    mapping = {o: f"q{i}" for i, o in enumerate(reversed(t.objects))}
    relabeled = SortingTable(
        objects=tuple(sorted(mapping[o] for o in t.objects)),
        criteria=t.criteria,
        values={mapping[o]: t.values[o] for o in t.objects},
        class_assignment={mapping[o]: t.class_assignment[o] for o in t.objects},
        num_classes=t.num_classes,
    )
    base = {
        (a.direction, a.class_index): {mapping[o] for o in a.lower}
        for a in union_approximations(t)
    }
    moved = {
        (a.direction, a.class_index): set(a.lower) for a in union_approximations(relabeled)
    }
    assert base == moved


# -- rules -------------------------------------------------------------------------


def test_two_object_rule_induction():
    t = table_of({"o1": [1.0], "o2": [2.0]}, {"o1": 1, "o2": 2})
    rules = induce_rules(t, max_conditions=1)
    at_least = [r for r in rules if r.kind == "atLeast"]
    assert len(at_least) == 1
    rule = at_least[0]
    assert rule.class_index == 2 and rule.certain
    assert [(c.criterion, c.relation, c.threshold) for c in rule.conditions] == [("c0", ">=", 2.0)]


def test_empty_lower_approximation_no_rules():
    t = table_of({"x": [2.0], "y": [1.0]}, {"x": 1, "y": 2})
    rules = induce_rules(t)
    assert rules == []


def test_certain_rules_match_only_lower_objects_randomized():
    rng = random.Random(61)
    for _ in range(30):
        t = random_table(rng)
        lower = {
            (a.direction, a.class_index): a.lower for a in union_approximations(t)
        }
        for rule in induce_rules(t, max_conditions=len(t.criteria)):
            matched = {o for o in t.objects if rule.matches(t.values[o])}
            assert matched
            assert matched <= lower[(rule.kind, rule.class_index)]


def test_rule_coverage_equals_lower_approximation_randomized():
    rng = random.Random(67)
    for _ in range(30):
        t = random_table(rng)
        rules = induce_rules(t, max_conditions=len(t.criteria))
        for approx in union_approximations(t):
            covered: set[str] = set()
            for rule in rules:
                if rule.kind == approx.direction and rule.class_index == approx.class_index:
                    covered |= {o for o in t.objects if rule.matches(t.values[o])}
            assert covered == set(approx.lower)


# -- classification -------------------------------------------------------------


def test_classify_no_match_is_full_interval():
    assert classify_with_rules([], {"c0": 1.0}, 3) == (1, 3)


def test_classify_single_at_least_rule():
    t = table_of({"o1": [1.0], "o2": [2.0]}, {"o1": 1, "o2": 2})
    rules = induce_rules(t)
    assert classify_with_rules(rules, {"c0": 2.0}, 2) == (2, 2)


def test_training_objects_interval_contains_true_class():
    rng = random.Random(71)
    for _ in range(20):
        t = random_table(rng)
        if quality_gamma(t) < 1.0:
            continue
        rules = induce_rules(t, max_conditions=len(t.criteria))
        for o in t.objects:
            lo, hi = classify_with_rules(rules, t.values[o], t.num_classes)
            assert lo <= t.class_assignment[o] <= hi
