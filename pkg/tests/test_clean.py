import itertools
import math

import pytest

from pseudoed.clean import (BlockAlignment, MatchOracle, alignment_cost, brute_force_clean_opt, clean_edges,
                            solve_clean_alignment)
from pseudoed.errors import GuardRefusal
from pseudoed.text import Rng

WORKED_EDGES = [(2, 4), (3, 9), (6, 4), (8, 7), (9, 6), (9, 10), (12, 12)]


def worked():
    return MatchOracle.from_edges(WORKED_EDGES, 15, 15)


def exhaustive_clean_opt(f):
    eligible = sorted(clean_edges(f))
    best = None
    for size in range(len(eligible) + 1):
        for subset in itertools.combinations(eligible, size):
            if all(a[0] < b[0] and a[1] < b[1] for a, b in zip(subset, subset[1:])):
                cost = alignment_cost(subset, f.u_len, f.v_len).total
                best = cost if best is None else min(best, cost)
    return best


def test_worked_example_costs():
    # the first alignment is a reference value; the second is the clean optimum
    b = alignment_cost([(3, 9), (12, 12)], 15, 15)
    assert (b.x_portion, b.y_portion, b.total) == (13, 2, 15)
    c = alignment_cost([(8, 7), (12, 12)], 15, 15)
    assert (c.x_portion, c.y_portion, c.total) == (13, 0, 13)


def test_worked_example_eligible_edges_and_optimum():
    f = worked()
    assert sorted(clean_edges(f)) == [(3, 9), (8, 7), (12, 12)]
    alignment, cost = brute_force_clean_opt(f)
    assert cost.total == 13 == exhaustive_clean_opt(f)
    alignment.check(f)


def test_cost_trivial_cases():
    assert alignment_cost([], 1, 7).as_dict() == {"x_portion": 1, "y_portion": 1, "total": 2}
    assert alignment_cost([(1, 1), (2, 5)], 2, 8).x_portion == 0
    assert alignment_cost([], 0, 6).total == 0


def test_zero_function_gives_empty():
    for n, m in [(1, 1), (5, 9), (20, 40)]:
        f = MatchOracle(lambda i, j: False, n, m)
        assert len(solve_clean_alignment(f, Rng(1), 10)) == 0
        alignment, cost = brute_force_clean_opt(f)
        assert len(alignment) == 0 and cost.total == n + max(0, m - 6)


def test_identity_relation_recovers_diagonal():
    for n in (1, 2, 7, 33, 64):
        f = MatchOracle(lambda i, j: i == j, n, n)
        out = solve_clean_alignment(f, Rng(n), 10)
        assert out.pairs == tuple((i, i) for i in range(1, n + 1))
        assert alignment_cost(out, n, n).total == 0


def test_output_valid_and_deterministic(nprng):
    for trial in range(40):
        n, m = int(nprng.integers(1, 30)), int(nprng.integers(1, 50))
        edges = {(int(nprng.integers(1, n + 1)), int(nprng.integers(1, m + 1)))
                 for _ in range(int(nprng.integers(0, 3 * n)))}
        f = MatchOracle.from_edges(edges, n, m)
        a = solve_clean_alignment(f, Rng(trial), 10)
        a.check(f)
        assert a == solve_clean_alignment(MatchOracle.from_edges(edges, n, m), Rng(trial), 10)


def test_oracle_counts_distinct_evaluations():
    calls = []
    f = MatchOracle(lambda i, j: calls.append((i, j)) or i == j, 3, 3)
    f(1, 1), f(1, 1), f(2, 1)
    assert f.evaluations == 2 == len(calls)
    assert f.queries == 3
    with pytest.raises(IndexError):
        f(4, 1)


def test_query_count_near_linear(nprng):
    # every subproblem scan is charged, so queries <= n * attempts * depth
    worst = 0.0
    for trial in range(20):
        n = int(nprng.integers(20, 200))
        f = MatchOracle(lambda i, j: (j - 2 * i) % 7 == 0, n, 2 * n)
        solve_clean_alignment(f, Rng(trial), 5)
        worst = max(worst, f.queries / (2 * n * 5 * math.log2(2 * n)))
    assert worst <= 2


def test_brute_force_guard():
    with pytest.raises(GuardRefusal):
        brute_force_clean_opt(MatchOracle(lambda i, j: False, 65, 3))


def test_brute_force_matches_exhaustive(nprng):
    for _ in range(60):
        n, m = int(nprng.integers(1, 12)), int(nprng.integers(1, 16))
        edges = {(int(nprng.integers(1, n + 1)), int(nprng.integers(1, m + 1)))
                 for _ in range(int(nprng.integers(0, 2 * n)))}
        f = MatchOracle.from_edges(edges, n, m)
        alignment, cost = brute_force_clean_opt(f)
        assert cost.total == exhaustive_clean_opt(f)
        assert set(alignment.pairs) <= set(clean_edges(f))


def test_worked_example_mean_cost_within_factor_three():
    f = worked()
    costs = [alignment_cost(solve_clean_alignment(f, Rng(s)), 15, 15).total for s in range(200)]
    assert sum(costs) / len(costs) <= 3 * 14


def test_block_alignment_check_rejects_crossing():
    f = worked()
    with pytest.raises(ValueError):
        BlockAlignment(((8, 7), (3, 9))).check(f)
