import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import all_extensions, dags, random_dags, sw_by_definition, undirected_components
from scanwidth.deadline import SolverTimeout, deadline_after
from scanwidth.exact import (
    InvalidPartition,
    NotANetwork,
    TooLarge,
    brute_force,
    count_memo_entries,
    dp_k_scanwidth,
    dp_run,
    dp_solve,
    fpt_level_solve,
    memo_diagnostics,
    partial_scanwidth,
    recursive_solve,
)
from scanwidth.families import extended_ladder, ladder, path, rooted_cycle
from scanwidth.graph import Digraph, mask_of
from scanwidth.layouts import scanwidth_of_extension
from scanwidth.netgen import GenConfig, generate

SOLVERS = [brute_force, recursive_solve, dp_solve]


def brute_uncapped(g):
    return brute_force(g, cap=12)


def psw_by_definition(g, left, order):
    arcs = list(g.arcs())
    placed, best = set(left), 0
    for v in order:
        placed.add(v)
        comp = next(c for c in undirected_components(placed, arcs) if v in c)
        best = max(best, sum(x for a, b, x in arcs if b in comp and a not in placed))
    return best


@pytest.mark.parametrize("solver", [brute_uncapped, recursive_solve, dp_solve])
def test_fig1a(fig, solver):
    g = fig("fig1a")
    value, ext = solver(g)
    assert value == 3
    assert scanwidth_of_extension(g, ext).value == 3


@pytest.mark.parametrize("solver", SOLVERS)
def test_small_cases(solver):
    assert solver(Digraph(2, [(0, 1)]))[0] == 1
    assert solver(path(6))[0] == 1
    assert solver(rooted_cycle(2, 2))[0] == 2


def test_fig7a_optimum(fig):
    g = fig("fig7a")
    assert brute_force(g)[0] == 5
    assert dp_solve(g)[0] == 5


def test_brute_force_matches_enumeration():
    for g in random_dags(25, seed=9, n_max=7):
        exact = min(sw_by_definition(g, e) for e in all_extensions(g))
        assert brute_force(g)[0] == exact


def test_brute_force_cap():
    with pytest.raises(TooLarge):
        brute_force(path(11))


def test_partial_scanwidth_fig4(fig):
    g = fig("fig2a")
    left = g.mask(["a", "b", "x"])
    window = g.mask(["c", "y", "z", "u", "v"])
    right = g.mask(["q", "w", "rho"])
    order = g.ids(["y", "u", "c", "z", "v"])
    assert partial_scanwidth(g, left, window, right, order) == 3
    assert psw_by_definition(g, g.ids(["a", "b", "x"]), order) == 3


def test_partial_scanwidth_degenerate(fig):
    g = fig("fig2a")
    order = g.ids(["a", "x", "b", "y", "u", "c", "z", "v", "q", "w", "rho"])
    assert partial_scanwidth(g, 0, g.all, 0, order) == scanwidth_of_extension(g, order).value
    # single-vertex window: arcs from R into the component of w in G[L + w]
    left = g.mask(["a", "x", "b", "y"])
    u = g.id_of("u")
    right = g.all & ~left & ~(1 << u)
    assert partial_scanwidth(g, left, 1 << u, right, [u]) == 2


def test_partial_scanwidth_rejects_bad_partitions(fig):
    g = fig("fig2a")
    with pytest.raises(InvalidPartition):
        partial_scanwidth(g, g.mask(["rho"]), g.all & ~g.mask(["rho"]), 0, [])
    with pytest.raises(InvalidPartition):
        partial_scanwidth(g, 0, 0, g.all, [])


def test_dp_k_feasibility(fig):
    g = fig("fig1a")
    assert dp_k_scanwidth(g, 3)[0] == 3
    assert dp_k_scanwidth(g, 2) == (None, None)
    tree = Digraph(5, [(0, 1), (0, 2), (2, 3), (2, 4)])
    assert dp_k_scanwidth(tree, 1)[0] == 1


def test_ladders():
    assert dp_solve(ladder(10))[0] == 3
    assert dp_solve(extended_ladder(8))[0] == 5


def test_memo_bounds(fig):
    g = path(7)
    run = dp_run(g)
    assert count_memo_entries(run) <= g.n
    run = dp_run(fig("fig1a"))
    assert count_memo_entries(run) <= 3 * 11**3 + 1
    assert memo_diagnostics(fig("fig1a"), run) == []


def test_memo_bound_on_larger_random_dags():
    for g in random_dags(15, seed=21, n_min=10, n_max=12):
        run = dp_run(g)
        assert memo_diagnostics(g, run) == []


def test_fpt_level():
    net = generate(GenConfig(20, 10, seed=4)).graph
    assert fpt_level_solve(net)[0] == dp_solve(net)[0]
    with pytest.raises(NotANetwork):
        fpt_level_solve(Digraph(3, [(0, 2), (1, 2)]))


def test_fpt_level_on_level1_network():
    net = generate(GenConfig(6, 1, seed=2)).graph
    assert fpt_level_solve(net)[0] == 2


def test_fig1a_fpt(fig):
    assert fpt_level_solve(fig("fig1a"))[0] == 3


def test_dp_timeout_reports_bound():
    net = generate(GenConfig(30, 25, seed=1)).graph
    with pytest.raises(SolverTimeout) as info:
        dp_solve(net, deadline=deadline_after(0.0))
    assert info.value.lower_bound >= 1


@settings(max_examples=80, deadline=None)
@given(dags(n_max=8, weighted=True))
def test_solvers_agree(g):
    results = [s(g) for s in SOLVERS]
    assert len({v for v, _ in results}) == 1
    for v, ext in results:
        assert scanwidth_of_extension(g, ext).value == v


@settings(max_examples=60, deadline=None)
@given(dags(n_max=8))
def test_dp_k_monotone(g):
    sw = brute_force(g)[0]
    for k in range(1, sw + 3):
        value, ext = dp_k_scanwidth(g, k)
        if k < sw:
            assert value is None
        else:
            assert value == sw and scanwidth_of_extension(g, ext).value == sw


@settings(max_examples=100, deadline=None)
@given(dags(n_max=8, weighted=True), st.integers(0, 2**32))
def test_partial_scanwidth_definition(g, seed):
    rng = random.Random(seed)
    topo = g.topological_order()[::-1]
    a, b = sorted(rng.sample(range(g.n + 1), 2)) if g.n > 1 else (0, 1)
    left, window = topo[:a], topo[a:b]
    right = topo[b:]
    value = partial_scanwidth(g, mask_of(left), mask_of(window), mask_of(right), window)
    assert value == psw_by_definition(g, left, window)
