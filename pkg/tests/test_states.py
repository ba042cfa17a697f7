from fractions import Fraction

import numpy as np
import pytest
import sympy
from sympy.solvers.simplex import lpmax

from oalg.constructors import make_boolean, make_mo
from oalg.lp import maximize, rref, solve_square
from oalg.states import (FULL, StatelessError, StatePolytope, TooLarge, exists_separating_state,
                         fraction_str, is_order_determining, maximize_state, state_constraints,
                         vertices)

F = Fraction


# exact linear algebra and LP

def test_rref_and_solve():
    rows, rhs, piv, ok = rref([[1, 2], [2, 4], [0, 1]], [3, 6, 1])
    assert ok and piv == [0, 1] and rhs == [1, 1]
    assert not rref([[1, 1], [1, 1]], [0, 1])[3]
    assert solve_square([[2, 1], [1, 3]], [3, 5]) == [F(4, 5), F(7, 5)]
    assert solve_square([[1, 1], [2, 2]], [1, 2]) is None


def test_maximize_statuses():
    assert maximize([1, 1], [[1, 0], [0, 1]], [2, 3]).value == 5
    assert maximize([1], [[-1]], [-1]).status == "unbounded"
    assert maximize([1], [[1], [-1]], [1, -2]).status == "infeasible"
    r = maximize([1, 1], [[-1, -1], [1, 0], [0, 1]], [F(-1, 2), F(1, 2), F(1, 3)])
    assert r.status == "optimal" and r.value == F(5, 6)


@pytest.mark.parametrize("seed", range(25))
def test_maximize_matches_sympy(seed):
    rng = np.random.default_rng(seed)
    m, n = rng.integers(2, 6), rng.integers(2, 5)
    G = rng.integers(-3, 5, size=(m, n)).tolist()
    h = rng.integers(-2, 8, size=m).tolist()
    c = rng.integers(-2, 5, size=n).tolist()
    ys = sympy.symbols(f"y0:{n}")
    cons = [sum(g * y for g, y in zip(row, ys)) <= hv for row, hv in zip(G, h)] + [y >= 0 for y in ys]
    ours = maximize(c, G, h)
    try:
        value, _ = lpmax(sum(ci * y for ci, y in zip(c, ys)), cons)
    except sympy.solvers.simplex.InfeasibleLPError:
        assert ours.status == "infeasible"
        return
    except sympy.solvers.simplex.UnboundedLPError:
        assert ours.status == "unbounded"
        return
    assert ours.status == "optimal"
    assert ours.value == F(int(value.p), int(value.q))
    assert all(sum(g * v for g, v in zip(row, ours.x)) <= hv for row, hv in zip(G, h))


# state polytope

def test_constraint_counts(tables):
    assert len(state_constraints(tables["boolean-3"]).equalities) == 8
    assert len(state_constraints(tables["mo-2"]).equalities) == 4
    assert len(state_constraints(tables["loop3"]).equalities) == 17


@pytest.mark.parametrize("name,count", [("boolean-1", 1), ("boolean-3", 3), ("mo-2", 4), ("mo-3", 8),
                                         ("loop3", 5), ("pasting-2", 5), ("interval-111", 3)])
def test_vertex_counts(name, count, tables):
    assert len(vertices(state_constraints(tables[name]))) == count


def test_loop3_vertices_by_hand(tables):
    t = tables["loop3"]
    atoms = [t.index(x) for x in "abcdef"]
    got = {tuple(f[a] for a in atoms) for f in vertices(state_constraints(t))}
    half = F(1, 2)
    assert got == {(1, 0, 0, 1, 0, 0), (0, 0, 1, 0, 0, 1), (0, 1, 0, 0, 1, 0),
                   (0, 1, 0, 1, 0, 1), (half, 0, half, 0, half, 0)}


def _active_rank(poly, f):
    rows = [list(r) for r, _ in poly.equalities]
    for j, v in enumerate(f):
        if v in (0, 1):
            rows.append([int(i == j) for i in range(poly.size)])
    return sympy.Matrix(rows).rank()


@pytest.mark.parametrize("name", ["boolean-3", "mo-2", "mo-4", "loop3", "pasting-2"])
def test_vertices_are_extreme_states(name, tables):
    t = tables[name]
    poly = state_constraints(t)
    comp = t.order.comp
    leq = t.order.leq
    for f in vertices(poly):
        assert poly.satisfies(f)
        assert all(f[a] + f[comp[a]] == 1 for a in range(t.size))
        assert all(f[a] <= f[b] for a, b in zip(*np.nonzero(leq)))
        assert _active_rank(poly, f) == t.size


@pytest.mark.parametrize("name", ["mo-3", "loop3", "pasting-2"])
def test_lp_optima_are_attained_at_vertices(name, tables):
    t = tables[name]
    poly = state_constraints(t)
    vs = vertices(poly)
    rng = np.random.default_rng(3)
    for _ in range(20):
        c = rng.integers(-3, 4, size=t.size).tolist()
        value, f = maximize_state(poly, c)
        assert poly.satisfies(f)
        assert value == sum(ci * fi for ci, fi in zip(c, f))
        assert value == max(sum(ci * fi for ci, fi in zip(c, v)) for v in vs)


def test_vertex_cap(tables):
    with pytest.raises(TooLarge):
        vertices(state_constraints(tables["boolean-6"]))


def test_stateless_polytope():
    poly = StatePolytope(2, (((1, 0), 1), ((1, 0), 0)))
    assert not poly.feasible_system
    assert vertices(poly) == []
    with pytest.raises(StatelessError):
        maximize_state(poly, [1, 0])


# order determination

@pytest.mark.parametrize("name", ["boolean-2", "boolean-4", "mo-2", "mo-3", "mo-4", "loop3", "pasting-2"])
def test_full_state_space_is_order_determining(name, tables):
    od = is_order_determining(tables[name], FULL)
    assert od.determining and od.witness is None


def test_single_state_is_not_order_determining():
    t = make_mo(2)
    f = (F(0), F(1, 2), F(1, 2), F(1, 2), F(1, 2), F(1))
    od = is_order_determining(t, [f])
    assert not od.determining
    p, q = od.witness
    assert not t.order.leq[p, q] and f[p] == f[q]


def test_supplied_maps_must_be_states():
    with pytest.raises(ValueError):
        is_order_determining(make_boolean(1), [(F(1), F(1))])


def test_separating_state():
    t = make_mo(2)
    poly = state_constraints(t)
    f = exists_separating_state(poly, 1, 3)
    assert f is not None and f[1] > f[3]
    assert exists_separating_state(poly, 0, 1) is None


def test_fraction_str():
    assert fraction_str(F(1, 2)) == "1/2" and fraction_str(1) == "1/1"
