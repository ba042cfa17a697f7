"""Exact state spaces of finite orthoalgebras.

A state is a map f: L → [0, 1] with f(1) = 1 and f(a ⊕ b) = f(a) + f(b)
whenever a ⊕ b exists.  Everything here is exact ``Fraction`` arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .core import UNDEFINED, OrthoAlgebraTable
from .lp import maximize, rref, solve_square

DEFAULT_VERTEX_CAP = 40
FULL = "FULL"

State = tuple[Fraction, ...]


class StatelessError(ValueError):
    """The algebra admits no state at all."""


class TooLarge(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class StatePolytope:
    """Equalities ``sum(coef * f) = rhs`` plus the bounds 0 ≤ f ≤ 1.

    ``equalities`` holds (coefficient tuple, rhs) pairs over one variable
    per element.
    """

    size: int
    equalities: tuple[tuple[tuple[int, ...], int], ...]

    @cached_property
    def _reduced(self):
        rows = [r for r, _ in self.equalities]
        rhs = [b for _, b in self.equalities]
        A, b, piv, ok = rref(rows, rhs)
        free = [j for j in range(self.size) if j not in set(piv)]
        return A, b, piv, free, ok

    @property
    def feasible_system(self) -> bool:
        return self._reduced[4]

    @property
    def free(self) -> list[int]:
        """Variables that parametrize the affine hull of the equalities."""
        return self._reduced[3]

    def lift(self, y: Sequence[Fraction]) -> State:
        """Full state vector from values of the free variables."""
        A, b, piv, free, _ = self._reduced
        f = [Fraction(0)] * self.size
        for j, v in zip(free, y):
            f[j] = Fraction(v)
        for row, rhs, p in zip(A, b, piv):
            f[p] = rhs - sum(row[j] * f[j] for j in free)
        return tuple(f)

    @cached_property
    def inequalities(self) -> tuple[list[list[Fraction]], list[Fraction]]:
        """G y ≤ h over the free variables, excluding y ≥ 0."""
        A, b, piv, free, _ = self._reduced
        G, h = [], []
        for k in range(len(free)):
            G.append([Fraction(int(i == k)) for i in range(len(free))])
            h.append(Fraction(1))
        for row, rhs in zip(A, b):
            coef = [row[j] for j in free]
            G.append(coef)                         # f_p ≥ 0
            h.append(rhs)
            G.append([-v for v in coef])           # f_p ≤ 1
            h.append(1 - rhs)
        rows: dict = {}
        for g, hv in zip(G, h):                    # f_a ≤ 1 and f_a' ≥ 0 coincide
            norm = _normalize(g, hv)
            if norm is None:
                continue
            key, hn = norm
            rows[key] = min(hn, rows.get(key, hn))
        keys = sorted(rows)
        return [list(k) for k in keys], [rows[k] for k in keys]

    def satisfies(self, f: Sequence[Fraction]) -> bool:
        if len(f) != self.size or any(v < 0 or v > 1 for v in f):
            return False
        return all(sum(c * v for c, v in zip(row, f)) == rhs for row, rhs in self.equalities)


def state_constraints(table: OrthoAlgebraTable) -> StatePolytope:
    """f(1) = 1, f(0) = 0 and f(a) + f(b) - f(a ⊕ b) = 0 for each defined
    sum of nonzero a, b (one row per unordered pair, duplicates dropped)."""
    n = table.size
    rows = set()
    eqs = []

    def unit(*terms):
        v = [0] * n
        for idx, c in terms:
            v[idx] += c
        return tuple(v)

    eqs.append((unit((table.one, 1)), 1))
    eqs.append((unit((table.zero, 1)), 0))
    for a in range(n):
        for b in range(a, n):
            s = int(table.plus[a, b])
            if s == UNDEFINED or table.zero in (a, b):
                continue
            row = unit((a, 1), (b, 1), (s, -1))
            if row not in rows:
                rows.add(row)
                eqs.append((row, 0))
    return StatePolytope(n, tuple(eqs))


def _normalize(g: Sequence[Fraction], h: Fraction):
    lead = next((abs(v) for v in g if v != 0), None)
    if lead is None:
        return None
    return tuple(v / lead for v in g), h / lead


def vertices(poly: StatePolytope, cap: int = DEFAULT_VERTEX_CAP) -> list[State]:
    """All extreme states, by scanning basic solutions of the reduced system.

    Raises :class:`TooLarge` when the algebra has more than ``cap`` elements.
    """
    if poly.size > cap:
        raise TooLarge(f"{poly.size} variables exceeds the vertex-enumeration cap of {cap}")
    if not poly.feasible_system:
        return []
    free = poly.free
    d = len(free)
    G, h = poly.inequalities
    G = G + [[Fraction(-int(i == k)) for i in range(d)] for k in range(d)]
    h = h + [Fraction(0)] * d
    rows = {}
    for g, hv in zip(G, h):
        norm = _normalize(g, hv)
        if norm is None:
            if hv < 0:
                return []
            continue
        key, hn = norm
        rows[key] = min(hn, rows.get(key, hn))
    keys = sorted(rows)
    cons = [(list(k), rows[k]) for k in keys]

    def feasible(y):
        return all(sum(a * v for a, v in zip(g, y)) <= hv for g, hv in cons)

    found = set()
    if d == 0:
        f = poly.lift([])
        return [f] if poly.satisfies(f) else []
    for combo in combinations(range(len(cons)), d):
        y = solve_square([cons[i][0] for i in combo], [cons[i][1] for i in combo])
        if y is not None and feasible(y):
            found.add(tuple(y))
    return sorted(poly.lift(y) for y in found)


def maximize_state(poly: StatePolytope, objective: Sequence) -> tuple[Fraction, State]:
    """max Σ objective[x] f(x) over all states, by exact simplex."""
    if not poly.feasible_system:
        raise StatelessError("the state equations are inconsistent")
    A, b, piv, free, _ = poly._reduced
    obj = [Fraction(v) for v in objective]
    const = sum(obj[p] * rhs for p, rhs in zip(piv, b))
    c = [obj[j] - sum(obj[p] * row[j] for p, row in zip(piv, A)) for j in free]
    G, h = poly.inequalities
    res = maximize(c, G, h)
    if res.status == "infeasible":
        raise StatelessError("the algebra has no states")
    if res.status != "optimal":                       # bounded polytope; cannot happen
        raise RuntimeError(f"state LP returned {res.status}")
    return res.value + const, poly.lift(res.x)


def exists_separating_state(poly: StatePolytope, p: int, q: int) -> State | None:
    """A state with f(p) > f(q), maximizing f(p) - f(q), or None."""
    obj = [0] * poly.size
    obj[p] += 1
    obj[q] -= 1
    value, f = maximize_state(poly, obj)
    return f if value > 0 else None


@dataclass(frozen=True)
class OrderDetermination:
    determining: bool
    witness: tuple[int, int] | None
    states: tuple[State, ...]


def is_order_determining(table: OrthoAlgebraTable, states: Sequence[State] | str = FULL) -> OrderDetermination:
    """Whether f(p) ≤ f(q) for all f in the set forces p ≤ q.

    With ``FULL`` the set is all states: each pair p ≰ q is settled by a
    state already found or by a fresh LP.  On success the embedding
    p ↦ (f(p))_f over the states used is checked to be an order embedding.
    """
    order = table.order
    n = table.size
    poly = state_constraints(table)
    full = isinstance(states, str)
    if full:
        if states != FULL:
            raise ValueError(f"unknown state set {states!r}")
        pool: list[State] = []
    else:
        pool = [tuple(Fraction(v) for v in f) for f in states]
        for f in pool:
            if not poly.satisfies(f):
                raise ValueError("a supplied map is not a state")
    for p in range(n):
        for q in range(n):
            if order.leq[p, q]:
                continue
            if any(f[p] > f[q] for f in pool):
                continue
            f = exists_separating_state(poly, p, q) if full else None
            if f is None:
                return OrderDetermination(False, (p, q), tuple(pool))
            pool.append(f)
    _check_embedding(order, pool)
    return OrderDetermination(True, None, tuple(pool))


def _check_embedding(order, pool: Sequence[State]) -> None:
    n = order.size
    hats = [tuple(f[p] for f in pool) for p in range(n)]
    if len(set(hats)) != n:
        raise AssertionError("p ↦ p̂ is not injective")
    for p in range(n):
        for q in range(n):
            pointwise = all(x <= y for x, y in zip(hats[p], hats[q]))
            if pointwise != bool(order.leq[p, q]):
                raise AssertionError(f"p ↦ p̂ does not preserve and reflect order at ({p}, {q})")


def fraction_str(v: Fraction) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"
