"""Finite topologies as specialization preorders, and the TOA conditions.

A topology on a finite set is determined by its specialization preorder
x ≲ y (every open set containing x contains y); the open sets are then
exactly the up-closed sets.  Products, subspaces and continuity all
translate into order terms: the product preorder is componentwise,
closed sets are down-closed, and a map is continuous iff it is monotone.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .core import UNDEFINED, OrthoAlgebraTable
from .structure import set_sum

MAX_ENUMERATION = 5


def _frozen(a):
    a = np.array(a, dtype=bool)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FiniteTopology:
    """``spec[i, j]`` is true when every open set containing i contains j."""

    size: int
    spec: np.ndarray = field(repr=False)

    def __post_init__(self):
        spec = _frozen(self.spec)
        if spec.shape != (self.size, self.size):
            raise ValueError("preorder shape does not match the carrier")
        if not spec.diagonal().all():
            raise ValueError("preorder is not reflexive")
        if ((spec.astype(np.int64) @ spec.astype(np.int64) > 0) & ~spec).any():
            raise ValueError("preorder is not transitive")
        object.__setattr__(self, "spec", spec)

    def __eq__(self, other):
        return isinstance(other, FiniteTopology) and np.array_equal(self.spec, other.spec)

    def __hash__(self):
        return hash(self.spec.tobytes())

    @classmethod
    def discrete(cls, n: int) -> "FiniteTopology":
        return cls(n, np.eye(n, dtype=bool))

    @classmethod
    def indiscrete(cls, n: int) -> "FiniteTopology":
        return cls(n, np.ones((n, n), dtype=bool))

    @classmethod
    def from_preorder_pairs(cls, n: int, pairs: Iterable[Sequence[int]]) -> "FiniteTopology":
        """Reflexive-transitive closure of the listed (i, j) pairs."""
        rel = np.eye(n, dtype=bool)
        for i, j in pairs:
            rel[i, j] = True
        return cls(n, _closure(rel))

    def is_open(self, U: Iterable[int]) -> bool:
        mask = _mask(self.size, U)
        return not (self.spec[mask] & ~mask).any()

    def is_closed(self, F: Iterable[int]) -> bool:
        return self.is_open(set(range(self.size)) - set(F))

    def neighbourhood(self, x: int) -> frozenset[int]:
        """The smallest open set containing x."""
        return frozenset(int(j) for j in np.flatnonzero(self.spec[x]))

    def opens(self) -> list[frozenset[int]]:
        """Every open set; exponential, so only for small carriers."""
        if self.size > 16:
            raise ValueError("refusing to list the open sets of a carrier this large")
        out = []
        for bits in range(1 << self.size):
            U = [i for i in range(self.size) if bits >> i & 1]
            if self.is_open(U):
                out.append(frozenset(U))
        return out

    @property
    def is_discrete(self) -> bool:
        return bool((self.spec == np.eye(self.size, dtype=bool)).all())


def _mask(n: int, U: Iterable[int]) -> np.ndarray:
    m = np.zeros(n, dtype=bool)
    m[list(U)] = True
    return m


def _closure(rel: np.ndarray) -> np.ndarray:
    rel = rel.copy()
    for k in range(rel.shape[0]):
        rel |= rel[:, [k]] & rel[[k], :]
    return rel


def from_subbase(size: int, sets: Iterable[Iterable[int]]) -> FiniteTopology:
    """The coarsest topology in which every listed set is open."""
    spec = np.ones((size, size), dtype=bool)
    for S in sets:
        m = _mask(size, S)
        spec &= ~(m[:, None] & ~m[None, :])        # i ∈ S, j ∉ S ⇒ not i ≲ j
    return FiniteTopology(size, spec)


def product_preorder(*tops: FiniteTopology) -> np.ndarray:
    """Specialization preorder of the product topology, on index tuples in
    row-major order."""
    out = np.ones((1, 1), dtype=bool)
    for t in tops:
        out = np.kron(out, t.spec).astype(bool)
    return out


def is_hausdorff(T: FiniteTopology) -> bool:
    return T.is_discrete


def _down_closed(rel: np.ndarray, S: np.ndarray) -> bool:
    """S ⊆ X × X (n×n mask) is down-closed in the product preorder."""
    # (c,d) ≲ (a,b) iff c ≲ a and d ≲ b; S down-closed iff no (a,b) ∈ S has
    # a predecessor outside S
    spec = rel.astype(np.int64)
    pred_outside = spec.T @ (~S).astype(np.int64) @ spec   # [a,b]: #(c,d)∉S with c≲a, d≲b
    return not (S & (pred_outside > 0)).any()


@dataclass(frozen=True)
class TOAReport:
    perp_closed: bool
    comp_continuous: bool
    oplus_continuous: bool
    failures: tuple[str, ...] = ()

    def __bool__(self):
        return self.perp_closed and self.comp_continuous and self.oplus_continuous

    def to_json(self) -> dict:
        return {"is_toa": bool(self), "perp_closed": self.perp_closed,
                "comp_continuous": self.comp_continuous,
                "oplus_continuous": self.oplus_continuous, "failures": list(self.failures)}


def is_toa(table: OrthoAlgebraTable, T: FiniteTopology) -> TOAReport:
    """⊥ closed in T × T, ′ continuous, ⊕ continuous on the subspace ⊥."""
    if table.size != T.size:
        raise ValueError(f"carrier sizes differ: {table.size} vs {T.size}")
    spec = T.spec
    perp = table.perp
    comp = table.order.comp
    closed = _down_closed(spec, perp)
    comp_ok = bool((~spec | spec[np.ix_(comp, comp)]).all())
    # (a,b) ≲ (c,d) inside ⊥ must give a⊕b ≲ c⊕d
    pairs = np.argwhere(perp)
    s = table.plus[perp]
    le = spec[np.ix_(pairs[:, 0], pairs[:, 0])] & spec[np.ix_(pairs[:, 1], pairs[:, 1])]
    oplus_ok = bool((~le | spec[np.ix_(s, s)]).all())
    failures = tuple(name for name, ok in [("perp_closed", closed), ("comp_continuous", comp_ok),
                                           ("oplus_continuous", oplus_ok)] if not ok)
    return TOAReport(closed, comp_ok, oplus_ok, failures)


def derived_order_closed(T: FiniteTopology, leq: np.ndarray) -> bool:
    return _down_closed(T.spec, np.asarray(leq, dtype=bool))


@dataclass(frozen=True)
class StableOrder:
    stable: bool
    witness: frozenset[int] | None = None

    def __bool__(self):
        return self.stable


def is_stably_ordered(T: FiniteTopology, leq: np.ndarray) -> StableOrder:
    """U↑ open for every open U.

    Up-sets commute with unions and every open set is a union of minimal
    neighbourhoods, so those are the only sets tested.
    """
    leq = np.asarray(leq, dtype=bool)
    for x in range(T.size):
        U = T.neighbourhood(x)
        up = leq[list(U)].any(axis=0)
        if not T.is_open(np.flatnonzero(up)):
            return StableOrder(False, U)
    return StableOrder(True)


# ---------------------------------------------------------------------------
# enumeration


def partial_orders(n: int) -> Iterator[np.ndarray]:
    """Every labelled partial order on n points (as ≤ matrices)."""
    pairs = list(combinations(range(n), 2))

    def extend(k: int, rel: np.ndarray):
        if k == len(pairs):
            yield rel
            return
        i, j = pairs[k]
        if rel[i, j] or rel[j, i]:                # forced by transitivity
            yield from extend(k + 1, rel)
            return
        yield from extend(k + 1, rel)
        for a, b in ((i, j), (j, i)):
            new = rel.copy()
            new[a, b] = True
            new = _closure(new)
            # a forced relation on an earlier undecided pair would double count
            if any((new[p, q] or new[q, p]) and not (rel[p, q] or rel[q, p])
                   for p, q in pairs[:k]):
                continue
            if (new & new.T & ~np.eye(n, dtype=bool)).any():
                continue
            yield from extend(k + 1, new)

    yield from extend(0, np.eye(n, dtype=bool))


def _set_partitions(items: list[int]) -> Iterator[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def all_topologies(n: int) -> Iterator[FiniteTopology]:
    """Every topology on n labelled points (355 for n = 4, 6942 for n = 5)."""
    if n > MAX_ENUMERATION + 1:
        raise ValueError(f"enumeration beyond {MAX_ENUMERATION + 1} points is not supported")
    for part in _set_partitions(list(range(n))):
        k = len(part)
        for po in partial_orders(k):
            spec = np.zeros((n, n), dtype=bool)
            for a, b in zip(*np.nonzero(po)):
                for i in part[a]:
                    spec[i, part[b]] = True
            yield FiniteTopology(n, spec)


def _meet_table(leq: np.ndarray) -> np.ndarray | None:
    from .core import _greatest_bounds
    meet = _greatest_bounds(leq)
    return None if (meet == UNDEFINED).any() else meet


def _canonical(leq: np.ndarray) -> bytes:
    n = leq.shape[0]
    return min(leq[np.ix_(p, p)].tobytes() for p in map(list, permutations(range(n))))


def meet_semilattices(n: int, up_to_isomorphism: bool = True) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """(≤, ∧) for meet-semilattice orders on n points."""
    seen = set()
    for po in partial_orders(n):
        meet = _meet_table(po)
        if meet is None:
            continue
        if up_to_isomorphism:
            key = _canonical(po)
            if key in seen:
                continue
            seen.add(key)
        yield po, meet


def meet_continuous(T: FiniteTopology, meet: np.ndarray) -> bool:
    """∧ : T × T → T is monotone in the product preorder."""
    spec = T.spec
    n = T.size
    flat = meet.ravel()
    le = np.kron(spec, spec).astype(bool)
    return bool((~le | spec[np.ix_(flat, flat)]).all()) if n else True


@dataclass(frozen=True)
class SemilatticeLemmaReport:
    max_size: int
    orders: int
    topologies: int
    pairs_checked: int
    continuous_pairs: int
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"max_size": self.max_size, "orders": self.orders, "topologies": self.topologies,
                "pairs_checked": self.pairs_checked, "continuous_pairs": self.continuous_pairs,
                "violations": len(self.violations), "ok": self.ok}


def verify_semilattice_lemma(size_cap: int = 4, up_to_isomorphism: bool = True) -> SemilatticeLemmaReport:
    """Every finite topological meet-semilattice should be stably ordered.

    Runs over all semilattice orders (one per isomorphism class by default,
    which loses nothing because every topology is still enumerated) and all
    topologies on carriers of size 1..size_cap.
    """
    if size_cap > MAX_ENUMERATION:
        raise ValueError(f"size_cap {size_cap} exceeds {MAX_ENUMERATION}")
    orders = tops = checked = cont = 0
    violations = []
    for n in range(1, size_cap + 1):
        topologies = list(all_topologies(n))
        tops += len(topologies)
        for leq, meet in meet_semilattices(n, up_to_isomorphism):
            orders += 1
            for T in topologies:
                checked += 1
                if meet_continuous(T, meet):
                    cont += 1
                    st = is_stably_ordered(T, leq)
                    if not st:
                        violations.append((leq, T, st.witness))
    return SemilatticeLemmaReport(size_cap, orders, tops, checked, cont, tuple(violations))


def exhaust_toa(table: OrthoAlgebraTable) -> list[FiniteTopology]:
    """All topologies on the carrier that make ``table`` a TOA."""
    return [T for T in all_topologies(table.size) if is_toa(table, T)]


@dataclass(frozen=True)
class OplusOpenReport:
    stably_ordered: bool
    sums_open: bool

    @property
    def equivalent(self) -> bool:
        return self.stably_ordered == self.sums_open


def oplus_open_equivalence(table: OrthoAlgebraTable, T: FiniteTopology) -> OplusOpenReport:
    """Compare "U↑ open for all open U" with "U ⊕ V open for all open U, V".

    Both set maps distribute over unions, so minimal neighbourhoods suffice.
    """
    if not is_toa(table, T):
        raise ValueError("the topology does not make the table a TOA")
    stable = bool(is_stably_ordered(T, table.order.leq))
    nbhd = [T.neighbourhood(x) for x in range(T.size)]
    sums = all(T.is_open(set_sum(table, U, V)) for U in nbhd for V in nbhd)
    return OplusOpenReport(stable, sums)


def totally_non_orthogonal(table: OrthoAlgebraTable, U: Iterable[int]) -> bool:
    """No two (possibly equal) elements of U are orthogonal."""
    U = list(U)
    return not table.perp[np.ix_(U, U)].any()


def product_topology(*tops: FiniteTopology) -> FiniteTopology:
    spec = product_preorder(*tops)
    return FiniteTopology(spec.shape[0], spec)
