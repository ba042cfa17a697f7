"""Finite orthoalgebras and effect algebras as partial sum tables.

Elements are the integers ``0..size-1``.  The partial sum is stored as a
``size x size`` integer matrix ``plus`` in which ``-1`` marks an undefined
sum, so ``plus[a, b] >= 0`` is exactly ``a ⊥ b``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

UNDEFINED = -1
DEFAULT_MAX_SIZE = 512

ORTHOALGEBRA = "orthoalgebra"
EFFECT_ALGEBRA = "effect-algebra"
MODES = (ORTHOALGEBRA, EFFECT_ALGEBRA)

# violation classes reported by validate()
STRUCTURAL = "structural"
ZERO = "zero"
ASSOCIATIVITY = "associativity"
COMPLEMENT = "complement"            # axiom (a)
SELF_ORTHOGONAL = "self_orthogonal"  # axiom (b), orthoalgebra mode
ONE_ORTHOGONAL = "one_orthogonal"    # axiom (b), effect-algebra mode


class CarrierTooLarge(ValueError):
    pass


class DomainError(ValueError):
    """An operation was applied outside the set where it is defined."""


def max_size() -> int:
    """Carrier cap; the ``OALG_MAX_SIZE`` environment variable overrides it."""
    value = os.environ.get("OALG_MAX_SIZE")
    return int(value) if value else DEFAULT_MAX_SIZE


def check_size(n: int, cap: int | None = None) -> None:
    cap = max_size() if cap is None else cap
    if n > cap:
        raise CarrierTooLarge(f"carrier of {n} elements exceeds the cap of {cap}")


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class OrthoAlgebraTable:
    """A finite carrier with a partial sum table and distinguished 0 and 1.

    The table is stored as given; nothing is symmetrized or repaired here.
    Use :func:`validate` to check the axioms.
    """

    size: int
    zero: int
    one: int
    plus: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        plus = np.array(self.plus, dtype=np.int64).reshape(self.size, self.size)
        object.__setattr__(self, "plus", _frozen(plus))
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != self.size:
                raise ValueError("need exactly one label per element")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_triples(cls, size: int, zero: int, one: int,
                     triples: Iterable[Sequence[int]],
                     labels: Sequence[str] | None = None) -> "OrthoAlgebraTable":
        """Build a table from ``(a, b, a⊕b)`` triples, one per unordered pair.

        Each triple also fills the mirrored entry unless that ordered pair
        is listed explicitly, so a file listing both ``[a,b,c]`` and
        ``[b,a,d]`` with ``c != d`` yields an asymmetric table that the
        validator flags as structural.
        """
        check_size(size)
        plus = np.full((size, size), UNDEFINED, dtype=np.int64)
        triples = [tuple(int(v) for v in t) for t in triples]
        explicit = {}
        for a, b, c in triples:
            if not (0 <= a < size and 0 <= b < size):
                raise ValueError(f"sum entry {[a, b, c]} has an operand out of range")
            if (a, b) in explicit and explicit[a, b] != c:
                raise ValueError(f"pair ({a}, {b}) listed twice with different sums")
            explicit[a, b] = c
        for (a, b), c in explicit.items():
            plus[a, b] = c
            if (b, a) not in explicit:
                plus[b, a] = c
        return cls(size, zero, one, plus, None if labels is None else tuple(labels))

    def triples(self) -> list[list[int]]:
        """Defined sums as sorted ``[a, b, c]`` triples, one per unordered pair."""
        out = []
        n = self.size
        for a in range(n):
            for b in range(a, n):
                c = int(self.plus[a, b])
                if c != UNDEFINED:
                    out.append([a, b, c])
                if a != b and self.plus[b, a] != UNDEFINED and self.plus[b, a] != c:
                    out.append([b, a, int(self.plus[b, a])])
        out.sort()
        return out

    def __eq__(self, other):
        if not isinstance(other, OrthoAlgebraTable):
            return NotImplemented
        return (self.size == other.size and self.zero == other.zero
                and self.one == other.one and self.labels == other.labels
                and np.array_equal(self.plus, other.plus))

    def __hash__(self):
        return hash((self.size, self.zero, self.one, self.plus.tobytes()))

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"OrthoAlgebraTable(size={self.size}, zero={self.zero}, one={self.one})"

    @property
    def degenerate(self) -> bool:
        """True for the one-element algebra, where 0 = 1."""
        return self.zero == self.one

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def index(self, label: str) -> int:
        if not self.labels:
            raise KeyError(label)
        return self.labels.index(label)

    def orthogonal(self, a: int, b: int) -> bool:
        return bool(self.plus[a, b] != UNDEFINED)

    def oplus(self, a: int, b: int) -> int:
        c = int(self.plus[a, b])
        if c == UNDEFINED:
            raise DomainError(f"{self.label(a)} ⊕ {self.label(b)} is undefined")
        return c

    @cached_property
    def perp(self) -> np.ndarray:
        return _frozen(self.plus != UNDEFINED)

    @cached_property
    def order(self) -> "OrderData":
        return derive_order(self)

    def with_labels(self, labels: Sequence[str] | None) -> "OrthoAlgebraTable":
        return OrthoAlgebraTable(self.size, self.zero, self.one, self.plus,
                                 None if labels is None else tuple(labels))


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple[int, ...]
    detail: str = ""

    def to_json(self) -> dict:
        out = {"axiom": self.axiom, "witness": list(self.witness)}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass(frozen=True)
class ValidationReport:
    mode: str
    violations: tuple[Violation, ...] = ()
    degenerate: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms(self) -> set[str]:
        return {v.axiom for v in self.violations}

    def first(self, axiom: str) -> Violation | None:
        return next((v for v in self.violations if v.axiom == axiom), None)

    def to_json(self) -> dict:
        return {"mode": self.mode, "ok": self.ok, "degenerate": self.degenerate,
                "violations": [v.to_json() for v in self.violations]}


def validate(table: OrthoAlgebraTable, mode: str = ORTHOALGEBRA,
             limit: int = 100) -> ValidationReport:
    """Check every orthoalgebra (or effect-algebra) axiom on ``table``.

    At most ``limit`` witnesses are kept per violation class.  Malformed
    entries (indices out of range, asymmetric pairs) are reported under
    the ``structural`` class and treated as undefined by the remaining
    checks.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    n = table.size
    found: dict[str, list[Violation]] = {}

    def report(axiom, witness, detail=""):
        bucket = found.setdefault(axiom, [])
        if len(bucket) < limit:
            bucket.append(Violation(axiom, tuple(int(w) for w in witness), detail))

    def result():
        order = [STRUCTURAL, ZERO, COMPLEMENT, SELF_ORTHOGONAL, ONE_ORTHOGONAL, ASSOCIATIVITY]
        vs = tuple(v for k in order for v in found.get(k, ()))
        return ValidationReport(mode, vs, degenerate=n >= 1 and table.zero == table.one)

    if n < 1:
        report(STRUCTURAL, (), "empty carrier")
        return result()
    if not (0 <= table.zero < n and 0 <= table.one < n):
        report(STRUCTURAL, (table.zero, table.one), "zero or one out of range")
        return result()

    plus = np.array(table.plus)
    bad = (plus < UNDEFINED) | (plus >= n)
    for a, b in zip(*np.nonzero(bad)):
        report(STRUCTURAL, (a, b), f"sum entry {int(plus[a, b])} out of range")
    plus[bad] = UNDEFINED
    asym = plus != plus.T
    for a, b in zip(*np.nonzero(np.triu(asym))):
        report(STRUCTURAL, (a, b), "asymmetric entry")
    # later checks see only entries defined both ways
    plus[asym] = UNDEFINED

    zero, one = table.zero, table.one
    for a in np.flatnonzero(plus[zero] != np.arange(n)):
        report(ZERO, (a,), "0 ⊕ a ≠ a")

    to_one = plus == one
    for a in range(n):
        comps = np.flatnonzero(to_one[a])
        if len(comps) == 0:
            report(COMPLEMENT, (a,), "no complement")
        elif len(comps) > 1:
            report(COMPLEMENT, (a, int(comps[0]), int(comps[1])), "complement not unique")

    if mode == ORTHOALGEBRA:
        for a in range(n):
            if plus[a, a] != UNDEFINED and a != zero:
                report(SELF_ORTHOGONAL, (a,), "a ⊕ a defined for a ≠ 0")
    else:
        for a in np.flatnonzero(plus[:, one] != UNDEFINED):
            if a != zero:
                report(ONE_ORTHOGONAL, (a,), "a ⊥ 1 for a ≠ 0")

    for a, b, c in _associativity_failures(plus, limit):
        report(ASSOCIATIVITY, (a, b, c), "a ⊕ (b ⊕ c) defined but (a ⊕ b) ⊕ c is not equal")
    return result()


def _associativity_failures(plus: np.ndarray, limit: int):
    """Yield triples (a, b, c) where a⊕(b⊕c) exists but (a⊕b)⊕c does not
    exist or differs.  ``plus`` is assumed symmetric, which makes this one
    bracketing direction sufficient."""
    n = plus.shape[0]
    count = 0
    safe = np.where(plus == UNDEFINED, 0, plus)
    for b in range(n):
        cs = np.flatnonzero(plus[b] != UNDEFINED)
        if len(cs) == 0:
            continue
        bc = plus[b, cs]                       # b ⊕ c for each c
        lhs = plus[:, bc]                      # a ⊕ (b ⊕ c), shape (a, c)
        ab = plus[:, b]                        # a ⊕ b
        rhs = np.where(ab[:, None] == UNDEFINED, UNDEFINED, plus[safe[:, b]][:, cs])
        bad = (lhs != UNDEFINED) & (rhs != lhs)
        if bad.any():
            for a, j in zip(*np.nonzero(bad)):
                yield int(a), b, int(cs[j])
                count += 1
                if count >= limit:
                    return


# ---------------------------------------------------------------------------
# induced order


@dataclass(frozen=True, eq=False)
class OrderData:
    """The orthoposet induced by a sum table.

    ``minus[b, a]`` is ``b ⊖ a`` when ``a ≤ b`` and ``-1`` otherwise;
    ``meet`` and ``join`` likewise hold ``-1`` where no bound exists.
    """

    leq: np.ndarray
    comp: np.ndarray
    minus: np.ndarray
    atoms: tuple[int, ...]
    zero: int
    one: int

    @property
    def size(self) -> int:
        return self.leq.shape[0]

    @cached_property
    def meet(self) -> np.ndarray:
        return _frozen(_greatest_bounds(self.leq))

    @cached_property
    def join(self) -> np.ndarray:
        return _frozen(_greatest_bounds(self.leq.T))

    def lt(self, a: int, b: int) -> bool:
        return a != b and bool(self.leq[a, b])

    def down(self, a: int) -> np.ndarray:
        return np.flatnonzero(self.leq[:, a])

    def up(self, a: int) -> np.ndarray:
        return np.flatnonzero(self.leq[a])


def derive_order(table: OrthoAlgebraTable) -> OrderData:
    """Induced order a ≤ b iff b = a ⊕ c for some c, with complements and ⊖.

    Works for effect algebras too; every element must have exactly one
    complement.
    """
    n = table.size
    plus = table.plus
    leq = np.zeros((n, n), dtype=bool)
    rows, cols = np.nonzero(plus != UNDEFINED)
    leq[rows, plus[rows, cols]] = True

    to_one = plus == table.one
    counts = to_one.sum(axis=1)
    if (counts != 1).any():
        a = int(np.flatnonzero(counts != 1)[0])
        raise ValueError(f"element {a} does not have a unique complement")
    comp = to_one.argmax(axis=1)

    # b ⊖ a = (a ⊕ b')' whenever a ≤ b
    a_plus_bc = plus[:, comp]                       # [a, b] -> a ⊕ b'
    minus = np.where(a_plus_bc == UNDEFINED, UNDEFINED, comp[np.maximum(a_plus_bc, 0)]).T
    minus = np.where(leq.T, minus, UNDEFINED)

    nonzero = [a for a in range(n) if a != table.zero]
    atoms = tuple(a for a in nonzero
                  if not any(leq[b, a] for b in nonzero if b != a))
    return OrderData(_frozen(leq), _frozen(comp), _frozen(np.ascontiguousarray(minus)),
                     atoms, table.zero, table.one)


def _greatest_bounds(leq: np.ndarray) -> np.ndarray:
    """``out[a, b]`` = greatest common lower bound of a and b under ``leq``,
    or -1.  The candidate is the lower bound with the largest down-set,
    since a greatest element strictly dominates every other lower bound."""
    n = leq.shape[0]
    dsize = leq.sum(axis=0)
    out = np.full((n, n), UNDEFINED, dtype=np.int64)
    for a in range(n):
        lb = leq[:, a][None, :] & leq.T            # [b, x]: x ≤ a and x ≤ b
        score = np.where(lb, dsize[None, :], -1)
        cand = score.argmax(axis=1)
        above = leq[:, cand].T                     # [b, x]: x ≤ cand[b]
        ok = lb.any(axis=1) & ~(lb & ~above).any(axis=1)
        out[a] = np.where(ok, cand, UNDEFINED)
    return out


def relative_complement(order: OrderData, a: int, b: int) -> int:
    """``b ⊖ a``: the unique c with b = a ⊕ c."""
    c = int(order.minus[b, a])
    if c == UNDEFINED:
        raise DomainError(f"{a} ≰ {b}, so {b} ⊖ {a} is undefined")
    return c


# ---------------------------------------------------------------------------
# joint orthogonality


def _subset_sums(table: OrthoAlgebraTable, elems: Sequence[int]):
    """Sums of all subsets by increasing size; returns (sums, first failing subset)."""
    sums: dict[frozenset, int] = {frozenset(): table.zero}
    level = {frozenset(): table.zero}
    for k in range(1, len(elems) + 1):
        nxt = {}
        for combo in combinations(elems, k):
            key = frozenset(combo)
            rest = frozenset(combo[:-1])
            prev = level[rest]
            s = int(table.plus[prev, combo[-1]])
            if s == UNDEFINED:
                return sums, combo
            nxt[key] = s
        sums.update(nxt)
        level = nxt
    return sums, None


def jointly_orthogonal(table: OrthoAlgebraTable, elems: Iterable[int]) -> bool:
    """True iff every subset of ``elems`` has an (iterated) sum."""
    elems = sorted(set(int(a) for a in elems))
    return _subset_sums(table, elems)[1] is None


def sum_of(table: OrthoAlgebraTable, elems: Iterable[int]) -> int:
    """The total sum of a jointly orthogonal set.

    Raises :class:`DomainError` naming a smallest subset without a sum.
    """
    elems = sorted(set(int(a) for a in elems))
    sums, failing = _subset_sums(table, elems)
    if failing is not None:
        raise DomainError(f"not jointly orthogonal: {list(failing)} has no sum")
    return sums[frozenset(elems)]


# ---------------------------------------------------------------------------
# sub-orthoalgebras


@dataclass(frozen=True)
class SubAlgebra:
    elements: tuple[int, ...]
    table: OrthoAlgebraTable
    index: dict = field(repr=False, default_factory=dict)


def restrict(table: OrthoAlgebraTable, elems: Iterable[int]) -> SubAlgebra:
    """The sub-orthoalgebra on ``elems``.

    Raises :class:`DomainError` unless ``elems`` contains 0 and 1 and is
    closed under ′ and under every sum defined in ``table``.
    """
    elems = tuple(sorted(set(int(a) for a in elems)))
    where = {a: i for i, a in enumerate(elems)}
    if table.zero not in where or table.one not in where:
        raise DomainError("a sub-orthoalgebra must contain 0 and 1")
    idx = np.array(elems)
    sub = table.plus[np.ix_(idx, idx)]
    defined = sub != UNDEFINED
    outside = defined & ~np.isin(sub, idx)
    if outside.any():
        i, j = np.argwhere(outside)[0]
        raise DomainError(f"not closed: {elems[i]} ⊕ {elems[j]} = {sub[i, j]} is outside")
    comp = table.order.comp
    for a in elems:
        if int(comp[a]) not in where:
            raise DomainError(f"not closed: complement of {a} is outside")
    remap = np.full(table.size, UNDEFINED, dtype=np.int64)
    remap[idx] = np.arange(len(idx))
    new_plus = np.where(defined, remap[np.maximum(sub, 0)], UNDEFINED)
    labels = tuple(table.label(a) for a in elems)
    sub_table = OrthoAlgebraTable(len(idx), where[table.zero], where[table.one], new_plus, labels)
    return SubAlgebra(elems, sub_table, where)


def interval(table: OrthoAlgebraTable, c: int) -> SubAlgebra:
    """The interval algebra [0, c]: x ⊕ y kept when it exists and is ≤ c,
    with c as the top and x ↦ c ⊖ x as the complement."""
    order = table.order
    elems = tuple(int(x) for x in order.down(c))
    where = {a: i for i, a in enumerate(elems)}
    idx = np.array(elems)
    sub = table.plus[np.ix_(idx, idx)]
    keep = (sub != UNDEFINED) & order.leq[np.maximum(sub, 0), c]
    remap = np.full(table.size, UNDEFINED, dtype=np.int64)
    remap[idx] = np.arange(len(idx))
    new_plus = np.where(keep, remap[np.maximum(sub, 0)], UNDEFINED)
    labels = tuple(table.label(a) for a in elems)
    sub_table = OrthoAlgebraTable(len(idx), where[table.zero], where[c], new_plus, labels)
    return SubAlgebra(elems, sub_table, where)
