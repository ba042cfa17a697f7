"""Builders for catalog and user-specified orthoalgebras and effect algebras."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .core import (EFFECT_ALGEBRA, ORTHOALGEBRA, UNDEFINED, OrthoAlgebraTable,
                   ValidationReport, Violation, STRUCTURAL, check_size, validate)


class ConstructionError(ValueError):
    """A constructor produced (or would produce) an invalid table."""

    def __init__(self, message: str, report: ValidationReport | None = None):
        super().__init__(message)
        self.report = report


def _set_label(bits: int, k: int) -> str:
    return "{" + ",".join(str(i + 1) for i in range(k) if bits >> i & 1) + "}"


def make_boolean(k: int) -> OrthoAlgebraTable:
    """The subset algebra 2^k; element i is the subset with bitmask i.

    ``k = 0`` gives the degenerate one-element algebra with 0 = 1.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    n = 1 << k
    check_size(n)
    x = np.arange(n)
    disjoint = (x[:, None] & x[None, :]) == 0
    plus = np.where(disjoint, x[:, None] | x[None, :], UNDEFINED)
    labels = tuple(_set_label(i, k) for i in range(n))
    return OrthoAlgebraTable(n, 0, n - 1, plus, labels)


def make_horizontal_sum(tables: Sequence[OrthoAlgebraTable],
                        labels: Sequence[str] | None = None) -> OrthoAlgebraTable:
    """Glue summands at 0 and 1 with no sums across summands.

    The result lists 0 first, then each summand's other elements in order,
    then 1 last.  Summands with fewer than four elements are rejected.
    """
    if not tables:
        raise ValueError("need at least one summand")
    for t in tables:
        if t.size < 4:
            raise ConstructionError(f"summand of size {t.size} < 4")
    if len(tables) == 1 and labels is None and tables[0].zero == 0 \
            and tables[0].one == tables[0].size - 1:
        return tables[0]
    maps = []
    n = 1
    for t in tables:
        m = {t.zero: 0}
        for a in range(t.size):
            if a not in (t.zero, t.one):
                m[a] = n
                n += 1
        maps.append(m)
    for m, t in zip(maps, tables):
        m[t.one] = n
    n += 1
    check_size(n)
    plus = np.full((n, n), UNDEFINED, dtype=np.int64)
    for m, t in zip(maps, tables):
        idx = np.array([m[a] for a in range(t.size)])
        rows, cols = np.nonzero(t.plus != UNDEFINED)
        plus[idx[rows], idx[cols]] = idx[t.plus[rows, cols]]
    if labels is None:
        labels = ["0"] * n
        labels[-1] = "1"
        for i, (m, t) in enumerate(zip(maps, tables)):
            for a, j in m.items():
                if a not in (t.zero, t.one):
                    labels[j] = f"{i}:{t.label(a)}"
    return OrthoAlgebraTable(n, 0, n - 1, plus, tuple(labels))


def make_mo(n: int) -> OrthoAlgebraTable:
    """MO_n, the horizontal sum of n copies of 2^2, labelled x1, x1', x2, ..."""
    if n < 1:
        raise ValueError("n must be positive")
    labels = ["0"]
    for i in range(1, n + 1):
        labels += [f"x{i}", f"x{i}'"]
    labels.append("1")
    return make_horizontal_sum([make_boolean(2)] * n, labels=labels)


def make_product(tables: Sequence[OrthoAlgebraTable]) -> OrthoAlgebraTable:
    """Componentwise product; the first factor is the most significant digit."""
    if not tables:
        raise ValueError("need at least one factor")
    sizes = [t.size for t in tables]
    n = int(np.prod(sizes))
    check_size(n)
    digits = np.array(list(product(*[range(s) for s in sizes])), dtype=np.int64).reshape(n, len(sizes))
    weights = np.array([int(np.prod(sizes[i + 1:])) for i in range(len(sizes))], dtype=np.int64)
    plus = np.zeros((n, n), dtype=np.int64)
    defined = np.ones((n, n), dtype=bool)
    for i, t in enumerate(tables):
        d = digits[:, i]
        s = t.plus[np.ix_(d, d)]
        defined &= s != UNDEFINED
        plus += np.maximum(s, 0) * weights[i]
    plus = np.where(defined, plus, UNDEFINED)
    zero = int(sum(t.zero * w for t, w in zip(tables, weights)))
    one = int(sum(t.one * w for t, w in zip(tables, weights)))
    labels = tuple("(" + ",".join(t.label(int(v)) for t, v in zip(tables, row)) + ")"
                   for row in digits)
    return OrthoAlgebraTable(n, zero, one, plus, labels)


@dataclass(frozen=True)
class PastingSpec:
    """Blocks given by their atom names; each block's atoms sum to 1."""

    atom_names: tuple[str, ...]
    blocks: tuple[frozenset, ...]

    def __post_init__(self):
        object.__setattr__(self, "atom_names", tuple(self.atom_names))
        object.__setattr__(self, "blocks", tuple(frozenset(b) for b in self.blocks))
        names = set(self.atom_names)
        if len(names) != len(self.atom_names):
            raise ValueError("duplicate atom names")
        used = set().union(*self.blocks) if self.blocks else set()
        if used - names:
            raise ValueError(f"unknown atoms in blocks: {sorted(used - names)}")
        if names - used:
            raise ValueError(f"atoms in no block: {sorted(names - used)}")
        for i, b1 in enumerate(self.blocks):
            for j, b2 in enumerate(self.blocks):
                if i != j and b1 <= b2:
                    raise ValueError("a block is contained in another block")


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def make_pasting(spec: PastingSpec) -> OrthoAlgebraTable:
    """Paste Boolean blocks along shared atoms.

    Elements are block-local atom subsets; two of them are the same element
    when their atom sets coincide or their block-complements coincide (the
    latter is what makes complements unique).  Sums exist only inside a
    block.  The validator decides whether the result is an orthoalgebra.
    """
    pos = {a: i for i, a in enumerate(spec.atom_names)}
    blocks = [tuple(sorted(b, key=pos.get)) for b in spec.blocks]

    def key(s):
        return tuple(sorted(pos[a] for a in s))

    local = []                                   # (block, atom key)
    for bi, b in enumerate(blocks):
        for r in range(len(b) + 1):
            for i in range(1 << len(b)):
                s = [b[j] for j in range(len(b)) if i >> j & 1]
                if len(s) == r:
                    local.append((bi, key(s)))
    uf = _UnionFind()
    by_set: dict = {}
    by_cset: dict = {}
    for bi, s in local:
        cs = tuple(sorted(set(key(blocks[bi])) - set(s)))
        uf.find((bi, s))
        if s in by_set:
            uf.union((bi, s), by_set[s])
        by_set.setdefault(s, (bi, s))
        if cs in by_cset:
            uf.union((bi, s), by_cset[cs])
        by_cset.setdefault(cs, (bi, s))

    classes: dict = {}
    for item in local:
        classes.setdefault(uf.find(item), []).append(item)
    for members in classes.values():
        singles = sorted({s for _, s in members if len(s) <= 1})
        if len(singles) > 1:
            a, b = ("0" if not s else spec.atom_names[s[0]] for s in singles[:2])
            raise ConstructionError(f"pasting forces {a} = {b}")
    top = uf.find((0, key(blocks[0])))
    bottom = uf.find((0, ()))

    def sort_key(root):
        members = classes[root]
        return (root == top, min((len(s), s) for _, s in members))

    roots = sorted(classes, key=sort_key)
    index = {r: i for i, r in enumerate(roots)}
    n = len(roots)
    check_size(n)
    elem = {item: index[uf.find(item)] for item in local}

    plus = np.full((n, n), UNDEFINED, dtype=np.int64)
    conflicts = []
    for bi, b in enumerate(blocks):
        subsets = [s for bj, s in local if bj == bi]
        for s in subsets:
            for t in subsets:
                if set(s) & set(t):
                    continue
                x, y = elem[bi, s], elem[bi, t]
                z = elem[bi, tuple(sorted(s + t))]
                if plus[x, y] not in (UNDEFINED, z):
                    conflicts.append((x, y))
                plus[x, y] = z

    names = spec.atom_names
    labels = []
    for r in roots:
        if r == bottom:
            labels.append("0")
        elif r == top:
            labels.append("1")
        else:
            s = min((len(s), s) for _, s in classes[r])[1]
            labels.append("+".join(names[i] for i in s))
    table = OrthoAlgebraTable(n, index[bottom], index[top], plus, tuple(labels))
    if conflicts:
        x, y = conflicts[0]
        report = ValidationReport(ORTHOALGEBRA, (Violation(STRUCTURAL, (x, y), "blocks disagree on this sum"),))
        raise ConstructionError("pasting identifies elements whose sums disagree", report)
    report = validate(table)
    if not report.ok:
        raise ConstructionError("pasting is not an orthoalgebra", report)
    return table


@dataclass(frozen=True)
class IntervalSpec:
    """An order-unit interval [0, e] in Z^d with the coordinatewise order."""

    dim: int
    e: tuple[int, ...]
    elements: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "e", tuple(int(v) for v in self.e))
        if self.dim < 1 or len(self.e) != self.dim:
            raise ValueError("e must have dim coordinates")
        if any(v < 0 for v in self.e) or not any(self.e):
            raise ValueError("e must be > 0")
        if self.elements is not None:
            object.__setattr__(self, "elements",
                               tuple(tuple(int(c) for c in v) for v in self.elements))

    def listed(self) -> list[tuple[int, ...]]:
        if self.elements is None:
            return [tuple(v) for v in product(*[range(c + 1) for c in self.e])]
        return sorted(set(self.elements))


@dataclass(frozen=True)
class FaithfulnessReport:
    """Whether the induced order on the listed vectors is the group order."""

    faithful: bool
    witness: tuple[int, int] | None = None

    def to_json(self) -> dict:
        return {"faithful": self.faithful,
                "witness": None if self.witness is None else list(self.witness)}


@dataclass(frozen=True)
class IntervalAlgebra:
    table: OrthoAlgebraTable
    vectors: tuple[tuple[int, ...], ...]
    validation: ValidationReport
    faithfulness: FaithfulnessReport


class IntervalError(ValueError):
    pass


def make_interval(spec: IntervalSpec, mode: str = EFFECT_ALGEBRA) -> IntervalAlgebra:
    """x ⊕ y = x + y when x + y ≤ e; x' = e − x.

    The table is validated in ``mode``; the faithfulness report compares
    the induced order with the coordinatewise order of Z^d.
    """
    e = spec.e
    vecs = spec.listed()
    where = {v: i for i, v in enumerate(vecs)}
    zero = tuple(0 for _ in e)
    for v in vecs:
        if len(v) != spec.dim or any(c < 0 or c > ec for c, ec in zip(v, e)):
            raise IntervalError(f"{v} is not in [0, e]")
    if zero not in where or e not in where:
        raise IntervalError("0 and e must be listed")
    for v in vecs:
        if tuple(ec - c for c, ec in zip(v, e)) not in where:
            raise IntervalError(f"not closed under complement: {v}")
    n = len(vecs)
    check_size(n)
    plus = np.full((n, n), UNDEFINED, dtype=np.int64)
    for i, x in enumerate(vecs):
        for j, y in enumerate(vecs):
            s = tuple(a + b for a, b in zip(x, y))
            if all(c <= ec for c, ec in zip(s, e)):
                if s not in where:
                    raise IntervalError(f"not closed under sums: {x} + {y}")
                plus[i, j] = where[s]
    labels = tuple("(" + ",".join(str(c) for c in v) + ")" for v in vecs)
    table = OrthoAlgebraTable(n, where[zero], where[e], plus, labels)
    report = validate(table, mode)

    leq = table.order.leq
    witness = None
    for i, x in enumerate(vecs):
        for j, y in enumerate(vecs):
            diff = tuple(b - a for a, b in zip(x, y))
            group = all(c >= 0 for c in diff)
            inside = diff in where
            if not (bool(leq[i, j]) == group == inside):
                witness = (i, j)
                break
        if witness:
            break
    return IntervalAlgebra(table, tuple(vecs), report, FaithfulnessReport(witness is None, witness))
