"""Compatibility, Mackey decompositions, blocks, center, regularity,
central decomposition, height and the dimension stratification."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

import numpy as np

from .cliques import maximal_cliques, maximum_clique
from .core import (UNDEFINED, DomainError, OrderData, OrthoAlgebraTable,
                   SubAlgebra, interval, restrict, sum_of, validate)

DEFAULT_ORTHOGONAL_CAP = 64


class InvariantError(AssertionError):
    """A cross-check between two independent computations disagreed."""


# ---------------------------------------------------------------------------
# compatibility


@dataclass(frozen=True)
class MackeyTriple:
    """A Mackey decomposition (a ⊖ c, c, b ⊖ c) of a pair (a, b)."""

    a1: int
    c: int
    b1: int


def mackey_decompositions(table: OrthoAlgebraTable, a: int, b: int) -> list[MackeyTriple]:
    order = table.order
    out = []
    for c in np.flatnonzero(order.leq[:, a] & order.leq[:, b]):
        b1 = int(order.minus[b, c])
        if table.plus[a, b1] != UNDEFINED:
            out.append(MackeyTriple(int(order.minus[a, c]), int(c), b1))
    return out


@dataclass(frozen=True, eq=False)
class CompatibilityData:
    comp_pairs: np.ndarray
    table: OrthoAlgebraTable = field(repr=False)

    def mackey(self, a: int, b: int) -> list[MackeyTriple]:
        return mackey_decompositions(self.table, a, b)

    def comp_of(self, b: int) -> frozenset[int]:
        return frozenset(int(a) for a in np.flatnonzero(self.comp_pairs[:, b]))


def compatibility(table: OrthoAlgebraTable) -> CompatibilityData:
    """Comp(L): pairs with at least one Mackey decomposition."""
    order = table.order
    n = table.size
    leq, minus, plus = order.leq, order.minus, table.plus
    comp = np.zeros((n, n), dtype=bool)
    for a in range(n):
        common = leq[:, a][None, :] & leq.T          # [b, c]: c ≤ a and c ≤ b
        b1 = np.maximum(minus, 0)                    # [b, c] -> b ⊖ c
        comp[a] = (common & (plus[a][b1] != UNDEFINED)).any(axis=1)
    comp.setflags(write=False)
    return CompatibilityData(comp, table)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Flags:
    is_orthocoherent: bool
    is_omp: bool
    is_lattice: bool
    is_oml: bool
    is_boolean: bool
    orthocoherence_witness: tuple[int, int, int] | None = None
    omp_witness: tuple[int, int] | None = None
    distributivity_witness: tuple[int, int, int] | None = None


def orthocoherence_witness(table: OrthoAlgebraTable) -> tuple[int, int, int] | None:
    """A pairwise-orthogonal triple (a, b, c) with a ⊥̸ b ⊕ c, or None."""
    perp = table.perp
    n = table.size
    for b in range(n):
        for c in np.flatnonzero(perp[b]):
            s = table.plus[b, c]
            bad = perp[:, b] & perp[:, c] & ~perp[:, s]
            if bad.any():
                return int(np.flatnonzero(bad)[0]), b, int(c)
    return None


def omp_witness(table: OrthoAlgebraTable) -> tuple[int, int] | None:
    """An orthogonal pair whose sum is not their join, or None."""
    join = table.order.join
    bad = table.perp & (join != table.plus)
    if bad.any():
        a, b = np.argwhere(bad)[0]
        return int(a), int(b)
    return None


def distributivity_witness(order: OrderData) -> tuple[int, int, int] | None:
    """A triple with a ∧ (b ∨ c) ≠ (a ∧ b) ∨ (a ∧ c); assumes a lattice."""
    meet, join = order.meet, order.join
    for a in range(order.size):
        lhs = meet[a][join]                                  # [b, c]
        ab = meet[a]
        rhs = join[np.ix_(ab, ab)]
        bad = lhs != rhs
        if bad.any():
            b, c = np.argwhere(bad)[0]
            return a, int(b), int(c)
    return None


def classify(table: OrthoAlgebraTable) -> Flags:
    order = table.order
    coh = orthocoherence_witness(table)
    omp = omp_witness(table)
    lattice = bool((order.meet != UNDEFINED).all() and (order.join != UNDEFINED).all())
    dist = distributivity_witness(order) if lattice else None
    return Flags(
        is_orthocoherent=coh is None,
        is_omp=omp is None,
        is_lattice=lattice,
        is_oml=lattice and omp is None,
        is_boolean=lattice and dist is None,
        orthocoherence_witness=coh,
        omp_witness=omp,
        distributivity_witness=dist,
    )


def is_boolean(table: OrthoAlgebraTable) -> bool:
    order = table.order
    if (order.meet == UNDEFINED).any() or (order.join == UNDEFINED).any():
        return False
    return distributivity_witness(order) is None


# ---------------------------------------------------------------------------
# center


def is_central(table: OrthoAlgebraTable, a: int) -> bool:
    """Whether (x, y) ↦ x ⊕ y is an isomorphism [0,a] × [0,a'] → L.

    The map must be a bijection, and (x1,y1) ⊥ (x2,y2) in the product must
    hold exactly when the images are orthogonal in L, with sums matching.
    """
    order = table.order
    n = table.size
    plus, leq = table.plus, order.leq
    ac = int(order.comp[a])
    xs, ys = order.down(a), order.down(ac)
    if len(xs) * len(ys) != n:
        return False
    grid = plus[np.ix_(xs, ys)]
    if (grid == UNDEFINED).any():
        return False
    img = grid.ravel()
    if len(np.unique(img)) != n:
        return False
    xi = np.empty(n, dtype=np.int64)
    yi = np.empty(n, dtype=np.int64)
    xi[img] = np.repeat(xs, len(ys))
    yi[img] = np.tile(ys, len(xs))

    sx = plus[np.ix_(xi, xi)]
    sy = plus[np.ix_(yi, yi)]
    okx = (sx != UNDEFINED) & leq[np.maximum(sx, 0), a]
    oky = (sy != UNDEFINED) & leq[np.maximum(sy, 0), ac]
    prod_perp = okx & oky
    if not np.array_equal(prod_perp, table.perp):
        return False
    image = plus[np.maximum(sx, 0), np.maximum(sy, 0)]
    return bool((image[prod_perp] == plus[prod_perp]).all())


def center(table: OrthoAlgebraTable) -> tuple[int, ...]:
    return tuple(a for a in range(table.size) if is_central(table, a))


# ---------------------------------------------------------------------------
# blocks and regularity


def _compatibility_cliques(table: OrthoAlgebraTable) -> list[tuple[int, ...]]:
    return maximal_cliques(compatibility(table).comp_pairs)


def _boolean_subalgebras_from_atoms(table: OrthoAlgebraTable, candidates: Sequence[int]):
    """Orthogonal sets of atoms (drawn from ``candidates``) summing to 1.

    Each such set E spans the Boolean sub-orthoalgebra of its partial sums,
    and these are exactly the blocks.
    """
    plus, one = table.plus, table.one
    found = []

    def extend(start: int, chosen: list[int], s: int):
        if s == one:
            found.append(tuple(chosen))
            return
        for i in range(start, len(candidates)):
            t = plus[s, candidates[i]]
            if t != UNDEFINED:
                extend(i + 1, chosen + [candidates[i]], int(t))

    extend(0, [], table.zero)
    return found


def _span(table: OrthoAlgebraTable, atoms: Sequence[int]) -> frozenset[int]:
    sums = {table.zero}
    for x in atoms:
        sums |= {int(table.plus[s, x]) for s in sums}
    return frozenset(sums)


def _sorted_sets(sets: Iterable[Iterable[int]]) -> list[tuple[int, ...]]:
    return sorted({tuple(sorted(s)) for s in sets}, key=lambda s: (len(s), s))


def blocks(table: OrthoAlgebraTable) -> list[tuple[int, ...]]:
    """Maximal Boolean sub-orthoalgebras, sorted by (size, elements).

    Each block is pairwise compatible, so it lies inside some maximal
    clique of the compatibility graph; its atoms are searched there.
    """
    if table.degenerate:
        return [(table.zero,)]
    atoms = set(table.order.atoms)
    found = set()
    for clique in _compatibility_cliques(table):
        cand = [a for a in clique if a in atoms]
        for e in _boolean_subalgebras_from_atoms(table, cand):
            found.add(_span(table, e))
    return _sorted_sets(found)


@dataclass(frozen=True)
class Regularity:
    regular: bool
    witness: tuple[int, ...] | None = None
    reason: str = ""

    def __bool__(self):
        return self.regular


def is_boolean_subalgebra(table: OrthoAlgebraTable, elems: Iterable[int]) -> bool:
    try:
        sub = restrict(table, elems)
    except DomainError:
        return False
    return validate(sub.table).ok and is_boolean(sub.table)


def is_regular(table: OrthoAlgebraTable) -> Regularity:
    """Regular iff every maximal clique of Comp(L) is a Boolean sub-orthoalgebra."""
    for clique in _compatibility_cliques(table):
        try:
            sub = restrict(table, clique)
        except DomainError as exc:
            return Regularity(False, clique, str(exc))
        if not is_boolean(sub.table):
            return Regularity(False, clique, "clique is closed but not Boolean")
    return Regularity(True)


def center_via_blocks(table: OrthoAlgebraTable) -> tuple[int, ...]:
    """Intersection of all blocks; only meaningful for regular algebras."""
    reg = is_regular(table)
    if not reg:
        raise DomainError("center = ∩ blocks is only guaranteed for regular algebras; "
                          f"maximal compatible set {list(reg.witness)} is not Boolean")
    bs = blocks(table)
    common = set(bs[0])
    for b in bs[1:]:
        common &= set(b)
    return tuple(sorted(common))


# ---------------------------------------------------------------------------
# central decomposition


@dataclass(frozen=True, eq=False)
class CentralDecomposition:
    """L ≅ Π [0, c_i] over the atoms c_i of the center.

    ``components[a, i]`` is the [0, c_i]-component of ``a`` as an element
    of L; ``factors[i]`` is the interval algebra.
    """

    center_atoms: tuple[int, ...]
    factors: tuple[SubAlgebra, ...]
    components: np.ndarray

    @property
    def sizes(self) -> list[int]:
        return [f.table.size for f in self.factors]


def _component(table: OrthoAlgebraTable, a: int, c: int) -> int:
    """The x ≤ c with a = x ⊕ y for some y ≤ c'."""
    order = table.order
    cc = int(order.comp[c])
    xs, ys = order.down(c), order.down(cc)
    grid = table.plus[np.ix_(xs, ys)]
    hit = np.argwhere(grid == a)
    if len(hit) != 1:
        raise InvariantError(f"{a} does not split uniquely over central {c}")
    return int(xs[hit[0][0]])


def central_decomposition(table: OrthoAlgebraTable, check: bool = True) -> CentralDecomposition:
    cen = center(table)
    sub = restrict(table, cen)
    atoms = [sub.elements[i] for i in sub.table.order.atoms]
    if not atoms:                                       # degenerate 0 = 1
        atoms = [table.one]
    factors = [interval(table, c) for c in atoms]
    ordering = sorted(range(len(atoms)), key=lambda i: (factors[i].table.size, atoms[i]))
    atoms = [atoms[i] for i in ordering]
    factors = [factors[i] for i in ordering]
    comps = np.array([[_component(table, a, c) for c in atoms] for a in range(table.size)],
                     dtype=np.int64).reshape(table.size, len(atoms))
    dec = CentralDecomposition(tuple(atoms), tuple(factors), comps)
    if check:
        check_decomposition(table, dec)
    return dec


def check_decomposition(table: OrthoAlgebraTable, dec: CentralDecomposition) -> None:
    """Rebuild Π [0, c_i] and verify (x_1..x_k) ↦ x_1 ⊕ ... ⊕ x_k is an
    isomorphism onto L; raise :class:`InvariantError` otherwise."""
    from .constructors import make_product

    for f in dec.factors:
        if len(center(f.table)) != min(2, f.table.size):
            raise InvariantError("a factor of the central decomposition is not simple")
    prod = make_product([f.table for f in dec.factors])
    sizes = [f.table.size for f in dec.factors]
    phi = np.empty(prod.size, dtype=np.int64)
    for idx in range(prod.size):
        digits, r = [], idx
        for s in reversed(sizes):
            digits.append(r % s)
            r //= s
        digits.reverse()
        parts = [f.elements[d] for f, d in zip(dec.factors, digits)]
        acc = table.zero
        for p in parts:
            acc = int(table.plus[acc, p])
            if acc == UNDEFINED:
                raise InvariantError("factor components are not jointly orthogonal")
        phi[idx] = acc
    if len(np.unique(phi)) != table.size or prod.size != table.size:
        raise InvariantError("product of factors is not in bijection with L")
    mapped = np.where(prod.plus != UNDEFINED, phi[np.maximum(prod.plus, 0)], UNDEFINED)
    target = table.plus[np.ix_(phi, phi)]
    if not np.array_equal(mapped, target):
        raise InvariantError("product sum table does not match L under the canonical map")
    for a in range(table.size):
        if sum_of(table, [int(x) for x in dec.components[a] if x != table.zero] or [table.zero]) != a:
            raise InvariantError(f"components of {a} do not sum back to it")


# ---------------------------------------------------------------------------
# atoms, height, orthogonal sets


@dataclass(frozen=True)
class HeightData:
    atoms: tuple[int, ...]
    height: int
    max_orthogonal: int
    exact: bool
    orthogonal_witness: tuple[int, ...] = ()

    @property
    def bound_holds(self) -> bool | None:
        """height ≤ max_orthogonal + 1, or None when the bound was not computed exactly."""
        return self.height <= self.max_orthogonal + 1 if self.exact else None


def longest_chain(order: OrderData) -> list[int]:
    """A chain of maximum cardinality, bottom first."""
    n = order.size
    rank = order.leq.sum(axis=0)                     # down-set sizes give a linear extension
    best = [1] * n
    prev = [-1] * n
    for b in sorted(range(n), key=lambda x: rank[x]):
        for a in order.down(b):
            if a != b and best[a] + 1 > best[b]:
                best[b], prev[b] = best[a] + 1, int(a)
    end = int(np.argmax(best))
    chain = []
    while end != -1:
        chain.append(end)
        end = prev[end]
    return chain[::-1]


def atoms_height(table: OrthoAlgebraTable, cap: int = DEFAULT_ORTHOGONAL_CAP) -> HeightData:
    order = table.order
    height = len(longest_chain(order))
    nonzero = [a for a in range(table.size) if a != table.zero]
    perp = table.perp
    if table.size <= cap:
        wit = maximum_clique(perp, nonzero)
        exact = True
    else:
        wit, s = [], table.zero                 # greedy jointly orthogonal atoms: a lower bound
        for a in order.atoms:
            if perp[s, a] and all(perp[w, a] for w in wit):
                wit.append(a)
                s = int(table.plus[s, a])
        wit = tuple(wit)
        exact = False
    return HeightData(order.atoms, height, len(wit), exact, tuple(wit))


def chain_to_orthogonal(table: OrthoAlgebraTable, chain: Sequence[int]) -> list[int]:
    """Successive differences x_{k+1} ⊖ x_k of a strictly increasing chain.

    They are nonzero and jointly orthogonal (they telescope to x_m ⊖ x_1).
    """
    minus = table.order.minus
    out = []
    for lo, hi in zip(chain, chain[1:]):
        d = int(minus[hi, lo])
        if d == UNDEFINED:
            raise DomainError(f"{lo} ≰ {hi}: not a chain")
        out.append(d)
    return out


def random_maximal_chain(order: OrderData, rng: np.random.Generator) -> list[int]:
    """Walk from 0 to 1 along randomly chosen covers."""
    leq = order.leq
    chain = [order.zero]
    while chain[-1] != order.one:
        x = chain[-1]
        above = [y for y in order.up(x) if y != x]
        covers = [y for y in above if not any(leq[z, y] and z != y for z in above)]
        chain.append(int(rng.choice(covers)))
    return chain


# ---------------------------------------------------------------------------
# set sums


def set_sum(table: OrthoAlgebraTable, A: Iterable[int], B: Iterable[int]) -> frozenset[int]:
    """A ⊕ B: every defined a ⊕ b with a ∈ A, b ∈ B."""
    A, B = list(A), list(B)
    if not A or not B:
        return frozenset()
    s = table.plus[np.ix_(A, B)]
    return frozenset(int(v) for v in s[s != UNDEFINED])


def up_set(order: OrderData, U: Iterable[int]) -> frozenset[int]:
    U = list(U)
    if not U:
        return frozenset()
    return frozenset(int(b) for b in np.flatnonzero(order.leq[U].any(axis=0)))


def second_projection(order: OrderData, U: Iterable[int], V: Iterable[int]) -> frozenset[int]:
    """π₂((U × V) ∩ ≤) = {b ∈ V : a ≤ b for some a ∈ U}."""
    U, V = set(U), set(V)
    return frozenset(b for a in U for b in V if order.leq[a, b])


@dataclass(frozen=True)
class SetIdentities:
    up_equals_sum: bool
    projection_equals_up_meet: bool

    def __bool__(self):
        return self.up_equals_sum and self.projection_equals_up_meet


def check_set_identities(table: OrthoAlgebraTable, U: Iterable[int], V: Iterable[int]) -> SetIdentities:
    """U↑ = U ⊕ L and π₂((U × V) ∩ ≤) = U↑ ∩ V."""
    U, V = list(U), list(V)
    order = table.order
    up = up_set(order, U)
    return SetIdentities(up == set_sum(table, U, range(table.size)),
                         second_projection(order, U, V) == up & frozenset(V))


def non_atoms(table: OrthoAlgebraTable) -> frozenset[int]:
    """(L∖{0}) ⊕ (L∖{0}): the nonzero elements that are not atoms."""
    nz = [a for a in range(table.size) if a != table.zero]
    return set_sum(table, nz, nz)


# ---------------------------------------------------------------------------
# dimension


def strata(table: OrthoAlgebraTable) -> list[frozenset[int]]:
    """L_0 = {0}, L_1 = atoms, L_{k+1} = L_k ⊕ L_1, until nothing new appears."""
    layers = [frozenset([table.zero]), frozenset(table.order.atoms)]
    seen = set(layers[0]) | layers[1]
    while True:
        nxt = set_sum(table, layers[-1], layers[1])
        if nxt <= seen:
            return layers
        layers.append(nxt)
        seen |= nxt


def dimension(table: OrthoAlgebraTable) -> np.ndarray:
    """dim(a) = least k with a ∈ L_k; every element of a finite algebra gets one."""
    dim = np.full(table.size, -1, dtype=np.int64)
    for k, layer in enumerate(strata(table)):
        for a in layer:
            if dim[a] < 0:
                dim[a] = k
    if (dim < 0).any():
        raise InvariantError(f"elements {np.flatnonzero(dim < 0).tolist()} have no atom decomposition")
    return dim


def dimension_brute_force(table: OrthoAlgebraTable) -> np.ndarray:
    """Fewest atoms (repeats allowed, as in effect algebras) summing to each element."""
    atoms = table.order.atoms
    plus = table.plus
    dim = np.full(table.size, -1, dtype=np.int64)
    dim[table.zero] = 0
    k = 0
    while (dim < 0).any() and k < table.size:
        k += 1
        for combo in combinations_with_replacement(atoms, k):
            s = table.zero
            for a in combo:
                s = int(plus[s, a])
                if s == UNDEFINED:
                    break
            if s != UNDEFINED and dim[s] < 0:
                dim[s] = k
    return dim


# ---------------------------------------------------------------------------
# full report


@dataclass(frozen=True)
class AnalysisReport:
    size: int
    flags: dict
    atoms: tuple[int, ...]
    height: int
    max_orthogonal: int
    max_orthogonal_exact: bool
    center: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    dim: tuple[int, ...]
    regularity_witness: tuple[int, ...] | None = None
    invariants: dict | None = None

    def to_json(self) -> dict:
        out = {
            "size": self.size,
            "flags": dict(self.flags),
            "atoms": list(self.atoms),
            "height": self.height,
            "max_orthogonal": self.max_orthogonal,
            "max_orthogonal_exact": self.max_orthogonal_exact,
            "center": list(self.center),
            "blocks": [list(b) for b in self.blocks],
            "dim": list(self.dim),
        }
        if self.regularity_witness is not None:
            out["regularity_witness"] = list(self.regularity_witness)
        if self.invariants is not None:
            out["invariants"] = dict(self.invariants)
        return out


def analyze(table: OrthoAlgebraTable, check_invariants: bool = True,
            seed: int = 0, samples: int = 20) -> AnalysisReport:
    """Aggregate structure report.

    With ``check_invariants`` the independent cross-checks run and any
    disagreement raises :class:`InvariantError`.
    """
    flags = classify(table)
    hd = atoms_height(table)
    cen = center(table)
    bl = blocks(table)
    reg = is_regular(table)
    dim = dimension(table)
    atomic = True                                   # dimension() raises otherwise
    flag_map = {
        "is_orthocoherent": flags.is_orthocoherent,
        "is_omp": flags.is_omp,
        "is_lattice": flags.is_lattice,
        "is_oml": flags.is_oml,
        "is_boolean": flags.is_boolean,
        "is_regular": reg.regular,
        "is_simple": len(cen) <= 2,
        "is_atomic": atomic,
    }
    invariants = None
    if check_invariants:
        invariants = run_invariants(table, flags, hd, cen, bl, reg, dim, seed, samples)
    return AnalysisReport(table.size, flag_map, hd.atoms, hd.height, hd.max_orthogonal,
                          hd.exact, cen, tuple(bl), tuple(int(d) for d in dim),
                          None if reg.regular else reg.witness, invariants)


def run_invariants(table, flags, hd, cen, bl, reg, dim, seed=0, samples=20) -> dict:
    checks: dict[str, bool | None] = {}

    def require(name, ok, msg):
        checks[name] = bool(ok)
        if not ok:
            raise InvariantError(f"{name}: {msg}")

    require("orthocoherent_iff_omp", flags.is_orthocoherent == flags.is_omp,
            f"orthocoherent={flags.is_orthocoherent} but omp={flags.is_omp}")
    if hd.exact:
        require("height_bound", hd.height <= hd.max_orthogonal + 1,
                f"height {hd.height} > {hd.max_orthogonal} + 1")
    else:
        checks["height_bound"] = None
    require("dimension_brute_force", np.array_equal(dim, dimension_brute_force(table)),
            "stratification disagrees with minimal atom decompositions")
    require("center_boolean", is_boolean_subalgebra(table, cen), "center is not a Boolean sub-orthoalgebra")
    require("boolean_iff_center_full", flags.is_boolean == (len(cen) == table.size),
            "Boolean iff L = C(L) fails")
    if reg.regular:
        require("center_via_blocks", center_via_blocks(table) == cen,
                "intersection of blocks differs from the center")
    require("non_atoms", non_atoms(table) == frozenset(range(table.size)) - {table.zero} - set(hd.atoms),
            "non-atoms differ from (L∖0) ⊕ (L∖0)")
    rng = np.random.default_rng(seed)
    ok = True
    for _ in range(samples):
        U = np.flatnonzero(rng.random(table.size) < 0.3)
        V = np.flatnonzero(rng.random(table.size) < 0.5)
        ok &= bool(check_set_identities(table, U, V))
    require("set_identities", ok, "U↑ = U ⊕ L or π₂ identity fails")
    return checks
