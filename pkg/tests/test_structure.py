import numpy as np
import pytest

import oracles
from conftest import OA_NAMES
from oalg import catalog
from oalg.constructors import make_boolean, make_mo, make_product
from oalg.core import UNDEFINED, DomainError, jointly_orthogonal, restrict
from oalg.structure import (InvariantError, analyze, atoms_height, blocks, center,
                            center_via_blocks, central_decomposition, chain_to_orthogonal,
                            check_decomposition, check_set_identities, classify, compatibility,
                            dimension, dimension_brute_force, is_boolean_subalgebra, is_regular,
                            longest_chain, mackey_decompositions, non_atoms, random_maximal_chain,
                            set_sum, strata, up_set)

SMALL = ["boolean-2", "boolean-3", "mo-2", "mo-3", "loop3", "pasting-2"]


# compatibility

@pytest.mark.parametrize("name", SMALL)
def test_mackey_matches_definition(name, tables):
    t = tables[name]
    comp = compatibility(t)
    for a in range(t.size):
        for b in range(t.size):
            got = {(m.a1, m.c, m.b1) for m in mackey_decompositions(t, a, b)}
            assert got == set(oracles.mackey(t, a, b))
            assert comp.comp_pairs[a, b] == bool(got)


def test_mo2_incompatible_pair(tables):
    t = tables["mo-2"]
    x, y = t.index("x1"), t.index("x2")
    assert mackey_decompositions(t, x, y) == []
    assert not compatibility(t).comp_of(y) >= {x}


def test_boolean_mackey_triples(tables):
    t = tables["boolean-4"]
    comp = t.order.comp
    for a in range(t.size):
        for b in range(t.size):
            (m,) = mackey_decompositions(t, a, b)
            assert (m.a1, m.c, m.b1) == (a & comp[b], a & b, comp[a] & b)


# classification

def test_classification(tables):
    f = classify(tables["loop3"])
    assert not f.is_orthocoherent and not f.is_omp and not f.is_lattice
    a, b, c = f.orthocoherence_witness
    t = tables["loop3"]
    assert t.orthogonal(a, b) and t.orthogonal(b, c) and t.orthogonal(a, c)
    assert not jointly_orthogonal(t, [a, b, c])
    g = classify(tables["mo-3"])
    assert g.is_oml and not g.is_boolean and g.distributivity_witness is not None
    assert classify(tables["boolean-5"]).is_boolean


@pytest.mark.parametrize("name", OA_NAMES)
def test_orthocoherent_iff_omp(name, tables):
    f = classify(tables[name])
    assert f.is_orthocoherent == f.is_omp


def test_pasting_two_blocks_is_oml(tables):
    f = classify(tables["pasting-2"])
    assert f.is_oml and not f.is_boolean


# center and blocks

@pytest.mark.parametrize("name", SMALL + ["b2xmo2"])
def test_center_matches_oracle(name, tables):
    assert list(center(tables[name])) == oracles.center(tables[name])


@pytest.mark.parametrize("name", SMALL)
def test_blocks_match_subset_scan(name, tables):
    assert blocks(tables[name]) == oracles.blocks(tables[name])


def test_block_examples(tables):
    t = tables["mo-2"]
    assert [set(t.label(a) for a in b) for b in blocks(t)] == [{"0", "x1", "x1'", "1"},
                                                                {"0", "x2", "x2'", "1"}]
    assert blocks(tables["boolean-3"]) == [tuple(range(8))]
    assert [len(b) for b in blocks(tables["loop3"])] == [8, 8, 8]


@pytest.mark.parametrize("name", OA_NAMES)
def test_center_is_boolean_and_oml_center_is_compatible(name, tables):
    t = tables[name]
    cen = center(t)
    assert is_boolean_subalgebra(t, cen)
    if classify(t).is_oml:
        comp = compatibility(t).comp_pairs
        assert tuple(np.flatnonzero(comp.all(axis=0))) == cen


def test_boolean_subalgebra_check():
    # the two-element subsets of 2^4 with 0 and 1 form MO_3: closed, not Boolean
    t = make_boolean(4)
    elems = [0, 15] + [s for s in range(16) if bin(s).count("1") == 2]
    sub = restrict(t, elems)
    assert not is_boolean_subalgebra(t, elems)
    assert oracles.isomorphism(sub.table, make_mo(3)) is not None


def test_regularity(tables):
    for name in ["mo-2", "mo-4", "boolean-4", "pasting-2", "b2xmo2"]:
        assert is_regular(tables[name])
    reg = is_regular(tables["loop3"])
    t = tables["loop3"]
    assert not reg
    assert {t.index(x) for x in "ace"} <= set(reg.witness)


def test_center_via_blocks(tables):
    assert center_via_blocks(tables["b2xmo2"]) == center(tables["b2xmo2"])
    with pytest.raises(DomainError):
        center_via_blocks(tables["loop3"])


# decomposition

def test_decomposition_sizes(tables):
    dec = central_decomposition(tables["b2xmo2"])
    assert dec.sizes == [2, 2, 6]
    assert central_decomposition(tables["boolean-3"]).sizes == [2, 2, 2]
    assert central_decomposition(tables["pasting-2"]).sizes == [2, 6]
    assert central_decomposition(tables["mo-3"]).sizes == [8]


def test_decomposition_factors_isomorphic(tables):
    dec = central_decomposition(tables["b2xmo2"])
    assert oracles.isomorphism(dec.factors[2].table, make_mo(2)) is not None
    prod = make_product([f.table for f in dec.factors])
    assert oracles.isomorphism(prod, tables["b2xmo2"]) is not None


def test_check_decomposition_catches_tampering(tables):
    dec = central_decomposition(tables["b2xmo2"])
    comps = np.array(dec.components)
    comps[5, 0] = comps[6, 0]
    bad = type(dec)(dec.center_atoms, dec.factors, comps)
    with pytest.raises(InvariantError):
        check_decomposition(tables["b2xmo2"], bad)


# height

@pytest.mark.parametrize("name", OA_NAMES)
def test_height_bound_and_chains(name, tables):
    t = tables[name]
    hd = atoms_height(t)
    assert hd.bound_holds
    assert jointly_orthogonal(t, hd.orthogonal_witness)
    rng = np.random.default_rng(1)
    for _ in range(10):
        chain = random_maximal_chain(t.order, rng)
        diffs = chain_to_orthogonal(t, chain)
        assert len(diffs) == len(chain) - 1
        assert t.zero not in diffs
        assert all(t.orthogonal(x, y) for i, x in enumerate(diffs) for y in diffs[i + 1:])


def test_height_values(tables):
    assert (atoms_height(tables["mo-2"]).height, atoms_height(tables["mo-2"]).max_orthogonal) == (3, 2)
    assert atoms_height(tables["loop3"]).height == 4
    assert len(longest_chain(tables["boolean-5"].order)) == 6


def test_height_cap_gives_lower_bound(tables):
    hd = atoms_height(tables["boolean-4"], cap=8)
    assert not hd.exact and hd.bound_holds is None
    assert hd.max_orthogonal == 4


def test_chain_to_orthogonal_rejects_non_chain(tables):
    with pytest.raises(DomainError):
        chain_to_orthogonal(tables["mo-2"], [0, 1, 3])


# set identities

@pytest.mark.parametrize("name", SMALL)
def test_set_identities(name, tables):
    t = tables[name]
    rng = np.random.default_rng(2)
    for _ in range(50):
        U = np.flatnonzero(rng.random(t.size) < 0.3)
        V = np.flatnonzero(rng.random(t.size) < 0.5)
        assert check_set_identities(t, U, V)
    assert up_set(t.order, []) == set_sum(t, [], range(t.size)) == frozenset()
    assert up_set(t.order, range(t.size)) == frozenset(range(t.size))


def test_non_atoms(tables):
    t = tables["mo-2"]
    assert non_atoms(t) == {t.one}


# dimension

@pytest.mark.parametrize("name", OA_NAMES)
def test_dimension_matches_brute_force(name, tables):
    t = tables[name]
    assert np.array_equal(dimension(t), dimension_brute_force(t))


def test_loop3_dimension(tables):
    t = tables["loop3"]
    dim = dimension(t)
    assert np.bincount(dim).tolist() == [1, 6, 6, 1]
    assert dim[t.one] == 3
    assert len(strata(t)) == 4


def test_boolean_dimension_is_popcount(tables):
    dim = dimension(tables["boolean-5"])
    assert dim.tolist() == [bin(a).count("1") for a in range(32)]


# report

def test_analyze_report(tables):
    r = analyze(tables["mo-2"])
    assert r.flags["is_oml"] and not r.flags["is_boolean"] and r.flags["is_simple"]
    assert len(r.blocks) == 2 and r.height == 3
    assert all(r.invariants.values())
    j = analyze(tables["loop3"]).to_json()
    assert j["flags"]["is_regular"] is False and "regularity_witness" in j


@pytest.mark.parametrize("name", OA_NAMES)
def test_catalog_goldens(name, tables):
    assert catalog.compare(catalog.get(name), analyze(tables[name])) == []


def test_undefined_sentinel_never_leaks(tables):
    t = tables["loop3"]
    assert (t.order.minus[t.order.leq.T] != UNDEFINED).all()
