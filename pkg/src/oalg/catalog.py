"""Named instances with golden expectations."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .constructors import (IntervalSpec, PastingSpec, make_boolean, make_interval, make_mo,
                           make_pasting, make_product)
from .core import EFFECT_ALGEBRA, ORTHOALGEBRA, OrthoAlgebraTable

LOOP3 = PastingSpec(tuple("abcdef"), (frozenset("abc"), frozenset("cde"), frozenset("efa")))
TWO_BLOCKS = PastingSpec(tuple("abcde"), (frozenset("abc"), frozenset("cde")))


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    build: Callable[[], OrthoAlgebraTable] = field(repr=False)
    description: str
    mode: str = ORTHOALGEBRA
    expected: dict = field(default_factory=dict)

    def table(self) -> OrthoAlgebraTable:
        return self.build()


def _boolean(k):
    return CatalogEntry(
        f"boolean-{k}", lambda: make_boolean(k), f"the subset algebra 2^{k}",
        expected={"size": 2 ** k, "height": k + 1, "max_orthogonal": k, "center_size": 2 ** k,
                  "blocks": 1, "flags": {"is_boolean": True, "is_oml": True, "is_regular": True,
                                         "is_orthocoherent": True, "is_simple": k <= 1}})


def _mo(n):
    return CatalogEntry(
        f"mo-{n}", lambda: make_mo(n), f"MO_{n}: horizontal sum of {n} copies of 2^2",
        expected={"size": 2 * n + 2, "height": 3, "max_orthogonal": 2, "center_size": 2,
                  "blocks": n, "flags": {"is_boolean": False, "is_oml": True, "is_regular": True,
                                         "is_orthocoherent": True, "is_simple": True}})


def _interval(e, elements=None):
    def build():
        return make_interval(IntervalSpec(len(e), e, elements)).table
    return build


ENTRIES: dict[str, CatalogEntry] = {}


def _add(entry: CatalogEntry):
    ENTRIES[entry.name] = entry


for _k in range(1, 7):
    _add(_boolean(_k))
for _n in range(2, 5):
    _add(_mo(_n))
_add(CatalogEntry(
    "loop3", lambda: make_pasting(LOOP3),
    "three 3-atom blocks pasted in a triangle {a,b,c},{c,d,e},{e,f,a}",
    expected={"size": 14, "height": 4, "max_orthogonal": 3, "center_size": 2, "blocks": 3,
              "flags": {"is_orthocoherent": False, "is_omp": False, "is_regular": False,
                        "is_lattice": False, "is_simple": True}}))
_add(CatalogEntry(
    "pasting-2", lambda: make_pasting(TWO_BLOCKS),
    "two 3-atom blocks sharing the atom c",
    expected={"size": 12, "height": 4, "max_orthogonal": 3, "center_size": 4, "blocks": 2,
              "flags": {"is_orthocoherent": True, "is_oml": True, "is_boolean": False,
                        "is_regular": True, "is_simple": False}}))
_add(CatalogEntry(
    "b2xmo2", lambda: make_product([make_boolean(2), make_mo(2)]), "2^2 × MO_2",
    expected={"size": 24, "height": 5, "max_orthogonal": 4, "center_size": 8, "blocks": 2,
              "flags": {"is_oml": True, "is_boolean": False, "is_regular": True, "is_simple": False}}))
_add(CatalogEntry(
    "interval-111", _interval((1, 1, 1)), "[0, (1,1,1)] in Z^3",
    expected={"size": 8, "height": 4, "max_orthogonal": 3, "center_size": 8, "blocks": 1,
              "flags": {"is_boolean": True}}))
_add(CatalogEntry(
    "interval-11-sub", _interval((1, 1), ((0, 0), (1, 1))), "{(0,0), (1,1)} inside [0, (1,1)] in Z^2",
    expected={"size": 2, "height": 2, "max_orthogonal": 1, "center_size": 2, "blocks": 1,
              "flags": {"is_boolean": True}}))
_add(CatalogEntry(
    "interval-2", _interval((2,)), "[0, 2] in Z: an effect algebra, not an orthoalgebra",
    mode=EFFECT_ALGEBRA, expected={"size": 3}))
_add(CatalogEntry(
    "interval-22", _interval((2, 2)), "[0, (2,2)] in Z^2: an effect algebra",
    mode=EFFECT_ALGEBRA, expected={"size": 9}))


def names() -> list[str]:
    return sorted(ENTRIES)


def get(name: str) -> CatalogEntry:
    try:
        return ENTRIES[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; available: {', '.join(names())}") from None


def orthoalgebras() -> list[CatalogEntry]:
    return [ENTRIES[n] for n in names() if ENTRIES[n].mode == ORTHOALGEBRA]


def compare(entry: CatalogEntry, report) -> list[str]:
    """Golden fields that disagree with a fresh AnalysisReport."""
    exp = entry.expected
    got = {"size": report.size, "height": report.height, "max_orthogonal": report.max_orthogonal,
           "center_size": len(report.center), "blocks": len(report.blocks)}
    bad = [f"{k}: expected {v}, got {got[k]}" for k, v in exp.items() if k in got and got[k] != v]
    for k, v in exp.get("flags", {}).items():
        if report.flags[k] != v:
            bad.append(f"flags.{k}: expected {v}, got {report.flags[k]}")
    return bad
