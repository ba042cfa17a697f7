"""``oalg`` command-line front end.

Exit codes: 0 ok, 1 invalid input data, 2 parse or usage error,
3 internal invariant failure.
"""
from __future__ import annotations

import argparse
import os
import sys
from contextlib import contextmanager

from . import catalog, io
from .constructors import (ConstructionError, IntervalError, make_boolean, make_horizontal_sum,
                           make_interval, make_mo, make_pasting, make_product)
from .core import MODES, ORTHOALGEBRA, CarrierTooLarge, DomainError, validate
from .states import (DEFAULT_VERTEX_CAP, StatelessError, TooLarge, fraction_str,
                     is_order_determining, state_constraints, vertices)
from .structure import analyze, central_decomposition
from .topology import (MAX_ENUMERATION, derived_order_closed, exhaust_toa, is_hausdorff,
                       is_stably_ordered, is_toa, oplus_open_equivalence,
                       verify_semilattice_lemma)

OK, INVALID, PARSE, INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Invalid(Exception):
    """Input parsed but is not a valid instance; carries a JSON payload."""

    def __init__(self, payload):
        super().__init__(str(payload))
        self.payload = payload


def _text(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in
                                                         (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_text(x, indent) if isinstance(x, dict) else pad + _inline(x) for x in obj)
    return pad + _inline(obj)


def _inline(v) -> str:
    if isinstance(v, dict):
        return ", ".join(f"{k}={_inline(x)}" for k, x in v.items())
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if v is None:
        return "-"
    return str(v)


def _emit(args, obj) -> None:
    if args.format == "text":
        sys.stdout.write(_text(obj) + "\n")
    else:
        sys.stdout.write(io.dumps(obj))


def _emit_table(args, table) -> None:
    if args.format == "text":
        sys.stdout.write(_text(io.table_to_json(table)) + "\n")
    else:
        sys.stdout.write(io.dumps_table(table))


def _load_valid(path, mode=ORTHOALGEBRA):
    table = io.read_table(path)
    report = validate(table, mode)
    if not report.ok:
        raise Invalid({"path": str(path), "validation": report.to_json()})
    return table


# commands

def cmd_validate(args) -> int:
    table = io.read_table(args.file)
    report = validate(table, args.mode)
    _emit(args, report.to_json())
    return OK if report.ok else INVALID


def _analysis_json(table, args) -> dict:
    return analyze(table, check_invariants=args.check_invariants, seed=args.seed).to_json()


def cmd_analyze(args) -> int:
    if args.all_catalog:
        if args.file:
            raise UsageError("give either FILE or --all-catalog")
        out = {}
        for entry in catalog.orthoalgebras():
            report = _analysis_json(entry.table(), args)
            out[entry.name] = report
        _emit(args, out)
        return OK
    if not args.file:
        raise UsageError("analyze needs FILE or --all-catalog")
    _emit(args, _analysis_json(_load_valid(args.file), args))
    return OK


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "boolean":
        table = make_boolean(args.k)
    elif kind == "mo":
        table = make_mo(args.n)
    elif kind in ("hsum", "product"):
        factors = [_load_valid(f) for f in args.files]
        table = make_horizontal_sum(factors) if kind == "hsum" else make_product(factors)
    elif kind == "pasting":
        table = make_pasting(io.pasting_spec_from_json(_read(args.spec)))
    else:
        alg = make_interval(io.interval_spec_from_json(_read(args.spec)), args.mode)
        if not alg.validation.ok:
            raise Invalid({"validation": alg.validation.to_json(),
                           "faithfulness": alg.faithfulness.to_json()})
        table = alg.table
    _emit_table(args, table)
    return OK


def _read(path) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise io.InstanceFormatError(str(exc)) from exc


def cmd_states(args) -> int:
    table = _load_valid(args.file)
    poly = state_constraints(table)
    out = {"size": table.size, "equalities": len(poly.equalities), "free_variables": len(poly.free)}
    if args.vertices:
        vs = vertices(poly, cap=args.vertex_cap)
        out["vertices"] = [[fraction_str(v) for v in f] for f in vs]
    if args.order_determining:
        od = is_order_determining(table)
        out["order_determining"] = {
            "determining": od.determining,
            "witness": None if od.witness is None else list(od.witness),
            "states_used": len(od.states),
        }
    _emit(args, out)
    return OK


def cmd_topo(args) -> int:
    if args.action == "semilattice-lemma":
        if not 1 <= args.max <= MAX_ENUMERATION:
            raise UsageError(f"--max must be between 1 and {MAX_ENUMERATION}")
        report = verify_semilattice_lemma(args.max, up_to_isomorphism=args.up_to_isomorphism)
        _emit(args, report.to_json())
        return OK if report.ok else INVALID
    table = _load_valid(args.instance)
    if args.action == "exhaust":
        if table.size > min(args.max, MAX_ENUMERATION):
            raise UsageError(f"carrier has {table.size} points; exhaustion limited to {args.max}")
        found = exhaust_toa(table)
        _emit(args, {"size": table.size, "toa_topologies": len(found),
                     "all_discrete": all(T.is_discrete for T in found),
                     "specialization": [[[int(i), int(j)] for i, j in zip(*T.spec.nonzero()) if i != j]
                                        for T in found]})
        return OK
    T = io.topology_from_json(_read(args.topology))
    if T.size != table.size:
        raise UsageError(f"topology has {T.size} points, instance has {table.size}")
    toa = is_toa(table, T)
    leq = table.order.leq
    out = {"toa": toa.to_json(), "hausdorff": is_hausdorff(T), "discrete": T.is_discrete,
           "order_closed": derived_order_closed(T, leq)}
    st = is_stably_ordered(T, leq)
    out["stably_ordered"] = bool(st)
    if st.witness is not None:
        out["stable_order_witness"] = sorted(st.witness)
    if toa:
        out["sums_open"] = oplus_open_equivalence(table, T).sums_open
    _emit(args, out)
    return OK


def cmd_catalog(args) -> int:
    if args.name is None or args.list:
        _emit(args, {n: {"mode": catalog.ENTRIES[n].mode, "description": catalog.ENTRIES[n].description}
                     for n in catalog.names()})
        return OK
    try:
        entry = catalog.get(args.name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    _emit_table(args, entry.table())
    return OK


def cmd_decompose(args) -> int:
    table = _load_valid(args.file)
    dec = central_decomposition(table, check=args.check_invariants)
    _emit(args, {"center_atoms": list(dec.center_atoms), "factor_sizes": dec.sizes,
                 "factors": [dict(io.table_to_json(f.table), elements=list(f.elements))
                             for f in dec.factors]})
    return OK


# argument parsing

def _common(suppress: bool) -> argparse.ArgumentParser:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "text"), default=d("json"))
    p.add_argument("--max-size", type=int, default=d(None), metavar="N",
                   help="carrier size cap (overrides OALG_MAX_SIZE)")
    p.add_argument("--check-invariants", action=argparse.BooleanOptionalAction, default=d(True))
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oalg", parents=[_common(False)],
                                     description="Finite orthoalgebras and effect algebras.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common(True)

    p = sub.add_parser("validate", parents=[common], help="check the axioms")
    p.add_argument("file")
    p.add_argument("--mode", choices=MODES, default=ORTHOALGEBRA)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", parents=[common], help="structure report")
    p.add_argument("file", nargs="?")
    p.add_argument("--all-catalog", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("gen", parents=[common], help="construct an instance")
    gen = p.add_subparsers(dest="kind", required=True)
    g = gen.add_parser("boolean", parents=[common])
    g.add_argument("k", type=int)
    g = gen.add_parser("mo", parents=[common])
    g.add_argument("n", type=int)
    for kind in ("hsum", "product"):
        g = gen.add_parser(kind, parents=[common])
        g.add_argument("files", nargs="+")
    g = gen.add_parser("pasting", parents=[common])
    g.add_argument("spec")
    g = gen.add_parser("interval", parents=[common])
    g.add_argument("spec")
    g.add_argument("--mode", choices=MODES, default="effect-algebra")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("states", parents=[common], help="state space")
    p.add_argument("file")
    p.add_argument("--vertices", action="store_true")
    p.add_argument("--order-determining", action="store_true")
    p.add_argument("--vertex-cap", type=int, default=DEFAULT_VERTEX_CAP)
    p.set_defaults(func=cmd_states)

    p = sub.add_parser("topo", parents=[common], help="finite topologies")
    topo = p.add_subparsers(dest="action", required=True)
    t = topo.add_parser("check", parents=[common])
    t.add_argument("instance")
    t.add_argument("topology")
    t = topo.add_parser("exhaust", parents=[common])
    t.add_argument("instance")
    t.add_argument("--max", type=int, default=4)
    t = topo.add_parser("semilattice-lemma", parents=[common])
    t.add_argument("--max", type=int, default=4)
    t.add_argument("--up-to-isomorphism", action=argparse.BooleanOptionalAction, default=False)
    p.set_defaults(func=cmd_topo)

    p = sub.add_parser("catalog", parents=[common], help="named instances")
    p.add_argument("name", nargs="?")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("decompose", parents=[common], help="central decomposition")
    p.add_argument("file")
    p.set_defaults(func=cmd_decompose)
    return parser


@contextmanager
def _size_cap(n):
    if n is None:
        yield
        return
    old = os.environ.get("OALG_MAX_SIZE")
    os.environ["OALG_MAX_SIZE"] = str(n)
    try:
        yield
    finally:
        if old is None:
            del os.environ["OALG_MAX_SIZE"]
        else:
            os.environ["OALG_MAX_SIZE"] = old


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return PARSE if exc.code else OK
    try:
        with _size_cap(args.max_size):
            return args.func(args)
    except Invalid as exc:
        _emit(args, exc.payload)
        return INVALID
    except ConstructionError as exc:
        payload = {"error": str(exc)}
        if exc.report is not None:
            payload["validation"] = exc.report.to_json()
        _emit(args, payload)
        return INVALID
    except (IntervalError, DomainError, StatelessError) as exc:
        print(f"oalg: {exc}", file=sys.stderr)
        return INVALID
    except AssertionError as exc:
        print(f"oalg: invariant check failed: {exc}", file=sys.stderr)
        return INVARIANT
    except (io.InstanceFormatError, UsageError, CarrierTooLarge, TooLarge, ValueError) as exc:
        print(f"oalg: {exc}", file=sys.stderr)
        return PARSE


if __name__ == "__main__":
    sys.exit(main())
