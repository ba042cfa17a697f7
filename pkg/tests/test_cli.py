import json
import subprocess
import sys

import pytest

from oalg import catalog, io
from oalg.cli import main
from oalg.constructors import make_mo


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def mo2_file(tmp_path):
    p = tmp_path / "mo2.json"
    p.write_text(io.dumps_table(make_mo(2)))
    return p


# io

@pytest.mark.parametrize("name", catalog.names())
def test_round_trip(name, tables, tmp_path):
    t = tables[name]
    text = io.dumps_table(t)
    assert io.table_from_json(text) == t
    p = tmp_path / "x.json"
    p.write_text(text)
    io.write_table(io.read_table(p), p)
    assert p.read_text() == text


def test_canonical_form(tables):
    text = io.dumps_table(tables["boolean-1"])
    assert text == ('{"labels":["{}","{1}"],"one":1,"size":2,'
                    '"sum":[[0,0,0],[0,1,1]],"zero":0}\n')


def test_parse_errors():
    for bad in ['{"size": 2', '[1, 2]', '{"size": "2", "zero": 0, "one": 1}',
                '{"size": 2, "zero": 0, "one": 1, "sum": [[0, 1]]}',
                '{"size": 2, "zero": 0, "one": 1, "sum": [[0, 9, 1]]}',
                '{"size": 2, "zero": 0, "one": 1, "labels": ["a"]}']:
        with pytest.raises(io.InstanceFormatError):
            io.table_from_json(bad)


def test_topology_and_spec_files():
    T = io.topology_from_json('{"size": 3, "subbase": [[1]]}')
    assert T.is_open([1]) and not T.is_open([0])
    T = io.topology_from_json('{"size": 2, "preorder": [[0, 1]]}')
    assert T.spec[0, 1]
    spec = io.pasting_spec_from_json('{"atoms": ["a", "b"], "blocks": [["a", "b"]]}')
    assert spec.atom_names == ("a", "b")
    iv = io.interval_spec_from_json('{"e": [1, 1], "elements": [[0, 0], [1, 1]]}')
    assert iv.dim == 2 and iv.elements == ((0, 0), (1, 1))
    with pytest.raises(io.InstanceFormatError):
        io.topology_from_json('{"size": 2, "preorder": [[0, 5]]}')


# commands

def test_validate_exit_codes(capsys, mo2_file, tmp_path):
    code, out, _ = run(capsys, "validate", str(mo2_file))
    assert code == 0 and json.loads(out)["ok"]

    data = json.loads(mo2_file.read_text())
    data["sum"] = [t for t in data["sum"] if t[:2] != [1, 2]]
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps(data))
    code, out, _ = run(capsys, "validate", str(broken))
    report = json.loads(out)
    assert code == 1
    assert report["violations"][0] == {"axiom": "complement", "witness": [1], "detail": "no complement"}

    trunc = tmp_path / "trunc.json"
    trunc.write_text(mo2_file.read_text()[:25])
    assert run(capsys, "validate", str(trunc))[0] == 2
    assert run(capsys, "validate", str(tmp_path / "missing.json"))[0] == 2


def test_validate_effect_mode(capsys, tmp_path):
    p = tmp_path / "i2.json"
    p.write_text(io.dumps_table(catalog.get("interval-2").table()))
    assert run(capsys, "validate", str(p), "--mode", "effect-algebra")[0] == 0
    code, out, _ = run(capsys, "validate", str(p))
    assert code == 1 and json.loads(out)["violations"][0]["axiom"] == "self_orthogonal"


def test_analyze(capsys, mo2_file):
    code, out, _ = run(capsys, "analyze", str(mo2_file))
    r = json.loads(out)
    assert code == 0
    assert r["flags"]["is_oml"] and not r["flags"]["is_boolean"] and r["flags"]["is_simple"]
    assert len(r["blocks"]) == 2 and r["height"] == 3
    code, out, _ = run(capsys, "--no-check-invariants", "analyze", str(mo2_file))
    assert "invariants" not in json.loads(out)
    code, out, _ = run(capsys, "analyze", str(mo2_file), "--format", "text")
    assert "height: 3" in out


def test_analyze_invalid_input(capsys, tmp_path):
    p = tmp_path / "i2.json"
    p.write_text(io.dumps_table(catalog.get("interval-2").table()))
    assert run(capsys, "analyze", str(p))[0] == 1


def test_analyze_invariant_failure_exit_code(capsys, mo2_file, monkeypatch):
    from oalg import structure
    monkeypatch.setattr(structure, "dimension_brute_force", lambda t: structure.np.zeros(t.size))
    assert run(capsys, "analyze", str(mo2_file))[0] == 3


def test_analyze_all_catalog(capsys):
    code, out, _ = run(capsys, "analyze", "--all-catalog", "--no-check-invariants")
    r = json.loads(out)
    assert code == 0 and list(r) == sorted(r)
    assert r["loop3"]["flags"]["is_regular"] is False


def test_catalog_command(capsys):
    code, out, _ = run(capsys, "catalog", "mo-2")
    assert code == 0 and json.loads(out)["size"] == 6
    assert run(capsys, "catalog", "mo-2")[1] == out
    assert json.loads(run(capsys, "catalog", "boolean-3")[1])["size"] == 8
    code, _, err = run(capsys, "catalog", "nope")
    assert code == 2 and "boolean-3" in err and "loop3" in err
    code, out, _ = run(capsys, "catalog")
    assert set(json.loads(out)) == set(catalog.names())


def test_gen(capsys, tmp_path):
    assert run(capsys, "gen", "boolean", "3")[1] == run(capsys, "catalog", "boolean-3")[1]
    assert run(capsys, "gen", "mo", "2")[1] == run(capsys, "catalog", "mo-2")[1]
    b2 = tmp_path / "b2.json"
    b2.write_text(run(capsys, "gen", "boolean", "2")[1])
    mo2 = tmp_path / "mo2.json"
    mo2.write_text(run(capsys, "gen", "mo", "2")[1])
    assert run(capsys, "gen", "product", str(b2), str(mo2))[1] == run(capsys, "catalog", "b2xmo2")[1]
    code, out, _ = run(capsys, "gen", "hsum", str(b2), str(b2), str(b2))
    assert code == 0 and json.loads(out)["size"] == 8

    spec = tmp_path / "loop.json"
    spec.write_text(json.dumps({"atoms": list("abcdef"), "blocks": ["abc", "cde", "efa"]}))
    assert run(capsys, "gen", "pasting", str(spec))[1] == run(capsys, "catalog", "loop3")[1]
    spec.write_text(json.dumps({"atoms": list("abcd"), "blocks": ["ab", "bc", "cd", "da"]}))
    assert run(capsys, "gen", "pasting", str(spec))[0] == 1

    iv = tmp_path / "iv.json"
    iv.write_text(json.dumps({"dim": 1, "e": [2]}))
    assert run(capsys, "gen", "interval", str(iv))[0] == 0
    assert run(capsys, "gen", "interval", str(iv), "--mode", "orthoalgebra")[0] == 1


def test_states_command(capsys, mo2_file):
    code, out, _ = run(capsys, "states", str(mo2_file), "--vertices", "--order-determining")
    r = json.loads(out)
    assert code == 0 and len(r["vertices"]) == 4
    assert all(v.count("/") == 1 for f in r["vertices"] for v in f)
    assert r["order_determining"] == {"determining": True, "witness": None, "states_used": 4}


def test_topo_commands(capsys, tmp_path):
    b2 = tmp_path / "b2.json"
    b2.write_text(io.dumps_table(catalog.get("boolean-2").table()))
    code, out, _ = run(capsys, "topo", "exhaust", str(b2), "--max", "4")
    assert code == 0 and json.loads(out)["toa_topologies"] == 1
    top = tmp_path / "t.json"
    top.write_text(json.dumps({"size": 4, "subbase": [[3], [1, 3]]}))
    code, out, _ = run(capsys, "topo", "check", str(b2), str(top))
    r = json.loads(out)
    assert code == 0 and not r["toa"]["is_toa"] and not r["hausdorff"]
    code, out, _ = run(capsys, "topo", "semilattice-lemma", "--max", "3")
    assert code == 0 and json.loads(out)["pairs_checked"] > 0
    mo2 = tmp_path / "mo2.json"
    mo2.write_text(io.dumps_table(make_mo(2)))
    assert run(capsys, "topo", "exhaust", str(mo2), "--max", "4")[0] == 2


def test_decompose(capsys, tmp_path):
    p = tmp_path / "b.json"
    p.write_text(io.dumps_table(catalog.get("b2xmo2").table()))
    code, out, _ = run(capsys, "decompose", str(p))
    assert code == 0 and json.loads(out)["factor_sizes"] == [2, 2, 6]


def test_max_size_flag(capsys, monkeypatch):
    monkeypatch.delenv("OALG_MAX_SIZE", raising=False)
    assert run(capsys, "--max-size", "4", "catalog", "boolean-3")[0] == 2
    assert run(capsys, "catalog", "boolean-3", "--max-size", "8")[0] == 0
    monkeypatch.setenv("OALG_MAX_SIZE", "4")
    assert run(capsys, "catalog", "boolean-3")[0] == 2


def test_usage_error(capsys):
    assert run(capsys, "frobnicate")[0] == 2


def test_console_script(mo2_file):
    proc = subprocess.run([sys.executable, "-m", "oalg.cli", "validate", str(mo2_file)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["ok"]
