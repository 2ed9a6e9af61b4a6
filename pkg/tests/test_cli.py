import json
import subprocess
import sys

import pytest

from orthoforms import BilinearForm, is_biorthogonality_preserving, is_orthogonal_form, make_space
from orthoforms import documents as docs
from orthoforms.cli import main
from orthoforms.reproductions import biop_map, swap_form


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(docs.emit(doc))
    return str(path)


def test_check_form_zero_form(tmp_path, capsys):
    V = BilinearForm.zero(make_space(["a", "b", "c"], {"b": "c"}))
    code, out, _ = run(capsys, "check-form", write(tmp_path, "z.json", docs.form_doc(V)))
    assert code == 0 and out["orthogonal"] and out["oracle_agrees"]


def test_check_form_violation(tmp_path, capsys):
    V = BilinearForm.zero(make_space(["a", "b"])).with_entry(0, 1, 1)
    code, out, _ = run(capsys, "check-form", write(tmp_path, "v.json", docs.form_doc(V)))
    assert code == 1 and out["orthogonal"] is False
    assert out["witness"]["basis_pair"] == ["s_a", "s_b"]
    assert "oracle_counterexample" in out
    assert out["orthogonal"] == is_orthogonal_form(V)


def test_decompose_writes_functionals(tmp_path, capsys):
    path = write(tmp_path, "f.json", docs.form_doc(swap_form()))
    out_path = tmp_path / "dec.json"
    code, out, _ = run(capsys, "decompose", path, "--out", str(out_path))
    assert code == 0 and out["verified"]
    saved = json.loads(out_path.read_text())
    phi1, phi2 = docs.parse_functional(saved["phi1"]), docs.parse_functional(saved["phi2"])
    from orthoforms import compose_form
    assert compose_form(phi1, phi2) == swap_form()


def test_decompose_rejects_non_orthogonal(tmp_path, capsys):
    V = BilinearForm.zero(make_space(["a", "b"])).with_entry(1, 0, 2)
    code, out, _ = run(capsys, "decompose", write(tmp_path, "v.json", docs.form_doc(V)))
    assert code == 1 and not out["orthogonal"]


def test_complexify_swap_form(tmp_path, capsys):
    code, out, _ = run(capsys, "complexify", write(tmp_path, "f.json", docs.form_doc(swap_form())))
    assert code == 1
    assert out["form_orthogonal"] and not out["extension_orthogonal"] and out["agree"]
    assert out["extension"]["matrix"][0][1] == ["1/2", "0"]


def test_analyze_map(tmp_path, capsys):
    code, out, _ = run(capsys, "analyze-map", write(tmp_path, "m.json", docs.map_doc(biop_map())))
    assert code == 0
    st = out["structure"]
    assert st["phi"] == {"s1": "t1", "s1'": "t1", "s2": "t2", "s3": "t3", "s4": "t3"}
    assert st["z3"] == [] and st["z2"] == []
    assert st["a2"]["s1"] == ["0", "1"] and st["a2"]["s4"] == ["1", "0"]


def test_analyze_map_non_op(tmp_path, capsys):
    L = make_space(["a", "b"])
    doc = {"domain": docs.space_doc(L), "codomain": docs.space_doc(L), "matrix": [["1", "1"], ["0", "1"]]}
    code, out, _ = run(capsys, "analyze-map", write(tmp_path, "m.json", doc))
    assert code == 1 and out["witness"]["basis_pair"] == ["s_a", "s_b"]


def test_check_biop_example(tmp_path, capsys):
    code, out, _ = run(capsys, "check-biop", write(tmp_path, "m.json", docs.map_doc(biop_map())))
    assert code == 1 and not out["biorthogonality_preserving"]
    assert "support map not injective" in out["reason"]
    assert out["biorthogonality_preserving"] == is_biorthogonality_preserving(biop_map()).ok


def test_check_biop_identity(tmp_path, capsys):
    L = make_space(["a", "b", "c"], {"b": "c"})
    from orthoforms import LinearMap
    code, out, _ = run(capsys, "check-biop", write(tmp_path, "m.json", docs.map_doc(LinearMap.identity(L))))
    assert code == 0 and out["certificate"]["determinants"] == {"b": "1"}
    inv = docs.parse_map(out["certificate"]["inverse_map"])
    assert inv == LinearMap.identity(L)


def test_reproduce_biop(capsys):
    code, out, _ = run(capsys, "reproduce", "--example", "biop")
    assert code == 0 and out["status"] == "pass"


def test_reproduce_complexification_reports_computed_value(capsys):
    code, out, _ = run(capsys, "reproduce", "--example", "complexification")
    assert out["verdict"] == "extension NOT orthogonal"
    assert out["extension_value"] == ["1/2", "0"]
    assert out["claimed_extension_value"] == ["1", "0"]
    assert out["checks"]["extension_value_equals_1"] is False
    assert code == 1


def test_fuzz(capsys):
    code, out, _ = run(capsys, "fuzz", "--suite", "forms.soundness", "--trials", "5", "--seed", "7")
    assert code == 0 and out["status"] == "pass" and out["seed"] == 7
    code, out, _ = run(capsys, "fuzz", "--suite", "forms.soundness", "--trials", "5", "--mutate")
    assert code == 1 and "counterexample" in out


def test_fuzz_input_errors(capsys):
    code, out, err = run(capsys, "fuzz", "--suite", "nope")
    assert code == 2 and out is None and "unknown suite" in err
    code, _, err = run(capsys, "fuzz", "--max-f", "0", "--max-cycles", "0")
    assert code == 2


def test_malformed_json_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"space": {"points": ["a"]},\n "matrix": [["1",]]}')
    code, out, err = run(capsys, "check-form", str(path))
    assert code == 2 and out is None
    assert "bad.json:2:" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "check-form", "/nonexistent/form.json")
    assert code == 2 and "form.json" in err


def test_float_input(tmp_path, capsys):
    doc = {"space": {"points": ["a", "b"], "sigma": {}}, "matrix": [[0.5, 0], [0, 0.333333333]]}
    path = write(tmp_path, "f.json", doc)
    code, _, _ = run(capsys, "check-form", path)
    assert code == 2
    code, out, _ = run(capsys, "decompose", path, "--float-input", "--tolerance", "1e-6")
    assert code == 0
    from orthoforms import compose_form
    W = compose_form(docs.parse_functional(out["phi1"]), docs.parse_functional(out["phi2"]))
    assert docs.form_doc(W)["matrix"] == [["1/2", "0"], ["0", "1/3"]]


def test_tolerance_requires_float_input(tmp_path, capsys):
    path = write(tmp_path, "f.json", docs.form_doc(swap_form()))
    with pytest.raises(SystemExit) as info:
        main(["check-form", path, "--tolerance", "0.1"])
    assert info.value.code == 2


def test_module_entry_point(tmp_path):
    path = write(tmp_path, "f.json", docs.form_doc(swap_form()))
    res = subprocess.run([sys.executable, "-m", "orthoforms", "check-form", path],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["orthogonal"] is True
