import json
import random

import pytest
from hypothesis import given, strategies as st

from orthoforms import analyze, decompose, reconstruct
from orthoforms import documents as docs
from orthoforms.genfuzz import GenConfig, random_structure
from orthoforms.reproductions import biop_map, swap_form

from strategies import block_forms, elements, functionals, spaces


def roundtrip(kind, obj):
    text = docs.emit(docs.to_doc(obj))
    back = docs.PARSERS[kind](json.loads(text))
    assert back == obj
    assert docs.emit(docs.to_doc(back)) == text


@given(st.data())
def test_roundtrips(data):
    sp = data.draw(spaces())
    roundtrip("space", sp)
    roundtrip("element", data.draw(elements(sp)))
    roundtrip("functional", data.draw(functionals(sp)))
    roundtrip("form", data.draw(block_forms(sp)))


@given(st.data(), st.integers(0, 2 ** 32))
def test_map_and_structure_roundtrips(data, seed):
    L1, L2 = data.draw(spaces(prefix="t")), data.draw(spaces(prefix="s"))
    st_ = random_structure(L1, L2, GenConfig(), random.Random(seed))
    roundtrip("structure", st_)
    roundtrip("map", reconstruct(st_))


def test_example_documents_roundtrip():
    roundtrip("map", biop_map())
    roundtrip("structure", analyze(biop_map()))
    roundtrip("form", swap_form())


def test_fraction_strings_are_lowest_terms():
    doc = docs.to_doc(decompose(swap_form()).phi2)
    assert doc["coefficients"] == ["1", "0"]
    V = docs.parse_form({"space": {"points": ["a"], "sigma": {}}, "matrix": [["2/4"]]})
    assert docs.to_doc(V)["matrix"] == [["1/2"]]


def test_referenced_space(tmp_path):
    (tmp_path / "sub").mkdir()
    (tmp_path / "sub" / "k.json").write_text(json.dumps({"points": ["t1", "t2"], "sigma": {"t1": "t2"}}))
    doc = {"space": "sub/k.json", "matrix": [["1", "0"], ["0", "1"]]}
    assert docs.parse_form(doc, tmp_path) == swap_form()


def test_float_input_needs_mode():
    doc = {"space": {"points": ["a"], "sigma": {}}, "coefficients": [0.5]}
    with pytest.raises(docs.DocumentError):
        docs.parse_functional(doc)
    mode = docs.NumberMode(float_input=True, tolerance=1e-9)
    assert docs.parse_functional(doc, mode=mode).coeffs == (0.5,)
    doc["coefficients"] = [0.333333333]
    assert str(docs.parse_functional(doc, mode=docs.NumberMode(True, 1e-6)).coeffs[0]) == "1/3"


@pytest.mark.parametrize("doc,kind", [
    ({"points": ["a", "a"]}, "space"),
    ({"points": ["a", "b", "c"], "sigma": {"a": "b", "b": "c"}}, "space"),
    ({"space": {"points": ["a"]}, "matrix": [["1", "2"]]}, "form"),
    ({"space": {"points": ["a"]}, "matrix": [["x"]]}, "form"),
    ({"space": {"points": ["a"]}}, "form"),
    ({"space": {"points": ["a"]}, "values": {"a": ["0", "1"]}}, "element"),
    ({"domain": {"points": ["a"]}, "codomain": {"points": ["b"]}, "phi": {"b": "a"},
      "a1": {"b": ["0", "1"]}, "a2": {}}, "structure"),
    ([], "form"),
])
def test_malformed_documents(doc, kind):
    with pytest.raises((docs.DocumentError, ValueError)):
        docs.PARSERS[kind](doc)


def test_json_syntax_error_has_position():
    with pytest.raises(docs.DocumentError, match=r"<input>:2:10"):
        docs.loads('{\n    "a": }')
