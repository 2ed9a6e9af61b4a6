"""JSON interchange documents.

Scalars are fraction strings (``"-3/4"``); complex values are ``[re, im]``
pairs.  Spaces may be inline objects or file paths resolved relative to the
referring document.  :func:`emit` is the canonical formatter, so
``emit(to_doc(parse(d))) == emit(d)`` for canonical ``d``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from .algebra import AlgebraElement, FiniteSpace, NotTauSymmetric, SpaceError
from .exact import CRational, fraction_str, rationalize, to_fraction
from .forms import BilinearForm, ComplexForm, FormDecomposition, Functional
from .preservers import BiopCertificate, InvalidStructure, LinearMap, PreserverStructure


class DocumentError(ValueError):
    """Malformed or inconsistent input document."""


@dataclass(frozen=True)
class NumberMode:
    """How scalars are read: exact strings only, or floats rationalized within ``tolerance``."""

    float_input: bool = False
    tolerance: float = 0.0

    def scalar(self, v, where: str) -> Fraction:
        if isinstance(v, bool):
            raise DocumentError(f"{where}: boolean is not a scalar")
        if isinstance(v, str):
            try:
                return to_fraction(v)
            except ValueError as exc:
                raise DocumentError(f"{where}: {exc}") from None
        if isinstance(v, int):
            return Fraction(v)
        if isinstance(v, float):
            if not self.float_input:
                raise DocumentError(f"{where}: float {v!r} needs --float-input")
            try:
                return rationalize(v, self.tolerance)
            except ValueError as exc:
                raise DocumentError(f"{where}: {exc}") from None
        raise DocumentError(f"{where}: expected a fraction string, got {type(v).__name__}")

    def complex(self, v, where: str) -> CRational:
        if isinstance(v, list):
            if len(v) != 2:
                raise DocumentError(f"{where}: complex value must be [re, im]")
            return CRational(self.scalar(v[0], where), self.scalar(v[1], where))
        return CRational(self.scalar(v, where))


EXACT = NumberMode()


# ---------------------------------------------------------------------------
# reading

def load_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from None
    return loads(text, str(path))


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _field(doc, key: str, where: str):
    if not isinstance(doc, dict):
        raise DocumentError(f"{where}: expected an object")
    if key not in doc:
        raise DocumentError(f"{where}: missing field {key!r}")
    return doc[key]


def parse_space(doc, base: Optional[Path] = None) -> FiniteSpace:
    if isinstance(doc, str):
        path = (base / doc) if base is not None else Path(doc)
        return parse_space(load_json(path), path.parent)
    points = _field(doc, "points", "space")
    sigma = doc.get("sigma", {})
    if not isinstance(points, list) or not all(isinstance(p, str) for p in points):
        raise DocumentError("space: points must be a list of strings")
    if not isinstance(sigma, dict) or not all(isinstance(v, str) for v in sigma.values()):
        raise DocumentError("space: sigma must map labels to labels")
    try:
        return FiniteSpace(points, sigma)
    except SpaceError as exc:
        raise DocumentError(f"space: {exc}") from None


def _vector(rows, n: int, mode: NumberMode, where: str) -> List[Fraction]:
    if not isinstance(rows, list) or len(rows) != n:
        raise DocumentError(f"{where}: expected a list of {n} scalars")
    return [mode.scalar(v, f"{where}[{k}]") for k, v in enumerate(rows)]


def _matrix(rows, m: int, n: int, mode: NumberMode, where: str) -> List[List[Fraction]]:
    if not isinstance(rows, list) or len(rows) != m:
        raise DocumentError(f"{where}: expected {m} rows")
    return [_vector(r, n, mode, f"{where}[{i}]") for i, r in enumerate(rows)]


def parse_element(doc, base=None, mode: NumberMode = EXACT) -> AlgebraElement:
    sp = parse_space(_field(doc, "space", "element"), base)
    values = _field(doc, "values", "element")
    if not isinstance(values, dict) or set(values) != set(sp.points):
        raise DocumentError("element: values must give every point exactly once")
    try:
        return sp.element({p: mode.complex(values[p], f"element.values.{p}") for p in sp.points})
    except NotTauSymmetric as exc:
        raise DocumentError(f"element: {exc}") from None


def parse_functional(doc, base=None, mode: NumberMode = EXACT) -> Functional:
    sp = parse_space(_field(doc, "space", "functional"), base)
    return Functional(sp, _vector(_field(doc, "coefficients", "functional"), sp.dim, mode,
                                  "functional.coefficients"))


def parse_form(doc, base=None, mode: NumberMode = EXACT) -> BilinearForm:
    sp = parse_space(_field(doc, "space", "form"), base)
    return BilinearForm(sp, _matrix(_field(doc, "matrix", "form"), sp.dim, sp.dim, mode,
                                    "form.matrix"))


def parse_map(doc, base=None, mode: NumberMode = EXACT) -> LinearMap:
    dom = parse_space(_field(doc, "domain", "map"), base)
    cod = parse_space(_field(doc, "codomain", "map"), base)
    return LinearMap(dom, cod, _matrix(_field(doc, "matrix", "map"), cod.dim, dom.dim, mode,
                                       "map.matrix"))


def parse_structure(doc, base=None, mode: NumberMode = EXACT) -> PreserverStructure:
    dom = parse_space(_field(doc, "domain", "structure"), base)
    cod = parse_space(_field(doc, "codomain", "structure"), base)
    phi = _field(doc, "phi", "structure")
    a1 = _field(doc, "a1", "structure")
    a2 = _field(doc, "a2", "structure")
    if not all(isinstance(d, dict) for d in (phi, a1, a2)):
        raise DocumentError("structure: phi, a1, a2 must be objects")
    try:
        st = PreserverStructure(dom, cod, phi,
                                {s: mode.complex(v, f"structure.a1.{s}") for s, v in a1.items()},
                                {s: mode.complex(v, f"structure.a2.{s}") for s, v in a2.items()})
    except InvalidStructure as exc:
        raise DocumentError(f"structure: {exc}") from None
    if "z3" in doc and list(doc["z3"]) != list(st.z3):
        raise DocumentError("structure: z3 does not match phi")
    return st


PARSERS = {
    "space": lambda d, base=None, mode=EXACT: parse_space(d, base),
    "element": parse_element,
    "functional": parse_functional,
    "form": parse_form,
    "map": parse_map,
    "structure": parse_structure,
}


# ---------------------------------------------------------------------------
# writing

def _q(v) -> str:
    return fraction_str(v)


def _c(v: CRational) -> List[str]:
    return [_q(v.re), _q(v.im)]


def space_doc(sp: FiniteSpace) -> Dict[str, Any]:
    return {"points": list(sp.points), "sigma": {t: sp.sigma(t) for t in sp.reps}}


def element_doc(x: AlgebraElement) -> Dict[str, Any]:
    return {"space": space_doc(x.space), "values": {p: _c(v) for p, v in zip(x.space.points, x.values)}}


def functional_doc(g: Functional) -> Dict[str, Any]:
    return {"space": space_doc(g.space), "coefficients": [_q(v) for v in g.coeffs]}


def _rows(m: Sequence[Sequence[Fraction]]) -> List[List[str]]:
    return [[_q(v) for v in r] for r in m]


def form_doc(V: BilinearForm) -> Dict[str, Any]:
    return {"space": space_doc(V.space), "matrix": _rows(V.matrix)}


def complex_form_doc(W: ComplexForm) -> Dict[str, Any]:
    return {"space": space_doc(W.space), "basis": list(W.space.points),
            "matrix": [[_c(v) for v in r] for r in W.matrix]}


def map_doc(T: LinearMap) -> Dict[str, Any]:
    return {"domain": space_doc(T.domain), "codomain": space_doc(T.codomain),
            "matrix": _rows(T.matrix)}


def structure_doc(st: PreserverStructure) -> Dict[str, Any]:
    return {
        "domain": space_doc(st.domain),
        "codomain": space_doc(st.codomain),
        "z1": list(st.z1),
        "z2": list(st.z2),
        "z3": list(st.z3),
        "phi": dict(st.phi),
        "a1": {s: _c(v) for s, v in st.a1.items()},
        "a2": {s: _c(v) for s, v in st.a2.items()},
    }


def decomposition_doc(dec: FormDecomposition) -> Dict[str, Any]:
    return {"phi1": functional_doc(dec.phi1), "phi2": functional_doc(dec.phi2)}


def certificate_doc(cert: BiopCertificate, inverse: Optional[LinearMap] = None) -> Dict[str, Any]:
    out = {
        "structure": structure_doc(cert.structure),
        "bijection": dict(cert.bijection),
        "determinants": {s: _q(d) for s, d in cert.determinants.items()},
        "inverse_structure": structure_doc(cert.inverse),
    }
    if inverse is not None:
        out["inverse_map"] = map_doc(inverse)
    return out


def to_doc(obj) -> Dict[str, Any]:
    """Document for any library object that has one."""
    for cls, fn in ((FiniteSpace, space_doc), (AlgebraElement, element_doc),
                    (Functional, functional_doc), (BilinearForm, form_doc),
                    (ComplexForm, complex_form_doc), (LinearMap, map_doc),
                    (PreserverStructure, structure_doc), (FormDecomposition, decomposition_doc),
                    (BiopCertificate, certificate_doc)):
        if isinstance(obj, cls):
            return fn(obj)
    raise TypeError(f"no document type for {type(obj).__name__}")


def emit(doc) -> str:
    """Canonical text: two-space indent, key order preserved, trailing newline."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
