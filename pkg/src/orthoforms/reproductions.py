"""The two worked instances: a complexification counterexample and an OP bijection that is not bi-OP."""

from __future__ import annotations

from typing import Dict, Tuple

from .algebra import FiniteSpace
from .exact import CRational
from .forms import (BilinearForm, Functional, complexify_form, decompose, is_extension_orthogonal,
                    is_orthogonal_form, orthogonality_oracle, phi2_eliminable,
                    representation_equivalent)
from .preservers import (LinearMap, analyze, inverse_preserves_invertibles_check,
                         is_biorthogonality_preserving, is_orthogonality_preserving, reconstruct,
                         spaces_admit_biop, structure_from_orbits)

# value the extension is claimed to take on (chi_t1, chi_t2)
CLAIMED_EXTENSION_VALUE = CRational(1)


def swap_space() -> FiniteSpace:
    return FiniteSpace(["t1", "t2"], {"t1": "t2"})


def swap_form() -> BilinearForm:
    """``V(x, y) = Re(x(t1) y(t2))`` on the two-point swap space."""
    sp = swap_space()
    return BilinearForm.from_function(sp, lambda x, y: (x["t1"] * y["t2"]).re)


def complexification_instance() -> Dict[str, object]:
    V = swap_form()
    sp = V.space
    W = complexify_form(V)
    dec = decompose(V)
    target = (Functional.zero(sp), Functional.re_delta(sp, "t1"))
    value = W.entry("t1", "t2")
    checks = {
        "form_orthogonal": is_orthogonal_form(V),
        "oracle_agrees": orthogonality_oracle(V) is None,
        "decomposition_equivalent_to_(0,Re delta_t1)": representation_equivalent(
            (dec.phi1, dec.phi2), target),
        "extension_value_nonzero": bool(value),
        f"extension_value_equals_{CLAIMED_EXTENSION_VALUE}": value == CLAIMED_EXTENSION_VALUE,
        "extension_not_orthogonal": not is_extension_orthogonal(W),
        "phi2_not_eliminable": not phi2_eliminable(V),
    }
    return {"form": V, "extension": W, "decomposition": dec, "extension_value": value,
            "checks": checks}


def biop_spaces() -> Tuple[FiniteSpace, FiniteSpace]:
    """Domain with 2-cycles at t1, t3 and fixed t2; codomain with one 2-cycle at s1.

    Partners not named in the worked instance are labelled with a prime.
    """
    L1 = FiniteSpace(["t1", "t1'", "t2", "t3", "t3'"], {"t1": "t1'", "t3": "t3'"})
    L2 = FiniteSpace(["s1", "s1'", "s2", "s3", "s4"], {"s1": "s1'"})
    return L1, L2


def biop_map() -> LinearMap:
    """``f(t1)`` at s1, ``f(t2)`` at s2, ``Re f(t3)`` at s3, ``Im f(t3)`` at s4."""
    L1, L2 = biop_spaces()
    st = structure_from_orbits(
        L1, L2,
        phi={"s1": "t1", "s2": "t2", "s3": "t3", "s4": "t3"},
        a1={"s1": 1, "s2": 1, "s3": 1, "s4": 0},
        a2={"s1": CRational(0, 1), "s3": 0, "s4": 1},
    )
    return reconstruct(st)


def biop_instance() -> Dict[str, object]:
    T = biop_map()
    L1, L2 = T.domain, T.codomain
    st = analyze(T)
    decision = is_biorthogonality_preserving(T)
    admit, _ = spaces_admit_biop(L1, L2)
    checks = {
        "op": is_orthogonality_preserving(T),
        "bijective": T.is_bijective(),
        "not_biop": not decision.ok,
        "inverse_not_op": not is_orthogonality_preserving(T.inverse()),
        "inverse_preserves_invertibles": inverse_preserves_invertibles_check(T),
        "spaces_do_not_admit_biop": not admit,
    }
    return {"map": T, "structure": st, "decision": decision, "checks": checks}


def weights_at(structure, points) -> Tuple[Tuple[CRational, ...], Tuple[CRational, ...]]:
    return (tuple(structure.a1[s] for s in points), tuple(structure.a2[s] for s in points))

