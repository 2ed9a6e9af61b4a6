from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from orthoforms import (CRational, InvalidCertificate, InvalidStructure, LinearMap, NotOPBijection,
                        NotOrthogonalityPreserving, PreconditionFailed, PreserverStructure,
                        analyze, apply, biop_direct, f2_empty_implies_biop_check, invert_biop,
                        inverse_preserves_invertibles_check, is_biorthogonality_preserving,
                        is_orthogonality_preserving, make_space, reconstruct, spaces_admit_biop,
                        structure_from_orbits, surjectivity_consequences_check)
from orthoforms.algebra import is_invertible
from orthoforms.exact import CONE, CZERO, I
from orthoforms.genfuzz import GenConfig, random_biop_map, random_op_bijection, random_structure
from orthoforms.preservers import BiopCertificate, op_by_row_support, op_oracle
from orthoforms.reproductions import biop_map, biop_spaces

from strategies import elements, spaces


def identity_map(sp):
    return LinearMap.identity(sp)


# -- the bi-OP counterexample -------------------------------------------------------

def test_biop_example_matches_defining_formulas():
    T = biop_map()
    L1, _ = biop_spaces()
    f = L1.from_orbit_values({"t1": CRational(2, 3), "t2": CRational(5), "t3": CRational(-1, 7)})
    g = apply(T, f)
    assert g["s1"] == f["t1"] and g["s1'"] == f["t1'"]
    assert g["s2"] == f["t2"]
    assert g["s3"] == CRational(f["t3"].re) and g["s4"] == CRational(f["t3"].im)


def test_biop_example_on_u_t3():
    T = biop_map()
    L1, _ = biop_spaces()
    g = apply(T, L1.u(["t3"]))
    assert g["s3"] == CZERO and g["s4"] == CONE


def test_biop_example_structure():
    st_ = analyze(biop_map())
    assert st_.z3 == ()
    assert [st_.phi[s] for s in ("s1", "s2", "s3", "s4")] == ["t1", "t2", "t3", "t3"]
    assert [st_.a1[s] for s in ("s1", "s2", "s3", "s4")] == [CONE, CONE, CONE, CZERO]
    assert [st_.a2[s] for s in ("s1", "s2", "s3", "s4")] == [I, CZERO, CZERO, CONE]


def test_biop_example_is_op_bijection_but_not_biop():
    T = biop_map()
    assert is_orthogonality_preserving(T) and T.is_bijective()
    decision = is_biorthogonality_preserving(T)
    assert not decision.ok and "not injective" in decision.reason
    assert not is_orthogonality_preserving(T.inverse())
    assert inverse_preserves_invertibles_check(T)
    assert surjectivity_consequences_check(T).passed
    assert spaces_admit_biop(*biop_spaces()) == (False, None)


# -- basics ----------------------------------------------------------------------------

def test_identity_and_zero_maps():
    sp = make_space(["a", "b", "c"], {"b": "c"})
    T = identity_map(sp)
    x = sp.from_orbit_values({"a": 3, "b": CRational(1, 2)})
    assert apply(T, x) == x
    assert apply(LinearMap.zero(sp, sp), x).is_zero()
    st_ = analyze(T)
    assert st_.phi == {"a": "a", "b": "b", "c": "b"}
    assert st_.a1["a"] == CONE and st_.a2["a"] == CZERO
    assert st_.a2["b"] == I and st_.a2["c"] == -I
    assert reconstruct(st_) == T
    analyze_zero = analyze(LinearMap.zero(sp, sp))
    assert analyze_zero.z3 == sp.points


def test_identity_is_biop_with_identity_inverse():
    sp = make_space(["a", "b", "c"], {"b": "c"})
    decision = is_biorthogonality_preserving(identity_map(sp))
    assert decision.ok
    assert invert_biop(decision.certificate) == identity_map(sp)
    assert f2_empty_implies_biop_check(identity_map(make_space(["x", "y"], {"x": "y"})))


def test_non_op_map_gives_witness():
    sp = make_space(["a", "b"])
    T = LinearMap(sp, sp, [[1, 1], [0, 1]])
    assert not is_orthogonality_preserving(T)
    with pytest.raises(NotOrthogonalityPreserving) as info:
        analyze(T)
    x, y = info.value.witness
    from orthoforms.algebra import is_orthogonal_pair
    assert is_orthogonal_pair(x, y) and not is_orthogonal_pair(apply(T, x), apply(T, y))


def test_scaled_fixed_weight_inverts_to_half():
    L = make_space(["t0", "t1", "t2"], {"t1": "t2"})
    st_ = structure_from_orbits(L, L, {"t0": "t0", "t1": "t1"}, {"t0": 2, "t1": 1}, {"t1": I})
    decision = is_biorthogonality_preserving(reconstruct(st_))
    inv = decision.certificate.inverse
    assert inv.a1["t0"] == CRational(Fraction(1, 2))
    S = invert_biop(decision.certificate)
    assert S.matrix[0][0] == Fraction(1, 2)


def test_invalid_structures_rejected():
    L = make_space(["a", "b", "c"], {"b": "c"})
    with pytest.raises(InvalidStructure):  # weights at partner are not conjugate
        PreserverStructure(L, L, {"b": "b", "c": "b"}, {"b": I, "c": I}, {})
    with pytest.raises(InvalidStructure):  # fixed codomain point with complex weight
        PreserverStructure(L, L, {"a": "a"}, {"a": I}, {})
    with pytest.raises(InvalidStructure):  # a2 on a point sent to a fixed point
        PreserverStructure(L, L, {"a": "a"}, {"a": 1}, {"a": 1})
    with pytest.raises(InvalidStructure):  # Z3 point with a weight
        PreserverStructure(L, L, {}, {"a": 1}, {})
    with pytest.raises(InvalidStructure):  # target is not an orbit representative
        PreserverStructure(L, L, {"a": "c"}, {"a": 1}, {"a": 1})
    with pytest.raises(InvalidStructure):  # both weights vanish on Z1
        PreserverStructure(L, L, {"b": "b", "c": "b"}, {}, {})


def test_partner_target_is_normalized():
    L = make_space(["a", "b", "c"], {"b": "c"})
    st_ = structure_from_orbits(L, L, {"b": "c"}, {"b": 1}, {"b": I})
    assert st_.phi["b"] == "b" and st_.a2["b"] == -I
    assert analyze(reconstruct(st_)) == st_


def test_bad_certificate_rejected():
    L = make_space(["a", "b"])
    T = LinearMap(L, L, [[2, 0], [0, 1]])
    cert = is_biorthogonality_preserving(T).certificate
    bad = BiopCertificate(T, cert.structure, cert.bijection, cert.determinants, cert.structure)
    with pytest.raises(InvalidCertificate):
        invert_biop(bad)


def test_precondition_errors():
    L = make_space(["a", "b"])
    T = LinearMap(L, L, [[1, 1], [0, 1]])
    with pytest.raises(NotOPBijection):
        inverse_preserves_invertibles_check(T)
    with pytest.raises(PreconditionFailed):
        f2_empty_implies_biop_check(identity_map(L))
    C = make_space(["x", "y"], {"x": "y"})
    with pytest.raises(PreconditionFailed):
        f2_empty_implies_biop_check(LinearMap.zero(C, C))
    with pytest.raises(NotOrthogonalityPreserving):
        surjectivity_consequences_check(T)


def test_surjectivity_report_for_non_surjective_map():
    L = make_space(["a", "b"])
    rep = surjectivity_consequences_check(LinearMap.zero(L, L))
    assert not rep.surjective and rep.z3_empty is None and rep.passed
    assert rep.z1_compact.startswith("vacuous")


def test_spaces_admit_biop():
    L = make_space(["a", "b", "c"], {"b": "c"})
    ok, S = spaces_admit_biop(L, L)
    assert ok and S == identity_map(L)
    M = make_space(["z", "y", "x"], {"z": "x"})
    ok, S = spaces_admit_biop(L, M)
    assert ok and is_biorthogonality_preserving(S).ok
    assert not spaces_admit_biop(L, make_space(["a", "b", "c"]))[0]


# -- property tests --------------------------------------------------------------------

CFG = GenConfig(num_bound=4, den_bound=3)


def seeded(seed):
    import random
    return random.Random(seed)


def pointwise(st_, f, s):
    if s not in st_.phi:
        return CZERO
    v = f[st_.phi[s]]
    return st_.a1[s] * v.re + st_.a2[s] * v.im


@given(st.data(), st.integers(0, 2 ** 32))
def test_reconstruct_follows_weighted_formula(data, seed):
    L1 = data.draw(spaces(prefix="t"))
    L2 = data.draw(spaces(prefix="s"))
    st_ = random_structure(L1, L2, CFG, seeded(seed))
    T = reconstruct(st_)
    f = data.draw(elements(L1))
    g = apply(T, f)
    assert all(g[s] == pointwise(st_, f, s) for s in L2.points)
    assert is_orthogonality_preserving(T)
    assert analyze(T) == st_
    assert reconstruct(analyze(T)) == T


@given(st.data(), st.integers(0, 2 ** 32))
def test_op_characterizations_agree(data, seed):
    L1 = data.draw(spaces(prefix="t", max_fixed=2, max_cycles=2))
    L2 = data.draw(spaces(prefix="s", max_fixed=2, max_cycles=2))
    rng = seeded(seed)
    if data.draw(st.booleans()):
        T = reconstruct(random_structure(L1, L2, CFG, rng))
    else:
        vals = st.sampled_from([0, 0, 0, 1, -1, 2])
        T = LinearMap(L1, L2, [[data.draw(vals) for _ in range(L1.dim)] for _ in range(L2.dim)])
    a = is_orthogonality_preserving(T)
    assert a == op_by_row_support(T) == (op_oracle(T, trials=200) is None)


@given(st.data(), st.integers(0, 2 ** 32))
def test_biop_maps_invert_exactly(data, seed):
    L1 = data.draw(spaces(prefix="t"))
    perm = data.draw(st.permutations(list(L1.points)))
    L2 = make_space([f"s{p}" for p in perm], {f"s{t}": f"s{L1.sigma(t)}" for t in L1.reps})
    T = random_biop_map(L1, L2, CFG, seeded(seed))
    decision = is_biorthogonality_preserving(T)
    assert decision.ok
    S = invert_biop(decision.certificate)
    assert S.compose(T) == identity_map(L1) and T.compose(S) == identity_map(L2)
    assert all(d != 0 for d in decision.certificate.determinants.values())


@given(st.data(), st.integers(0, 2 ** 32))
def test_op_bijections(data, seed):
    L1 = data.draw(spaces(prefix="t"))
    T = random_op_bijection(L1, CFG, seeded(seed))
    assert T.is_bijective() and is_orthogonality_preserving(T)
    assert is_biorthogonality_preserving(T).ok == biop_direct(T)
    assert inverse_preserves_invertibles_check(T)
    assert surjectivity_consequences_check(T).passed
    if not T.codomain.fixed:
        assert f2_empty_implies_biop_check(T)


def test_inverse_invertibles_exhaustive_grid():
    L1 = make_space(["t0", "t1", "t2"], {"t1": "t2"})
    L2 = make_space(["s0", "s1", "s2"])
    # t0 -> s0, the 2-cycle split over two fixed points
    st_ = PreserverStructure(L1, L2, {"s0": "t0", "s1": "t1", "s2": "t1"},
                             {"s0": 1, "s1": 1, "s2": 1}, {"s1": 1, "s2": -1})
    T = reconstruct(st_)
    assert T.is_bijective() and not is_biorthogonality_preserving(T).ok
    Tinv = T.inverse()
    grid = [Fraction(v) for v in (-2, -1, 1, 2)]
    for vals in product(grid, repeat=3):
        g = L2.element(dict(zip(L2.points, vals)))
        assert is_invertible(g) and is_invertible(apply(Tinv, g))
    assert inverse_preserves_invertibles_check(T)


# -- multiplicativity (test utility only) -------------------------------------------

def is_multiplicative(T):
    """``T(b_i b_j) = T(b_i) T(b_j)`` on every pair of basis elements."""
    B = T.domain.basis
    return all(T(x * y) == T(x) * T(y) for x in B for y in B)


def test_composition_witness_is_multiplicative():
    L1 = make_space(["a", "b", "c", "d"], {"c": "d"})
    L2 = make_space(["x", "y", "z", "w"], {"y": "z"})
    ok, S = spaces_admit_biop(L1, L2)
    assert ok and is_multiplicative(S)


def test_weighted_biop_map_is_not_multiplicative():
    T = biop_map()
    assert not is_multiplicative(T)
    sp = make_space(["a", "b"], {"a": "b"})
    st = structure_from_orbits(sp, sp, {"a": "a"}, {"a": CRational(2)}, {"a": CRational(0, 2)})
    U = reconstruct(st)
    assert is_biorthogonality_preserving(U).ok and not is_multiplicative(U)
