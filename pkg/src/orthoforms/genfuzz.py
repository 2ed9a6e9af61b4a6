"""Seeded generators and the property-suite harness.

Every trial draws from its own ``random.Random`` seeded by
``(master seed, suite name, trial index)``, so a report depends only on the
configuration.  A failing trial is re-run at smaller size bounds and the
smallest still-failing counterexample is attached to the report.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, replace
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from . import documents as docs
from . import linalg
from .algebra import AlgebraElement, FiniteSpace, from_coords, is_orthogonal_pair, split_sa_skew
from .exact import CRational
from .forms import (BilinearForm, Functional, NotOrthogonal, _composition_columns, complexify_form,
                    compose_form, decompose, find_orthogonality_violation, is_extension_orthogonal,
                    is_orthogonal_form, self_adjoint_conditions, orthogonality_oracle, phi2_eliminable,
                    subset_identities, representation_equivalent, solve_representation,
                    symmetric_sa_functional)
from .preservers import (LinearMap, PreserverStructure, analyze, biop_direct, f2_empty_implies_biop_check,
                         find_op_violation, inverse_preserves_invertibles_check, invert_biop,
                         is_biorthogonality_preserving, is_orthogonality_preserving, op_by_row_support,
                         op_oracle, reconstruct, row_support, surjectivity_consequences_check, spaces_admit_biop,
                         structure_from_orbits)

DET_ATTEMPTS = 100
STRUCTURE_ATTEMPTS = 100


class IncompatibleSpaces(ValueError):
    pass


class UnknownSuite(KeyError):
    pass


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_fixed: int = 3
    max_cycles: int = 3
    num_bound: int = 8
    den_bound: int = 8
    trials: int = 100
    mutate: bool = False
    oracle_trials: int = 64

    def __post_init__(self):
        if self.max_fixed < 0 or self.max_cycles < 0 or self.max_fixed + self.max_cycles == 0:
            raise ValueError("size bounds must allow at least one point")
        if self.num_bound < 1 or self.den_bound < 1:
            raise ValueError("numerator and denominator bounds must be positive")
        if self.trials < 0:
            raise ValueError("trial count must be non-negative")


def trial_rng(cfg: GenConfig, *keys) -> random.Random:
    return random.Random("/".join(str(k) for k in (cfg.seed,) + keys))


# ---------------------------------------------------------------------------
# scalars, spaces, elements

def random_rational(rng: random.Random, cfg: GenConfig, nonzero: bool = False) -> Fraction:
    while True:
        if not nonzero and rng.random() < 0.2:
            return Fraction(0)
        v = Fraction(rng.randint(-cfg.num_bound, cfg.num_bound), rng.randint(1, cfg.den_bound))
        if v:
            return v


def random_complex(rng, cfg, real: bool = False, nonzero: bool = False) -> CRational:
    while True:
        v = CRational(random_rational(rng, cfg), Fraction(0) if real else random_rational(rng, cfg))
        if v or not nonzero:
            return v


def random_space(cfg: GenConfig, rng: random.Random | None = None, prefix: str = "p",
                 shape: Tuple[int, int] | None = None) -> FiniteSpace:
    """Space with ``|F| <= max_fixed`` and at most ``max_cycles`` 2-cycles, points shuffled."""
    rng = rng or trial_rng(cfg, "space")
    if shape is None:
        while True:
            nf, nc = rng.randint(0, cfg.max_fixed), rng.randint(0, cfg.max_cycles)
            if nf + nc:
                break
    else:
        nf, nc = shape
    n = nf + 2 * nc
    labels = [f"{prefix}{k}" for k in range(n)]
    order = labels[:]
    rng.shuffle(order)
    cyc = order[nf:]
    return FiniteSpace(labels, {cyc[2 * k]: cyc[2 * k + 1] for k in range(nc)})


def random_element(space: FiniteSpace, cfg: GenConfig, rng: random.Random) -> AlgebraElement:
    return space.from_orbit_values({t: random_complex(rng, cfg, real=space.sigma(t) == t)
                                    for t in space.orbits})


def random_functional(space: FiniteSpace, cfg: GenConfig, rng: random.Random) -> Functional:
    return Functional(space, [random_rational(rng, cfg) for _ in range(space.dim)])


# ---------------------------------------------------------------------------
# forms

def cross_orbit_entries(space: FiniteSpace) -> List[Tuple[int, int]]:
    orb = space.basis_orbit
    n = space.dim
    return [(i, j) for i in range(n) for j in range(n) if orb[i] != orb[j]]


def mutate_form(V: BilinearForm, rng: random.Random) -> Optional[Tuple[BilinearForm, Tuple[int, int]]]:
    """Flip one cross-orbit entry to a nonzero value; None when there is only one orbit."""
    cells = cross_orbit_entries(V.space)
    if not cells:
        return None
    i, j = rng.choice(cells)
    return V.with_entry(i, j, V.matrix[i][j] + rng.choice([-1, 1])), (i, j)


def _maybe_mutate_form(V, cfg, rng):
    if cfg.mutate:
        hit = mutate_form(V, rng)
        if hit is not None:
            return hit[0]
    return V


def random_orthogonal_form(space: FiniteSpace, cfg: GenConfig, rng: random.Random) -> BilinearForm:
    """``compose_form`` of two random functionals."""
    V = compose_form(random_functional(space, cfg, rng), random_functional(space, cfg, rng))
    return _maybe_mutate_form(V, cfg, rng)


def _block_matrix(space, cfg, rng):
    orb = space.basis_orbit
    n = space.dim
    return [[random_rational(rng, cfg) if orb[i] == orb[j] else Fraction(0) for j in range(n)]
            for i in range(n)]


def random_orthogonal_form_complete(space: FiniteSpace, cfg: GenConfig, rng: random.Random) -> BilinearForm:
    """Arbitrary matrix with every cross-orbit entry zeroed."""
    return _maybe_mutate_form(BilinearForm(space, _block_matrix(space, cfg, rng)), cfg, rng)


def random_symmetric_orthogonal_form(space: FiniteSpace, cfg: GenConfig, rng: random.Random) -> BilinearForm:
    m = _block_matrix(space, cfg, rng)
    n = space.dim
    return BilinearForm(space, [[m[i][j] + m[j][i] for j in range(n)] for i in range(n)])


def random_form(space: FiniteSpace, cfg: GenConfig, rng: random.Random) -> BilinearForm:
    n = space.dim
    return BilinearForm(space, [[random_rational(rng, cfg) for _ in range(n)] for _ in range(n)])


# ---------------------------------------------------------------------------
# maps

def _weights(rng, cfg, s_fixed: bool, t_fixed: bool) -> Tuple[CRational, CRational]:
    if t_fixed:
        return random_complex(rng, cfg, real=s_fixed, nonzero=True), CRational(0)
    while True:
        a1 = random_complex(rng, cfg, real=s_fixed)
        a2 = random_complex(rng, cfg, real=s_fixed)
        if a1 or a2:
            return a1, a2


def _target(rng, L1: FiniteSpace, t: str, a2: CRational) -> Tuple[str, CRational]:
    """Occasionally name the partner of ``t`` instead, with ``a2`` negated to match."""
    if L1.sigma(t) != t and rng.random() < 0.3:
        return L1.sigma(t), -a2
    return t, a2


def random_structure(L1: FiniteSpace, L2: FiniteSpace, cfg: GenConfig, rng: random.Random,
                     z3_rate: float = 0.25) -> PreserverStructure:
    phi, a1, a2 = {}, {}, {}
    for s in L2.orbits:
        if rng.random() < z3_rate:
            continue
        t = rng.choice(L1.orbits)
        w1, w2 = _weights(rng, cfg, L2.sigma(s) == s, L1.sigma(t) == t)
        phi[s], a2[s] = _target(rng, L1, t, w2)
        a1[s] = w1
    return structure_from_orbits(L1, L2, phi, a1, a2)


def redirect_image(T: LinearMap, rng: random.Random) -> Optional[Tuple[LinearMap, int, str]]:
    """Add a codomain point from another orbit's support to one basis image."""
    dom, cod = T.domain, T.codomain
    orb = dom.basis_orbit
    options = []
    for j in range(dom.dim):
        for s in cod.orbits:
            rows = row_support(T, s)
            if rows and orb[j] not in rows:
                options.append((j, s))
    if not options:
        return None
    j, s = rng.choice(options)
    col = [T.matrix[i][j] for i in range(cod.dim)]
    col[cod.basis_position[("s", s)]] += 1
    return T.with_column(j, col), j, s


def _maybe_redirect(T, cfg, rng):
    if cfg.mutate:
        hit = redirect_image(T, rng)
        if hit is not None:
            return hit[0]
    return T


def random_op_map(L1: FiniteSpace, L2: FiniteSpace, cfg: GenConfig, rng: random.Random) -> LinearMap:
    return _maybe_redirect(reconstruct(random_structure(L1, L2, cfg, rng)), cfg, rng)


def random_biop_structure(L1: FiniteSpace, L2: FiniteSpace, cfg: GenConfig,
                          rng: random.Random) -> PreserverStructure:
    if not spaces_admit_biop(L1, L2)[0]:
        raise IncompatibleSpaces("spaces differ in fixed-point or 2-cycle count")
    for _ in range(STRUCTURE_ATTEMPTS):
        f1, o1 = list(L1.fixed), list(L1.reps)
        rng.shuffle(f1)
        rng.shuffle(o1)
        phi, a1, a2 = dict(zip(L2.fixed, f1)), {}, {}
        for s in L2.fixed:
            a1[s] = random_complex(rng, cfg, real=True, nonzero=True)
        ok = True
        for s, t in zip(L2.reps, o1):
            for _ in range(DET_ATTEMPTS):
                w1 = random_complex(rng, cfg, nonzero=True)
                w2 = random_complex(rng, cfg)
                if w1.re * w2.im - w2.re * w1.im:
                    break
            else:
                ok = False
                break
            a1[s] = w1
            phi[s], a2[s] = _target(rng, L1, t, w2)
        if ok:
            return structure_from_orbits(L1, L2, phi, a1, a2)
    raise RuntimeError("could not draw a nondegenerate bi-orthogonality preserving structure")


def random_biop_map(L1: FiniteSpace, L2: FiniteSpace, cfg: GenConfig, rng: random.Random) -> LinearMap:
    return _maybe_redirect(reconstruct(random_biop_structure(L1, L2, cfg, rng)), cfg, rng)


def random_op_bijection(L1: FiniteSpace, cfg: GenConfig, rng: random.Random,
                        split_rate: float = 0.5, prefix: str = "q") -> LinearMap:
    """OP bijection out of ``L1`` onto a generated codomain.

    Each fixed point goes to one new fixed point.  Each 2-cycle goes either to
    one new 2-cycle with an invertible weight matrix, or is split over two new
    fixed points with a nonsingular real 2x2 (never bi-OP).
    """
    plan = []  # (kind, target, weights)
    for t in L1.fixed:
        plan.append(("f", t, [(random_complex(rng, cfg, real=True, nonzero=True), CRational(0))]))
    for t in L1.reps:
        split = rng.random() < split_rate
        while True:
            if split:
                w = [(random_complex(rng, cfg, real=True), random_complex(rng, cfg, real=True))
                     for _ in range(2)]
                det = w[0][0].re * w[1][1].re - w[0][1].re * w[1][0].re
            else:
                w = [(random_complex(rng, cfg, nonzero=True), random_complex(rng, cfg))]
                det = w[0][0].re * w[0][1].im - w[0][1].re * w[0][0].im
            if det:
                break
        plan.append(("split" if split else "c", t, w))
    n = sum(2 if k != "f" else 1 for k, _, _ in plan)
    labels = [f"{prefix}{k}" for k in range(n)]
    pool = labels[:]
    rng.shuffle(pool)
    sigma, phi, a1, a2 = {}, {}, {}, {}
    for kind, t, w in plan:
        if kind == "c":
            s, s2 = pool.pop(), pool.pop()
            sigma[s] = s2
            phi[s] = t
            a1[s], a2[s] = w[0]
        else:
            for w1, w2 in w:
                s = pool.pop()
                phi[s] = t
                a1[s], a2[s] = w1, w2
    L2 = FiniteSpace(labels, sigma)
    # structure_from_orbits keys on representatives; a 2-cycle's first label may be its partner
    fixed_phi, fixed_a1, fixed_a2 = {}, {}, {}
    for s, t in phi.items():
        rep = L2.orbit_of(s)
        conj = rep != s
        fixed_phi[rep] = t
        fixed_a1[rep] = a1[s].conj() if conj else a1[s]
        fixed_a2[rep] = a2[s].conj() if conj else a2[s]
    return reconstruct(structure_from_orbits(L1, L2, fixed_phi, fixed_a1, fixed_a2))


# ---------------------------------------------------------------------------
# suites

class TrialFailure(Exception):
    def __init__(self, message: str, document=None):
        super().__init__(message)
        self.document = document


VACUOUS = "vacuous"


def _check(cond: bool, message: str, *objs):
    if not cond:
        raise TrialFailure(message, _bundle(objs))


def _bundle(objs):
    if not objs:
        return None
    if len(objs) == 1:
        return docs.to_doc(objs[0])
    return [docs.to_doc(o) for o in objs]


def _space(rng, cfg, prefix="p"):
    return random_space(cfg, rng, prefix)


def t_ring_axioms(rng, cfg):
    sp = _space(rng, cfg)
    x, y, z = (random_element(sp, cfg, rng) for _ in range(3))
    c = random_rational(rng, cfg)
    one = sp.unit()
    _check(x * y == y * x, "product is not commutative", x, y)
    _check((x * y) * z == x * (y * z), "product is not associative", x, y, z)
    _check(x * (y + z) == x * y + x * z, "product is not additive", x, y, z)
    _check((x * c) * y == (x * y) * c, "product is not homogeneous", x, y)
    _check((x * y).star() == x.star() * y.star(), "involution is not multiplicative", x, y)
    _check(x * one == x, "unit is not neutral", x)
    u0 = sp.u0()
    _check(sp.chi(sp.fixed) + u0 * u0.star() == one, "chi_F + u0 u0* != 1", sp)


def t_coords_roundtrip(rng, cfg):
    sp = _space(rng, cfg)
    x = random_element(sp, cfg, rng)
    _check(len(x.coords()) == len(sp.points), "dimension differs from point count", sp)
    _check(from_coords(sp, x.coords()) == x, "from_coords(coords(x)) != x", x)
    vec = [random_rational(rng, cfg) for _ in range(sp.dim)]
    _check(list(from_coords(sp, vec).coords()) == vec, "coords(from_coords(v)) != v", sp)


def t_sa_skew(rng, cfg):
    sp = _space(rng, cfg)
    x = random_element(sp, cfg, rng)
    h, k = split_sa_skew(x)
    _check(h + k == x and h.star() == h and k.star() == -k, "bad self-adjoint/skew split", x)
    _check(all(not k[t] for t in sp.fixed), "skew part does not vanish on F", x)


def t_orthogonality(rng, cfg):
    sp = _space(rng, cfg)
    x, y = random_element(sp, cfg, rng), random_element(sp, cfg, rng)
    keep_x = {t for t in sp.orbits if rng.random() < 0.6}
    keep_y = {t for t in sp.orbits if rng.random() < 0.6}
    x = sp.from_orbit_values({t: x[t] for t in keep_x})
    y = sp.from_orbit_values({t: y[t] for t in keep_y})
    pointwise = all(not (a * b.conj()) for a, b in zip(x.values, y.values))
    disjoint = not (x.orbit_support() & y.orbit_support())
    got = is_orthogonal_pair(x, y)
    _check(got == pointwise == disjoint, "orthogonality characterizations disagree", x, y)


def t_soundness(rng, cfg):
    sp = _space(rng, cfg)
    V = random_orthogonal_form(sp, cfg, rng)
    _check(is_orthogonal_form(V), "composed form is not orthogonal", V)
    hit = orthogonality_oracle(V, trials=cfg.oracle_trials, seed=rng.randrange(2 ** 32))
    _check(hit is None, "oracle found an orthogonal pair with V != 0", V, *(hit or ()))


def t_completeness(rng, cfg):
    sp = _space(rng, cfg)
    V = random_orthogonal_form_complete(sp, cfg, rng)
    try:
        dec = decompose(V)
    except NotOrthogonal as exc:
        raise TrialFailure(f"decompose rejected a generated form: {exc}", docs.to_doc(V)) from None
    for _ in range(4):
        x, y = random_element(sp, cfg, rng), random_element(sp, cfg, rng)
        _check(V(x, y) == dec.phi1(x * y) + dec.phi2(x * y.star()),
               "V(x, y) != phi1(xy) + phi2(xy*)", V, x, y)


def t_oracle_agreement(rng, cfg):
    sp = _space(rng, cfg)
    V = random_orthogonal_form_complete(sp, cfg, rng)
    if rng.random() < 0.5:
        hit = mutate_form(V, rng)
        if hit is not None:
            V = hit[0]
    found = orthogonality_oracle(V, trials=max(cfg.oracle_trials, 256), seed=rng.randrange(2 ** 32))
    _check(is_orthogonal_form(V) == (found is None), "decider and oracle disagree", V)


def t_representation(rng, cfg):
    sp = _space(rng, cfg)
    g1, g2 = random_functional(sp, cfg, rng), random_functional(sp, cfg, rng)
    kernel = linalg.nullspace(_composition_columns(sp))
    shift = [Fraction(0)] * (2 * sp.dim)
    for v in kernel:
        c = random_rational(rng, cfg)
        shift = [a + c * b for a, b in zip(shift, v)]
    h1 = g1 + Functional(sp, shift[:sp.dim])
    h2 = g2 + Functional(sp, shift[sp.dim:])
    _check(representation_equivalent((g1, g2), (h1, h2)), "kernel shift changed the form", g1, g2, h1, h2)
    k = rng.randrange(sp.dim)
    e = Functional.basis_dual(sp, k) * random_rational(rng, cfg, nonzero=True)
    p1, p2 = (g1 + e, g2) if rng.random() < 0.5 else (g1, g2 + e)
    same = compose_form(p1, p2) == compose_form(g1, g2)
    _check(representation_equivalent((g1, g2), (p1, p2)) == same, "equivalence disagrees with form equality",
           g1, g2, p1, p2)
    V = compose_form(g1, g2)
    sol = solve_representation(V)
    _check(sol is not None and compose_form(*sol) == V, "solver missed a representation", V)


def t_symmetric_sa(rng, cfg):
    sp = _space(rng, cfg)
    V = random_symmetric_orthogonal_form(sp, cfg, rng)
    phi = symmetric_sa_functional(V)
    one = sp.unit()
    for _ in range(4):
        a, b = random_element(sp, cfg, rng), random_element(sp, cfg, rng)
        a, b = (a + a.star()) * Fraction(1, 2), (b + b.star()) * Fraction(1, 2)
        m = (a * b + b * a) * Fraction(1, 2)
        _check(V(a, b) == V(m, one) == phi(m), "V(a, b) != V((ab + ba)/2, 1)", V, a, b)


def t_self_adjoint(rng, cfg):
    sp = _space(rng, cfg)
    V = random_orthogonal_form_complete(sp, cfg, rng)
    if rng.random() < 0.5:
        hit = mutate_form(V, rng)
        V = hit[0] if hit else V
    rep = self_adjoint_conditions(V, seed=rng.randrange(2 ** 32))
    if is_orthogonal_form(V):
        _check(rep.all, "orthogonal form fails a self-adjoint condition", V)


def t_subsets(rng, cfg):
    sp = _space(rng, cfg)
    V = random_orthogonal_form_complete(sp, cfg, rng)
    _check(subset_identities(V, seed=rng.randrange(2 ** 32)).all, "subset identity fails", V)


def t_complexification(rng, cfg):
    sp = _space(rng, cfg)
    if rng.random() < 0.3:
        V = compose_form(random_functional(sp, cfg, rng), Functional.zero(sp))
    else:
        V = random_orthogonal_form_complete(sp, cfg, rng)
    W = complexify_form(V)
    x, y = random_element(sp, cfg, rng), random_element(sp, cfg, rng)
    _check(W(x, y) == CRational(V(x, y)), "extension does not restrict to V", V, x, y)
    _check(is_extension_orthogonal(W) == phi2_eliminable(V),
           "extension orthogonality disagrees with phi2 elimination", V)


def _two_spaces(rng, cfg):
    return _space(rng, cfg, "t"), _space(rng, cfg, "s")


def _some_map(rng, cfg):
    L1, L2 = _two_spaces(rng, cfg)
    r = rng.random()
    if r < 0.4:
        return random_op_map(L1, L2, cfg, rng)
    if r < 0.7:
        T = reconstruct(random_structure(L1, L2, cfg, rng))
        hit = redirect_image(T, rng)
        return hit[0] if hit else T
    return LinearMap(L1, L2, [[random_rational(rng, cfg) for _ in range(L1.dim)] for _ in range(L2.dim)])


def t_op_characterizations(rng, cfg):
    T = _some_map(rng, cfg)
    a = is_orthogonality_preserving(T)
    b = op_by_row_support(T)
    c = op_oracle(T, trials=max(cfg.oracle_trials, 128), seed=rng.randrange(2 ** 32)) is None
    _check(a == b == c, f"OP characterizations disagree: basis={a} rows={b} oracle={c}", T)


def t_reconstruct_analyze(rng, cfg):
    L1, L2 = _two_spaces(rng, cfg)
    T = random_op_map(L1, L2, cfg, rng)
    _check(reconstruct(analyze(T)) == T, "reconstruct(analyze(T)) != T", T)


def t_analyze_reconstruct(rng, cfg):
    L1, L2 = _two_spaces(rng, cfg)
    st = random_structure(L1, L2, cfg, rng)
    T = reconstruct(st)
    _check(is_orthogonality_preserving(T), "reconstructed map is not OP", st)
    _check(analyze(T) == st, "analyze(reconstruct(st)) != st", st)


def _biop_candidates(rng, cfg):
    L1 = _space(rng, cfg, "t")
    r = rng.random()
    if r < 0.35:
        L2 = random_space(cfg, rng, "s", shape=(len(L1.fixed), len(L1.reps)))
        return random_biop_map(L1, L2, cfg, rng)
    if r < 0.7:
        return random_op_bijection(L1, cfg, rng)
    return random_op_map(L1, _space(rng, cfg, "s"), cfg, rng)


def t_biop_criterion(rng, cfg):
    T = _biop_candidates(rng, cfg)
    decision = is_biorthogonality_preserving(T)
    _check(decision.ok == biop_direct(T), "criterion disagrees with the definition", T)


def t_invert_biop(rng, cfg):
    L1 = _space(rng, cfg, "t")
    L2 = random_space(cfg, rng, "s", shape=(len(L1.fixed), len(L1.reps)))
    T = random_biop_map(L1, L2, cfg, rng)
    decision = is_biorthogonality_preserving(T)
    _check(decision.ok, f"generated bi-OP map rejected: {decision.reason}", T)
    S = invert_biop(decision.certificate)
    _check(S.matrix == T.inverse().matrix, "certificate inverse differs from the matrix inverse", T)


def t_inverse_invertibles(rng, cfg):
    T = random_op_bijection(_space(rng, cfg, "t"), cfg, rng)
    _check(inverse_preserves_invertibles_check(T, trials=32, seed=rng.randrange(2 ** 32)),
           "inverse maps an invertible element to a non-invertible one", T)


def t_surjectivity(rng, cfg):
    L1 = _space(rng, cfg, "t")
    if rng.random() < 0.5:
        T = random_op_bijection(L1, cfg, rng)
    else:
        T = random_op_map(L1, _space(rng, cfg, "s"), cfg, rng)
        if not T.is_surjective():
            return VACUOUS
    _check(surjectivity_consequences_check(T).passed, "surjective OP map violates a consequence", T)


def t_f2_empty(rng, cfg):
    if cfg.max_cycles == 0:
        return VACUOUS
    nc = rng.randint(1, cfg.max_cycles)
    L1 = random_space(cfg, rng, "t", shape=(0, nc))
    L2 = random_space(cfg, rng, "s", shape=(0, nc))
    for _ in range(STRUCTURE_ATTEMPTS):
        reps = list(L1.reps)
        rng.shuffle(reps)
        phi = {s: (reps[k] if rng.random() < 0.8 else rng.choice(L1.reps)) for k, s in enumerate(L2.reps)}
        a1 = {s: random_complex(rng, cfg) for s in L2.reps}
        a2 = {s: random_complex(rng, cfg) for s in L2.reps}
        if any(not (a1[s] or a2[s]) for s in L2.reps):
            continue
        T = reconstruct(structure_from_orbits(L1, L2, phi, a1, a2))
        if T.is_bijective():
            _check(f2_empty_implies_biop_check(T), "OP bijection onto a space without fixed points is not bi-OP", T)
            return None
    return VACUOUS


def t_spaces_admit(rng, cfg):
    L1, L2 = _two_spaces(rng, cfg)
    if rng.random() < 0.5:
        L2 = random_space(cfg, rng, "s", shape=(len(L1.fixed), len(L1.reps)))
    ok, S = spaces_admit_biop(L1, L2)
    shape = (len(L1.fixed), len(L1.reps)) == (len(L2.fixed), len(L2.reps))
    _check(ok == shape, "admissibility differs from the shape comparison", L1, L2)
    if ok:
        _check(is_biorthogonality_preserving(S).ok, "witness is not bi-OP", S)


def t_generator_soundness(rng, cfg):
    sp = _space(rng, cfg)
    x = random_element(sp, cfg, rng)
    _check(all(x[sp.sigma(t)] == x[t].conj() for t in sp.points), "element is not tau-symmetric", x)
    _check(is_orthogonal_form(random_orthogonal_form(sp, cfg, rng)), "random_orthogonal_form", sp)
    V = random_orthogonal_form_complete(sp, cfg, rng)
    _check(is_orthogonal_form(V), "random_orthogonal_form_complete produced a non-orthogonal form", V)
    L1, L2 = _two_spaces(rng, cfg)
    T = random_op_map(L1, L2, cfg, rng)
    _check(is_orthogonality_preserving(T), "random_op_map produced a non-OP map", T)
    L2b = random_space(cfg, rng, "s", shape=(len(L1.fixed), len(L1.reps)))
    B = random_biop_map(L1, L2b, cfg, rng)
    _check(is_biorthogonality_preserving(B).ok, "random_biop_map produced a non-bi-OP map", B)
    U = random_op_bijection(L1, cfg, rng)
    _check(U.is_bijective() and is_orthogonality_preserving(U), "random_op_bijection", U)


def t_determinism(rng, cfg):
    seed = rng.randrange(2 ** 32)
    out = []
    for _ in range(2):
        r = random.Random(seed)
        sp = random_space(cfg, r)
        out.append(docs.emit([docs.to_doc(sp), docs.to_doc(random_orthogonal_form(sp, cfg, r)),
                              docs.to_doc(random_op_map(sp, sp, cfg, r))]))
    _check(out[0] == out[1], "same seed gave different objects")


def t_mutation_form(rng, cfg):
    sp = _space(rng, cfg)
    V = random_orthogonal_form_complete(sp, replace(cfg, mutate=False), rng)
    hit = mutate_form(V, rng)
    if hit is None:
        return VACUOUS
    M, cell = hit
    _check(not is_orthogonal_form(M), f"flipped entry {cell} not detected", M)
    _check(find_orthogonality_violation(M) is not None, "no basis witness", M)
    _check(orthogonality_oracle(M, trials=max(cfg.oracle_trials, 256), seed=rng.randrange(2 ** 32)) is not None,
           "oracle found no counterexample", M)


def t_mutation_biop(rng, cfg):
    L1 = _space(rng, cfg, "t")
    L2 = random_space(cfg, rng, "s", shape=(len(L1.fixed), len(L1.reps)))
    T = random_biop_map(L1, L2, replace(cfg, mutate=False), rng)
    hit = redirect_image(T, rng)
    if hit is None:
        return VACUOUS
    M = hit[0]
    _check(find_op_violation(M) is not None, "redirected image not detected by the OP decider", M)
    _check(not is_biorthogonality_preserving(M).ok, "redirected map still judged bi-OP", M)


SUITES: Dict[str, Tuple[str, Callable]] = {
    "algebra.ring_axioms": ("product laws, involution, unit identity", t_ring_axioms),
    "algebra.coords_roundtrip": ("coordinates are a linear bijection", t_coords_roundtrip),
    "algebra.sa_skew_split": ("self-adjoint plus skew decomposition", t_sa_skew),
    "algebra.orthogonality": ("orthogonality equals disjoint orbit support", t_orthogonality),
    "forms.soundness": ("composed forms are orthogonal", t_soundness),
    "forms.completeness": ("every orthogonal form decomposes", t_completeness),
    "forms.oracle_agreement": ("decider matches the pair oracle", t_oracle_agreement),
    "forms.representation": ("representation equivalence matches form equality", t_representation),
    "forms.symmetric_sa": ("symmetric forms factor through the Jordan product", t_symmetric_sa),
    "forms.self_adjoint_conditions": ("self-adjoint conditions are equivalent", t_self_adjoint),
    "forms.subset_identities": ("indicator and skew identities", t_subsets),
    "forms.complexification": ("orthogonal extension iff phi2 eliminable", t_complexification),
    "preservers.op_characterizations": ("basis, row-support and oracle OP tests agree", t_op_characterizations),
    "preservers.reconstruct_analyze": ("reconstruct(analyze(T)) = T", t_reconstruct_analyze),
    "preservers.analyze_reconstruct": ("analyze(reconstruct(st)) = st", t_analyze_reconstruct),
    "preservers.biop_criterion": ("determinant criterion matches the definition", t_biop_criterion),
    "preservers.invert_biop": ("certificate inverses are two-sided", t_invert_biop),
    "preservers.inverse_invertibles": ("inverse of an OP bijection keeps invertibles", t_inverse_invertibles),
    "preservers.surjectivity_consequences": ("surjective OP maps satisfy the consequences", t_surjectivity),
    "preservers.f2_empty_biop": ("no fixed codomain points forces bi-OP", t_f2_empty),
    "preservers.spaces_admit_biop": ("bi-OP exists iff shapes match", t_spaces_admit),
    "genfuzz.generator_soundness": ("generated objects pass their deciders", t_generator_soundness),
    "genfuzz.determinism": ("seeded generation is reproducible", t_determinism),
    "mutation.form": ("a flipped cross-orbit entry is detected", t_mutation_form),
    "mutation.biop": ("a redirected basis image is detected", t_mutation_biop),
}


def suite_names() -> List[str]:
    return list(SUITES)


def _run_trial(fn, name: str, cfg: GenConfig, key) -> Tuple[str, Optional[dict]]:
    rng = trial_rng(cfg, name, key)
    try:
        out = fn(rng, cfg)
    except TrialFailure as exc:
        return "fail", {"message": str(exc), "document": exc.document}
    except Exception as exc:  # any library error inside a trial is a finding
        return "fail", {"message": f"{type(exc).__name__}: {exc}", "document": None}
    return ("vacuous" if out == VACUOUS else "pass"), None


SHRINK_SEEDS = 16


def _shrink(fn, name: str, cfg: GenConfig, index: int) -> Optional[dict]:
    """Smallest size bounds (by point count) at which the trial still fails."""
    sizes = sorted(((f, c) for f in range(cfg.max_fixed + 1) for c in range(cfg.max_cycles + 1)
                    if f + c and (f, c) != (cfg.max_fixed, cfg.max_cycles)),
                   key=lambda fc: (fc[0] + 2 * fc[1], fc))
    for f, c in sizes:
        small = replace(cfg, max_fixed=f, max_cycles=c)
        for k in range(SHRINK_SEEDS):
            status, info = _run_trial(fn, name, small, f"{index}/shrink{k}")
            if status == "fail":
                return {"max_fixed": f, "max_cycles": c, "attempt": k, **info}
    return None


def run_suite(name: str, cfg: GenConfig, shrink: bool = True) -> dict:
    """Run ``cfg.trials`` trials of a suite (or ``"all"``) and return a report document."""
    if name == "all":
        reports = [run_suite(n, cfg, shrink) for n in SUITES]
        return {"suite": "all", "seed": cfg.seed, "trials": cfg.trials,
                "status": "pass" if all(r["status"] == "pass" for r in reports) else "fail",
                "suites": reports}
    if name not in SUITES:
        raise UnknownSuite(name)
    fn = SUITES[name][1]
    counts = {"pass": 0, "fail": 0, "vacuous": 0}
    failed: List[int] = []
    first = None
    for index in range(cfg.trials):
        status, info = _run_trial(fn, name, cfg, index)
        counts[status] += 1
        if status == "fail":
            failed.append(index)
            if first is None:
                first = {"trial": index, **info}
    report = {
        "suite": name,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "status": "fail" if failed else "pass",
        "config": asdict(cfg),
        "passed": counts["pass"],
        "vacuous": counts["vacuous"],
        "failed": failed,
    }
    if first is not None:
        if shrink:
            first["shrunk"] = _shrink(fn, name, cfg, first["trial"])
        report["counterexample"] = first
    return report
