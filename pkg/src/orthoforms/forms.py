"""Real bilinear forms on ``C(K)^tau``: orthogonality and the product decomposition.

Every orthogonal form ``V`` on the algebra can be written as::

    V(x, y) = phi1(x y) + phi2(x y*)

for real functionals ``phi1``, ``phi2``.  :func:`decompose` builds such a pair
from the three functionals ``psi1(x) = V(x, 1)``, ``psi2(x) = V(1, x)`` and
``psi4(x) = V(x u0*, u0)``; :func:`compose_form` goes the other way.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from . import linalg
from .algebra import AlgebraElement, FiniteSpace, SpaceMismatch, is_orthogonal_pair
from .exact import CZERO, CRational

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


class NotOrthogonal(ValueError):
    """Raised with a witness pair ``(x, y)``: ``x ⊥ y`` but ``V(x, y) != 0``."""

    def __init__(self, message: str, witness: Tuple[AlgebraElement, AlgebraElement] | None = None):
        super().__init__(message)
        self.witness = witness


class NotSymmetric(ValueError):
    pass


class InconsistencyError(AssertionError):
    """Two routes to the same mathematical fact disagreed."""


def _frac_tuple(values) -> Tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


class Functional:
    """Real-linear functional, stored by its values on the canonical basis."""

    __slots__ = ("space", "coeffs")

    def __init__(self, space: FiniteSpace, coeffs: Sequence):
        coeffs = _frac_tuple(coeffs)
        if len(coeffs) != space.dim:
            raise ValueError(f"expected {space.dim} coefficients, got {len(coeffs)}")
        self.space = space
        self.coeffs = coeffs

    @classmethod
    def zero(cls, space: FiniteSpace) -> "Functional":
        return cls(space, [0] * space.dim)

    @classmethod
    def basis_dual(cls, space: FiniteSpace, k: int) -> "Functional":
        return cls(space, [int(i == k) for i in range(space.dim)])

    @classmethod
    def re_delta(cls, space: FiniteSpace, t: str) -> "Functional":
        """``x -> Re x(t)``."""
        rep = space.orbit_of(t)
        out = [0] * space.dim
        out[space.basis_position[("s", rep)]] = 1
        return cls(space, out)

    @classmethod
    def im_delta(cls, space: FiniteSpace, t: str) -> "Functional":
        """``x -> Im x(t)``."""
        out = [0] * space.dim
        if space.sigma(t) != t:
            rep = space.orbit_of(t)
            out[space.basis_position[("u", rep)]] = 1 if rep == t else -1
        return cls(space, out)

    def __call__(self, x: AlgebraElement) -> Fraction:
        if x.space != self.space:
            raise SpaceMismatch("functional and element live on different spaces")
        return linalg.dot(self.coeffs, x.coords())

    def eval_sparse(self, sparse) -> Fraction:
        c = self.coeffs
        return sum((c[k] * v for k, v in sparse), Fraction(0))

    def _check(self, other: "Functional"):
        if self.space != other.space:
            raise SpaceMismatch("functionals live on different spaces")

    def __add__(self, other):
        self._check(other)
        return Functional(self.space, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return Functional(self.space, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return Functional(self.space, [-a for a in self.coeffs])

    def __mul__(self, c):
        if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
            return Functional(self.space, [a * c for a in self.coeffs])
        return NotImplemented

    __rmul__ = __mul__

    def star(self) -> "Functional":
        """The functional ``x -> g(x*)``."""
        return Functional(self.space, [a * s for a, s in zip(self.coeffs, self.space.star_signs)])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, Functional) and self.space == other.space
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Functional([{', '.join(str(c) for c in self.coeffs)}])"


class BilinearForm:
    """``V(x, y) = coords(x)^T M coords(y)`` over the canonical basis."""

    __slots__ = ("space", "matrix")

    def __init__(self, space: FiniteSpace, matrix: Sequence[Sequence]):
        rows = tuple(_frac_tuple(r) for r in matrix)
        n = space.dim
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError(f"form matrix must be {n}x{n}")
        self.space = space
        self.matrix = rows

    @classmethod
    def zero(cls, space: FiniteSpace) -> "BilinearForm":
        return cls(space, [[0] * space.dim for _ in range(space.dim)])

    @classmethod
    def from_function(cls, space: FiniteSpace, fn) -> "BilinearForm":
        """Tabulate a bilinear callable on the canonical basis."""
        b = space.basis
        return cls(space, [[fn(x, y) for y in b] for x in b])

    def __call__(self, x: AlgebraElement, y: AlgebraElement) -> Fraction:
        if x.space != self.space or y.space != self.space:
            raise SpaceMismatch("form and elements live on different spaces")
        cx, cy = x.coords(), y.coords()
        total = Fraction(0)
        for a, row in zip(cx, self.matrix):
            if a:
                total += a * linalg.dot(row, cy)
        return total

    def transpose(self) -> "BilinearForm":
        return BilinearForm(self.space, linalg.transpose(self.matrix))

    def is_symmetric(self) -> bool:
        n = self.space.dim
        m = self.matrix
        return all(m[i][j] == m[j][i] for i in range(n) for j in range(i))

    def with_entry(self, i: int, j: int, value) -> "BilinearForm":
        rows = [list(r) for r in self.matrix]
        rows[i][j] = Fraction(value)
        return BilinearForm(self.space, rows)

    def __add__(self, other):
        if self.space != other.space:
            raise SpaceMismatch("forms live on different spaces")
        return BilinearForm(self.space, [[a + b for a, b in zip(r, s)]
                                         for r, s in zip(self.matrix, other.matrix)])

    def __eq__(self, other):
        return (isinstance(other, BilinearForm) and self.space == other.space
                and self.matrix == other.matrix)

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"BilinearForm({[[str(v) for v in r] for r in self.matrix]})"


# ---------------------------------------------------------------------------
# orthogonality

def find_orthogonality_violation(V: BilinearForm) -> Optional[Tuple[int, int]]:
    """First basis pair ``(i, j)`` on different orbits with ``V(b_i, b_j) != 0``."""
    orb = V.space.basis_orbit
    for i, row in enumerate(V.matrix):
        for j, v in enumerate(row):
            if v and orb[i] != orb[j]:
                return i, j
    return None


def is_orthogonal_form(V: BilinearForm) -> bool:
    return find_orthogonality_violation(V) is None


def _require_orthogonal(V: BilinearForm):
    hit = find_orthogonality_violation(V)
    if hit is not None:
        i, j = hit
        b = V.space.basis
        raise NotOrthogonal(
            f"V({V.space.basis_vectors[i]}, {V.space.basis_vectors[j]}) = {V.matrix[i][j]}"
            " on orthogonal basis elements", (b[i], b[j]))


def _random_value(rng: random.Random, real: bool, bound: int) -> CRational:
    def q():
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
    while True:
        v = CRational(q(), 0 if real else q())
        if v:
            return v


def orthogonality_oracle(V: BilinearForm, trials: int = 256, seed: int = 0,
                         bound: int = 3) -> Optional[Tuple[AlgebraElement, AlgebraElement]]:
    """Search for ``x ⊥ y`` with ``V(x, y) != 0`` or ``V(x, y*) != 0``.

    Pairs are built pointwise: each orbit is handed to ``x``, to ``y`` or to
    neither, and gets random nonzero values there.  Returns the first hit.
    """
    sp = V.space
    orbits = sp.orbits
    if len(orbits) < 2:
        return None
    rng = random.Random(seed)
    for _ in range(trials):
        owner = [rng.randrange(3) for _ in orbits]
        if 0 not in owner or 1 not in owner:
            a, b = rng.sample(range(len(orbits)), 2)
            owner[a], owner[b] = 0, 1
        xv, yv = {}, {}
        for t, who in zip(orbits, owner):
            if who == 2:
                continue
            (xv if who == 0 else yv)[t] = _random_value(rng, sp.sigma(t) == t, bound)
        x, y = sp.from_orbit_values(xv), sp.from_orbit_values(yv)
        assert is_orthogonal_pair(x, y)
        if V(x, y) or V(x, y.star()):
            return x, y
    return None


# ---------------------------------------------------------------------------
# decomposition

def compose_form(g1: Functional, g2: Functional) -> BilinearForm:
    """The form ``(x, y) -> g1(x y) + g2(x y*)``."""
    if g1.space != g2.space:
        raise SpaceMismatch("functionals live on different spaces")
    sp = g1.space
    table, signs = sp.product_table, sp.star_signs
    n = sp.dim
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            p = table[i][j]
            row.append(g1.eval_sparse(p) + signs[j] * g2.eval_sparse(p))
        rows.append(row)
    return BilinearForm(sp, rows)


@dataclass(frozen=True)
class FormDecomposition:
    form: BilinearForm
    phi1: Functional
    phi2: Functional

    def __post_init__(self):
        if compose_form(self.phi1, self.phi2) != self.form:
            raise InconsistencyError("V(x, y) != phi1(xy) + phi2(xy*) on some basis pair")


def decompose(V: BilinearForm) -> FormDecomposition:
    """Functionals ``(phi1, phi2)`` with ``V(x, y) = phi1(xy) + phi2(xy*)``."""
    _require_orthogonal(V)
    sp = V.space
    one, u0 = sp.unit(), sp.u0()
    u0s = u0.star()
    basis = sp.basis
    psi1 = Functional(sp, [V(b, one) for b in basis])
    psi2 = Functional(sp, [V(one, b) for b in basis])
    psi4 = Functional(sp, [V(b * u0s, u0) for b in basis])
    f1 = (psi1 * 2 + psi2 + psi4) * QUARTER
    f2 = (psi1 * 2 - psi2 - psi4) * QUARTER
    f3 = (psi2 - psi4) * QUARTER
    f4 = (psi4 - psi2) * QUARTER
    return FormDecomposition(V, f1 + f4.star(), f2 + f3.star())


def _composition_columns(sp: FiniteSpace, with_phi2: bool = True) -> List[List[Fraction]]:
    """Matrix of the linear map ``(g1, g2) -> compose_form(g1, g2)`` (flattened)."""
    n = sp.dim
    zero = Functional.zero(sp)
    cols = []
    for k in range(n):
        e = Functional.basis_dual(sp, k)
        cols.append([v for r in compose_form(e, zero).matrix for v in r])
    if with_phi2:
        for k in range(n):
            e = Functional.basis_dual(sp, k)
            cols.append([v for r in compose_form(zero, e).matrix for v in r])
    return linalg.transpose(cols)


def solve_representation(V: BilinearForm, phi2_zero: bool = False
                         ) -> Optional[Tuple[Functional, Functional]]:
    """Some ``(g1, g2)`` with ``compose_form(g1, g2) == V`` (``g2 = 0`` if asked)."""
    sp = V.space
    n = sp.dim
    if n == 0:
        return Functional.zero(sp), Functional.zero(sp)
    a = _composition_columns(sp, with_phi2=not phi2_zero)
    x = linalg.solve(a, [v for r in V.matrix for v in r])
    if x is None:
        return None
    g1 = Functional(sp, x[:n])
    g2 = Functional.zero(sp) if phi2_zero else Functional(sp, x[n:])
    return g1, g2


def representation_space_dim(V: BilinearForm) -> int:
    """Dimension of the affine set ``{(g1, g2) : compose_form(g1, g2) == V}``."""
    _require_orthogonal(V)
    sp = V.space
    if sp.dim == 0:
        return 0
    if solve_representation(V) is None:
        raise InconsistencyError("orthogonal form without a (phi1, phi2) representation")
    return 2 * sp.dim - linalg.rank(_composition_columns(sp))


def representation_equivalent(p: Tuple[Functional, Functional],
                              q: Tuple[Functional, Functional]) -> bool:
    """Whether two pairs induce the same form.

    Cross-checked against the criterion: ``g1 + g2`` agree everywhere, and
    ``g1 - g2`` agree on skew elements and on products of two skew elements.
    """
    (g1, g2), (h1, h2) = p, q
    sp = g1.space
    if any(f.space != sp for f in (g2, h1, h2)):
        raise SpaceMismatch("functionals live on different spaces")
    same_form = compose_form(g1, g2) == compose_form(h1, h2)

    dg, dh = g1 - g2, h1 - h2
    skew = [sp.u([t]) for t in sp.reps]
    criterion = (g1 + g2 == h1 + h2
                 and all(dg(z) == dh(z) for z in skew)
                 and all(dg(z * w) == dh(z * w) for z in skew for w in skew))
    if criterion != same_form:
        raise InconsistencyError(
            f"form equality ({same_form}) disagrees with the functional criterion ({criterion})")
    return same_form


def symmetric_sa_functional(V: BilinearForm) -> Functional:
    """``phi(x) = V(x, 1)``, which gives ``V(a, b) = phi((ab + ba)/2)`` on self-adjoints."""
    _require_orthogonal(V)
    if not V.is_symmetric():
        raise NotSymmetric("form is not symmetric")
    sp = V.space
    one = sp.unit()
    phi = Functional(sp, [V(b, one) for b in sp.basis])
    sa = [b for b, bv in zip(sp.basis, sp.basis_vectors) if bv.kind == "s"]
    for a in sa:
        for b in sa:
            if V(a, b) != phi((a * b + b * a) * HALF):
                raise InconsistencyError("V(a, b) != V((ab + ba)/2, 1) for self-adjoint a, b")
    return phi


# ---------------------------------------------------------------------------
# self-adjoint conditions and subset identities

@dataclass(frozen=True)
class SelfAdjointReport:
    orthogonal_on_sa: bool
    vanishes_on_orthogonal_projections: bool
    product_rule: bool
    projections_exhaustive: bool

    @property
    def all(self) -> bool:
        return self.orthogonal_on_sa and self.vanishes_on_orthogonal_projections and self.product_rule


EXHAUSTIVE_PROJECTION_POINTS = 12


def _projections_vanish(W: List[List[Fraction]], exhaustive: bool, samples: int,
                        rng: random.Random) -> bool:
    """``V(p_I, p_J) == 0`` for disjoint nonempty orbit sets ``I``, ``J``.

    ``W`` is ``V`` restricted to the orbit indicators.  Works in integers after
    clearing denominators.
    """
    m = len(W)
    if m < 2:
        return True
    den = 1
    for row in W:
        for v in row:
            den = den * v.denominator // math.gcd(den, v.denominator)
    Wi = [[int(v * den) for v in row] for row in W]

    def pair_value(I: int, J: int) -> int:
        return sum(Wi[i][j] for i in range(m) if I >> i & 1 for j in range(m) if J >> j & 1)

    full = (1 << m) - 1
    if not exhaustive:
        for _ in range(samples):
            I = rng.randrange(1, full + 1)
            rest = full & ~I
            if not rest:
                continue
            J = rng.randrange(1, full + 1) & rest
            if J and pair_value(I, J):
                return False
        return True
    row_sums = [[0] * m for _ in range(full + 1)]  # row_sums[I][j] = sum_{i in I} W[i][j]
    for I in range(1, full + 1):
        low = (I & -I).bit_length() - 1
        prev = row_sums[I & (I - 1)]
        row_sums[I] = [a + b for a, b in zip(prev, Wi[low])]
    for I in range(1, full + 1):
        r = row_sums[I]
        rest = full & ~I
        J = rest
        while J:
            if sum(r[j] for j in range(m) if J >> j & 1):
                return False
            J = (J - 1) & rest
    return True


def self_adjoint_conditions(V: BilinearForm, samples: int = 2000, seed: int = 0) -> SelfAdjointReport:
    """Three equivalent conditions on the self-adjoint part.

    (a) ``V(a, b) = 0`` for orthogonal self-adjoint ``a, b``;
    (b) ``V(p, q) = 0`` for orthogonal projections ``p, q``;
    (c) ``V(a, b) = V(ab, 1)`` for self-adjoint ``a, b``.
    Projections are enumerated exhaustively up to 12 points, sampled beyond.
    """
    sp = V.space
    pos = [sp.basis_position[("s", t)] for t in sp.orbits]
    W = [[V.matrix[i][j] for j in pos] for i in pos]
    sa = [sp.basis[i] for i in pos]

    a = all(W[i][j] == 0 for i in range(len(pos)) for j in range(len(pos)) if i != j)
    exhaustive = sp.dim <= EXHAUSTIVE_PROJECTION_POINTS
    b = _projections_vanish(W, exhaustive, samples, random.Random(seed))
    one = sp.unit()
    c = all(V(x, y) == V(x * y, one) for x in sa for y in sa)
    if not (a == b == c):
        raise InconsistencyError(f"self-adjoint conditions disagree: a={a} b={b} c={c}")
    return SelfAdjointReport(a, b, c, exhaustive)


@dataclass(frozen=True)
class SubsetIdentityReport:
    sym_vs_skew: bool  # V(chi_D, u_B) = V(u_B, chi_D) = 0 for D ∩ B = ∅
    skew_vs_skew: bool  # V(u_B, u_C) = 0 for B ∩ C = ∅
    shifted_skew: bool  # V((u0 u0* - u_C u_C*) u_B, u_C) = V(u_C, ...) = 0
    exhaustive: bool

    @property
    def all(self) -> bool:
        return self.sym_vs_skew and self.skew_vs_skew and self.shifted_skew


EXHAUSTIVE_SUBSET_POINTS = 6


def _subsets(items: Sequence, exhaustive: bool, rng: random.Random, samples: int):
    if exhaustive:
        for r in range(len(items) + 1):
            yield from (frozenset(c) for c in combinations(items, r))
    else:
        for _ in range(samples):
            yield frozenset(t for t in items if rng.random() < 0.5)


def subset_identities(V: BilinearForm, samples: int = 64, seed: int = 0) -> SubsetIdentityReport:
    """Check the indicator/skew identities over subsets of orbits and of ``O``."""
    _require_orthogonal(V)
    sp = V.space
    exhaustive = sp.dim <= EXHAUSTIVE_SUBSET_POINTS
    rng = random.Random(seed)
    u0 = sp.u0()
    u0u0 = u0 * u0.star()
    M = V.matrix
    Mt = linalg.transpose(M)

    Ds = sorted(set(_subsets(sp.orbits, exhaustive, rng, samples)), key=sorted)
    Bs = sorted(set(_subsets(sp.reps, exhaustive, rng, samples)), key=sorted)
    chi = {D: sp.chi([p for t in D for p in sp.orbit_points(t)]).coords() for D in Ds}
    u_el = {B: sp.u(B) for B in Bs}
    u = {B: x.coords() for B, x in u_el.items()}
    Mu = {B: linalg.matvec(M, c) for B, c in u.items()}
    Mtu = {B: linalg.matvec(Mt, c) for B, c in u.items()}

    a = all(linalg.dot(chi[D], Mu[B]) == 0 and linalg.dot(chi[D], Mtu[B]) == 0
            for D in Ds for B in Bs if not D & B)
    b = all(linalg.dot(u[B], Mu[C]) == 0 for B in Bs for C in Bs if not B & C)
    c = True
    for C in Bs:
        w = u0u0 - u_el[C] * u_el[C].star()
        for B in Bs:
            z = (w * u_el[B]).coords()
            if linalg.dot(z, Mu[C]) != 0 or linalg.dot(z, Mtu[C]) != 0:
                c = False
                break
        if not c:
            break
    return SubsetIdentityReport(a, b, c, exhaustive)


# ---------------------------------------------------------------------------
# complexification

class ComplexForm:
    """Complex bilinear form on ``C(K)``, stored over the point indicators ``chi_t``."""

    __slots__ = ("space", "matrix")

    def __init__(self, space: FiniteSpace, matrix: Sequence[Sequence[CRational]]):
        self.space = space
        self.matrix = tuple(tuple(CRational.of(v) for v in r) for r in matrix)

    def entry(self, a: str, b: str) -> CRational:
        return self.matrix[self.space.index(a)][self.space.index(b)]

    def __call__(self, z, w) -> CRational:
        """Evaluate on two functions on ``K`` (value sequences or algebra elements)."""
        zv = z.values if isinstance(z, AlgebraElement) else tuple(CRational.of(v) for v in z)
        wv = w.values if isinstance(w, AlgebraElement) else tuple(CRational.of(v) for v in w)
        total = CZERO
        for za, row in zip(zv, self.matrix):
            if za:
                for wb, m in zip(wv, row):
                    if wb and m:
                        total = total + za * wb * m
        return total

    def __eq__(self, other):
        return isinstance(other, ComplexForm) and self.space == other.space and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)


def _chi_parts(sp: FiniteSpace, t: str) -> Tuple[AlgebraElement, AlgebraElement]:
    """``(x1, x2)`` in ``A`` with ``chi_t = x1 + i x2``."""
    if sp.sigma(t) == t:
        return sp.chi([t]), sp.zero()
    rep = sp.orbit_of(t)
    s = sp.chi(sp.orbit_points(rep)) * HALF
    u = sp.u([rep]) * HALF
    return (s, -u) if t == rep else (s, u)


def complexify_form(V: BilinearForm) -> ComplexForm:
    """Complex-bilinear extension to ``C(K) = A + iA``.

    ``V~(x1 + i x2, y1 + i y2) = V(x1, y1) - V(x2, y2) + i (V(x1, y2) + V(x2, y1))``.
    """
    sp = V.space
    parts = [_chi_parts(sp, t) for t in sp.points]
    rows = []
    for x1, x2 in parts:
        row = []
        for y1, y2 in parts:
            row.append(CRational(V(x1, y1) - V(x2, y2), V(x1, y2) + V(x2, y1)))
        rows.append(row)
    return ComplexForm(sp, rows)


def is_extension_orthogonal(W: ComplexForm) -> bool:
    """Vanishing on all pairs ``(chi_a, chi_b*)`` with ``a != b``."""
    n = len(W.matrix)
    return all(not W.matrix[a][b] for a in range(n) for b in range(n) if a != b)


def phi2_eliminable(V: BilinearForm) -> bool:
    """Whether ``V(x, y) = g(xy)`` for a single functional ``g``."""
    return solve_representation(V, phi2_zero=True) is not None
