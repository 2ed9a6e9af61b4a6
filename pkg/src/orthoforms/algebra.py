"""Finite spaces with an involution and the real function algebra on them.

A :class:`FiniteSpace` is a finite point set ``K`` with a period-2 permutation
``sigma``.  Its algebra ``A`` consists of the complex-valued functions ``x`` on
``K`` with ``x(sigma(t)) = conj(x(t))``; this is a commutative real
C*-algebra of real dimension ``|K|`` under pointwise operations and pointwise
conjugation.

Points are split into the fixed set ``F``, the 2-cycle representatives ``O``
(the earlier point of each 2-cycle in list order) and their partners.  The
canonical real basis lists ``chi_t`` for each ``t`` in ``F`` (point order),
then for each ``t`` in ``O`` (point order) the pair::

    s_t = chi_t + chi_{sigma(t)}        u_t = i (chi_t - chi_{sigma(t)})
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exact import CONE, CZERO, CRational, I

Label = str


class SpaceError(ValueError):
    pass


class NonInvolutive(SpaceError):
    pass


class DuplicateLabel(SpaceError):
    pass


class UnknownLabel(SpaceError):
    pass


class SpaceMismatch(ValueError):
    pass


class NotTauSymmetric(ValueError):
    """Values violate ``x(sigma(t)) = conj(x(t))``."""


@dataclass(frozen=True)
class BasisVector:
    kind: str  # "s" (self-adjoint) or "u" (skew)
    point: Label  # F point or O representative

    @property
    def star_sign(self) -> int:
        return -1 if self.kind == "u" else 1

    def __str__(self):
        return f"{self.kind}_{self.point}"


class FiniteSpace:
    """Finite point set with an involutive permutation."""

    def __init__(self, points: Sequence[Label], sigma: Mapping[Label, Label] | None = None):
        points = tuple(str(p) for p in points)
        seen = set()
        for p in points:
            if p in seen:
                raise DuplicateLabel(f"duplicate point label {p!r}")
            seen.add(p)
        pairs = [(str(a), str(b)) for a, b in (sigma or {}).items()]
        full = {p: p for p in points}
        for a, b in pairs:
            for lab in (a, b):
                if lab not in seen:
                    raise UnknownLabel(f"sigma mentions unknown point {lab!r}")
            if a == b:
                continue
            if full[a] not in (a, b) or full[b] not in (a, b):
                raise NonInvolutive(f"sigma is not an involution around {a!r} -> {b!r}")
            full[a], full[b] = b, a
        for a, b in pairs:
            if full[a] != b:
                raise NonInvolutive(f"sigma({a!r}) = {b!r} conflicts with sigma({full[a]!r}) = {a!r}")
        self.points: Tuple[Label, ...] = points
        self._sigma: Dict[Label, Label] = full
        self._index: Dict[Label, int] = {p: i for i, p in enumerate(points)}

    # -- structure ---------------------------------------------------------
    def sigma(self, t: Label) -> Label:
        return self._sigma[t]

    @property
    def sigma_map(self) -> Dict[Label, Label]:
        return dict(self._sigma)

    def index(self, t: Label) -> int:
        try:
            return self._index[t]
        except KeyError:
            raise UnknownLabel(f"unknown point {t!r}") from None

    def __contains__(self, t) -> bool:
        return t in self._index

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def fixed(self) -> Tuple[Label, ...]:
        return tuple(p for p in self.points if self._sigma[p] == p)

    @cached_property
    def reps(self) -> Tuple[Label, ...]:
        """2-cycle representatives: the earlier point of each 2-cycle."""
        return tuple(p for p in self.points
                     if self._sigma[p] != p and self._index[p] < self._index[self._sigma[p]])

    @cached_property
    def partners(self) -> Tuple[Label, ...]:
        return tuple(self._sigma[p] for p in self.reps)

    @cached_property
    def orbits(self) -> Tuple[Label, ...]:
        """Orbit representatives (``F`` then ``O``), in basis order."""
        return self.fixed + self.reps

    def orbit_of(self, t: Label) -> Label:
        s = self._sigma[t]
        return t if self._index[t] <= self._index[s] else s

    def orbit_points(self, rep: Label) -> Tuple[Label, ...]:
        s = self._sigma[rep]
        return (rep,) if s == rep else (rep, s)

    @property
    def dim(self) -> int:
        return len(self.points)

    @cached_property
    def basis_vectors(self) -> Tuple[BasisVector, ...]:
        out = [BasisVector("s", t) for t in self.fixed]
        for t in self.reps:
            out += [BasisVector("s", t), BasisVector("u", t)]
        return tuple(out)

    @cached_property
    def basis_orbit(self) -> Tuple[Label, ...]:
        """Orbit representative carrying each basis vector."""
        return tuple(b.point for b in self.basis_vectors)

    @cached_property
    def star_signs(self) -> Tuple[int, ...]:
        return tuple(b.star_sign for b in self.basis_vectors)

    @cached_property
    def basis_position(self) -> Dict[Tuple[str, Label], int]:
        return {(b.kind, b.point): i for i, b in enumerate(self.basis_vectors)}

    @cached_property
    def basis(self) -> Tuple["AlgebraElement", ...]:
        return tuple(from_coords(self, [Fraction(int(i == j)) for j in range(self.dim)])
                     for i in range(self.dim))

    @cached_property
    def product_table(self) -> Tuple[Tuple[Tuple[Tuple[int, int], ...], ...], ...]:
        """Sparse coordinates of ``b_i * b_j``: ``table[i][j]`` lists ``(k, c)``."""
        n = self.dim
        return tuple(
            tuple(_sparse(multiply(self.basis[i], self.basis[j]).coords()) for j in range(n))
            for i in range(n))

    # -- equality ----------------------------------------------------------
    def _key(self):
        return self.points, tuple(self._sigma[p] for p in self.points)

    def __eq__(self, other):
        return isinstance(other, FiniteSpace) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        pairs = {t: self._sigma[t] for t in self.reps}
        return f"FiniteSpace({list(self.points)!r}, {pairs!r})"

    # -- element constructors ---------------------------------------------
    def element(self, values: Mapping[Label, object]) -> "AlgebraElement":
        """Element from a full point -> value map."""
        missing = [p for p in self.points if p not in values]
        if missing:
            raise UnknownLabel(f"no value given for points {missing}")
        extra = [p for p in values if p not in self._index]
        if extra:
            raise UnknownLabel(f"values given for unknown points {extra}")
        return AlgebraElement(self, tuple(CRational.of(values[p]) for p in self.points))

    def from_orbit_values(self, values: Mapping[Label, object]) -> "AlgebraElement":
        """Element from values at orbit representatives (partners get conjugates).

        Unlisted orbits are zero.
        """
        out = [CZERO] * self.dim
        for t, v in values.items():
            if t not in self._index:
                raise UnknownLabel(f"unknown point {t!r}")
            v = CRational.of(v)
            if self._sigma[t] == t:
                out[self._index[t]] = v
            else:
                out[self._index[t]] = v
                out[self._index[self._sigma[t]]] = v.conj()
        return AlgebraElement(self, tuple(out))

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, (CZERO,) * self.dim)

    def unit(self) -> "AlgebraElement":
        return AlgebraElement(self, (CONE,) * self.dim)

    def chi(self, subset: Iterable[Label]) -> "AlgebraElement":
        """Indicator of a sigma-invariant subset."""
        subset = set(subset)
        for t in subset:
            if t not in self._index:
                raise UnknownLabel(f"unknown point {t!r}")
            if self._sigma[t] not in subset:
                raise NotTauSymmetric(f"subset is not sigma-invariant at {t!r}")
        return AlgebraElement(self, tuple(CONE if p in subset else CZERO for p in self.points))

    def u(self, subset: Iterable[Label]) -> "AlgebraElement":
        """``u_C = i (chi_C - chi_sigma(C))`` for ``C`` inside ``O``."""
        vals = [CZERO] * self.dim
        reps = set(self.reps)
        for t in subset:
            if t not in reps:
                raise SpaceError(f"{t!r} is not a 2-cycle representative")
            vals[self._index[t]] = I
            vals[self._index[self._sigma[t]]] = -I
        return AlgebraElement(self, tuple(vals))

    def u0(self) -> "AlgebraElement":
        return self.u(self.reps)


def make_space(points: Sequence[Label], sigma: Mapping[Label, Label] | None = None) -> FiniteSpace:
    return FiniteSpace(points, sigma)


def _sparse(vec: Sequence[Fraction]) -> Tuple[Tuple[int, Fraction], ...]:
    return tuple((k, c) for k, c in enumerate(vec) if c)


class AlgebraElement:
    """Element of ``C(K)^tau``: a tau-symmetric tuple of point values."""

    __slots__ = ("space", "values", "_coords")

    def __init__(self, space: FiniteSpace, values: Sequence[CRational]):
        values = tuple(values)
        if len(values) != space.dim:
            raise ValueError(f"expected {space.dim} values, got {len(values)}")
        sig, idx = space._sigma, space._index
        for p, v in zip(space.points, values):
            if values[idx[sig[p]]] != v.conj():
                raise NotTauSymmetric(
                    f"value at {sig[p]!r} must be the conjugate of the value at {p!r}")
        self.space = space
        self.values = values
        self._coords: Optional[Tuple[Fraction, ...]] = None

    def __getitem__(self, t: Label) -> CRational:
        return self.values[self.space.index(t)]

    def as_dict(self) -> Dict[Label, CRational]:
        return dict(zip(self.space.points, self.values))

    def _check(self, other: "AlgebraElement"):
        if self.space != other.space:
            raise SpaceMismatch("elements live on different spaces")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        return AlgebraElement(self.space, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        return AlgebraElement(self.space, tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self):
        return AlgebraElement(self.space, tuple(-a for a in self.values))

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return scale(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return scale(self, other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return scale(self, 1 / Fraction(other))
        return NotImplemented

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement) and self.space == other.space
                and self.values == other.values)

    def __hash__(self):
        return hash(self.values)

    def star(self) -> "AlgebraElement":
        return involution(self)

    def coords(self) -> Tuple[Fraction, ...]:
        if self._coords is None:
            sp = self.space
            out = [self.values[sp._index[t]].re for t in sp.fixed]
            for t in sp.reps:
                v = self.values[sp._index[t]]
                out += [v.re, v.im]
            self._coords = tuple(out)
        return self._coords

    def is_zero(self) -> bool:
        return not any(self.values)

    def orbit_support(self) -> frozenset:
        sp = self.space
        return frozenset(sp.orbit_of(p) for p, v in zip(sp.points, self.values) if v)

    def __repr__(self):
        body = ", ".join(f"{p}: {v}" for p, v in zip(self.space.points, self.values))
        return f"AlgebraElement({{{body}}})"


def _same(x: AlgebraElement, y: AlgebraElement):
    if x.space != y.space:
        raise SpaceMismatch("elements live on different spaces")


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    _same(x, y)
    return AlgebraElement(x.space, tuple(a * b for a, b in zip(x.values, y.values)))


def add(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x + y


def scale(x: AlgebraElement, c) -> AlgebraElement:
    c = Fraction(c)
    return AlgebraElement(x.space, tuple(v * c for v in x.values))


def involution(x: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(x.space, tuple(v.conj() for v in x.values))


def unit(space: FiniteSpace) -> AlgebraElement:
    return space.unit()


def u0(space: FiniteSpace) -> AlgebraElement:
    return space.u0()


def coords(x: AlgebraElement) -> Tuple[Fraction, ...]:
    return x.coords()


def from_coords(space: FiniteSpace, vec: Sequence) -> AlgebraElement:
    vec = [Fraction(c) for c in vec]
    if len(vec) != space.dim:
        raise ValueError(f"expected {space.dim} coordinates, got {len(vec)}")
    vals: List[CRational] = [CZERO] * space.dim
    k = 0
    for t in space.fixed:
        vals[space._index[t]] = CRational(vec[k])
        k += 1
    for t in space.reps:
        v = CRational(vec[k], vec[k + 1])
        vals[space._index[t]] = v
        vals[space._index[space._sigma[t]]] = v.conj()
        k += 2
    return AlgebraElement(space, tuple(vals))


def is_orthogonal_pair(x: AlgebraElement, y: AlgebraElement) -> bool:
    """``x ⊥ y``: the pointwise product ``x * conj(y)`` vanishes everywhere."""
    _same(x, y)
    return all(not (a and b) for a, b in zip(x.values, y.values))


def is_invertible(x: AlgebraElement) -> bool:
    return all(x.values)


def split_sa_skew(x: AlgebraElement) -> Tuple[AlgebraElement, AlgebraElement]:
    """``x = h + k`` with ``h* = h`` and ``k* = -k``."""
    xs = x.star()
    return scale(x + xs, Fraction(1, 2)), scale(x - xs, Fraction(1, 2))
