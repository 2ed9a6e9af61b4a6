"""Exact orthogonal bilinear forms and orthogonality preserving maps on ``C(K)^tau``.

``K`` is a finite set with an involution ``sigma``; the algebra consists of the
complex functions with ``x(sigma t) = conj(x(t))``.  All arithmetic is over the
rationals.
"""

from .algebra import (AlgebraElement, BasisVector, DuplicateLabel, FiniteSpace, NonInvolutive,
                      NotTauSymmetric, SpaceError, SpaceMismatch, UnknownLabel, add, coords,
                      from_coords, involution, is_invertible, is_orthogonal_pair, make_space,
                      multiply, scale, split_sa_skew, u0, unit)
from .exact import CRational, rationalize, to_fraction
from .forms import (BilinearForm, ComplexForm, FormDecomposition, Functional, InconsistencyError,
                    SelfAdjointReport, NotOrthogonal, NotSymmetric, SubsetIdentityReport, complexify_form,
                    compose_form, decompose, is_extension_orthogonal, is_orthogonal_form,
                    self_adjoint_conditions, orthogonality_oracle, phi2_eliminable, subset_identities,
                    representation_equivalent, representation_space_dim, solve_representation,
                    symmetric_sa_functional)
from .preservers import (BiopCertificate, BiopDecision, InvalidCertificate, InvalidStructure,
                         LinearMap, MultiOrbitSupport, NotOPBijection, NotOrthogonalityPreserving,
                         PreconditionFailed, PreserverStructure, SurjectivityReport, analyze, apply,
                         biop_direct, f2_empty_implies_biop_check, inverse_preserves_invertibles_check,
                         invert_biop, is_biorthogonality_preserving, is_orthogonality_preserving,
                         reconstruct, surjectivity_consequences_check, spaces_admit_biop,
                         structure_from_orbits)

__version__ = "0.1.0"
