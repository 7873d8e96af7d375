"""Parametrized bipartite density-matrix families and region predicates.

Every model is of the form

    rho(t) = I/(dim_a*dim_b) + (1/4) * sum_i t_i * g_a(i) (x) g_b(i)

where ``g_a(i)``/``g_b(i)`` are generators from the SU(dim_a)/SU(dim_b)
bases of :mod:`archipelago.generator_algebra` selected by each model's
term list, and ``(x)`` is the tensor product.

For every cataloged model the parameter region where ``rho(t)`` is used
as a state (the "physical" set) has an exact closed form, implemented as
a vectorized mask for fast rejection sampling.  For one model
(``two_ququart``) the conventional physical predicate is the cube
``|t_i| <= 1/4`` even though the eigenvalue test is strictly smaller on
part of that cube; both predicates are exposed (``physical_mask`` versus
``true_physical_mask``), and the discrepancy is part of the verification
suite.  For all other models the two predicates coincide.

Partial transposition on the second factor maps ``rho(t)`` to
``rho(s*t)`` where ``s_i = -1`` exactly when the second-party generator
of term ``i`` is antisymmetric; the PPT region is therefore the physical
region's image under that sign flip.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .generator_algebra import PSD_TOL, su_generators

SQRT2 = np.sqrt(2.0)
# Largest |t_4..t_7| reached on the physical set of the seven-parameter
# model: (2 + 2*sqrt(2))/9.
_HADAMARD_WIDE = (2.0 + 2.0 * SQRT2) / 9.0


class UnknownModelError(KeyError):
    """Raised for a model name outside the catalog."""


class ParameterArityError(ValueError):
    """Raised when a parameter vector length does not match the model."""


@dataclass(frozen=True)
class ModelSpec:
    """A cataloged state family.

    Attributes
    ----------
    name : str
        Catalog identifier.
    dim_a, dim_b : int
        Subsystem dimensions.
    terms : tuple of (int, int)
        1-based generator indices (index_a, index_b), one pair per
        parameter.
    box : tuple of float
        Per-axis half-widths of a rejection-sampling box that contains
        the physical set.
    notes : str
        Free-form remarks on the model's geometry.
    """

    name: str
    dim_a: int
    dim_b: int
    terms: tuple
    box: tuple
    notes: str = field(default="", compare=False)

    @property
    def parameter_count(self):
        return len(self.terms)

    @property
    def dim(self):
        return self.dim_a * self.dim_b


def _spec(name, dim_a, dim_b, terms, box, notes=""):
    for ia, ib in terms:
        if not (1 <= ia <= dim_a * dim_a - 1 and 1 <= ib <= dim_b * dim_b - 1):
            raise ValueError(f"{name}: generator index out of range: {(ia, ib)}")
    return ModelSpec(name, dim_a, dim_b, tuple(terms), tuple(box), notes)


MODELS = {
    m.name: m
    for m in [
        _spec(
            "qubit_ququart",
            2,
            4,
            [(1, 1), (2, 13), (3, 3)],
            (0.5, 0.5, 0.5),
            "physical set: |t1| + |t3| <= 1/2 and |t2| <= 1/2",
        ),
        _spec(
            "two_ququart",
            4,
            4,
            [(1, 1), (13, 13), (3, 3)],
            (0.25, 0.25, 0.25),
            "physical predicate: the cube |t_i| <= 1/4 (conventional); "
            "the eigenvalue test additionally needs |t1| + |t3| <= 1/4",
        ),
        _spec(
            "two_qubit",
            2,
            2,
            [(1, 1), (2, 2), (3, 3)],
            (1.0, 1.0, 1.0),
            "physical set: the tetrahedron with vertices "
            "(-1,-1,-1), (1,1,-1), (1,-1,1), (-1,1,1)",
        ),
        _spec(
            "qutrit_rho1",
            3,
            3,
            [(1, 1), (2, 2), (3, 3)],
            (0.5, 0.5, 0.5),
            "physical set: |t1 - t2| <= 4/9 + t3 and |t1 + t2| <= 4/9 - t3 "
            "(a tetrahedron, the two-qubit one scaled by 4/9)",
        ),
        _spec(
            "qutrit_rho2",
            3,
            3,
            [(1, 1), (2, 4), (3, 6)],
            (0.5, 0.5, 0.5),
            "physical set: the ball ||t|| <= 4/9",
        ),
        _spec(
            "qutrit_addendum",
            3,
            3,
            [(2, 2), (4, 4), (6, 6)],
            (0.5, 0.5, 0.5),
            "physical set: |t_i| <= 4/9 with two cubic determinant conditions",
        ),
        _spec(
            "qutrit_ququart_npt",
            3,
            4,
            [(4, 1), (6, 6), (7, 7)],
            (0.5, 0.5, 0.5),
            "physical set: t1^2 + (t2 + t3)^2 <= 1/9 and |t2 - t3| <= 1/3",
        ),
        _spec(
            "qutrit_ququart_ppt",
            3,
            4,
            [(2, 1), (3, 3), (5, 13)],
            (0.5, 0.5, 0.5),
            "physical set: |t1| + |t2| <= 1/3 and |t3| <= 1/3; "
            "partial transposition acts trivially, so every state is PPT",
        ),
        _spec(
            "two_param_qutrit",
            3,
            3,
            [(1, 1), (4, 4)],
            (4.0 / 9.0, 4.0 / 9.0),
            "physical set: the disk t1^2 + t2^2 <= (4/9)^2",
        ),
        _spec(
            "two_param_ququart",
            4,
            4,
            [(7, 7), (9, 9)],
            (0.25, 0.25),
            "physical set: the square |t_i| <= 1/4; every state is PPT",
        ),
        _spec(
            "hadamard_qutrit7",
            3,
            3,
            [(i, i) for i in range(1, 8)],
            (4.0 / 9.0, 4.0 / 9.0, 4.0 / 9.0)
            + (_HADAMARD_WIDE, _HADAMARD_WIDE, _HADAMARD_WIDE, _HADAMARD_WIDE),
            "seven-parameter family over the first seven qutrit generators; "
            "|t4..t7| reach (2 + 2*sqrt(2))/9 > 1/2 on the physical set, "
            "hence the widened sampling box",
        ),
    ]
}


def model(name):
    """Look up a cataloged :class:`ModelSpec` by name."""
    try:
        return MODELS[name]
    except KeyError:
        raise UnknownModelError(
            f"unknown model {name!r}; available: {', '.join(MODELS)}"
        ) from None


def _check_arity(spec, t):
    t = np.asarray(t, dtype=float)
    if t.shape[-1] != spec.parameter_count:
        raise ParameterArityError(
            f"{spec.name} expects {spec.parameter_count} parameters, "
            f"got {t.shape[-1]}"
        )
    return t


@lru_cache(maxsize=None)
def _term_operators(name):
    spec = MODELS[name]
    basis_a = su_generators(spec.dim_a)
    basis_b = su_generators(spec.dim_b)
    ops = np.stack(
        [
            np.kron(basis_a.matrix(ia), basis_b.matrix(ib))
            for ia, ib in spec.terms
        ]
    )
    ops.setflags(write=False)
    return ops


def term_operators(spec):
    """Stacked tensor-product operators, shape (parameter_count, D, D)."""
    return _term_operators(spec.name)


def build_state(spec, t):
    """Assemble the model density matrix at parameter point ``t``."""
    t = _check_arity(spec, np.atleast_1d(np.asarray(t, dtype=float)))
    if t.ndim != 1:
        raise ParameterArityError("build_state expects a single parameter point")
    dim = spec.dim
    rho = np.eye(dim, dtype=complex) / dim
    rho += 0.25 * np.tensordot(t, term_operators(spec), axes=(0, 0))
    return rho


def leading_principal_minors(m):
    """Determinants of the top-left k-by-k submatrices, k = 1..dim.

    For a Hermitian input all values are real.  Note that nonnegativity
    of these minors alone does not certify positive semidefiniteness
    (diag(0, -1) has leading minors (0, 0)); see
    :func:`all_principal_minors_nonneg` for the sufficient variant.
    """
    m = np.asarray(m)
    return np.array(
        [np.linalg.det(m[:k, :k]).real for k in range(1, m.shape[0] + 1)]
    )


def all_principal_minors_nonneg(m, tol=PSD_TOL):
    """True iff every principal minor (all index subsets) is >= -tol.

    For Hermitian matrices this is equivalent to positive
    semidefiniteness; it serves as an independent cross-check of the
    eigenvalue test.
    """
    m = np.asarray(m)
    n = m.shape[0]
    for k in range(1, n + 1):
        for rows in combinations(range(n), k):
            idx = np.ix_(rows, rows)
            if np.linalg.det(m[idx]).real < -tol:
                return False
    return True


def is_psd(m, tol=PSD_TOL):
    """Eigenvalue test: minimum eigenvalue >= -tol."""
    return bool(np.linalg.eigvalsh(np.asarray(m))[0] >= -tol)


def partial_transpose(m, dim_a, dim_b):
    """Transpose the second tensor factor of a bipartite operator."""
    m = np.asarray(m)
    if m.shape != (dim_a * dim_b, dim_a * dim_b):
        raise ValueError(
            f"operator shape {m.shape} does not match dimensions "
            f"({dim_a}, {dim_b})"
        )
    blocks = m.reshape(dim_a, dim_b, dim_a, dim_b)
    return np.ascontiguousarray(blocks.transpose(0, 3, 2, 1)).reshape(m.shape)


@lru_cache(maxsize=None)
def _pt_signs(name):
    spec = MODELS[name]
    basis_b = su_generators(spec.dim_b)
    signs = np.array(
        [
            -1.0 if np.allclose(basis_b.matrix(ib).T, -basis_b.matrix(ib)) else 1.0
            for _, ib in spec.terms
        ]
    )
    signs.setflags(write=False)
    return signs


def pt_signs(spec):
    """Per-parameter signs s with partial_transpose(rho(t)) = rho(s*t)."""
    return _pt_signs(spec.name)


# ---------------------------------------------------------------------------
# Closed-form physical-region masks.
#
# Each function takes an (N, parameter_count) array and returns a boolean
# array of length N.  These encode the exact eigenvalue-nonnegativity
# geometry of each family (block-diagonal structure of rho(t) in the
# product basis reduces every model to 1x1/2x2/3x3 conditions).
# ---------------------------------------------------------------------------


def _mask_qubit_ququart(T):
    return (np.abs(T[:, 0]) + np.abs(T[:, 2]) <= 0.5) & (np.abs(T[:, 1]) <= 0.5)


def _mask_two_ququart_cube(T):
    return np.max(np.abs(T), axis=1) <= 0.25


def _mask_two_ququart_true(T):
    return (np.abs(T[:, 0]) + np.abs(T[:, 2]) <= 0.25) & (np.abs(T[:, 1]) <= 0.25)


def _mask_two_qubit(T):
    t1, t2, t3 = T[:, 0], T[:, 1], T[:, 2]
    return (
        (1 + t1 - t2 + t3 >= 0)
        & (1 - t1 + t2 + t3 >= 0)
        & (1 + t1 + t2 - t3 >= 0)
        & (1 - t1 - t2 - t3 >= 0)
    )


def _mask_rho1(T):
    t1, t2, t3 = T[:, 0], T[:, 1], T[:, 2]
    four_ninths = 4.0 / 9.0
    return (np.abs(t1 - t2) <= four_ninths + t3) & (
        np.abs(t1 + t2) <= four_ninths - t3
    )


def _mask_rho2(T):
    return np.einsum("ij,ij->i", T, T) <= (4.0 / 9.0) ** 2


def _mask_addendum(T):
    t1, t2, t3 = T[:, 0], T[:, 1], T[:, 2]
    norm2 = t1 * t1 + t2 * t2 + t3 * t3
    box = np.max(np.abs(T), axis=1) <= 4.0 / 9.0
    e2 = 1.0 / 27.0 - norm2 / 16.0
    e3 = 1.0 / 729.0 - norm2 / 144.0 - t1 * t2 * t3 / 32.0
    return box & (e2 >= 0) & (e3 >= 0)


def _mask_npt(T):
    t1, t2, t3 = T[:, 0], T[:, 1], T[:, 2]
    return (t1 * t1 + (t2 + t3) ** 2 <= 1.0 / 9.0) & (np.abs(t2 - t3) <= 1.0 / 3.0)


def _mask_ppt(T):
    return (np.abs(T[:, 0]) + np.abs(T[:, 1]) <= 1.0 / 3.0) & (
        np.abs(T[:, 2]) <= 1.0 / 3.0
    )


def _mask_two_param_qutrit(T):
    return T[:, 0] ** 2 + T[:, 1] ** 2 <= (4.0 / 9.0) ** 2


def _mask_two_param_ququart(T):
    return np.max(np.abs(T), axis=1) <= 0.25


def _mask_hadamard7(T):
    ninth = 1.0 / 9.0
    w = T[:, 2] / 4.0
    a = ninth + w
    b = ninth
    u1 = (T[:, 0] - T[:, 1]) / 4.0
    u2 = (T[:, 3] - T[:, 4]) / 4.0
    u3 = (T[:, 5] - T[:, 6]) / 4.0
    v1 = (T[:, 0] + T[:, 1]) / 4.0
    v2 = (T[:, 3] + T[:, 4]) / 4.0
    v3 = (T[:, 5] + T[:, 6]) / 4.0
    pair_ok = (
        (np.abs(v1) <= ninth - w) & (np.abs(v2) <= ninth) & (np.abs(v3) <= ninth)
    )
    # Elementary-symmetric-function positivity of the 3x3 block
    # [[a, u1, u2], [u1, a, u3], [u2, u3, b]].
    e1 = 2 * a + b
    e2 = (a * a - u1 * u1) + (a * b - u2 * u2) + (a * b - u3 * u3)
    e3 = b * (a * a - u1 * u1) - a * (u2 * u2 + u3 * u3) + 2 * u1 * u2 * u3
    return pair_ok & (e1 >= 0) & (e2 >= 0) & (e3 >= 0)


# Faithful eigenvalue-geometry masks.
_TRUE_MASKS = {
    "qubit_ququart": _mask_qubit_ququart,
    "two_ququart": _mask_two_ququart_true,
    "two_qubit": _mask_two_qubit,
    "qutrit_rho1": _mask_rho1,
    "qutrit_rho2": _mask_rho2,
    "qutrit_addendum": _mask_addendum,
    "qutrit_ququart_npt": _mask_npt,
    "qutrit_ququart_ppt": _mask_ppt,
    "two_param_qutrit": _mask_two_param_qutrit,
    "two_param_ququart": _mask_two_param_ququart,
    "hadamard_qutrit7": _mask_hadamard7,
}

# Conventional physical predicates used for conditioning; identical to
# the faithful geometry except for two_ququart, where the cube is used.
_PHYSICAL_MASKS = dict(_TRUE_MASKS)
_PHYSICAL_MASKS["two_ququart"] = _mask_two_ququart_cube


def _as_batch(spec, T):
    T = np.asarray(T, dtype=float)
    if T.ndim == 1:
        T = T[None, :]
    if T.ndim != 2 or T.shape[1] != spec.parameter_count:
        raise ParameterArityError(
            f"{spec.name} expects points of length {spec.parameter_count}, "
            f"got array of shape {T.shape}"
        )
    return T


def physical_mask(spec, T):
    """Vectorized physical predicate (the conditioning region)."""
    return _PHYSICAL_MASKS[spec.name](_as_batch(spec, T))


def true_physical_mask(spec, T):
    """Vectorized faithful eigenvalue-nonnegativity predicate."""
    return _TRUE_MASKS[spec.name](_as_batch(spec, T))


def ppt_region_mask(spec, T):
    """PPT region: the physical predicate at the sign-flipped point."""
    T = _as_batch(spec, T)
    return _PHYSICAL_MASKS[spec.name](T * pt_signs(spec)[None, :])


def true_ppt_mask(spec, T):
    """Faithful PPT predicate: eigenvalue geometry at the flipped point."""
    T = _as_batch(spec, T)
    return _TRUE_MASKS[spec.name](T * pt_signs(spec)[None, :])


def is_physical(spec, t):
    """Single-point physical predicate (closed form)."""
    t = _check_arity(spec, np.atleast_1d(np.asarray(t, dtype=float)))
    return bool(physical_mask(spec, t[None, :])[0])


def is_ppt(spec, t, tol=PSD_TOL):
    """Eigenvalue test of the partial transpose at a single point."""
    rho = build_state(spec, t)
    return is_psd(partial_transpose(rho, spec.dim_a, spec.dim_b), tol=tol)
