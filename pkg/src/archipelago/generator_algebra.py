"""Generalized Gell-Mann generator bases for SU(2), SU(3) and SU(4).

The basis for dimension ``d`` consists of the ``d**2 - 1`` traceless
Hermitian matrices built, for each column index ``k = 2..d``, from the
symmetric and antisymmetric off-diagonal pairs ``(j, k)`` with ``j < k``
followed by the diagonal generator of rank ``k``.  For ``d = 2`` this
gives the Pauli matrices; for ``d = 3`` the Gell-Mann matrices in their
standard order; for ``d = 4`` the fifteen-generator extension of that
sequence.  All generators satisfy ``Tr(g_i g_j) = 2 delta_ij``.

The module also provides the tensor product helper used to assemble
two-party operators and a validator for the real orthogonal "mixer"
matrices used by the separability analysis.
"""

from dataclasses import dataclass

import numpy as np

# Tolerance for algebraic identities (orthogonality, tracelessness).
ALGEBRA_TOL = 1e-12
# Default eigenvalue cutoff when testing positive semidefiniteness.
PSD_TOL = 1e-10

SUPPORTED_DIMS = (2, 3, 4)


class UnsupportedDimensionError(ValueError):
    """Raised when a generator basis is requested for a dimension outside
    the supported set."""


@dataclass(frozen=True)
class GeneratorBasis:
    """An ordered basis of SU(d) generators.

    Attributes
    ----------
    dim : int
        Hilbert-space dimension d.
    matrices : tuple of ndarray
        The d**2 - 1 generators, Hermitian, traceless, with
        Tr(g_i g_j) = 2 delta_ij.
    """

    dim: int
    matrices: tuple

    def __len__(self):
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def matrix(self, index):
        """Return the generator with 1-based index ``index``."""
        if not 1 <= index <= len(self.matrices):
            raise IndexError(
                f"generator index {index} out of range 1..{len(self.matrices)}"
            )
        return self.matrices[index - 1]


def _sym(d, j, k):
    m = np.zeros((d, d), dtype=complex)
    m[j, k] = 1.0
    m[k, j] = 1.0
    return m


def _antisym(d, j, k):
    m = np.zeros((d, d), dtype=complex)
    m[j, k] = -1.0j
    m[k, j] = 1.0j
    return m


def _diag(d, k):
    # Diagonal generator of rank k (2 <= k <= d): proportional to
    # diag(1, ..., 1, -(k-1), 0, ..., 0) normalized to Tr(g^2) = 2.
    v = np.zeros(d)
    v[: k - 1] = 1.0
    v[k - 1] = -(k - 1)
    v *= np.sqrt(2.0 / (k * (k - 1)))
    return np.diag(v).astype(complex)


def su_generators(d):
    """Build the ordered generator basis for SU(d), d in {2, 3, 4}.

    The ordering interleaves off-diagonal pairs with diagonal generators:
    for each k = 2..d, the symmetric then antisymmetric generator for
    every pair (j, k) with j < k, followed by the rank-k diagonal
    generator.  For d = 3 this is exactly the standard Gell-Mann
    sequence; d = 4 continues it with the six index-4 off-diagonal
    generators and the rank-4 diagonal one.

    Raises
    ------
    UnsupportedDimensionError
        If ``d`` is not 2, 3 or 4.
    """
    if d not in SUPPORTED_DIMS:
        raise UnsupportedDimensionError(
            f"generator basis only available for dimensions {SUPPORTED_DIMS}, got {d!r}"
        )
    mats = []
    for k in range(2, d + 1):
        for j in range(1, k):
            mats.append(_sym(d, j - 1, k - 1))
            mats.append(_antisym(d, j - 1, k - 1))
        mats.append(_diag(d, k))
    return GeneratorBasis(dim=d, matrices=tuple(mats))


def kron(a, b):
    """Tensor (Kronecker) product of two operators.

    Entry ((i*dim_b + k), (j*dim_b + l)) of the result equals
    a[i, j] * b[k, l].
    """
    return np.kron(np.asarray(a), np.asarray(b))


def validate_mixer(q, require_hadamard=False):
    """Check that ``q`` is a valid real orthogonal mixer.

    A valid mixer is a square real matrix with Q Q^T = I (to 1e-12) whose
    last row is entrywise nonnegative.  With ``require_hadamard`` the
    entries must additionally all have absolute value 1/sqrt(n).

    Returns a boolean; malformed (non-square) input returns False.
    """
    q = np.asarray(q, dtype=float)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        return False
    n = q.shape[0]
    orthogonal = np.allclose(q @ q.T, np.eye(n), atol=ALGEBRA_TOL)
    last_row_nonneg = bool(np.all(q[-1] >= -ALGEBRA_TOL))
    ok = orthogonal and last_row_nonneg
    if require_hadamard:
        ok = ok and np.allclose(np.abs(q), 1.0 / np.sqrt(n), atol=ALGEBRA_TOL)
    return bool(ok)


# Orthogonal mixers used by the separability analysis.  QUTRIT_MIXER is
# orthogonal but not Hadamard-type (entry magnitudes differ); the 4x4 and
# 8x8 mixers are scaled sign matrices (Hadamard-type), each with a
# nonnegative last row.
QUTRIT_MIXER = np.array(
    [
        [1 / np.sqrt(6), -np.sqrt(2.0 / 3.0), 1 / np.sqrt(6)],
        [1 / np.sqrt(2), 0.0, -1 / np.sqrt(2)],
        [1 / np.sqrt(3), 1 / np.sqrt(3), 1 / np.sqrt(3)],
    ]
)

HADAMARD_4 = 0.5 * np.array(
    [
        [1, -1, -1, 1],
        [-1, -1, 1, 1],
        [-1, 1, -1, 1],
        [1, 1, 1, 1],
    ],
    dtype=float,
)

HADAMARD_8 = (1 / np.sqrt(8)) * np.array(
    [
        [-1, 1, 1, -1, 1, -1, -1, 1],
        [1, 1, -1, -1, -1, -1, 1, 1],
        [1, -1, 1, -1, -1, 1, -1, 1],
        [-1, -1, -1, -1, 1, 1, 1, 1],
        [1, -1, -1, 1, 1, -1, -1, 1],
        [-1, -1, 1, 1, -1, -1, 1, 1],
        [-1, 1, -1, 1, -1, 1, -1, 1],
        [1, 1, 1, 1, 1, 1, 1, 1],
    ],
    dtype=float,
)
