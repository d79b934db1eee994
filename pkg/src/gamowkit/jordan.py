"""Jordan-block subspace attached to an order-r resonance pole.

The r kets |0>, ..., |r-1> span the subspace; the Hamiltonian acts as
H|k> = z|k> + k|k-1> (derivative normalization) so (H - z) is nilpotent
of index r.  Rescaling |k> by 1/k! gives the factorial normalization with
a sub-/super-diagonal of ones.  Time evolution for t >= 0 is the upper
triangular semigroup T(t) with columns

    T(t)|k> = exp(-i z t) * sum_{p<=k} binom(k, p) (-i t)**(k-p) |p>

and the bra side evolves with the conjugate transpose.

Matrix layout conventions: operators that act on ket coordinates (the
evolution matrices, nilpotent powers) hold the image of basis ket k in
column k.  hamiltonian_matrix alone returns the transposed layout that
multiplies the column of pairing values <psi|k>, which is the lower
Jordan block; hamiltonian_action_matrix is its ket-side transpose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import ExpPolynomial, GaussianRational, Polynomial, binom
from .errors import IndexOutOfRangeError, NegativeTimeError
from .smatrix import ResonancePole

__all__ = [
    "GamowSubspace",
    "GamowVector",
    "OperatorOnM",
    "hamiltonian_matrix",
    "hamiltonian_action_matrix",
    "apply_hamiltonian",
    "nilpotent_power",
    "evolution_matrix",
    "evolution_matrix_bra",
    "evolution_polys",
    "evolution_matrix_symbolic",
]

NORMALIZATIONS = ("derivative", "factorial")


@dataclass(frozen=True)
class GamowSubspace:
    """Span of the r generalized vectors at one pole, in a fixed normalization."""

    pole: ResonancePole
    normalization: str = "derivative"

    def __post_init__(self):
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"unknown normalization {self.normalization!r}")

    @property
    def dimension(self) -> int:
        return self.pole.r


@dataclass(frozen=True)
class GamowVector:
    """Element of the subspace, stored as coordinates over |0>..|r-1>."""

    space: GamowSubspace
    coords: tuple

    def __post_init__(self):
        coords = tuple(complex(c) for c in self.coords)
        if len(coords) != self.space.dimension:
            raise ValueError(
                f"need {self.space.dimension} coordinates, got {len(coords)}"
            )
        object.__setattr__(self, "coords", coords)


@dataclass(frozen=True)
class OperatorOnM:
    """r x r matrix over the dyad basis |k><l| of the subspace.

    Entries are complex for the numeric path or objects (GaussianRational,
    ExpPolynomial) for the exact and symbolic paths; entry (k, l) is the
    coefficient of |k><l|.
    """

    space: GamowSubspace
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix)
        if mat.dtype != object:
            mat = mat.astype(complex)
        r = self.space.dimension
        if mat.shape != (r, r):
            raise ValueError(f"matrix must be {r}x{r}, got {mat.shape}")
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    def norm(self) -> float:
        """Frobenius norm of the entries (numeric and exact entries only)."""
        return float(np.linalg.norm(as_complex_matrix(self.matrix)))


def as_complex_matrix(matrix: np.ndarray) -> np.ndarray:
    """Complex view of a numeric or GaussianRational-valued matrix."""
    mat = np.asarray(matrix)
    if mat.dtype != object:
        return mat.astype(complex)
    out = np.empty(mat.shape, dtype=complex)
    for idx in np.ndindex(mat.shape):
        out[idx] = complex(mat[idx])
    return out


def _subdiagonal_weight(space: GamowSubspace, k: int):
    # weight multiplying |k-1> in H|k>
    return k if space.normalization == "derivative" else 1


def hamiltonian_matrix(space: GamowSubspace) -> OperatorOnM:
    """Hamiltonian in the pairing-value layout: the lower Jordan block.

    Row k of this matrix sends the column of pairing values <psi|0..r-1>
    to z * <psi|k> + w_k * <psi|k-1> with w_k = k (derivative) or 1
    (factorial).  The ket-coordinate action is the transpose; see
    hamiltonian_action_matrix.
    """
    r = space.dimension
    z = space.pole.z_R
    mat = np.zeros((r, r), dtype=complex)
    for k in range(r):
        mat[k, k] = z
        if k > 0:
            mat[k, k - 1] = _subdiagonal_weight(space, k)
    return OperatorOnM(space, mat)


def hamiltonian_action_matrix(space: GamowSubspace) -> OperatorOnM:
    """Hamiltonian acting on ket coordinates: column k holds H|k>."""
    mat = hamiltonian_matrix(space).matrix.T
    return OperatorOnM(space, mat)


def apply_hamiltonian(space: GamowSubspace, k: int) -> GamowVector:
    """H|k> = z|k> + k|k-1> (derivative) or z|k> + |k-1> (factorial)."""
    r = space.dimension
    if not 0 <= k < r:
        raise IndexOutOfRangeError(f"basis index {k} outside 0..{r - 1}")
    coords = [0j] * r
    coords[k] = space.pole.z_R
    if k > 0:
        coords[k - 1] = complex(_subdiagonal_weight(space, k))
    return GamowVector(space, tuple(coords))


def nilpotent_power(space: GamowSubspace, k: int) -> OperatorOnM:
    """(H - z)**k in the ket-coordinate layout.

    The entries stay small integers, so the floating products are exact:
    the k-th power kills |0>..|k-1> exactly, has rank r - k for k <= r,
    and is the exact zero matrix from k = r on.
    """
    if k < 0:
        raise ValueError("power must be nonnegative")
    r = space.dimension
    nil = hamiltonian_action_matrix(space).matrix - space.pole.z_R * np.eye(r)
    # nil**r is already exactly zero, so capping the exponent changes nothing
    # but keeps huge powers cheap.
    return OperatorOnM(space, np.linalg.matrix_power(nil, min(k, r)))


def _ket_weight(space: GamowSubspace, k: int, p: int) -> float:
    # weight of |p> in the evolved |k>, without the i-powers
    if space.normalization == "derivative":
        return float(binom(k, p))
    return 1.0 / math.factorial(k - p)


def _ket_weight_exact(space: GamowSubspace, k: int, p: int) -> Fraction:
    if space.normalization == "derivative":
        return Fraction(binom(k, p))
    return Fraction(1, math.factorial(k - p))


def evolution_matrix(space: GamowSubspace, t: float) -> OperatorOnM:
    """Semigroup matrix T(t); column k holds the evolved |k>.

    Entry (p, k) is exp(-i z t) * w(k, p) * (-i t)**(k-p) for p <= k, with
    w(k, p) = binom(k, p) in derivative normalization and 1/(k-p)! in
    factorial normalization.
    """
    if t < 0:
        raise NegativeTimeError(f"evolution is defined for t >= 0, got {t}")
    r = space.dimension
    phase = np.exp(-1j * space.pole.z_R * t)
    mat = np.zeros((r, r), dtype=complex)
    for k in range(r):
        for p in range(k + 1):
            mat[p, k] = _ket_weight(space, k, p) * (-1j * t) ** (k - p)
    return OperatorOnM(space, phase * mat)


def evolution_matrix_bra(space: GamowSubspace, t: float) -> OperatorOnM:
    """Bra-side semigroup matrix, the conjugate transpose of T(t).

    Entry (l, q) is exp(i conj(z) t) * w(l, q) * (i t)**(l-q) for q <= l.
    """
    if t < 0:
        raise NegativeTimeError(f"evolution is defined for t >= 0, got {t}")
    r = space.dimension
    phase = np.exp(1j * np.conj(space.pole.z_R) * t)
    mat = np.zeros((r, r), dtype=complex)
    for l in range(r):
        for q in range(l + 1):
            mat[l, q] = _ket_weight(space, l, q) * (1j * t) ** (l - q)
    return OperatorOnM(space, phase * mat)


def evolution_polys(space: GamowSubspace, exact: bool = False, bra: bool = False):
    """Polynomial parts of the evolution matrix entries, as nested lists.

    The scalar factor exp(-i z t) (ket side) or exp(i conj(z) t) (bra side)
    is carried separately by the caller.  With exact=True the coefficients
    are Gaussian rationals, otherwise complex floats.
    """
    r = space.dimension
    rows = []
    for row in range(r):
        cols = []
        for col in range(r):
            # ket side: row p, column k, degree k - p; bra side transposed
            hi, lo = (row, col) if bra else (col, row)
            d = hi - lo
            if d < 0:
                cols.append(Polynomial())
                continue
            if exact:
                weight = _ket_weight_exact(space, hi, lo)
                unit = GaussianRational(0, 1) if bra else GaussianRational(0, -1)
                coeff = GaussianRational(weight) * unit ** d
                zeros = [GaussianRational(0)] * d
            else:
                unit = 1j if bra else -1j
                coeff = _ket_weight(space, hi, lo) * unit ** d
                zeros = [0j] * d
            cols.append(Polynomial(zeros + [coeff]))
        rows.append(cols)
    return rows


def evolution_matrix_symbolic(space: GamowSubspace) -> OperatorOnM:
    """T(t) with ExpPolynomial entries sharing the rate -i z."""
    rate = -1j * space.pole.z_R
    polys = evolution_polys(space)
    entries = [[ExpPolynomial(rate, p) for p in row] for row in polys]
    return OperatorOnM(space, np.array(entries, dtype=object))
