"""State operators on the pole subspace and their semigroup evolution.

The distinguished operators are the binomial anti-diagonal family

    W(n) = (Gamma**n / n!) * sum_{k=0}^{n} binom(n, k) |k><n-k|

and their weighted sum W = 2 pi Gamma * sum_n binom(r, n+1) (-i)**n W(n),
which is the operator the pole term of a scattering pairing suggests.
Conjugating with the semigroup, T(t) A T(t)^dagger, multiplies every W(n)
by exp(-Gamma t) with no polynomial remainder, while a plain dyad
|k><k| (k >= 1) picks up polynomial contamination up to t**(2k).

Two carriers are supported: complex floats, and exact Gaussian rationals
(exact=True) in which Gamma enters as the exact rational value of its
float and the overall 2 pi Gamma scale is dropped because pi has no exact
carrier; every certified property is invariant under that scale.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import ExpPolynomial, GaussianRational, Polynomial, binom
from .errors import (
    EmptyGridError,
    IndexOutOfRangeError,
    NegativeTimeError,
    WrongRepresentationError,
)
from .jordan import (
    GamowSubspace,
    OperatorOnM,
    as_complex_matrix,
    evolution_matrix,
    evolution_matrix_bra,
    evolution_polys,
)
from .smatrix import SMatrixModel, TestFunction, _pairing_legs, analytic_derivatives

__all__ = [
    "StateOperator",
    "w_n",
    "w_total",
    "w_pole_term",
    "dyad_operator",
    "evolve_operator",
    "evolve_operator_symbolic",
    "decay_deviation",
    "pole_term_probability",
    "detector_probability",
]

REPRESENTATIONS = ("decay", "scattering")


@dataclass(frozen=True)
class StateOperator:
    """Operator on the pole subspace, tagged by which basis family the
    dyads refer to: the decay representation evolves under the semigroup,
    the scattering representation is the pole-term bookkeeping shape."""

    op: OperatorOnM
    representation: str = "decay"

    def __post_init__(self):
        if self.representation not in REPRESENTATIONS:
            raise ValueError(f"unknown representation {self.representation!r}")

    @property
    def space(self) -> GamowSubspace:
        return self.op.space


def _wn_matrix(space: GamowSubspace, n: int, exact: bool):
    r = space.dimension
    if not 0 <= n <= r - 1:
        raise IndexOutOfRangeError(f"operator index n must be in 0..{r - 1}, got {n}")
    if exact:
        gamma_width = Fraction(space.pole.Gamma)
        scale = gamma_width**n / math.factorial(n)
        mat = np.full((r, r), GaussianRational(0), dtype=object)
        for k in range(n + 1):
            if space.normalization == "derivative":
                entry = scale * binom(n, k)
            else:
                entry = gamma_width**n
            mat[k, n - k] = GaussianRational(entry)
    else:
        gamma_width = space.pole.Gamma
        scale = gamma_width**n / math.factorial(n)
        mat = np.zeros((r, r), dtype=complex)
        for k in range(n + 1):
            if space.normalization == "derivative":
                mat[k, n - k] = scale * binom(n, k)
            else:
                mat[k, n - k] = gamma_width**n
    return mat


def w_n(space: GamowSubspace, n: int, exact: bool = False) -> StateOperator:
    """The n-th binomial anti-diagonal operator W(n), decay representation."""
    return StateOperator(OperatorOnM(space, _wn_matrix(space, n, exact)), "decay")


def _w_sum_matrix(space: GamowSubspace, exact: bool):
    r = space.dimension
    if exact:
        total = np.full((r, r), GaussianRational(0), dtype=object)
        minus_i = GaussianRational(0, -1)
        for n in range(r):
            coeff = binom(r, n + 1) * minus_i**n
            layer = _wn_matrix(space, n, True)
            for idx in np.ndindex(r, r):
                total[idx] = total[idx] + coeff * layer[idx]
        return total
    total = np.zeros((r, r), dtype=complex)
    for n in range(r):
        total += binom(r, n + 1) * (-1j) ** n * _wn_matrix(space, n, False)
    return 2.0 * math.pi * space.pole.Gamma * total


def w_total(space: GamowSubspace, exact: bool = False) -> StateOperator:
    """Microphysical state operator W = 2 pi Gamma sum_n binom(r, n+1) (-i)**n W(n).

    The exact carrier omits the 2 pi Gamma prefactor (pi is irrational);
    all certified statements about W are scale invariant.
    """
    return StateOperator(OperatorOnM(space, _w_sum_matrix(space, exact)), "decay")


def w_pole_term(space: GamowSubspace, exact: bool = False) -> StateOperator:
    """Same coefficient matrix as w_total, read over the scattering dyads.

    This is the shape the pole term of a pairing dictates; it is not a
    semigroup-evolution input, so evolve_operator rejects it.
    """
    return StateOperator(OperatorOnM(space, _w_sum_matrix(space, exact)), "scattering")


def dyad_operator(
    space: GamowSubspace, k: int, l: int | None = None, exact: bool = False
) -> StateOperator:
    """Single dyad |k><l| (l defaults to k), decay representation."""
    r = space.dimension
    if l is None:
        l = k
    if not 0 <= k < r or not 0 <= l < r:
        raise IndexOutOfRangeError(f"dyad indices must be in 0..{r - 1}, got ({k}, {l})")
    if exact:
        mat = np.full((r, r), GaussianRational(0), dtype=object)
        mat[k, l] = GaussianRational(1)
    else:
        mat = np.zeros((r, r), dtype=complex)
        mat[k, l] = 1.0
    return StateOperator(OperatorOnM(space, mat), "decay")


def _require_decay(W: StateOperator):
    if W.representation != "decay":
        raise WrongRepresentationError(
            "semigroup evolution acts on decay-representation operators only"
        )


def evolve_operator(W: StateOperator, t: float) -> OperatorOnM:
    """T(t) . A . T(t)^dagger at a fixed time, complex entries."""
    _require_decay(W)
    if t < 0:
        raise NegativeTimeError(f"evolution is defined for t >= 0, got {t}")
    space = W.space
    ket = evolution_matrix(space, t).matrix
    bra = evolution_matrix_bra(space, t).matrix
    mat = as_complex_matrix(W.op.matrix)
    return OperatorOnM(space, ket @ mat @ bra)


def _poly_matmul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = Polynomial()
            for k in range(inner):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def evolve_operator_symbolic(W: StateOperator) -> OperatorOnM:
    """T(t) . A . T(t)^dagger as ExpPolynomial entries in the time variable.

    The two boundary phases exp(-i z t) and exp(i conj(z) t) combine to the
    shared rate -Gamma, carried on each entry; the polynomial parts come
    from multiplying out the triangular evolution factors.  Exact input
    entries give exact polynomial coefficients.
    """
    _require_decay(W)
    space = W.space
    mat = W.op.matrix
    exact = mat.dtype == object
    ket = evolution_polys(space, exact=exact)
    bra = evolution_polys(space, exact=exact, bra=True)
    middle = [[Polynomial([mat[i, j]]) for j in range(mat.shape[1])] for i in range(mat.shape[0])]
    polys = _poly_matmul(_poly_matmul(ket, middle), bra)
    if exact:
        rate = GaussianRational(-Fraction(space.pole.Gamma))
    else:
        rate = complex(-space.pole.Gamma)
    entries = [[ExpPolynomial(rate, p) for p in row] for row in polys]
    return OperatorOnM(space, np.array(entries, dtype=object))


def decay_deviation(W: StateOperator, t_grid) -> float:
    """Largest relative departure from the pure exponential law on the grid.

    max over t of || evolve(W, t) - exp(-Gamma t) W ||_F / ||W||_F, with
    the norm of W taken at t = 0.
    """
    grid = [float(t) for t in t_grid]
    if not grid:
        raise EmptyGridError("decay_deviation needs a non-empty time grid")
    space = W.space
    mat0 = as_complex_matrix(W.op.matrix)
    norm0 = float(np.linalg.norm(mat0))
    if norm0 == 0.0:
        return 0.0
    worst = 0.0
    for t in grid:
        evolved = evolve_operator(W, t).matrix
        reference = math.exp(-space.pole.Gamma * t) * mat0
        worst = max(worst, float(np.linalg.norm(evolved - reference)) / norm0)
    return worst


def _observable_leg_at_time(psi_value, t: float):
    """Leg of the time-translated observable: w -> exp(-i w t) psi(w)."""

    def fn(w):
        return cmath.exp(-1j * w * t) * psi_value(w)

    return fn


def pole_term_probability(pair, model: SMatrixModel, t: float) -> float:
    """|pole term of the pairing with the time-translated observable|**2.

    Each observable-leg derivative psi^(k)(z) in the pole term is replaced
    by the k-th derivative of exp(-i w t) psi(w) at z.  For r = 1 this is
    exp(-Gamma t) times the t = 0 value; higher orders deviate by
    polynomial factors.
    """
    if t < 0:
        raise NegativeTimeError(f"probabilities are defined for t >= 0, got {t}")
    pole = model.pole
    z = pole.z_R
    radius = pole.Gamma / 4.0
    psi_fn, phi_fn = _pairing_legs(pair, model)
    psi_d = analytic_derivatives(_observable_leg_at_time(psi_fn, t), z, pole.r - 1, radius)
    phi_d = analytic_derivatives(phi_fn, z, pole.r - 1, radius)
    total = 0j
    for n in range(pole.r):
        inner = sum(binom(n, k) * psi_d[k] * phi_d[n - k] for k in range(n + 1))
        total += (
            binom(pole.r, n + 1)
            * (-1j * pole.Gamma) ** (n + 1)
            * (-2j * math.pi / math.factorial(n))
            * inner
        )
    return abs(total) ** 2


def detector_probability(
    W: StateOperator, psi: TestFunction, model: SMatrixModel, t: float
) -> float:
    """<psi(t)| W |psi(t)> with the k-th dyad leg paired to the k-th
    derivative of the time-translated observable at the pole.

    Decay-representation pairing; the background phase plays no role here.
    Values are unnormalized: scale W (or psi) to set the t = 0 value.
    """
    _require_decay(W)
    if t < 0:
        raise NegativeTimeError(f"probabilities are defined for t >= 0, got {t}")
    pole = model.pole
    space = W.space
    if space.pole != pole:
        raise ValueError("state operator and model refer to different poles")
    z = pole.z_R
    d = analytic_derivatives(
        _observable_leg_at_time(psi.value, t), z, space.dimension - 1, pole.Gamma / 4.0
    )
    mat = as_complex_matrix(W.op.matrix)
    value = 0j
    for k in range(space.dimension):
        for l in range(space.dimension):
            value += mat[k, l] * d[k] * np.conj(d[l])
    return float(value.real)
