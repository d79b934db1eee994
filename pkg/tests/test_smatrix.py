"""Tests for the S-matrix model, derivative extraction and pole term.

Expected values come from independent routes: closed-form derivatives of
the rational test functions, a direct contour integral of the pairing
integrand, and hand-derived special cases like the value on resonance.
"""

import cmath
import math

import numpy as np
import pytest

from gamowkit.errors import NoConvergenceError, PoleEvaluationError
from gamowkit.smatrix import (
    BackgroundPhase,
    ResonancePole,
    SMatrixModel,
    TestFunction,
    TestFunctionPair,
    analytic_derivatives,
    expansion_coeffs,
    lineshape,
    pole_expansion_coeffs,
    pole_term,
    s_matrix_eval,
)

RNG_SEED = 20260823


def rational_derivatives(terms, z: complex, n_max: int) -> np.ndarray:
    """Closed-form derivatives of sum c / (w - i a)**m at z.

    d^k/dw^k (w - i a)**(-m) = (-1)**k (m+k-1)!/(m-1)! (w - i a)**(-(m+k))
    """
    out = np.zeros(n_max + 1, dtype=complex)
    for k in range(n_max + 1):
        acc = 0j
        for a, m, c in terms:
            rising = math.factorial(m + k - 1) // math.factorial(m - 1)
            acc += c * (-1) ** k * rising * (z - 1j * a) ** (-(m + k))
        out[k] = acc
    return out


def contour_pole_term(pair, model, radius=None, nodes=4096) -> complex:
    """Independent pole term: minus the circle integral of psi * S * phi.

    Uses a different radius and a fixed node count so it shares nothing
    with the adaptive extraction inside the implementation.  When the
    gauge is not absorbed the phase factor is divided back out of S.
    """
    pole = model.pole
    z = pole.z_R
    rho = radius if radius is not None else pole.Gamma / 3.0
    total = 0j
    for jn in range(nodes):
        theta = 2.0 * math.pi * jn / nodes
        w = z + rho * cmath.exp(1j * theta)
        s = s_matrix_eval(model, w)
        if not model.absorb_gauge:
            s /= model.phase_factor(w)
        total += pair.psi.value(w) * s * pair.phi.value(w) * 1j * rho * cmath.exp(1j * theta)
    return -total * (2.0 * math.pi / nodes)


@pytest.fixture
def pair():
    return TestFunctionPair.from_params(
        [(1.0, 1, 1.0), (2.0, 2, 0.5j)], [(1.5, 1, 1.0)]
    )


class TestModelValidation:
    def test_pole_parameters_must_be_physical(self):
        with pytest.raises(ValueError):
            ResonancePole(-1.0, 1.0, 1)
        with pytest.raises(ValueError):
            ResonancePole(2.0, 0.0, 1)
        with pytest.raises(ValueError):
            ResonancePole(2.0, 1.0, 0)

    def test_pole_position(self):
        pole = ResonancePole(2.0, 0.5, 3)
        assert pole.z_R == complex(2.0, -0.25)

    def test_phase_kinds(self):
        with pytest.raises(ValueError):
            BackgroundPhase("fourier", (1.0,))
        with pytest.raises(ValueError):
            BackgroundPhase("constant", (1.0, 2.0))
        assert BackgroundPhase("polynomial", (0.1, 0.2)).value(2.0) == pytest.approx(0.5)

    def test_test_function_validation(self):
        with pytest.raises(ValueError):
            TestFunction(((-1.0, 1, 1.0),))
        with pytest.raises(ValueError):
            TestFunction(((1.0, 0, 1.0),))
        assert TestFunction().value(1.0) == 0j


class TestSMatrixValues:
    def test_on_resonance_value_is_sign_of_order(self):
        for r in range(1, 6):
            model = SMatrixModel(ResonancePole(2.0, 1.0, r))
            assert s_matrix_eval(model, 2.0) == pytest.approx((-1) ** r, abs=1e-12)

    def test_on_resonance_with_constant_phase(self):
        model = SMatrixModel(ResonancePole(2.0, 1.0, 2), BackgroundPhase("constant", (0.3,)))
        assert s_matrix_eval(model, 2.0) == pytest.approx(cmath.exp(0.6j), abs=1e-12)

    def test_unitary_on_real_axis(self):
        model = SMatrixModel(
            ResonancePole(2.0, 0.7, 3), BackgroundPhase("polynomial", (0.1, 0.05))
        )
        rng = np.random.default_rng(RNG_SEED)
        for energy in rng.uniform(0.1, 10.0, size=200):
            assert abs(abs(s_matrix_eval(model, float(energy))) - 1.0) < 1e-12

    def test_evaluation_at_pole_rejected(self):
        model = SMatrixModel(ResonancePole(2.0, 1.0, 1))
        with pytest.raises(PoleEvaluationError):
            s_matrix_eval(model, model.pole.z_R)

    def test_partial_fraction_expansion_matches_closed_form(self):
        # ((w - z*)/(w - z))**r == 1 + sum_l c_l / (w - z)**l
        pole = ResonancePole(2.0, 1.0, 4)
        model = SMatrixModel(pole)
        coeffs = pole_expansion_coeffs(model)
        z = pole.z_R
        rng = np.random.default_rng(RNG_SEED)
        checked = 0
        while checked < 200:
            w = complex(rng.uniform(-5, 9), rng.uniform(-5, 5))
            if abs(w - z) < 0.1 * pole.Gamma or abs(w - z.conjugate()) < 0.1 * pole.Gamma:
                continue
            closed = s_matrix_eval(model, w)
            summed = 1.0 + sum(c / (w - z) ** (l + 1) for l, c in enumerate(coeffs))
            assert abs(closed - summed) < 1e-11 * max(1.0, abs(closed))
            checked += 1

    def test_expansion_coefficients_small_orders(self):
        # r = 1: c_1 = -i Gamma;  r = 2: c_1 = -2i Gamma, c_2 = -Gamma**2
        assert pole_expansion_coeffs(SMatrixModel(ResonancePole(2.0, 0.5, 1))) == [
            pytest.approx(-0.5j)
        ]
        c = pole_expansion_coeffs(SMatrixModel(ResonancePole(2.0, 0.5, 2)))
        assert c[0] == pytest.approx(-1.0j)
        assert c[1] == pytest.approx(-0.25)


class TestAnalyticDerivatives:
    def test_matches_closed_form_for_rational_functions(self):
        terms = ((1.0, 1, 1.0), (2.0, 3, 0.5 - 0.25j))
        fn = TestFunction(terms)
        z0 = complex(2.0, -0.5)
        got = analytic_derivatives(fn.value, z0, 6, 0.6)
        want = rational_derivatives(terms, z0, 6)
        np.testing.assert_allclose(got, want, rtol=1e-10, atol=1e-12)

    def test_matches_closed_form_for_exponential(self):
        z0 = complex(1.0, -0.3)
        got = analytic_derivatives(lambda w: cmath.exp(0.3j * w), z0, 5, 0.5)
        want = np.array([(0.3j) ** k * cmath.exp(0.3j * z0) for k in range(6)])
        np.testing.assert_allclose(got, want, rtol=1e-10, atol=1e-14)

    def test_zeroth_order_is_plain_evaluation(self):
        fn = TestFunction(((1.0, 2, 1.5),))
        z0 = complex(0.7, -0.2)
        got = analytic_derivatives(fn.value, z0, 0, 0.1)
        assert got[0] == pytest.approx(fn.value(z0), rel=1e-12)

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            analytic_derivatives(lambda w: w, 0j, -1, 0.1)
        with pytest.raises(ValueError):
            analytic_derivatives(lambda w: w, 0j, 1, 0.0)

    def test_singularity_on_contour_raises(self):
        z0 = 0j
        radius = 0.5
        # pole essentially on the sampling circle at an angle no node hits
        w_bad = z0 + radius * cmath.exp(0.5j) * (1.0 + 1e-9)
        with pytest.raises(NoConvergenceError):
            analytic_derivatives(lambda w: 1.0 / (w - w_bad), z0, 3, radius)


class TestPoleTerm:
    def test_simple_pole_closed_form(self, pair):
        # r = 1 collapses to -2 pi Gamma psi(z) phi(z)
        pole = ResonancePole(2.0, 1.0, 1)
        model = SMatrixModel(pole)
        z = pole.z_R
        want = -2.0 * math.pi * pole.Gamma * pair.psi.value(z) * pair.phi.value(z)
        assert pole_term(pair, model) == pytest.approx(want, rel=1e-12)

    @pytest.mark.parametrize("r", [1, 2, 3, 4])
    def test_against_contour_oracle(self, pair, r):
        model = SMatrixModel(
            ResonancePole(2.0, 1.0, r), BackgroundPhase("polynomial", (0.1, 0.02))
        )
        got = pole_term(pair, model)
        want = contour_pole_term(pair, model)
        assert abs(got - want) < 1e-9 * max(1.0, abs(want))

    @pytest.mark.parametrize("r", [1, 3])
    def test_against_contour_oracle_without_gauge(self, pair, r):
        model = SMatrixModel(
            ResonancePole(2.0, 1.0, r),
            BackgroundPhase("polynomial", (0.1, 0.02)),
            absorb_gauge=False,
        )
        got = pole_term(pair, model)
        want = contour_pole_term(pair, model)
        assert abs(got - want) < 1e-9 * max(1.0, abs(want))

    def test_constant_gauge_shifts_by_a_phase(self, pair):
        pole = ResonancePole(2.0, 1.0, 2)
        phase = BackgroundPhase("constant", (0.4,))
        with_gauge = pole_term(pair, SMatrixModel(pole, phase, absorb_gauge=True))
        without = pole_term(pair, SMatrixModel(pole, phase, absorb_gauge=False))
        assert with_gauge == pytest.approx(cmath.exp(0.8j) * without, rel=1e-10)

    def test_gauge_off_drops_phase_entirely(self, pair):
        pole = ResonancePole(2.0, 1.0, 2)
        phase = BackgroundPhase("polynomial", (0.1, 0.3))
        bare = pole_term(pair, SMatrixModel(pole))
        without = pole_term(pair, SMatrixModel(pole, phase, absorb_gauge=False))
        assert without == pytest.approx(bare, rel=1e-12)


class TestExpansionCoeffs:
    def test_simple_pole_coefficient(self, pair):
        pole = ResonancePole(2.0, 1.0, 1)
        model = SMatrixModel(pole)
        b = expansion_coeffs(pair.phi, model)
        want = -2.0 * math.pi * pole.Gamma * pair.phi.value(pole.z_R)
        assert b[0] == pytest.approx(want, rel=1e-12)

    @pytest.mark.parametrize("r", [2, 3, 4])
    def test_contraction_reproduces_pole_term(self, pair, r):
        # pole_term == sum_k b_k psi^(k)(z) with the bare observable leg
        pole = ResonancePole(2.0, 1.0, r)
        model = SMatrixModel(pole)
        b = expansion_coeffs(pair.phi, model)
        psi_d = rational_derivatives(pair.psi.terms, pole.z_R, r - 1)
        contracted = sum(b[k] * psi_d[k] for k in range(r))
        want = pole_term(pair, model)
        assert abs(contracted - want) < 1e-11 * max(1.0, abs(want))


class TestLineshape:
    def test_peak_normalized_to_one(self):
        model = SMatrixModel(ResonancePole(2.0, 1.0, 2))
        grid = np.linspace(0.0, 4.0, 801)
        for n in range(2):
            vals = lineshape(model, n, grid)
            assert vals.max() == pytest.approx(1.0)
            assert vals[np.argmax(vals)] == vals[400]

    def test_out_of_range_order_rejected(self):
        model = SMatrixModel(ResonancePole(2.0, 1.0, 2))
        with pytest.raises(ValueError):
            lineshape(model, 2, np.linspace(0.0, 4.0, 10))

    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_full_width_at_half_maximum(self, n):
        # half-max abscissas solve (E - E_R)^2 + Gamma^2/4 = 2^(1/(n+1)) Gamma^2/4
        gamma_width = 0.8
        model = SMatrixModel(ResonancePole(2.0, gamma_width, 3))
        grid = np.linspace(0.0, 4.0, 160001)
        vals = lineshape(model, n, grid)
        above = vals >= 0.5
        left = np.argmax(above)
        right = len(vals) - np.argmax(above[::-1]) - 1
        # linear interpolation at both crossings
        e_left = np.interp(
            0.5, [vals[left - 1], vals[left]], [grid[left - 1], grid[left]]
        )
        e_right = np.interp(
            0.5, [vals[right + 1], vals[right]], [grid[right + 1], grid[right]]
        )
        measured = e_right - e_left
        predicted = gamma_width * math.sqrt(2.0 ** (1.0 / (n + 1)) - 1.0)
        assert measured == pytest.approx(predicted, rel=1e-6)
        if n == 0:
            assert predicted == pytest.approx(gamma_width)
