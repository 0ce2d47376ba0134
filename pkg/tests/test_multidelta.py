import math
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from doubledelta.core import InvalidParametersError, SolverConfig
from doubledelta.multidelta import (
    DeltaArray,
    bound_state_residual,
    chain_coefficients,
    delta_transfer,
    evaluate_chain,
    node_count,
    solve_spectrum,
)
from doubledelta.quantization import bound_states

from oracles import xi_even, xi_odd

TIGHT = SolverConfig(abs_tolerance=16 * sys.float_info.epsilon)


@st.composite
def delta_arrays(draw, max_size=5):
    n = draw(st.integers(1, max_size))
    gaps = draw(st.lists(st.floats(0.1, 3.0), min_size=n - 1, max_size=n - 1))
    start = draw(st.floats(-5.0, 5.0))
    positions = np.concatenate([[start], start + np.cumsum(gaps)]).tolist()
    strengths = draw(st.lists(st.floats(-3.0, 3.0), min_size=n, max_size=n))
    return DeltaArray(list(zip(positions, strengths)))


class TestDeltaArray:
    def test_validation(self):
        with pytest.raises(InvalidParametersError):
            DeltaArray([])
        with pytest.raises(InvalidParametersError):
            DeltaArray([(1.0, 1.0), (1.0, 2.0)])
        with pytest.raises(InvalidParametersError):
            DeltaArray([(0.0, math.nan)])

    def test_double_delta_layout(self):
        assert DeltaArray.double_delta(2.5).deltas == ((-1.0, 2.5), (1.0, 2.5))

    def test_from_file(self, tmp_path):
        path = tmp_path / "arr.txt"
        path.write_text("# position strength\n-1 2\n\n1 2  # right delta\n")
        assert DeltaArray.from_file(path) == DeltaArray.double_delta(2.0)

    def test_from_file_single_line(self, tmp_path):
        path = tmp_path / "one.txt"
        path.write_text("0 3\n")
        assert DeltaArray.from_file(path).deltas == ((0.0, 3.0),)


class TestTransfer:
    def test_zero_strength_is_identity(self):
        assert np.array_equal(delta_transfer(1.3, 0.7, 0.0), np.eye(2))

    def test_unimodular(self):
        assert np.linalg.det(delta_transfer(1.3, 0.7, 2.0)) == pytest.approx(1.0, abs=1e-12)

    @given(st.floats(0.01, 20), st.floats(-3, 3), st.floats(-10, 10))
    def test_unimodular_property(self, kappa, x, s):
        m = delta_transfer(kappa, x, s)
        scale = max(1.0, np.abs(m).max() ** 2)
        assert np.linalg.det(m) == pytest.approx(1.0, abs=1e-12 * scale)

    def test_matching_conditions(self):
        kappa, x0, s = 0.9, 0.4, 1.7
        A, B = 0.3, -1.1
        A2, B2 = delta_transfer(kappa, x0, s) @ [A, B]
        e, ei = math.exp(kappa * x0), math.exp(-kappa * x0)
        phi_l, phi_r = A * e + B * ei, A2 * e + B2 * ei
        d_l, d_r = kappa * (A * e - B * ei), kappa * (A2 * e - B2 * ei)
        assert phi_r == pytest.approx(phi_l, abs=1e-14)
        assert d_r - d_l == pytest.approx(-s * phi_l, abs=1e-14)


class TestResidual:
    def test_single_delta(self):
        arr = DeltaArray([(0.0, 2.0)])
        assert abs(bound_state_residual(1.0, arr)) < 1e-12
        # A' = 1 - s/(2 kappa)
        assert bound_state_residual(0.5, arr) == pytest.approx(-1.0, abs=1e-15)

    def test_double_delta_vanishes_at_closed_form_roots(self):
        arr = DeltaArray.double_delta(2.0)
        for xi in (xi_even(2.0), xi_odd(2.0)):
            assert abs(bound_state_residual(xi, arr)) < 1e-12
        assert round(xi_odd(2.0), 4) == 0.7968 and round(xi_even(2.0), 4) == 1.1089

    def test_matches_transfer_matrix_product(self):
        arr = DeltaArray([(-0.7, 1.2), (0.1, -0.4), (0.9, 2.2)])
        for kappa in (0.3, 1.1, 2.7):
            assert bound_state_residual(kappa, arr) == pytest.approx(chain_coefficients(kappa, arr)[-1][0], rel=1e-12)

    def test_large_kappa_positive(self):
        arr = DeltaArray([(-1.0, 2.0), (0.5, 1.0), (2.0, 3.0)])
        assert bound_state_residual(10 * 6.0, arr) > 0

    def test_no_overflow_at_large_span(self):
        arr = DeltaArray([(-200.0, 1.0), (200.0, 1.0)])
        val = bound_state_residual(1.75, arr)  # kappa * span = 700
        assert math.isfinite(val)

    def test_invalid_kappa(self):
        with pytest.raises(InvalidParametersError):
            bound_state_residual(0.0, DeltaArray.double_delta(1.0))


class TestSpectrum:
    @pytest.mark.parametrize("a", [0.5, 1.5, 2.0, 5.0, 20.0])
    def test_double_delta_equivalence(self, a):
        levels = solve_spectrum(DeltaArray.double_delta(a))
        states = bound_states(a)
        assert len(levels) == len(states)
        for level, state in zip(levels, states):
            assert abs(level.kappa - state.xi) < 1e-10
            assert level.energy_dimensionless == -level.kappa**2

    def test_all_repulsive(self):
        assert solve_spectrum(DeltaArray([(-1.0, -2.0), (0.0, -0.1), (3.0, -5.0)])) == []
        assert solve_spectrum(DeltaArray.double_delta(-3.0)) == []

    @pytest.mark.parametrize("s", [0.01, 1.0, 2.0, 37.0])
    def test_single_delta(self, s):
        levels = solve_spectrum(DeltaArray([(0.3, s)]))
        assert len(levels) == 1
        assert levels[0].kappa == pytest.approx(s / 2, abs=1e-12)

    def test_ground_state_first(self):
        levels = solve_spectrum(DeltaArray([(-2.0, 1.0), (-0.5, 3.0), (0.5, 3.0), (2.0, 1.0)]))
        energies = [lv.energy_dimensionless for lv in levels]
        assert energies == sorted(energies)
        assert len(levels) >= 2

    def test_node_count_matches_spectrum(self):
        arr = DeltaArray([(-2.0, 1.0), (-0.5, 3.0), (0.5, 3.0), (2.0, 1.0)])
        kappas = [lv.kappa for lv in solve_spectrum(arr)]
        for k in np.geomspace(1e-3, 10.0, 50):
            assert node_count(k, arr) == sum(kk > k for kk in kappas)

    def test_near_degenerate_pair_resolved(self):
        levels = solve_spectrum(DeltaArray.double_delta(20.0))
        assert levels[0].kappa - levels[1].kappa == pytest.approx(xi_even(20.0) - xi_odd(20.0), abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(delta_arrays(), st.floats(-4.0, 4.0))
    def test_translation_invariance(self, arr, offset):
        base = [lv.kappa for lv in solve_spectrum(arr)]
        moved = [lv.kappa for lv in solve_spectrum(arr.shifted(offset))]
        assert len(base) == len(moved)
        assert np.allclose(base, moved, rtol=0, atol=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(delta_arrays(), st.data())
    def test_monotone_in_strength(self, arr, data):
        i = data.draw(st.integers(0, len(arr) - 1))
        bump = data.draw(st.floats(0.01, 3.0))
        stronger = DeltaArray([(x, s + bump if j == i else s) for j, (x, s) in enumerate(arr.deltas)])
        assert len(solve_spectrum(stronger)) >= len(solve_spectrum(arr))

    @settings(max_examples=25, deadline=None)
    @given(
        st.lists(st.tuples(st.floats(0.2, 2.0), st.floats(0.2, 3.0)), min_size=1, max_size=3),
        st.one_of(st.none(), st.floats(0.2, 3.0)),
    )
    def test_parity_of_symmetric_arrays(self, half, center):
        # mirror positive positions; optional delta at the origin
        xs = np.cumsum([g for g, _ in half]).tolist()
        right = list(zip(xs, [s for _, s in half]))
        deltas = [(-x, s) for x, s in reversed(right)] + ([(0.0, center)] if center else []) + right
        arr = DeltaArray(deltas)
        levels = solve_spectrum(arr, TIGHT)
        kappas = [lv.kappa for lv in levels]
        for level in levels:
            # kappa errors reach the coefficients amplified by ~1/gap between
            # neighbouring levels (tunnelling pairs)
            gap = min([abs(level.kappa - k) for k in kappas if k != level.kappa] or [1.0])
            bound = max(1e-10, 1e-13 * level.kappa / gap)
            # mirror symmetry maps region j onto region N - j and swaps A with B
            coeffs = np.array(chain_coefficients(level.kappa, arr))
            mirrored = coeffs[::-1, ::-1]
            scale = np.abs(coeffs).max()
            even = np.abs(coeffs - mirrored).max() / scale
            odd = np.abs(coeffs + mirrored).max() / scale
            assert min(even, odd) < bound
            # and the sampled function agrees inside the array
            u = np.linspace(0.0, xs[-1], 25)
            left, right = evaluate_chain(level.kappa, arr, -u), evaluate_chain(level.kappa, arr, u)
            sign = 1.0 if even < odd else -1.0
            assert np.abs(left - sign * right).max() < 1e-8 * np.abs(right).max()
