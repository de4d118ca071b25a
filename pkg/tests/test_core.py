"""Coefficient recurrences, gamma sums, and the quantization function."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from anharmonic import (
    CoefficientSeries,
    NotConvergedError,
    OscillatorSpec,
    SeriesOverflowError,
    TailPolicy,
    asymptotic_coeffs,
    quantization_indices,
    quantization_value,
    regular_series_coeffs,
    support_stride,
    undressed_regular_coeffs,
    wronskian_gamma,
)

from . import _oracles


# ---------------------------------------------------------------------------
# regular (dressed) series
# ---------------------------------------------------------------------------


def test_regular_series_normalization_and_parity():
    spec = OscillatorSpec(g=3.7, N=4, nu=0)
    b = regular_series_coeffs(spec, 2.31, 8).true_values()
    assert b[0] == 1.0
    assert b[1] == 0.0


def test_regular_series_hand_values():
    # one-step substitutions in the recurrence, nu = 0, N = 4
    E, g = 1.5, 0.25
    spec = OscillatorSpec(g=g, N=4, nu=0)
    b = regular_series_coeffs(spec, E, 6).true_values()
    assert b[2] == pytest.approx(-E / 2, rel=1e-15)
    assert b[3] == 0.0
    assert b[4] == pytest.approx((E**2 / 2 + g) / 12, rel=1e-15)
    assert b[5] == pytest.approx(1 / 5, rel=1e-15)


def test_regular_series_matches_extended_precision():
    spec = OscillatorSpec(g=-2.0, N=5, nu=1)
    got = regular_series_coeffs(spec, 7.25, 40).true_values()
    ref = _oracles.regular_coeffs_mp(5, 1, -2.0, 7.25, 40)
    for i in range(40):
        assert got[i] == pytest.approx(float(ref[i]), rel=1e-13, abs=1e-300)


# ---------------------------------------------------------------------------
# recessive asymptotic series
# ---------------------------------------------------------------------------


def test_asymptotic_hand_values():
    E, g = 0.875, 1.5
    spec = OscillatorSpec(g=g, N=4, nu=0)
    h = asymptotic_coeffs(spec, E, 4).true_values()
    assert h[0] == 1.0
    assert h[1] == pytest.approx(g / 2, rel=1e-15)
    assert h[2] == pytest.approx(g**2 / 8, rel=1e-15)
    assert h[3] == pytest.approx((g**3 / 8 - E) / 6, rel=1e-15)


def test_asymptotic_matches_extended_precision():
    spec = OscillatorSpec(g=4.0, N=6, nu=0)
    got = asymptotic_coeffs(spec, -3.0, 40).true_values()
    ref = _oracles.recessive_coeffs_mp(6, 4.0, -3.0, 40)
    for i in range(40):
        assert got[i] == pytest.approx(float(ref[i]), rel=1e-13, abs=1e-300)


# ---------------------------------------------------------------------------
# recurrence residuals (property)
# ---------------------------------------------------------------------------


def _regular_residual(N, nu, g, E, b):
    worst = 0.0
    for i in range(2, len(b)):
        terms = [-E * b[i - 2], -(i + nu) * (i + nu - 1) * b[i]]
        if i >= 4:
            terms.append(g * b[i - 4])
        if i >= N + 1:
            terms.append(2 * (i - N / 2 - 1 + nu) * b[i - N - 1])
        scale = max(abs(t) for t in terms)
        if scale > 0:
            worst = max(worst, abs(math.fsum(terms)) / scale)
    return worst


def _recessive_residual(N, g, E, h):
    worst = 0.0
    for m in range(1, len(h)):
        terms = [2 * m * h[m]]
        if m - N - 1 >= 0:
            terms.append((m - N / 2) * (m - N / 2 - 1) * h[m - N - 1])
        if m - N + 1 >= 0:
            terms.append(E * h[m - N + 1])
        if m - N + 3 >= 0:
            terms.append(-g * h[m - N + 3])
        scale = max(abs(t) for t in terms)
        if scale > 0:
            worst = max(worst, abs(math.fsum(terms)) / scale)
    return worst


# zero or moderate magnitudes: extreme tiny values legitimately overflow the
# single-rescale series container and are covered by the overflow test below
_moderate = lambda lo, hi: st.one_of(
    st.just(0.0),
    st.floats(min_value=0.01, max_value=hi),
    st.floats(min_value=lo, max_value=-0.01),
)


@settings(max_examples=30, deadline=None)
@given(
    N=st.integers(min_value=4, max_value=9),
    nu=st.integers(min_value=0, max_value=1),
    g=_moderate(-15, 15),
    E=_moderate(-30, 60),
)
def test_recurrence_residuals(N, nu, g, E):
    spec = OscillatorSpec(g=g, N=N, nu=nu)
    b = regular_series_coeffs(spec, E, 80).true_values()
    h = asymptotic_coeffs(spec, E, 80).true_values()
    eps = np.finfo(float).eps
    assert _regular_residual(N, nu, g, E, b) <= 8 * eps
    assert _recessive_residual(N, g, E, h) <= 8 * eps


# ---------------------------------------------------------------------------
# exponential dressing
# ---------------------------------------------------------------------------


def _dressing_coeffs(N, count):
    # Taylor coefficients of exp(x^(N+1)/(N+1)): nonzero every N+1 powers
    e = np.zeros(count)
    j = 0
    while j * (N + 1) < count:
        e[j * (N + 1)] = 1.0 / (math.factorial(j) * (N + 1) ** j)
        j += 1
    return e


def test_undressed_recurrence():
    # (n+nu)(n+nu-1) a_n = -E a_{n-2} + g a_{n-4} + a_{n-2N-2}
    N, nu, g, E = 5, 1, -1.25, 3.0
    spec = OscillatorSpec(g=g, N=N, nu=nu)
    a = undressed_regular_coeffs(spec, E, 60).true_values()
    assert a[0] == 1.0 and a[1] == 0.0
    for n in range(2, 60):
        rhs = -E * a[n - 2]
        if n >= 4:
            rhs += g * a[n - 4]
        if n >= 2 * N + 2:
            rhs += a[n - 2 * N - 2]
        lhs = (n + nu) * (n + nu - 1) * a[n]
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)


def test_cauchy_dressing_identity():
    # criterion 9 shape: 10 seeded draws, 50 coefficients, 1e-12 relative
    rng = np.random.default_rng(20260819)
    for _ in range(10):
        N = int(rng.integers(4, 8))
        nu = int(rng.integers(0, 2))
        g = float(rng.uniform(-5, 5))
        E = float(rng.uniform(-10, 30))
        spec = OscillatorSpec(g=g, N=N, nu=nu)
        a = undressed_regular_coeffs(spec, E, 50).true_values()
        b = regular_series_coeffs(spec, E, 50).true_values()
        e = _dressing_coeffs(N, 50)
        conv = np.convolve(a, e)[:50]
        scale = np.max(np.abs(b))
        assert np.max(np.abs(conv - b)) <= 1e-12 * scale


# ---------------------------------------------------------------------------
# gamma sums
# ---------------------------------------------------------------------------


def test_gamma_single_term_truncation():
    # a one-term cap leaves exactly the m=0 term, (-k - nu + mu) * b_k
    spec = OscillatorSpec(g=1.0, N=4, nu=0)
    E, k = 0.7, 9
    b = regular_series_coeffs(spec, E, k + 1).true_values()
    expected = (-k - 0 + (-2.0)) * b[k]
    with pytest.raises(NotConvergedError) as ei:
        wronskian_gamma(spec, E, k, tail=TailPolicy(max_terms=1))
    assert ei.value.partial == pytest.approx(expected, rel=1e-15)


def test_gamma_matches_extended_precision_oracle():
    p = _oracles.GAMMA_PROBE
    spec = OscillatorSpec(g=p["g"], N=p["N"], nu=p["nu"])
    for k, (v400, v800) in _oracles.GAMMA_MP.items():
        # the oracle itself is truncation-stable to well below the bound
        assert v400 == pytest.approx(v800, rel=1e-14)
        got, report = wronskian_gamma(spec, p["energy"], k)
        assert report.converged
        assert got == pytest.approx(v800, rel=1e-12)


def test_gamma_ratio_law():
    # gamma_{k+N+1}/gamma_k = (2/(N+1))/(n+1+delta_L)
    spec = OscillatorSpec(g=1.0, N=4, nu=0)
    E, N = 1.49101990, 4
    n, L = 13, 0
    k = n * (N + 1) + 1 + L
    delta_l = (0 - N / 2 + L) / (N + 1)
    lo, _ = wronskian_gamma(spec, E, k)
    hi, _ = wronskian_gamma(spec, E, k + N + 1)
    expected = (2 / (N + 1)) / (n + 1 + delta_l)
    assert hi / lo == pytest.approx(expected, rel=1e-9)


def test_gamma_requires_positive_k():
    spec = OscillatorSpec(g=1.0, N=4, nu=0)
    with pytest.raises(ValueError):
        wronskian_gamma(spec, 1.0, 0)


def test_gamma_off_stride_is_exactly_zero():
    # N = 5, g = 0: indices step by gcd(6, 2) = 2, so odd k vanish identically
    spec = OscillatorSpec(g=0.0, N=5, nu=0)
    assert support_stride(5, 0.0, 2.5) == 2
    v, report = wronskian_gamma(spec, 2.5, 7)
    assert v == 0.0
    assert report.converged


def test_support_stride_cases():
    assert support_stride(4, 1.0, 1.0) == 1
    assert support_stride(5, 0.0, 0.0) == 6
    assert support_stride(7, 1.0, 0.0) == 4
    assert support_stride(7, 0.0, 3.0) == 2


# ---------------------------------------------------------------------------
# quantization indices and F
# ---------------------------------------------------------------------------


def test_quantization_indices_substitutions():
    pairs = quantization_indices(4, 0, 0)
    assert len(pairs) == 5
    assert pairs[0] == pytest.approx((-0.4, 1))
    pairs = quantization_indices(4, 1, 2)
    assert pairs[4][0] == pytest.approx(0.6)
    assert pairs[4][1] == 15
    pairs = quantization_indices(7, 0, 1)
    assert pairs[0][0] == pytest.approx(-0.4375)
    assert pairs[0][1] == 9
    # gamma-function arguments must stay positive
    for N in (4, 5, 6, 7):
        for nu in (0, 1):
            for delta_l, _ in quantization_indices(N, nu, 0):
                assert 0 + 1 + delta_l > 0


def test_quantization_value_small_at_table_energies():
    for spec, E in (
        (OscillatorSpec(g=0.0, N=4, nu=0), 1.22582011),
        (OscillatorSpec(g=10.0, N=5, nu=1), 9.93229322),
    ):
        ev = quantization_value(spec, E)
        assert ev.converged
        assert abs(ev.value) < 1e-6 * ev.term_scale
        # stored index bookkeeping
        N = spec.N
        assert len(ev.gamma_values) == N + 1
        assert ev.n_index >= 0


def test_n_shift_ratio():
    # F at n and n+1 differ by exactly 2/(N+1), away from zeros of F
    spec = OscillatorSpec(g=1.0, N=4, nu=0)
    E = 3.0  # between the even eigenvalues
    lo = quantization_value(spec, E, n=13, escalate=False)
    hi = quantization_value(spec, E, n=14, escalate=False)
    assert lo.converged and hi.converged
    assert hi.value / lo.value == pytest.approx(2 / 5, rel=1e-8)


def test_quantization_value_invariants():
    spec = OscillatorSpec(g=-1.0, N=6, nu=0)
    ev = quantization_value(spec, 2.0)
    assert ev.converged
    assert ev.tail_estimate < 1e-12  # converged implies tails under tolerance
    N = 6
    pairs = quantization_indices(N, 0, ev.n_index)
    assert pairs[0][1] == ev.n_index * (N + 1) + 1


# ---------------------------------------------------------------------------
# series container behaviour
# ---------------------------------------------------------------------------


def test_series_container_fields():
    spec = OscillatorSpec(g=2.0, N=4, nu=0)
    s = regular_series_coeffs(spec, 1.0, 30)
    assert isinstance(s, CoefficientSeries)
    assert s.values[0] == 1.0
    assert s.rescale_exponent == 0
    assert s.truncation_order == 29
    assert np.all(np.isfinite(s.values))
    assert len(s) == 30


def test_series_rescale_keeps_normalization():
    # large energy grows the coefficients fast enough to force a rescale
    spec = OscillatorSpec(g=0.0, N=4, nu=0)
    s = regular_series_coeffs(spec, 400.0, 700)
    assert np.all(np.isfinite(s.values))
    if s.rescale_exponent != 0:
        assert math.ldexp(s.values[0], s.rescale_exponent) == 1.0
    else:  # fall back: range must genuinely fit unscaled
        assert np.max(np.abs(s.values)) < 1e300


def test_series_overflow_error_names_index():
    spec = OscillatorSpec(g=0.0, N=4, nu=0)
    with pytest.raises(SeriesOverflowError) as ei:
        regular_series_coeffs(spec, 400.0, 4000)
    assert isinstance(ei.value.index, int)
    assert 0 < ei.value.index < 4000


# ---------------------------------------------------------------------------
# gamma-function accuracy (evaluator used inside F)
# ---------------------------------------------------------------------------


def test_gamma_function_accuracy():
    assert math.gamma(1.0) == 1.0
    assert math.gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    # dyadic grid keeps x and x+1 exactly representable, so the recurrence
    # residual probes the evaluator rather than argument rounding (which the
    # log-derivative ~ln x would amplify ~40x at the top of the range)
    for i in range(32, 59 * 64, 7):
        x = i / 64.0
        assert math.gamma(x + 1.0) == pytest.approx(x * math.gamma(x), rel=1e-14)


def test_gamma_function_absolute_accuracy():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 40
    for i in range(32, 60 * 16, 13):
        x = i / 16.0
        ref = mp.gamma(mp.mpf(x))  # exact binary argument
        assert abs(mp.mpf(math.gamma(x)) - ref) / ref < 1e-14
