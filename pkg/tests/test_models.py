"""Solvable-model Wronskians against their closed-form spectra."""

import math

import pytest

from anharmonic import (
    ModifiedPTSpec,
    MorseSpec,
    PoschlTellerSpec,
    PrecisionLossError,
    morse_located_zeros,
    morse_quantization,
    morse_reference_levels,
    morse_u_reg,
    mpt_exact_levels,
    mpt_wronskian,
    mpt_wronskian_at,
    pt_exact_levels,
    pt_wronskian,
    pt_wronskian_at,
)
from anharmonic.models import _pt_coeff_stream, _pt_parts

from . import _oracles


# ---------------------------------------------------------------------------
# Poschl-Teller
# ---------------------------------------------------------------------------


def _pt_scale(spec, k2):
    return _pt_parts(spec, k2, 0.5)[1]


def test_pt_zeros_at_exact_levels():
    spec = PoschlTellerSpec(kappa=2.0, lam=3.0)
    for k2 in (25.0, 49.0):
        assert abs(pt_wronskian(spec, k2)) <= 1e-10 * _pt_scale(spec, k2)


def test_pt_nonzero_between_levels():
    spec = PoschlTellerSpec(kappa=2.0, lam=3.0)
    assert abs(pt_wronskian(spec, 20.0)) > 1e-4 * _pt_scale(spec, 20.0)


def test_pt_exact_levels():
    assert pt_exact_levels(PoschlTellerSpec(2.0, 3.0), 3) == [25.0, 49.0, 81.0]
    assert pt_exact_levels(PoschlTellerSpec(1.5, 1.5), 1) == [9.0]
    got = pt_exact_levels(PoschlTellerSpec(2.2, 3.8), 2)
    assert got == pytest.approx([36.0, 64.0])


def test_pt_abel_invariance():
    spec = PoschlTellerSpec(kappa=2.2, lam=3.8)
    k2 = 30.0
    vals = [
        pt_wronskian_at(spec, k2, y) * math.sqrt(y * (1 - y))
        for y in (0.4, 0.5, 0.6)
    ]
    for v in vals[1:]:
        assert v == pytest.approx(vals[0], rel=1e-9)


def test_pt_symmetry_under_interchange():
    a = PoschlTellerSpec(kappa=2.0, lam=3.0)
    b = PoschlTellerSpec(kappa=3.0, lam=2.0)
    assert pt_exact_levels(a, 3) == pt_exact_levels(b, 3)
    for k2 in (25.0, 49.0):
        assert abs(pt_wronskian(b, k2)) <= 1e-10 * _pt_scale(b, k2)


def test_pt_series_geometric_rate():
    # both boundary series converge geometrically at y = 1/2
    spec = PoschlTellerSpec(kappa=2.2, lam=3.8)
    k2 = 30.0
    for kap, oth in ((spec.kappa, spec.lam), (spec.lam, spec.kappa)):
        stream = _pt_coeff_stream(kap, oth, k2)
        coeffs = [next(stream) for _ in range(61)]
        terms = [c * 0.5**n for n, c in enumerate(coeffs)]
        for n in range(21, 60):
            if terms[n] != 0.0:
                assert abs(terms[n + 1] / terms[n]) < 0.75


def test_pt_spec_validation():
    with pytest.raises(ValueError):
        PoschlTellerSpec(kappa=1.0, lam=3.0)
    with pytest.raises(ValueError):
        PoschlTellerSpec(kappa=2.0, lam=0.5)


# ---------------------------------------------------------------------------
# modified Poschl-Teller
# ---------------------------------------------------------------------------


def test_mpt_zeros():
    even = ModifiedPTSpec(lam=3.5, parity_mu=0.0)
    odd = ModifiedPTSpec(lam=3.5, parity_mu=0.5)
    assert abs(mpt_wronskian(even, 2.5)) <= 1e-8
    assert abs(mpt_wronskian(odd, 1.5)) <= 1e-8


def test_mpt_nonzero_off_level():
    spec = ModifiedPTSpec(lam=3.5, parity_mu=0.0)
    assert abs(mpt_wronskian(spec, 1.7)) > 1e-6


def test_mpt_exact_levels():
    assert mpt_exact_levels(ModifiedPTSpec(3.5, 0.0)) == [2.5, 0.5]
    assert mpt_exact_levels(ModifiedPTSpec(3.5, 0.5)) == [1.5]
    assert mpt_exact_levels(ModifiedPTSpec(1.5, 0.5)) == []


def test_mpt_abel_invariance():
    spec = ModifiedPTSpec(lam=2.25, parity_mu=0.0)
    koa = 0.8
    vals = [
        mpt_wronskian_at(spec, koa, y) * y * math.sqrt(1 - y)
        for y in (0.4, 0.5, 0.6)
    ]
    for v in vals[1:]:
        assert v == pytest.approx(vals[0], rel=1e-9)


def test_mpt_spec_validation():
    with pytest.raises(ValueError):
        ModifiedPTSpec(lam=0.9, parity_mu=0.0)
    with pytest.raises(ValueError):
        ModifiedPTSpec(lam=3.5, parity_mu=0.25)


# ---------------------------------------------------------------------------
# Morse
# ---------------------------------------------------------------------------


def test_morse_series_vanishes_at_origin():
    spec = MorseSpec(alpha=0.3, gamma_over_alpha=5.5)
    v, canc = morse_u_reg(spec, 3.3, 0.0)
    assert v == 0.0
    assert canc == 1.0


def test_morse_closed_form_identity():
    # series value vs y^boa * exp(-y/2) * 1F1(1/2 + boa - goa, 1 + 2 boa; y)
    spec = MorseSpec(alpha=0.3, gamma_over_alpha=5.5)
    boa = 5.0
    for y in (1.0, 5.0, spec.y0 / 2):
        v, _ = morse_u_reg(spec, boa, y)
        ref = (
            y**boa
            * math.exp(-y / 2)
            * float(_oracles.hyp1f1_mp(0.5 + boa - 5.5, 1 + 2 * boa, y))
        )
        assert v == pytest.approx(ref, rel=1e-10)


def test_morse_matches_extended_precision():
    spec = MorseSpec(alpha=0.3, gamma_over_alpha=5.5)
    v, _ = morse_u_reg(spec, 5.0, 5.0)
    assert v == pytest.approx(_oracles.MORSE_U_REG_MP, rel=1e-10)


def test_morse_quantization_zero_near_five():
    spec = MorseSpec(alpha=0.3, gamma_over_alpha=5.5)
    zeros = morse_located_zeros(spec)
    nearest = min(zeros, key=lambda z: abs(z - 5.0))
    assert nearest == pytest.approx(_oracles.MORSE_ZERO_NEAR_5, abs=1e-6)


def test_morse_quantization_nonzero_between():
    spec = MorseSpec(alpha=0.3, gamma_over_alpha=5.5)
    assert morse_quantization(spec, 5.25) != 0.0


def test_morse_zero_count_matches_reference_count():
    for alpha, goa in ((0.3, 5.5), (math.log(30.05 / 6.0), 3.0)):
        spec = MorseSpec(alpha=alpha, gamma_over_alpha=goa)
        zeros = morse_located_zeros(spec)
        refs = morse_reference_levels(spec)
        assert len(zeros) == len(refs)


def test_morse_reference_levels():
    assert morse_reference_levels(
        MorseSpec(alpha=0.3, gamma_over_alpha=5.5)
    ) == pytest.approx([5.0, 4.0, 3.0, 2.0, 1.0])
    assert morse_reference_levels(MorseSpec(alpha=0.3, gamma_over_alpha=0.4)) == []
    assert morse_reference_levels(
        MorseSpec(alpha=0.3, gamma_over_alpha=1.5)
    ) == pytest.approx([1.0])


def test_morse_deep_boundary_zeros_near_references():
    # with the matching point deep (y0 ~ 30) the located zeros collapse onto
    # the closed-form levels; the gap is measured, not assumed
    spec = MorseSpec(alpha=math.log(30.05 / 6.0), gamma_over_alpha=3.0)
    assert spec.y0 == pytest.approx(30.05, rel=1e-12)
    zeros = morse_located_zeros(spec)
    refs = morse_reference_levels(spec)
    assert len(zeros) == len(refs)
    for ref in refs:
        gap = min(abs(z - ref) for z in zeros)
        assert gap < 1e-4


def test_morse_precision_loss_trips():
    # at y0 ~ 74 the summation loses ~32 digits near a zero; the diagnostic
    # must trip rather than return noise
    spec = MorseSpec(alpha=2.0, gamma_over_alpha=5.0)
    with pytest.raises(PrecisionLossError) as ei:
        morse_quantization(spec, 4.5)
    assert ei.value.cancellation > 1e12


def test_morse_spec_invariants():
    spec = MorseSpec(alpha=0.25, gamma_over_alpha=4.0)
    assert spec.y0 == pytest.approx(8.0 * math.exp(0.25), rel=1e-15)
    with pytest.raises(ValueError):
        MorseSpec(alpha=-1.0, gamma_over_alpha=4.0)
    with pytest.raises(ValueError):
        MorseSpec(alpha=1.0, gamma_over_alpha=0.0)
