"""Exactly solvable potentials used as correctness oracles.

Three models whose bound-state conditions are known in closed form:
the Poschl-Teller well, its modified (hyperbolic) variant, and the Morse
potential. Each gets the same treatment as the oscillator: build the
origin-regular and boundary-recessive solutions as series, form the
Wronskian (or evaluate the regular solution at the far boundary for
Morse), and the zeros in the spectral variable are the exact levels.
Having the machinery land on analytically known numbers is the point.
"""

import math
from dataclasses import dataclass, field

from .errors import PrecisionLossError
from .summation import DEFAULT_TAIL, TailPolicy, sum_series

_MORSE_CANCEL_LIMIT = 1e12


@dataclass(frozen=True)
class PoschlTellerSpec:
    """Trigonometric well; spectral variable is k^2/alpha^2."""

    kappa: float
    lam: float

    def __post_init__(self):
        if not (self.kappa > 1 and self.lam > 1):
            raise ValueError("kappa and lam must both exceed 1")


@dataclass(frozen=True)
class ModifiedPTSpec:
    """Hyperbolic well; spectral variable is kappa/alpha.

    parity_mu selects the boundary-series branch: 0 for even states,
    1/2 for odd ones.
    """

    lam: float
    parity_mu: float

    def __post_init__(self):
        if not self.lam > 1:
            raise ValueError("lam must exceed 1")
        if self.parity_mu not in (0.0, 0.5):
            raise ValueError("parity_mu must be 0 or 1/2")


@dataclass(frozen=True)
class MorseSpec:
    """Morse well; spectral variable is beta/alpha. y0 is the mapped
    position of the hard boundary x = -1 and is derived, not supplied."""

    alpha: float
    gamma_over_alpha: float
    y0: float = field(init=False)

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not self.gamma_over_alpha > 0:
            raise ValueError("gamma_over_alpha must be positive")
        object.__setattr__(
            self, "y0", 2.0 * self.gamma_over_alpha * math.exp(self.alpha)
        )


def _pt_coeff_stream(kap, oth, k2):
    # origin-regular series coefficients; the partner series swaps kap/oth
    a_prev2 = 0.0
    a_prev = 1.0
    yield 1.0
    n = 1
    while True:
        c1 = (n - 1.0 + kap / 2.0) * (2.0 * n - 2.5 + kap) - (
            k2 + kap * (kap - 1.0) - oth * (oth - 1.0)
        ) / 4.0
        s = c1 * a_prev
        if n >= 2:
            s -= ((n - 2.0 + kap / 2.0) ** 2 - k2 / 4.0) * a_prev2
        a = s / (n * (n - 0.5 + kap))
        yield a
        a_prev2, a_prev = a_prev, a
        n += 1


def _weighted_terms(coeffs, point, shift):
    """coeff_n * point^n, optionally weighted by (n + shift)."""
    p = 1.0
    for n, c in enumerate(coeffs):
        t = c * p
        yield t if shift is None else (n + shift) * t
        p *= point


def _pt_sum(kap, oth, k2, point, shift, label, tail):
    value, _ = sum_series(
        _weighted_terms(_pt_coeff_stream(kap, oth, k2), point, shift),
        tail=tail,
        label=label,
    )
    return value


def _pt_parts(spec, k2, y, tail=DEFAULT_TAIL):
    """The two Wronskian products and the overall prefactor at y."""
    kap, lam = spec.kappa, spec.lam
    z = 1.0 - y
    sa = _pt_sum(kap, lam, k2, y, None, "pt-regular", tail)
    sa1 = _pt_sum(kap, lam, k2, y, kap / 2.0, "pt-regular-weighted", tail)
    sb = _pt_sum(lam, kap, k2, z, None, "pt-boundary", tail)
    sb1 = _pt_sum(lam, kap, k2, z, lam / 2.0, "pt-boundary-weighted", tail)
    pre = -(y ** (kap / 2.0 - 1.0)) * z ** (lam / 2.0 - 1.0)
    p1 = y * sa * sb1
    p2 = z * sa1 * sb
    return pre * (p1 + p2), abs(pre) * max(abs(p1), abs(p2))


def pt_wronskian_at(spec, k2_over_alpha2, y, tail=DEFAULT_TAIL):
    """Wronskian of the two solutions, built at interior point y in (0, 1)."""
    if not 0.0 < y < 1.0:
        raise ValueError("y must lie strictly inside (0, 1)")
    value, _ = _pt_parts(spec, k2_over_alpha2, y, tail)
    return value


def pt_wronskian(spec, k2_over_alpha2):
    """Quantization function: vanishes iff k^2/alpha^2 is a bound level."""
    return pt_wronskian_at(spec, k2_over_alpha2, 0.5)


def pt_exact_levels(spec, count):
    """Closed-form levels (kappa + lam + 2n)^2 for n = 0..count-1."""
    if count < 1:
        raise ValueError("count must be >= 1")
    return [(spec.kappa + spec.lam + 2 * n) ** 2 for n in range(count)]


def _mpt_a_stream(lam, koa):
    s = koa / 2.0
    a = 1.0
    yield a
    n = 1
    while True:
        c1 = (n - 1.0 + s) * (n - 0.5 + s) - lam * (lam - 1.0) / 4.0
        a = c1 * a / (n * (n + koa))
        yield a
        n += 1


def _mpt_b_stream(lam, koa, mu):
    b_prev2 = 0.0
    b_prev = 1.0
    yield 1.0
    n = 1
    while True:
        c1 = 2.0 * (n - 1.0 + mu) ** 2 + koa * koa / 4.0 - lam * (lam - 1.0) / 4.0
        t = c1 * b_prev
        if n >= 2:
            t -= ((n - 2.0 + mu) * (n - 1.5 + mu) - lam * (lam - 1.0) / 4.0) * b_prev2
        b = t / ((n + mu) * (n + mu - 0.5))
        yield b
        b_prev2, b_prev = b_prev, b
        n += 1


def _mpt_parts(spec, koa, y, tail=DEFAULT_TAIL):
    lam, mu = spec.lam, spec.parity_mu
    s = koa / 2.0
    z = 1.0 - y
    sa, _ = sum_series(
        _weighted_terms(_mpt_a_stream(lam, koa), y, None),
        tail=tail, label="mpt-regular",
    )
    sa1, _ = sum_series(
        _weighted_terms(_mpt_a_stream(lam, koa), y, s),
        tail=tail, label="mpt-regular-weighted",
    )
    sb, _ = sum_series(
        _weighted_terms(_mpt_b_stream(lam, koa, mu), z, None),
        tail=tail, label="mpt-boundary",
    )
    sb1, _ = sum_series(
        _weighted_terms(_mpt_b_stream(lam, koa, mu), z, mu),
        tail=tail, label="mpt-boundary-weighted",
    )
    pre = -(y ** (s - 1.0)) * z ** (mu - 1.0)
    p1 = y * sa * sb1
    p2 = z * sa1 * sb
    return pre * (p1 + p2), abs(pre) * max(abs(p1), abs(p2))


def mpt_wronskian_at(spec, kappa_over_alpha, y, tail=DEFAULT_TAIL):
    if not kappa_over_alpha > 0:
        raise ValueError("kappa_over_alpha must be positive")
    if not 0.0 < y < 1.0:
        raise ValueError("y must lie strictly inside (0, 1)")
    value, _ = _mpt_parts(spec, kappa_over_alpha, y, tail)
    return value


def mpt_wronskian(spec, kappa_over_alpha):
    """Quantization function in kappa/alpha for the branch parity_mu."""
    return mpt_wronskian_at(spec, kappa_over_alpha, 0.5)


def mpt_exact_levels(spec):
    """Positive closed-form levels of the selected parity branch, in the
    order n = 0, 1, ... (largest kappa/alpha first); possibly empty."""
    base = spec.lam - 1.0 if spec.parity_mu == 0.0 else spec.lam - 2.0
    out = []
    x = base
    while x > 0.0:
        out.append(x)
        x -= 2.0
    return out


def _morse_coeff_stream(goa, boa):
    a_prev2 = 0.0
    a_prev = 1.0
    yield 1.0
    n = 1
    while True:
        a = (-goa * a_prev + 0.25 * a_prev2) / (n * (n + 2.0 * boa))
        yield a
        a_prev2, a_prev = a_prev, a
        n += 1


def morse_u_reg(spec, beta_over_alpha, y):
    """Regular solution at y >= 0: y^(beta/alpha) times its power series.

    Returns (value, cancellation); cancellation is max-partial over final,
    the usual diagnostic for alternating-series digit loss. Beyond 1e12
    the digits are gone and a precision-loss error is raised instead of
    returning noise.
    """
    if not beta_over_alpha > 0:
        raise ValueError("beta_over_alpha must be positive")
    if y < 0:
        raise ValueError("y must be >= 0")
    if y == 0.0:
        return 0.0, 1.0
    tail = TailPolicy(cancel_limit=_MORSE_CANCEL_LIMIT)
    s, rep = sum_series(
        _weighted_terms(
            _morse_coeff_stream(spec.gamma_over_alpha, beta_over_alpha), y, None
        ),
        tail=tail,
        label="morse-regular",
    )
    if rep.cancellation > _MORSE_CANCEL_LIMIT:
        raise PrecisionLossError(
            f"morse series at y={y} lost all digits "
            f"(cancellation {rep.cancellation:.2e})",
            cancellation=rep.cancellation,
        )
    return y**beta_over_alpha * s, rep.cancellation


def morse_quantization(spec, beta_over_alpha):
    """Quantization function: the regular solution at the boundary y0.
    Zeros in beta/alpha are the bound levels."""
    value, _ = morse_u_reg(spec, beta_over_alpha, spec.y0)
    return value


def morse_located_zeros(spec, step=0.05, tol_e=5e-4):
    """All zeros of the quantization function in (0, gamma/alpha), ascending.

    The default refinement tolerance is deliberately coarse: near a zero at
    large y0 the series value sinks below its cancellation floor (about
    2e-4 wide in beta/alpha at y0 = 30), so chasing tighter brackets only
    trips the precision guard. On a guard trip the tolerance backs off
    once more before falling back to the scan bracket's midpoint.
    """
    from .solver import refine_root, scan_brackets
    from .errors import RefineError

    goa = spec.gamma_over_alpha
    f = lambda boa: morse_quantization(spec, boa)
    eps = min(step / 4.0, goa / 1000.0)
    out = []
    for br in scan_brackets(f, eps, goa - eps, step):
        zero = None
        tol = tol_e
        for _ in range(3):
            try:
                zero = refine_root(f, br, tol_e=tol).energy
                break
            except RefineError:
                tol *= 4.0
        if zero is None:
            zero = 0.5 * (br.lo + br.hi)
        out.append(zero)
    return out


def morse_reference_levels(spec):
    """Textbook levels beta/alpha = gamma/alpha - n - 1/2, positive ones
    only, largest first. Reference values and starting guesses: the exact
    zeros of the finite-boundary quantization sit near but not on them."""
    out = []
    n = 0
    while spec.gamma_over_alpha - n - 0.5 > 0.0:
        out.append(spec.gamma_over_alpha - n - 0.5)
        n += 1
    return out
