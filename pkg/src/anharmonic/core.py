"""Series engine for the oscillator potential g*x**2 + x**(2*N), N >= 4.

Eigenenergies are the zeros in E of the quantization function

    F(E) = sum_{L=0..N} Gamma(n+1+delta_L) * ((N+1)/2)**(L/(N+1)) * gamma_{k_L}

with delta_L = (nu - N/2 + L)/(N+1) and k_L = n*(N+1) + 1 + L; the free
integer n only rescales F (F_{n+1}/F_n = 2/(N+1)), so the zero set is
n-independent. Each gamma_k is the bilinear sum

    gamma_k = sum_{m>=0} (-2m - k - nu + mu) * b_{m+k} * h_m,    mu = -N/2,

over two recurrence-generated coefficient families:

    (n+nu)(n+nu-1) b_n = -E b_{n-2} + g b_{n-4} + 2(n - N/2 - 1 + nu) b_{n-N-1}
    -2m h_m = (m - N/2)(m - N/2 - 1) h_{m-N-1} + E h_{m-N+1} - g h_{m-N+3}

b_n comes from the origin-regular solution after dressing it with
exp(x^(N+1)/(N+1)); h_m from the series along the recessive direction at
infinity. Both sequences traverse thousands of decades for the energies and
couplings of interest, so all internal arithmetic carries coefficients as
(mantissa, int64 base-2 exponent) pairs and only ever exponent-aligns before
adding. The public CoefficientSeries type flattens to float64 with a single
global power-of-two rescale, which is enough for any printable prefix.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._jit import njit
from .errors import NotConvergedError, SeriesOverflowError
from .summation import DEFAULT_TAIL, ConvergenceReport, TailPolicy, geometric_tail

_MINEXP = -(1 << 58)  # exponent marker for "no finite value yet"

# gamma-block status codes
_RUNNING = 0
_STOPPED = 1
_STRUCTURAL_ZERO = 2
_CAP_HIT = 3


@dataclass(frozen=True)
class OscillatorSpec:
    """Problem instance: V(x) = g*x**2 + x**(2*N), parity nu."""

    g: float
    N: int
    nu: int = 0

    def __post_init__(self):
        if not isinstance(self.N, int) or self.N < 4:
            raise ValueError("N must be an integer >= 4")
        if self.nu not in (0, 1):
            raise ValueError("nu must be 0 (even states) or 1 (odd states)")
        if not math.isfinite(self.g):
            raise ValueError("g must be finite")


@dataclass(frozen=True)
class AsymptoticExponents:
    """Exponential behaviours exp(alpha * x^(N+1)/(N+1)) * x^mu at infinity.

    alpha1 tags the recessive (decaying) solution the method builds series
    for; alpha2 the divergent partner, which is never evaluated, only its
    connection factor is driven to zero through F.
    """

    alpha1: float = -1.0
    alpha2: float = 1.0
    mu: float = 0.0

    @classmethod
    def for_degree(cls, N):
        return cls(alpha1=-1.0, alpha2=1.0, mu=-N / 2.0)


@dataclass(frozen=True)
class CoefficientSeries:
    """Finite coefficient prefix c_0..c_M with a global power-of-two rescale.

    True coefficients are values[i] * 2**rescale_exponent. normalization
    records the (true) leading coefficient, fixed to 1 by construction.
    true_values() can overflow float64 for strongly rescaled sequences; the
    stored values never do.
    """

    values: np.ndarray
    normalization: float
    rescale_exponent: int
    truncation_order: int

    def true_values(self):
        return np.ldexp(self.values, np.int32(self.rescale_exponent))

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class QuantizationEvaluation:
    """F(E) at one energy, with the diagnostics needed to trust it."""

    value: float
    energy: float
    n_index: int
    gamma_values: tuple  # N+1 floats, L = 0..N
    terms_used: tuple  # ints, per gamma
    converged: bool
    tail_estimate: float  # worst relative tail bound over the N+1 gammas
    term_scale: float  # max_L |Gamma(n+1+delta_L) * weight_L * gamma_L|
    ratio_ok: bool | None  # n-shift ratio check outcome; None if not engaged
    n_escalations: int = 0


@dataclass(frozen=True)
class QuantizationPolicy:
    """Free-index schedule for quantization_value.

    The starting n puts every k_L above k_threshold; n escalates by n_step
    (at most n_extra beyond the start) when a gamma fails to converge or the
    F_{n+1}/F_n = 2/(N+1) law is violated by more than ratio_rel_tol. The
    ratio check only engages when both F values exceed ratio_floor times the
    term scale: near a zero of F the ratio is pure cancellation noise.
    """

    k_threshold: int = 64
    n_step: int = 8
    n_extra: int = 80
    ratio_rel_tol: float = 1e-6
    ratio_floor: float = 1e-5

    def __post_init__(self):
        if self.k_threshold < 1 or self.n_step < 1 or self.n_extra < 0:
            raise ValueError("k_threshold and n_step must be >= 1, n_extra >= 0")

    def n_start(self, N):
        return -(-self.k_threshold // (N + 1))  # ceil division


DEFAULT_POLICY = QuantizationPolicy()


def support_stride(N, g, energy):
    """Lattice spacing of the nonzero coefficient/gamma indices.

    The recurrences couple index i to i-2 (weight E), i-4 (weight g) and
    i-(N+1), so every sequence is supported on multiples of
    gcd(N+1, 2 if E != 0, 4 if g != 0) and gamma_k vanishes identically
    unless that stride divides k.
    """
    d = N + 1
    if energy != 0.0:
        d = math.gcd(d, 2)
    if g != 0.0:
        d = math.gcd(d, 4)
    return d


# ---------------------------------------------------------------------------
# scaled-arithmetic kernels (numba when available, plain Python otherwise)
# ---------------------------------------------------------------------------


@njit(cache=True)
def _fill_dressed(man, exp, lo, hi, N, nu, g, E):
    """Fill b_n for n in [lo, hi) given [0, lo) already filled."""
    half = N / 2.0
    for n in range(lo, hi):
        am = 0.0
        ae = _MINEXP
        bm = 0.0
        be = _MINEXP
        cm = 0.0
        ce = _MINEXP
        if E != 0.0 and man[n - 2] != 0.0:
            fm, fe = math.frexp(-E * man[n - 2])
            am = fm
            ae = exp[n - 2] + fe
        if g != 0.0 and n >= 4 and man[n - 4] != 0.0:
            fm, fe = math.frexp(g * man[n - 4])
            bm = fm
            be = exp[n - 4] + fe
        j = n - N - 1
        if j >= 0 and man[j] != 0.0:
            co = 2.0 * (n - half - 1.0 + nu)
            if co != 0.0:
                fm, fe = math.frexp(co * man[j])
                cm = fm
                ce = exp[j] + fe
        emax = max(ae, be, ce)
        if emax == _MINEXP:
            man[n] = 0.0
            exp[n] = 0
            continue
        s = 0.0
        if am != 0.0:
            s += math.ldexp(am, ae - emax)
        if bm != 0.0:
            s += math.ldexp(bm, be - emax)
        if cm != 0.0:
            s += math.ldexp(cm, ce - emax)
        s /= (n + nu) * (n + nu - 1.0)
        if s == 0.0:
            man[n] = 0.0
            exp[n] = 0
        else:
            fm, fe = math.frexp(s)
            man[n] = fm
            exp[n] = emax + fe


@njit(cache=True)
def _fill_undressed(man, exp, lo, hi, N, nu, g, E):
    """Same as _fill_dressed but for the plain (undressed) regular series:
    (n+nu)(n+nu-1) a_n = -E a_{n-2} + g a_{n-4} + a_{n-2N-2}."""
    for n in range(lo, hi):
        am = 0.0
        ae = _MINEXP
        bm = 0.0
        be = _MINEXP
        cm = 0.0
        ce = _MINEXP
        if E != 0.0 and man[n - 2] != 0.0:
            fm, fe = math.frexp(-E * man[n - 2])
            am = fm
            ae = exp[n - 2] + fe
        if g != 0.0 and n >= 4 and man[n - 4] != 0.0:
            fm, fe = math.frexp(g * man[n - 4])
            bm = fm
            be = exp[n - 4] + fe
        j = n - 2 * N - 2
        if j >= 0 and man[j] != 0.0:
            cm = man[j]
            ce = exp[j]
        emax = max(ae, be, ce)
        if emax == _MINEXP:
            man[n] = 0.0
            exp[n] = 0
            continue
        s = 0.0
        if am != 0.0:
            s += math.ldexp(am, ae - emax)
        if bm != 0.0:
            s += math.ldexp(bm, be - emax)
        if cm != 0.0:
            s += math.ldexp(cm, ce - emax)
        s /= (n + nu) * (n + nu - 1.0)
        if s == 0.0:
            man[n] = 0.0
            exp[n] = 0
        else:
            fm, fe = math.frexp(s)
            man[n] = fm
            exp[n] = emax + fe


@njit(cache=True)
def _fill_recessive(man, exp, lo, hi, N, g, E):
    """Fill h_m for m in [lo, hi) given [0, lo) already filled."""
    half = N / 2.0
    for m in range(lo, hi):
        am = 0.0
        ae = _MINEXP
        bm = 0.0
        be = _MINEXP
        cm = 0.0
        ce = _MINEXP
        j = m - N - 1
        if j >= 0 and man[j] != 0.0:
            co = (m - half) * (m - half - 1.0)
            if co != 0.0:
                fm, fe = math.frexp(co * man[j])
                am = fm
                ae = exp[j] + fe
        j = m - N + 1
        if E != 0.0 and j >= 0 and man[j] != 0.0:
            fm, fe = math.frexp(E * man[j])
            bm = fm
            be = exp[j] + fe
        j = m - N + 3
        if g != 0.0 and j >= 0 and man[j] != 0.0:
            fm, fe = math.frexp(-g * man[j])
            cm = fm
            ce = exp[j] + fe
        emax = max(ae, be, ce)
        if emax == _MINEXP:
            man[m] = 0.0
            exp[m] = 0
            continue
        s = 0.0
        if am != 0.0:
            s += math.ldexp(am, ae - emax)
        if bm != 0.0:
            s += math.ldexp(bm, be - emax)
        if cm != 0.0:
            s += math.ldexp(cm, ce - emax)
        s /= -2.0 * m
        if s == 0.0:
            man[m] = 0.0
            exp[m] = 0
        else:
            fm, fe = math.frexp(s)
            man[m] = fm
            exp[m] = emax + fe


@njit(cache=True)
def _gamma_chunk(
    bman,
    bexp,
    hman,
    hexp,
    k0,
    K,
    stride,
    coef0,
    m_lo,
    m_hi,
    rel_tol,
    consecutive,
    max_terms,
    sums,
    carry,
    maxp,
    last_t,
    prev_t,
    frame,
    streak,
    terms,
    status,
):
    """Advance K interleaved gamma sums (k = k0..k0+K-1) over m in [m_lo, m_hi).

    Each sum is compensated and kept in its own power-of-two frame: stored
    state times 2**frame[j] is the true value. coef0 = -nu + mu. Only m on
    the support stride contribute; every running k is a stride multiple (the
    rest were marked structural zeros up front), so off-stride m are skipped
    wholesale without touching the small-term streaks.

    Returns the number of sums still running.
    """
    running = 0
    for j in range(K):
        if status[j] == _RUNNING:
            running += 1
    if running == 0:
        return 0
    for m in range(m_lo, m_hi):
        if m % stride != 0:
            continue
        hm = hman[m]
        he = hexp[m]
        for j in range(K):
            if status[j] != _RUNNING:
                continue
            t = 0.0
            if hm != 0.0:
                i = m + k0 + j
                bmv = bman[i]
                if bmv != 0.0:
                    tm = (-2.0 * m - (k0 + j) + coef0) * bmv * hm
                    te = bexp[i] + he
                    if frame[j] == _MINEXP:
                        fm, fe = math.frexp(tm)
                        frame[j] = te + fe
                        t = fm
                    else:
                        sh = te - frame[j]
                        while sh > 900:
                            # incoming term towers over the frame: rebase
                            frame[j] += 600
                            sh -= 600
                            sc = math.ldexp(1.0, -600)
                            sums[j] *= sc
                            carry[j] *= sc
                            maxp[j] *= sc
                            last_t[j] *= sc
                            prev_t[j] *= sc
                        t = math.ldexp(tm, sh)
            terms[j] += 1
            y = t - carry[j]
            s2 = sums[j] + y
            carry[j] = (s2 - sums[j]) - y
            sums[j] = s2
            ap = abs(s2)
            if ap > maxp[j]:
                maxp[j] = ap
            at = abs(t)
            if t != 0.0:
                prev_t[j] = last_t[j]
                last_t[j] = at
            if at <= rel_tol * ap:
                streak[j] += 1
                if streak[j] >= consecutive:
                    status[j] = _STOPPED
                    running -= 1
            else:
                streak[j] = 0
            if status[j] == _RUNNING and terms[j] >= max_terms:
                status[j] = _CAP_HIT
                running -= 1
        if running == 0:
            break
    return running


# ---------------------------------------------------------------------------
# coefficient streams
# ---------------------------------------------------------------------------


class _ScaledStream:
    """Growable (mantissa, exponent) sequence filled by one of the kernels."""

    def __init__(self, fill, args, seed):
        self._fill = fill
        self._args = args
        cap = 4096
        self.man = np.zeros(cap, dtype=np.float64)
        self.exp = np.zeros(cap, dtype=np.int64)
        for i, v in enumerate(seed):
            if v != 0.0:
                fm, fe = math.frexp(v)
                self.man[i] = fm
                self.exp[i] = fe
        self.filled = len(seed)

    def ensure(self, n):
        """Fill through index n-1."""
        if n <= self.filled:
            return
        if n > len(self.man):
            cap = len(self.man)
            while cap < n:
                cap *= 2
            man = np.zeros(cap, dtype=np.float64)
            exp = np.zeros(cap, dtype=np.int64)
            man[: self.filled] = self.man[: self.filled]
            exp[: self.filled] = self.exp[: self.filled]
            self.man = man
            self.exp = exp
        self._fill(self.man, self.exp, self.filled, n, *self._args)
        self.filled = n


class SeriesWorkspace:
    """Shared b/h streams for one (spec, energy); reused across gamma blocks
    so escalating the free index n extends rather than recomputes."""

    def __init__(self, spec, energy):
        if not math.isfinite(energy):
            raise ValueError("energy must be finite")
        self.spec = spec
        self.energy = float(energy)
        self.stride = support_stride(spec.N, spec.g, self.energy)
        # b_1 = 0 picks the single parity-pure solution; b_0 = 1 normalizes
        self.b = _ScaledStream(
            _fill_dressed, (spec.N, spec.nu, spec.g, self.energy), (1.0, 0.0)
        )
        self.h = _ScaledStream(_fill_recessive, (spec.N, spec.g, self.energy), (1.0,))


class _GammaBlock:
    """K consecutive gamma sums (k = k0..k0+K-1) driven over one workspace."""

    _CHUNK = 2048

    def __init__(self, ws, k0, K, tail):
        if k0 < 1:
            raise ValueError("gamma index k must be >= 1")
        self.ws = ws
        self.k0 = k0
        self.K = K
        self.tail = tail
        self.sums = np.zeros(K)
        self.carry = np.zeros(K)
        self.maxp = np.zeros(K)
        self.last_t = np.zeros(K)
        self.prev_t = np.zeros(K)
        self.frame = np.full(K, _MINEXP, dtype=np.int64)
        self.streak = np.zeros(K, dtype=np.int64)
        self.terms = np.zeros(K, dtype=np.int64)
        self.status = np.zeros(K, dtype=np.int64)
        d = ws.stride
        for j in range(K):
            if (k0 + j) % d != 0 and d > 1:
                self.status[j] = _STRUCTURAL_ZERO

    def run(self):
        ws = self.ws
        spec = ws.spec
        coef0 = -spec.nu - spec.N / 2.0
        d = ws.stride
        m_lo = 0
        m_cap = d * self.tail.max_terms + 1
        running = int(np.count_nonzero(self.status == _RUNNING))
        while running > 0 and m_lo < m_cap:
            m_hi = min(m_lo + self._CHUNK, m_cap)
            ws.h.ensure(m_hi)
            ws.b.ensure(m_hi + self.k0 + self.K)
            running = _gamma_chunk(
                ws.b.man,
                ws.b.exp,
                ws.h.man,
                ws.h.exp,
                self.k0,
                self.K,
                d,
                coef0,
                m_lo,
                m_hi,
                self.tail.rel_tol,
                self.tail.consecutive,
                self.tail.max_terms,
                self.sums,
                self.carry,
                self.maxp,
                self.last_t,
                self.prev_t,
                self.frame,
                self.streak,
                self.terms,
                self.status,
            )
            m_lo = m_hi
        return self

    def result(self, j):
        """(scaled_value, frame_exp, report) for gamma_{k0+j}."""
        st = self.status[j]
        if st == _STRUCTURAL_ZERO:
            return 0.0, 0, ConvergenceReport(0, 0.0, True, 0.0, 1.0)
        val = self.sums[j] - self.carry[j]
        fa = abs(val)
        tail_rel = geometric_tail(self.last_t[j], self.prev_t[j], fa)
        if fa > 0.0:
            cancel = self.maxp[j] / fa
        else:
            cancel = 1.0 if self.maxp[j] == 0.0 else float("inf")
        converged = (
            st == _STOPPED
            and cancel <= self.tail.cancel_limit
            and tail_rel <= self.tail.tail_tol
        )
        report = ConvergenceReport(
            int(self.terms[j]),
            tail_rel,
            converged,
            math.ldexp(self.maxp[j], int(self.frame[j])) if self.maxp[j] else 0.0,
            cancel,
        )
        frame = int(self.frame[j]) if self.frame[j] != _MINEXP else 0
        return val, frame, report

    def true_value(self, j):
        val, frame, _ = self.result(j)
        return math.ldexp(val, frame)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def _series_to_public(stream, count):
    """Flatten a scaled stream prefix to CoefficientSeries, choosing the one
    global rescale exponent; fails if the range cannot fit."""
    man = stream.man[:count]
    exp = stream.exp[:count]
    nz = man != 0.0
    if not nz.any():
        values = np.zeros(count)
        values[0] = 1.0  # cannot happen: index 0 is always 1; defensive
        return CoefficientSeries(values, 1.0, 0, count - 1)
    emax_run = _MINEXP
    emin_run = -_MINEXP
    for i in range(count):
        if not nz[i]:
            continue
        e = int(exp[i])
        if e > emax_run:
            emax_run = e
        if e < emin_run:
            emin_run = e
        if emax_run - emin_run > 1500:
            raise SeriesOverflowError(i)
    if emax_run > 830:
        r = emax_run - 830
    elif emin_run < -830:
        r = emin_run + 830
    else:
        r = 0
    values = np.zeros(count)
    idx = np.nonzero(nz)[0]
    shifts = (exp[idx] - r).astype(np.int32)
    values[idx] = np.ldexp(man[idx], shifts)
    return CoefficientSeries(values, 1.0, r, count - 1)


def regular_series_coeffs(spec, energy, count):
    """First `count` coefficients b_0..b_{count-1} of the dressed regular
    series. b_0 = 1, b_1 = 0; negative indices read as 0."""
    if count < 1:
        raise ValueError("count must be >= 1")
    ws = SeriesWorkspace(spec, energy)
    ws.b.ensure(count)
    return _series_to_public(ws.b, count)


def asymptotic_coeffs(spec, energy, count):
    """First `count` coefficients h_0..h_{count-1} of the recessive
    asymptotic series, h_0 = 1."""
    if count < 1:
        raise ValueError("count must be >= 1")
    ws = SeriesWorkspace(spec, energy)
    ws.h.ensure(count)
    return _series_to_public(ws.h, count)


def undressed_regular_coeffs(spec, energy, count):
    """First `count` coefficients a_0..a_{count-1} of the plain regular
    series (no exponential dressing): the Cauchy product of these with the
    Taylor coefficients of exp(x^(N+1)/(N+1)) reproduces b."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if not math.isfinite(energy):
        raise ValueError("energy must be finite")
    stream = _ScaledStream(
        _fill_undressed, (spec.N, spec.nu, spec.g, float(energy)), (1.0, 0.0)
    )
    stream.ensure(count)
    return _series_to_public(stream, count)


def quantization_indices(N, nu, n):
    """The N+1 pairs (delta_L, k_L) entering F at free index n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if N < 4 or nu not in (0, 1):
        raise ValueError("need N >= 4 and nu in {0, 1}")
    mu = -N / 2.0
    return [((nu + mu + L) / (N + 1), n * (N + 1) + 1 + L) for L in range(N + 1)]


def wronskian_gamma(spec, energy, k, tail=None):
    """gamma_k = sum_m (-2m - k - nu + mu) b_{m+k} h_m.

    Returns (value, ConvergenceReport). Indices k off the support stride give
    an exact 0 with a zero-term report. Raises NotConvergedError when the
    term cap is hit first.
    """
    if k < 1:
        raise ValueError("k must be >= 1 so every b index is nonnegative")
    tail = tail or DEFAULT_TAIL
    ws = SeriesWorkspace(spec, energy)
    blk = _GammaBlock(ws, k, 1, tail).run()
    val, frame, report = blk.result(0)
    if blk.status[0] == _CAP_HIT:
        raise NotConvergedError(
            f"gamma_{k} at E={energy}: {report.terms_used} terms without "
            "meeting the tail criterion",
            partial=math.ldexp(val, frame),
            terms_used=report.terms_used,
            tail_estimate=report.tail_estimate,
        )
    return math.ldexp(val, frame), report


def _assemble_f(N, nu, n, scaled_vals, frames):
    """F and its term scale from N+1 scaled gamma values at free index n."""
    terms = []
    for L in range(N + 1):
        delta_l = (nu - N / 2.0 + L) / (N + 1)
        weight = ((N + 1) / 2.0) ** (L / (N + 1))
        v = scaled_vals[L]
        if v == 0.0:
            terms.append(0.0)
        else:
            terms.append(math.ldexp(math.gamma(n + 1 + delta_l) * weight * v, frames[L]))
    value = math.fsum(terms)
    scale = max(abs(t) for t in terms)
    return value, scale


def quantization_value(spec, energy, n=None, tail=None, policy=None, escalate=None):
    """Evaluate the quantization function F(E).

    With n=None (the default) the free index starts at policy.n_start(N) and
    escalates per the policy until every gamma converges and the
    F_{n+1}/F_n = 2/(N+1) cross-check holds; exhausting the schedule raises
    NotConvergedError. Passing an explicit n evaluates there; escalation then
    still applies unless escalate=False, which does a single fixed-n
    evaluation and reports converged=False instead of raising.
    """
    tail = tail or DEFAULT_TAIL
    policy = policy or DEFAULT_POLICY
    N, nu = spec.N, spec.nu
    if escalate is None:
        escalate = True
    n0 = policy.n_start(N) if n is None else int(n)
    if n0 < 0:
        raise ValueError("n must be >= 0")
    ws = SeriesWorkspace(spec, energy)

    if not escalate:
        blk = _GammaBlock(ws, n0 * (N + 1) + 1, N + 1, tail).run()
        return _finish_eval(spec, ws.energy, n0, blk, tail, None, 0)

    ratio_expected = 2.0 / (N + 1)
    n_val = n0
    worst = None
    while n_val <= n0 + policy.n_extra:
        k0 = n_val * (N + 1) + 1
        blk = _GammaBlock(ws, k0, 2 * (N + 1), tail).run()
        results = [blk.result(j) for j in range(2 * (N + 1))]
        if all(r[2].converged for r in results):
            lo, hi = results[: N + 1], results[N + 1 :]
            f_lo, scale_lo = _assemble_f(
                N, nu, n_val, [r[0] for r in lo], [r[1] for r in lo]
            )
            f_hi, scale_hi = _assemble_f(
                N, nu, n_val + 1, [r[0] for r in hi], [r[1] for r in hi]
            )
            floor = policy.ratio_floor * max(scale_lo, scale_hi / ratio_expected)
            if abs(f_lo) < floor or abs(f_hi) < floor:
                ratio_ok = None  # too close to a zero of F for the law to test
            else:
                err = abs(f_hi - ratio_expected * f_lo)
                ratio_ok = err <= policy.ratio_rel_tol * max(
                    abs(f_hi), ratio_expected * abs(f_lo)
                )
            if ratio_ok is not False:
                return _finish_eval(
                    spec, ws.energy, n_val, blk, tail, ratio_ok,
                    (n_val - n0) // policy.n_step if policy.n_step else 0,
                )
        worst = results
        n_val += policy.n_step
    tails = [r[2].tail_estimate for r in worst] if worst else []
    raise NotConvergedError(
        f"quantization sum at E={energy} (N={N}, nu={nu}): no free index in "
        f"[{n0}, {n0 + policy.n_extra}] gave converged gammas and a valid "
        "n-shift ratio",
        partial=None,
        terms_used=[r[2].terms_used for r in worst] if worst else None,
        tail_estimate=max(tails) if tails else None,
    )


def _finish_eval(spec, energy, n_val, blk, tail, ratio_ok, escalations):
    N, nu = spec.N, spec.nu
    results = [blk.result(j) for j in range(N + 1)]
    value, scale = _assemble_f(
        N, nu, n_val, [r[0] for r in results], [r[1] for r in results]
    )
    gammas = tuple(math.ldexp(r[0], r[1]) for r in results)
    reports = [r[2] for r in results]
    return QuantizationEvaluation(
        value=value,
        energy=energy,
        n_index=n_val,
        gamma_values=gammas,
        terms_used=tuple(r.terms_used for r in reports),
        converged=all(r.converged for r in reports),
        tail_estimate=max(r.tail_estimate for r in reports),
        term_scale=scale,
        ratio_ok=ratio_ok,
        n_escalations=escalations,
    )
