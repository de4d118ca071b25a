"""Root localization in energy and the table runner.

scan_brackets and refine_root are generic over any real scalar function (the
validate command also points them at the solvable-model Wronskians over
their own spectral parameters); lowest_eigenvalues and reproduce_table wire
them to the oscillator quantization function for both parities.
"""

import math
import time
from dataclasses import asdict, dataclass, replace

from .core import DEFAULT_POLICY, OscillatorSpec, quantization_value
from .errors import (
    EnergyWindowError,
    RefineError,
    ScanUnreliableError,
    SpectralError,
)
from .summation import DEFAULT_TAIL


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not (self.lo < self.hi):
            raise ValueError("bracket needs lo < hi")
        if not (math.isfinite(self.f_lo) and math.isfinite(self.f_hi)):
            raise ValueError("bracket endpoint values must be finite")
        if (self.f_lo > 0) == (self.f_hi > 0) or self.f_lo == 0 or self.f_hi == 0:
            raise ValueError("bracket endpoints must have opposite signs")


@dataclass(frozen=True)
class Eigenvalue:
    energy: float
    parity: int = -1  # nu; -1 until assigned
    ordinal: int = -1  # 0-based within its parity
    residual: float = 0.0  # |F| / term scale at the root
    n_used: int = -1
    bracket_width: float = 0.0
    terms_used: tuple = ()


@dataclass(frozen=True)
class SpectrumResult:
    """Merged lowest eigenvalues of both parities, with a shortfall flag set
    when the window closed before `count` roots were found."""

    eigenvalues: tuple
    shortfall: bool
    window: tuple  # (e_min, e_max, step) actually scanned

    def __iter__(self):
        return iter(self.eigenvalues)

    def __len__(self):
        return len(self.eigenvalues)

    def energies(self):
        return [ev.energy for ev in self.eigenvalues]


@dataclass(frozen=True)
class SweepResult:
    rows: tuple  # of (g, tuple of Eigenvalue)
    N: int
    metadata: dict


class BracketList(list):
    """Plain list of Bracket plus the grid points whose evaluation failed."""

    def __init__(self, brackets=(), skipped=()):
        super().__init__(brackets)
        self.skipped = list(skipped)


def scan_brackets(f, e_min, e_max, step):
    """Evaluate f on the grid and return one Bracket per sign change between
    consecutive successful evaluations.

    Evaluations raising SpectralError are skipped and recorded on the result;
    more than 50% failures raises ScanUnreliableError. An exact zero at an
    interior grid point is folded into a single bracket spanning its
    straddling neighbours.
    """
    if not (e_min < e_max) or step <= 0:
        raise ValueError("need e_min < e_max and step > 0")
    xs = []
    x = e_min
    while x < e_max - 1e-12 * (e_max - e_min):
        xs.append(x)
        x += step
    xs.append(e_max)
    pts = []
    skipped = []
    for x in xs:
        try:
            fx = f(x)
        except SpectralError as err:
            skipped.append((x, str(err)))
            continue
        if not math.isfinite(fx):
            skipped.append((x, f"non-finite value {fx!r}"))
            continue
        pts.append((x, fx))
    if len(skipped) * 2 > len(xs):
        raise ScanUnreliableError(len(skipped), len(xs))
    out = BracketList(skipped=skipped)
    i = 0
    while i < len(pts) - 1:
        x0, f0 = pts[i]
        x1, f1 = pts[i + 1]
        if f1 == 0.0:
            # zero exactly on the grid: bridge the neighbours around it
            if i + 2 < len(pts):
                x2, f2 = pts[i + 2]
                if f0 != 0.0 and (f0 > 0) != (f2 > 0):
                    out.append(Bracket(x0, x2, f0, f2))
                    i += 2
                    continue
            i += 1
            continue
        if f0 != 0.0 and (f0 > 0) != (f1 > 0):
            out.append(Bracket(x0, x1, f0, f1))
        i += 1
    return out


def refine_root(f, bracket, tol_e=1e-10, max_evals=200):
    """Shrink a sign-change bracket to width <= tol_e.

    Bisection with a secant acceleration step whenever the interpolant lands
    safely inside the interval; failed evaluations inside the bracket fall
    back to bisection probes jittered off the midpoint, and only persistent
    failure raises RefineError. Returns an Eigenvalue carrying the root, the
    |f| residual there, and the final bracket width (parity and ordinal are
    left for the caller).
    """
    a, fa = bracket.lo, bracket.f_lo
    b, fb = bracket.hi, bracket.f_hi
    evals = 0
    stall = 0  # forces plain bisection when secant stops shrinking fast

    def attempt(x):
        nonlocal evals
        if evals >= max_evals:
            raise RefineError(
                f"no convergence to width {tol_e} in {max_evals} evaluations "
                f"(bracket now [{a}, {b}])"
            )
        evals += 1
        return f(x)

    while (b - a) > tol_e:
        if evals >= max_evals:
            raise RefineError(
                f"no convergence to width {tol_e} in {max_evals} evaluations "
                f"(bracket now [{a}, {b}])"
            )
        width = b - a
        c = None
        if stall < 2 and fa != fb:
            sec = b - fb * (b - a) / (fb - fa)
            if a + 0.01 * width < sec < b - 0.01 * width:
                c = sec
        if c is None:
            c = a + 0.5 * width
        fc = None
        last_err = None
        for bump in (0.0, 0.125, -0.125, 0.25, -0.25, 0.375, -0.375):
            probe = c + bump * width
            if not (a < probe < b):
                continue
            try:
                fc = attempt(probe)
            except RefineError:
                raise
            except SpectralError as err:
                last_err = err
                continue
            if math.isfinite(fc):
                c = probe
                break
            fc = None
        if fc is None:
            raise RefineError(
                f"persistent evaluation failure inside [{a}, {b}]: {last_err}"
            )
        if fc == 0.0:
            # keep an honest (tiny) bracket around the exact hit
            eps = max(tol_e / 4, abs(c) * 1e-15)
            a, fa, b, fb = c - eps, fa, c + eps, fb
            break
        if (fc > 0) == (fa > 0):
            new_a, new_fa, new_b, new_fb = c, fc, b, fb
        else:
            new_a, new_fa, new_b, new_fb = a, fa, c, fc
        stall = stall + 1 if (new_b - new_a) > 0.7 * width else 0
        a, fa, b, fb = new_a, new_fa, new_b, new_fb
    # linear interpolation inside the final bracket for the reported energy
    if fa != fb and fa != 0.0:
        root = a + (b - a) * (-fa) / (fb - fa)
        root = min(max(root, a), b)
    else:
        root = 0.5 * (a + b)
    residual = min(abs(fa), abs(fb))
    return Eigenvalue(
        energy=root, residual=residual, bracket_width=b - a
    )


def potential_minimum(g, N):
    """Exact minimum of g*x**2 + x**(2N) over the line."""
    if g >= 0:
        return 0.0
    t = (-g / N) ** (1.0 / (N - 1))  # stationary x**2
    return g * t * (1.0 - 1.0 / N)


def _estimate_top_level(N, g, count):
    """Numerov estimate of the (count-1)-th merged level, used only to size
    the default energy window (values always come from the series method)."""
    from .numerov import EvenPolynomial, GridSpec, oracle_eigenvalue

    ordinal, parity = divmod(count - 1, 2)
    pot = EvenPolynomial.oscillator(g, N)
    return oracle_eigenvalue(pot, ordinal, parity, GridSpec(6.0, 1200))


def default_window(N, g, count):
    """(e_min, e_max, step): potential minimum underpins the floor; a coarse
    independent estimate of the top requested level plus a safety margin sets
    the ceiling."""
    lo = min(0.0, potential_minimum(g, N)) - 5.0
    est = _estimate_top_level(N, g, count)
    hi = est + max(2.0, 0.5 * abs(est))
    return (lo, hi, 0.05)


def lowest_eigenvalues(
    N,
    g,
    count,
    window=None,
    *,
    tol_e=1e-10,
    tail=None,
    policy=None,
):
    """The `count` lowest eigenvalues across both parities, ascending.

    window is (e_min, e_max, step); None derives one from the potential
    minimum and a coarse independent estimate of the top level. Returns a
    SpectrumResult; if the window closes before `count` roots appear the
    result is partial with shortfall=True (an auto-derived window is widened
    a few times first).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    tail = tail or DEFAULT_TAIL
    policy = policy or DEFAULT_POLICY
    auto = window is None
    if auto:
        window = default_window(N, g, count)
    e_min, e_max, step = window
    per_parity = {}
    for nu in (0, 1):
        spec = OscillatorSpec(g=g, N=N, nu=nu)

        def f(E, _spec=spec):
            ev = quantization_value(_spec, E, tail=tail, policy=policy)
            return ev.value / ev.term_scale if ev.term_scale > 0 else ev.value

        per_parity[nu] = [f, scan_brackets(f, e_min, e_max, step)]
    hi = e_max
    for _ in range(4):
        found = sum(len(br) for _, br in per_parity.values())
        if found >= count or not auto:
            break
        new_hi = hi + 0.6 * (hi - e_min)
        for nu in (0, 1):
            f, brackets = per_parity[nu]
            ext = scan_brackets(f, hi, new_hi, step)
            brackets.extend(ext)
            brackets.skipped.extend(ext.skipped)
        hi = new_hi
    eigen = []
    for nu in (0, 1):
        f, brackets = per_parity[nu]
        for ordinal, br in enumerate(brackets):
            ev = refine_root(f, br, tol_e)
            spec = OscillatorSpec(g=g, N=N, nu=nu)
            qe = quantization_value(spec, ev.energy, tail=tail, policy=policy)
            eigen.append(
                replace(
                    ev,
                    parity=nu,
                    ordinal=ordinal,
                    n_used=qe.n_index,
                    terms_used=qe.terms_used,
                )
            )
    eigen.sort(key=lambda e: e.energy)
    shortfall = len(eigen) < count
    return SpectrumResult(
        eigenvalues=tuple(eigen[:count]),
        shortfall=shortfall,
        window=(e_min, hi, step),
    )


def reproduce_table(N, g_list, levels=4, *, tol_e=1e-10, tail=None, policy=None):
    """Lowest `levels` eigenvalues for each coupling in g_list.

    Rows come back sorted by g. Shortfall rows are kept (short) and listed in
    metadata["shortfalls"].
    """
    if levels < 1:
        raise ValueError("levels must be >= 1")
    t0 = time.time()
    rows = []
    shortfalls = []
    for g in sorted(g_list):
        res = lowest_eigenvalues(
            N, g, levels, tol_e=tol_e, tail=tail, policy=policy
        )
        if res.shortfall:
            shortfalls.append(g)
        rows.append((g, res.eigenvalues))
    tail = tail or DEFAULT_TAIL
    policy = policy or DEFAULT_POLICY
    meta = {
        "tol_e": tol_e,
        "tail": asdict(tail),
        "policy": asdict(policy),
        "shortfalls": shortfalls,
        "elapsed_s": round(time.time() - t0, 3),
    }
    return SweepResult(rows=tuple(rows), N=N, metadata=meta)
