"""Shared summation policy and compensated accumulation helpers.

The series in this package stop on a heuristic: several consecutive terms
small relative to the running partial sum, plus a cancellation check and a
geometric tail extrapolation, because no a-priori bound on the tails is
available. TailPolicy bundles those knobs; sum_series applies them to any
term stream.
"""

from dataclasses import dataclass

from .errors import NotConvergedError

# rel_tol compares |term| to |partial sum|; consecutive is how many such terms
# in a row end the sum; cancel_limit bounds max|partial| / |final|; tail_tol is
# what the reported tail estimate must stay below for `converged` to be set.
_DEF_REL_TOL = 1e-16
_DEF_CONSECUTIVE = 5
_DEF_MAX_TERMS = 50_000
_DEF_CANCEL_LIMIT = 1e6
_DEF_TAIL_TOL = 1e-12


@dataclass(frozen=True)
class TailPolicy:
    rel_tol: float = _DEF_REL_TOL
    consecutive: int = _DEF_CONSECUTIVE
    max_terms: int = _DEF_MAX_TERMS
    cancel_limit: float = _DEF_CANCEL_LIMIT
    tail_tol: float = _DEF_TAIL_TOL

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.tail_tol > 0 and self.cancel_limit > 0):
            raise ValueError("tolerances must be positive")
        if self.consecutive < 1 or self.max_terms < 1:
            raise ValueError("consecutive and max_terms must be >= 1")


DEFAULT_TAIL = TailPolicy()


@dataclass(frozen=True)
class ConvergenceReport:
    """Diagnostics of one terminated series sum."""

    terms_used: int
    tail_estimate: float  # geometric extrapolation of the dropped tail, relative
    converged: bool
    max_partial: float  # peak |partial sum| seen (absolute)
    cancellation: float  # max_partial / |final|


def geometric_tail(last_abs, prev_abs, final_abs):
    """Relative tail bound from the last two nonzero term magnitudes.

    Extrapolates |t| * r / (1 - r) with r = last/prev, clamped: the series
    handled here decay faster than geometrically near termination, so the
    clamp only guards degenerate ratio estimates.
    """
    if last_abs == 0.0:
        return 0.0
    if prev_abs == 0.0:
        r = 0.5
    else:
        r = min(last_abs / prev_abs, 0.9)
    tail = last_abs * r / (1.0 - r)
    if final_abs == 0.0:
        return float("inf") if tail > 0.0 else 0.0
    return tail / final_abs


def sum_series(terms, tail=DEFAULT_TAIL, label="series"):
    """Compensated sum of an iterable of float terms under a TailPolicy.

    Returns (value, ConvergenceReport). Raises NotConvergedError if the term
    stream is still producing non-negligible terms at the cap. Used by the
    solvable-model series; the oscillator core has its own scaled kernel.
    """
    s = 0.0
    c = 0.0
    maxp = 0.0
    streak = 0
    used = 0
    last = prev = 0.0
    stopped = False
    for t in terms:
        used += 1
        y = t - c
        s2 = s + y
        c = (s2 - s) - y
        s = s2
        ap = abs(s)
        if ap > maxp:
            maxp = ap
        if t != 0.0:
            prev = last
            last = abs(t)
        if abs(t) <= tail.rel_tol * ap:
            streak += 1
            if streak >= tail.consecutive:
                stopped = True
                break
        else:
            streak = 0
        if used >= tail.max_terms:
            break
    value = s - c
    fa = abs(value)
    tail_rel = geometric_tail(last, prev, fa)
    cancel = maxp / fa if fa > 0.0 else (1.0 if maxp == 0.0 else float("inf"))
    if not stopped and used >= tail.max_terms:
        raise NotConvergedError(
            f"{label}: {used} terms without meeting the tail criterion",
            partial=value,
            terms_used=used,
            tail_estimate=tail_rel,
        )
    converged = stopped and cancel <= tail.cancel_limit and tail_rel <= tail.tail_tol
    return value, ConvergenceReport(used, tail_rel, converged, maxp, cancel)
