"""Run the Wronskian construction on three exactly solvable wells.

Each model admits closed-form bound levels, so the located zeros of the
series-built quantization function can be compared digit by digit. This is
the same machinery the oscillator engine uses, pointed at potentials where
the right answer is known in advance.
"""

import math

from anharmonic import (
    Bracket,
    ModifiedPTSpec,
    MorseSpec,
    PoschlTellerSpec,
    morse_located_zeros,
    morse_reference_levels,
    mpt_exact_levels,
    mpt_wronskian,
    pt_exact_levels,
    pt_wronskian,
    refine_root,
)


def located_zero(f, level, half_gap):
    lo, hi = level - half_gap, level + half_gap
    return refine_root(f, Bracket(lo, hi, f(lo), f(hi)), tol_e=1e-10).energy


def main():
    kappa, lam = 2.0, 3.0
    spec = PoschlTellerSpec(kappa=kappa, lam=lam)
    print(f"trigonometric well (kappa={kappa}, lam={lam}); "
          "levels at (kappa+lam+2n)^2:")
    for n, exact in enumerate(pt_exact_levels(spec, 3)):
        z = located_zero(lambda k2: pt_wronskian(spec, k2),
                         exact, 2 * (kappa + lam + 2 * n) + 1)
        print(f"  n={n}:  located {z:16.10f}   exact {exact:8.1f}   "
              f"diff {abs(z - exact):.1e}")

    lam = 3.5
    print(f"\nhyperbolic well (lam={lam}); levels at lam-1-2n while positive:")
    for mu, tag in ((0.0, "even"), (0.5, "odd ")):
        mspec = ModifiedPTSpec(lam=lam, parity_mu=mu)
        for exact in mpt_exact_levels(mspec):
            z = located_zero(lambda koa: mpt_wronskian(mspec, koa), exact, 0.4)
            print(f"  {tag}:  located {z:14.10f}   exact {exact:4.1f}   "
                  f"diff {abs(z - exact):.1e}")

    # boundary mapped deep (y0 ~ 30) so the closed-form levels of the
    # unbounded well are honest references for the truncated one
    mo = MorseSpec(alpha=math.log(30.05 / 6.0), gamma_over_alpha=3.0)
    print(f"\nMorse well with a hard wall (y0 = {mo.y0:.2f}); "
          "reference levels at gamma/alpha - n - 1/2:")
    zeros = morse_located_zeros(mo)
    for ref in morse_reference_levels(mo):
        z = min(zeros, key=lambda v: abs(v - ref))
        print(f"  located {z:13.10f}   reference {ref:4.1f}   "
              f"gap {abs(z - ref):.1e}")
    print("  (the gap is the real effect of the wall, not solver error; "
          "it grows fast as y0 shrinks)")


if __name__ == "__main__":
    main()
