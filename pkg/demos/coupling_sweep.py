"""Trace the four lowest x^2-coupling curves of V(x) = g*x^2 + x^10.

Sweeping g from stiff negative (double well) through zero to stiff
positive shows the even/odd pair collapse on the left and the clean
interleaving on the right. The CLI does the same job in one line:

    spectra sweep --N 5 --g-from -8 --g-to 8 --g-step 1 --levels 4
"""

from anharmonic import lowest_eigenvalues


def main():
    N, levels = 5, 4
    print(f"lowest {levels} levels of g*x^2 + x^{2 * N}\n")
    print("      g" + "".join(f"  {'E_' + str(j):>12}" for j in range(levels))
          + "   gap E_1-E_0")
    for i in range(17):
        g = -8.0 + i
        evs = lowest_eigenvalues(N, g, levels).eigenvalues
        cells = "".join(f"  {ev.energy:12.7f}" for ev in evs)
        print(f"  {g:5.1f}{cells}   {evs[1].energy - evs[0].energy:11.7f}")

    print("\nthe E_1-E_0 gap shrinking on the left is tunneling splitting: "
          "the two wells decouple and even/odd pairs merge")


if __name__ == "__main__":
    main()
