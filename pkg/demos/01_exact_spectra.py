"""Exact spectra of circular shifts and banded Toeplitz matrices.

The symmetrised circular shift at lag tau has eigenvalues cos(2 pi tau t/n)
exactly, which the Chebyshev recurrence links back to the lag-1 spectrum.
The banded Toeplitz analogue shares the same limiting (arcsine) law, and
its spectral moments converge to arcsine moments.
"""

import numpy as np

from hdwn import (
    arcsine_integral,
    chebyshev_eval,
    shift_matrix,
    symmetrized_shift_spectrum,
    szego_moment,
)

print("=== symmetrised shift spectra vs dense eigensolver ===")
for n, tau in [(8, 1), (12, 3), (64, 2)]:
    D = shift_matrix(n, tau)
    eig = np.sort(np.linalg.eigvalsh(0.5 * (D + D.T)))
    exact = symmetrized_shift_spectrum(n, tau)
    print(f"n={n:3d} tau={tau}: max |eig - cos grid| = {np.abs(eig - exact).max():.2e}")

print()
print("=== Chebyshev link: lag-tau spectrum = T_tau(lag-1 spectrum) ===")
n = 16
base = symmetrized_shift_spectrum(n, 1)
for tau in (2, 3, 5):
    composed = np.sort(chebyshev_eval(tau, base))
    direct = symmetrized_shift_spectrum(n, tau)
    print(f"tau={tau}: max deviation {np.abs(composed - direct).max():.2e}")

print()
print("=== Toeplitz spectral moments -> arcsine moments ===")
for s in (2, 4, 6):
    limit = arcsine_integral(lambda t: t**s)
    row = "  ".join(
        f"n={n}: {szego_moment(n, 1, s):+.5f}" for n in (64, 256, 1024)
    )
    print(f"s={s}: {row}   limit {limit:+.5f}")

print()
print("=== arcsine orthogonality of Chebyshev polynomials ===")
for r, s in [(1, 1), (1, 2), (2, 2), (3, 7)]:
    prod = arcsine_integral(lambda t: chebyshev_eval(r, t) * chebyshev_eval(s, t))
    sq = arcsine_integral(lambda t: chebyshev_eval(r, t) ** 2 * chebyshev_eval(s, t) ** 2)
    print(f"r={r} s={s}:  int TrTs dH = {prod:+.12f}   int Tr^2Ts^2 dH = {sq:.12f}")
