"""CLT mean/covariance functionals: contour engine vs closed forms.

The covariance of two linear spectral statistics is a double contour
integral of a solver-defined kernel.  For the lag statistics the answer has
a closed form; the contour engine reproduces it to quadrature precision,
and also covers populations with no closed form.
"""

from hdwn import (
    JointSpectralDistribution,
    MomentProfile,
    SpectralDistribution,
    clt_cov,
    clt_mean,
    lag_cov_closed_form,
)

gauss = MomentProfile.gaussian()

print("=== lag-statistic covariances: contour engine vs closed form ===")
print(" (r,s)   c    beta   contour          closed form      |diff|")
f2 = [0.0, 0.0, 1.0]  # f(x) = x^2
for c in (0.5, 1.0):
    for beta in (0.0, 1.5):
        mp = MomentProfile(nu4=3.0 + beta, alpha_x=1.0, beta_x=beta)
        for r, s in [(1, 1), (1, 2), (2, 2)]:
            pair = JointSpectralDistribution.chebyshev_pair(r, s)
            num = clt_cov(f2, f2, c, pair, mp, companion_side=True)
            ref = lag_cov_closed_form(r, s, c, beta)
            print(f" ({r},{s})  {c:4.2f}  {beta:4.2f}  {num:15.10f}  "
                  f"{ref:15.10f}  {abs(num - ref):.1e}")

print()
print("=== cross-covariance of statistics of two dependent matrices ===")
# pair (identity, T): for f(x) = x the limit is 2*c*mean(H)
for H in (SpectralDistribution.point_mass(1.0),
          SpectralDistribution.discrete({0.5: 0.5, 1.5: 0.5})):
    pair = JointSpectralDistribution.paired_with_point(1.0, H)
    val = clt_cov([0.0, 1.0], [0.0, 1.0], 0.5, pair, gauss)
    print(f"H = {H.to_text():25s} -> {val:.10f}   (2 c mean(H) = {2 * 0.5 * H.mean()})")

print()
print("=== CLT means ===")
delta1 = SpectralDistribution.point_mass(1.0)
for c in (0.25, 1.0, 2.0):
    m2 = clt_mean([0.0, 0.0, 1.0], c, delta1, gauss)
    m1 = clt_mean([0.0, 1.0], c, delta1, gauss)
    print(f"c={c:4.2f}:  mean for f=x^2: {m2:+.10f} (limit {c})   f=x: {m1:+.1e}")
circ = MomentProfile(nu4=2.0, alpha_x=0.0, beta_x=0.0)
print("circular-moment profile (alpha=beta=0), f=x^2:",
      clt_mean([0.0, 0.0, 1.0], 1.0, delta1, circ))
