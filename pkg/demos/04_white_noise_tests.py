"""Running the three white-noise tests on simulated data.

A null sample (Gaussian white noise) and an alternative (spherical AR(1)
with a = 0.1) at p = 100, n = 300; each test prints its report block.
"""

from hdwn import (
    ScenarioSpec,
    generate,
    john_simes_test,
    multi_lag_test,
    permutation_test,
)

q, alpha = 2, 0.05

for label, spec in [
    ("white noise (null)", ScenarioSpec("gaussian_wn", 100, 300, seed=1)),
    ("AR(1), a = 0.1 (alternative)", ScenarioSpec("gaussian_ar1", 100, 300, a=0.1, seed=1)),
]:
    x = generate(spec)
    print("=" * 60)
    print(f"sample: {label}, p={spec.p}, n={spec.n}, q={q}")
    print("-" * 60)
    print(multi_lag_test(x, q, alpha, nu4=3.0).to_text())
    print("-" * 60)
    print(john_simes_test(x, q, alpha, nu4=3.0).to_text())
    print("-" * 60)
    print(permutation_test(x, q, alpha, B=200, seed=7).to_text())
    print()

print("note: the fourth moment can also be estimated from the data")
x = generate(ScenarioSpec("gamma_wn", 100, 300, seed=2))
report = multi_lag_test(x, q, alpha, nu4="auto")
print(f"gamma white noise, estimated nu4 = {report.params['nu4']:.3f} "
      f"(known value 4.5), p-value {report.p_value:.3f}")
