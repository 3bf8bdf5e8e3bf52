"""
Two-term Weyl law on balls
==========================

Count eigenvalues up to sigma = m + 1/2 and compare with
a_0/(n-1)! sigma^{n-1} + a_1/(n-2)! sigma^{n-2}.
"""

from steklov_heat.balls import weyl_residual

for sigma in (0.5, 10.5, 100.5, 1000.5):
    p = weyl_residual(3, sigma)
    print(f"n=3 sigma={sigma:7.1f} count={p.count:8d} prediction={p.prediction:12.2f} residual={p.residual:+.4f}")

# in dimension 4 the residual grows, but slower than sigma^2
for sigma in (100.5, 200.5, 400.5, 800.5):
    p = weyl_residual(4, sigma)
    print(f"n=4 sigma={sigma:7.1f} residual={p.residual:10.3f} residual/sigma^2={p.scaled_residual:.5f}")
