"""Two independent routes to zeta(s) for 0 < s < 1.

The accelerated alternating series gives machine precision directly.  The
integral route goes through w_k(s), the accumulated gap between t^-s and
floor(t)^-s, whose limit recovers -zeta(s); an Euler-Maclaurin correction
turns the slow O(k^-s) convergence into O(k^-s-3).
"""

from fractal_strings import w_k, zeta, zeta_from_wk

for s in (0.3, 0.5, 0.7):
    print("s = %.1f   zeta = %+.12f" % (s, zeta(s)))
    for k in (100, 10 ** 4, 10 ** 6):
        plain = -(w_k(s, k) + 1.0 / (1.0 - s))
        accel = zeta_from_wk(s, k)
        print("  k=%-8d  plain %+.10f (err %.1e)   corrected %+.10f (err %.1e)"
              % (k, plain, abs(plain - zeta(s)), accel, abs(accel - zeta(s))))
    print()
