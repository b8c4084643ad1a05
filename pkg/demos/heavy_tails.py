"""Heavy-tailed switching times and the circular stable limit.

For alpha = 1.5 the rescaled angle approaches the circular stable law.  For
alpha = 0.6 the rescaled position X(nt)/n stays inside [-ct, ct], and the
ladder against the nested S(L(t)) target does not descend.
"""

from circtel import mittag_leffler, sample_inverse_subordinator
from circtel.heavy_tail import scaling_limit_check
import numpy as np

L = sample_inverse_subordinator(0.7, 1.0, 200_000, seed=5)
print(f"E exp(-L(1)) = {np.exp(-L).mean():.4f}, E_0.7(-1) = {mittag_leffler(0.7, -1.0):.4f}")

for alpha in (1.5, 0.6):
    rows = scaling_limit_check(alpha, [100, 1000, 10_000], 1.0, 20_000, seed=6)
    print(f"alpha = {alpha}: TV ladder " + ", ".join(f"{r['tv']:.3f}" for r in rows))
