"""A tour of F_49: roots of unity, the three families at m = 4, census, inverses.

    python3 demos/walkthrough_f49.py
"""

# %% the field and the roots of unity
from fq2perm.construct import (base_binomials, complete_from_base_pp, complete_rank1,
                               complete_rank2_kernel_aligned)
from fq2perm.fields import build_field, deltas
from fq2perm.inverse import invert
from fq2perm.verify import census_pair, is_permutation

F = build_field(7)
print(F)
print("delta_i:", [d for d in deltas(F)])

# %% s^4 + L: kernel-aligned L plus the lift of x^4 + gamma x
aligned = list(complete_rank2_kernel_aligned(F, 0, 4))
print("binomials x^4 + gamma x of F_7:", [b.gamma for b in base_binomials(F, 4)])
lifted = list(complete_from_base_pp(F, 0, 4))
print("kernel-aligned:", len(aligned), " lifted:", len(lifted), " total:",
      len(aligned) + len(lifted))

# %% the exhaustive census agrees, and every hit is attributed
row = census_pair(F, 0, 4)[2]
print("census rank 2:", row.count, row.family_breakdown, "unexplained:", row.unexplained)

# %% rank-one L needs gcd(m, q - 1) = 1, so m = 5
r1 = list(complete_rank1(F, 0, 5))
print("rank 1 at m=5:", len(r1), all(is_permutation(F, f) for f in r1))

# %% closed-form inverses
for f in (aligned[17], lifted[100], r1[50]):
    cert = invert(F, f)
    print(f)
    print("  ->", cert.h, cert.method, "verified" if cert.verified else "FAILED")
