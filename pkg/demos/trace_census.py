"""Census of every s-polynomial over the trace map at q = 7.

There are (7^5 - 1)/6 = 2801 monic g of degree 2..6 with F_7 coefficients and
no linear or constant term.  Each gives q(q-1)^2 rank-2 PPs, plus q^2(q-1)
more for every gamma making g(x) + gamma x a PP of F_7.
"""

from collections import Counter

from fq2perm.fields import build_field
from fq2perm.verify import distribution, trace_census, trace_rank2_oracle, trace_spolys

F = build_field(7)
counts = trace_census(F)
rank2 = [a for a, _ in counts]
print("s-polynomials:", len(counts))
print("rank-2 counts:", distribution(rank2), "total", sum(rank2))
print("rank-1 total:", sum(b for _, b in counts))

# which degrees produce the extra PPs
extra = Counter(g.m for g, c in zip(trace_spolys(F), rank2) if c > 252)
print("degrees with extra PPs:", dict(extra))

# the gamma count predicts every rank-2 number
assert all(c == trace_rank2_oracle(F, g) for g, c in zip(trace_spolys(F), rank2))
print("gamma formula holds for all", len(rank2))
