"""Every b*a^m has constant term 1 for a = 1/x, b = 1/(1-x)."""

from mzlab.mzspace import SubspaceSpec, mz_falsify, radical_membership
from mzlab.rings import LocalSeries, TruncSeries

order = 40
a = LocalSeries.monomial((-1,), order)
b = LocalSeries.from_series(TruncSeries.geometric(0, 1, order))
M = SubspaceSpec.constant_free(1)   # series with zero constant term

# a^m = x^-m has no constant term for m >= 1, so a sits in the radical
print(radical_membership(a, M, 1, 30).human())

p = b
for m in range(1, 6):
    p = p * a
    print(m, p.constant_term())     # always 1

rep = mz_falsify(a, M, [b], 30)
print("violations:", len(rep.verdicts[0].witnesses))
