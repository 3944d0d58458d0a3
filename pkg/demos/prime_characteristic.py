"""Over F_p the picture changes: d/dt kills t^p and t^(p-1) escapes the image."""

from mzlab.mzspace import charp_telescope, image_membership_bounded
from mzlab.operators import Derivation, EDerivation, Endomorphism
from mzlab.rings import GF, laurent_vars

p = 5
F = GF(p)
(t,) = laurent_vars(1, F)

D = Derivation.partial(0, 1, F)
print("D(t^p) =", D(t ** p))
rep = image_membership_bounded(D, t ** (p - 1), 3 * p)
print(rep.human())

# shift map t -> t+1; 1 - phi hits 1 but not t^(p-1)
delta = EDerivation(Endomorphism((t + 1,)))
print("delta(-t) =", delta(-t))
rep = image_membership_bounded(delta, t ** (p - 1), 3 * p)
print("member:", rep.member, "certificate:", rep.certificate)

# the point-sum obstruction behind it
for q in (3, 5, 7):
    print(q, charp_telescope(q))
