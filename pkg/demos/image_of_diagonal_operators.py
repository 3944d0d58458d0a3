"""Images of diagonal operators on Q[x1^±1, x2^±1]."""

from mzlab.mzspace import DiagonalSpec, image_membership_diagonal
from mzlab.rings import LaurentPoly, laurent_vars

x1, x2 = laurent_vars(2)

# phi(x1) = 2*x1, phi(x2) = 3*x2; the image of 1 - phi
phi = DiagonalSpec("endo", (2, 3))
f = x1 * x2 ** -1
rep = image_membership_diagonal(phi, f)
print("f =", f, "member:", rep.member, "preimage:", rep.preimage)

# constants are the only obstruction
rep = image_membership_diagonal(phi, 1 + x1)
print("1 + x1 obstructions:", rep.obstructions)

# a derivation with independent weights behaves the same way
D = DiagonalSpec("derivation", ((1, 0), (0, 1)))
for g in (x1 + x2 ** -2, LaurentPoly.constant(5, 2)):
    r = image_membership_diagonal(D, g)
    print(g, "->", "member" if r.member else "non-member")

print(rep.machine())
