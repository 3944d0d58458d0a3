"""Jordan-Chevalley splitting, cyclotomic period certificates, normalization."""

from mzlab.jordan import char_poly, eventual_period_certificate, jc_decompose, nilpotence_index
from mzlab.locfin import detect_periodicity, normalize_endomorphism
from mzlab.operators import Endomorphism
from mzlab.report import fmt_value
from mzlab.rings import Matrix, laurent_vars

C = Matrix([[0, 0, -1], [1, 0, 1], [0, 1, 1]])
print("char poly:", char_poly(C))
jc = jc_decompose(C)
print("S =", fmt_value(jc.S.rows))
print("N =", fmt_value(jc.N.rows), "index", nilpotence_index(jc.N))

# A^(N+d) = A^N
for A in (Matrix([[-1]]), Matrix([[0, 1], [0, 0]]), Matrix([[0, 1], [-1, 0]])):
    cert = eventual_period_certificate(A)
    print(A.rows, "N =", cert.N, "d =", cert.d)
print(eventual_period_certificate(Matrix([[2]])).reason)

x1, x2 = laurent_vars(2)
swap = Endomorphism((x2, x1))
c = detect_periodicity(swap, 10)
print("swap: phi^%d = phi^%d" % (c.i, c.j))

# eigen-coordinates y with phi(y_k) = c_k y_k
norm = normalize_endomorphism(swap, 8)
print(norm.human())
