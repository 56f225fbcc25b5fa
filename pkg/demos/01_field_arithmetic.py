"""
Exponent arithmetic in GF(2^13)
===============================

Field elements are stored as exponents of a primitive element alpha, with
-1 standing for zero. Addition goes through a Zech table.
"""

import numpy as np

from qsteiner.ffield import ZERO, PrimePolynomial, build_field, element_order

poly = PrimePolynomial.parse("x^13+x^12+x^10+x^9+1", 2)
print("polynomial", poly, "primitive:", poly.is_primitive())

F = build_field(2, 13, poly)
print("M =", F.M)

# alpha^a + alpha^b as an exponent, and the same sum done on coordinate vectors
a, b = 5, 1249
s = F.add(a, b)
print(f"alpha^{a} + alpha^{b} = alpha^{s}")
assert F.to_codes(s) == F.to_codes(a) ^ F.to_codes(b)

# characteristic 2: x + x = 0
assert F.add(a, a) == ZERO

# the Frobenius map x -> x^2 multiplies exponents by 2
print("frobenius(alpha^4096) = alpha^%d" % F.frobenius(4096))

# every nonzero element is a power of alpha, so alpha has order M
print("order of alpha:", element_order(F, 1))

# a whole row of the addition table at once
row = F.add_many(0, np.arange(8))
print("1 + alpha^i for i < 8:", row.tolist())
