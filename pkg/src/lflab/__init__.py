"""Exact computational laboratory for twisted L-functions over F_q(t).

Subpackages:

* algebra       exact finite fields, polynomials, cyclotomic coefficients
* places        closed points of the projective line, residue symbols
* covers        point-count oracle for superelliptic covers y^d = f(x)
* reps          Galois-representation descriptors and local data
* lfunc         L-polynomials, functional equations, forced zeroes
* family        twist families, densities, equidistribution statistics
* applications  elliptic-curve order computations and twist searches
* cli           batch experiment runner
"""

__version__ = "0.1.0"
