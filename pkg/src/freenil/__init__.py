"""Exact computational algebra for generalized free products.

Word combinatorics over finite alphabets, twisted Laurent polynomial
arithmetic with syzygy reduction, normal forms for amalgamated products
and HNN extensions, and block-typed nilpotent endomorphism objects with
their transport functors.  Everything is exact (arbitrary precision
integers / rationals); nothing here is numerical.
"""

__version__ = "0.1.0"
