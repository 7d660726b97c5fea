"""quarticlab: exact-arithmetic laboratory for quartic polynomials with
cyclic or dihedral Galois group - cofactor algebra, incomplete norm forms,
mod-p solution counts, integer lattices, sieve-constant systems, and
desk-scale counting experiments.
"""

__version__ = "0.1.0"
