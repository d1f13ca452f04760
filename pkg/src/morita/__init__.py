"""
morita computes Morita-dual skeletal data for unitary fusion categories.

Given the F-symbols of a fusion category C and of a C-module category M,
it builds the module annular algebra Ann(C, M) as a weak Hopf algebra,
decomposes it into irreducible *-representations, and reads off the
remaining associators (F2, F3, F4) of the invertible (C, D)-bimodule.
It can also decide whether a given bimodule is invertible.
"""

__version__ = '0.3.1'
__author__ = 'morita developers'
__license__ = 'GPL'
