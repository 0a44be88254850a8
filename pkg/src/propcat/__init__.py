"""
propcat: exact symbolic calculus of permutations, braids and vines, coloured operads,
internal-algebra-classifier categories, and pi0-codescent for finite crossed double
categories, with desk-scale verification by enumeration and oracle equivalence.
"""

__version__ = "0.1.0"
