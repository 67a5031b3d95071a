"""
Exact symbol algebra: rationals, Weyl polynomials and Moyal brackets.
"""
