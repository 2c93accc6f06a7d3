"""
structest: single-sample tests of structure against mean-field nulls.

Packages:
- graphs: regular interaction graphs, spin and graph samples, raw statistics
- moments: exact conditional moments on Hamming spheres
- samplers: Curie-Weiss, d-regular Ising, G(n, p) and ERGM samplers
- canonical: the canonical tests, bands and threshold rule
- oracle: exact small-instance ground truth
- harness: experiment runner and reports
"""

__version__ = '0.1.0'
