"""Recovering a cumulative count from its Dirichlet series by a truncated Perron integral.

Run: python notebooks/05_perron.py   (about 15 s, mostly enumerating heights up to M)
"""
import warnings

from ellip import omega_cumulative, sphere
from ellip.analysis import perron_truncated

S2 = sphere(2)
T, beta, M = 20.5, 2.5, 2000
exact = omega_cumulative(S2, 20)[-1].cumulative
with warnings.catch_warnings():
    warnings.simplefilter("ignore", RuntimeWarning)
    for H in (100, 200, 400, 800, 1600):
        res = perron_truncated(S2, T, beta, H, M)
        print(f"H={H:5d}: Re = {res.real:9.3f}  error {res.real - exact:+8.3f}  Im = {res.imag:.1e}")
print("exact count", exact, "(the error decays like 1/H in envelope but oscillates)")
