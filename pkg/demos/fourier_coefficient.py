"""Assemble a Fourier coefficient from a three-place config and split it into
C_beta times the spherical product.

Run: python3 demos/fourier_coefficient.py
"""
import os

from hll.assembly import c_beta_constant, fourier_coefficient, product, spherical_product
from hll.config import load

here = os.path.dirname(os.path.abspath(__file__))
lc = load(os.path.join(here, "..", "tests", "data", "three_places.json"))
cfg, beta = lc.semilocal(), lc.beta_datum()

res = fourier_coefficient(cfg, beta)
for label, kind, value in res.place_trace:
    print(f"{label:4s} {kind:16s} W = {value}")
print("a_beta =", res.value)
print("residue mod m =", cfg.emb.reduce(res.value))

decomposed = product([c_beta_constant(cfg, beta), spherical_product(cfg, beta)], cfg.ell_l)
print("C_beta * spherical product equals a_beta:", decomposed == res.value)
