"""Walk through the inert closed formula for A~_beta(chi) on one character.

Run: python3 demos/inert_closed_form.py
"""
from fractions import Fraction

from hll.characters import characters_with_conductor, restrict_to_F
from hll.integrals import a_tilde_closed, gauss_A_tilde_bruteforce, m_threshold
from hll.localfield import LocalElement, LocalFieldDesc, QuadExtDesc

F = LocalFieldDesc(3)
E = QuadExtDesc(F, "inert", (-1,))  # E = Q_9, theta^2 = -1
chars = characters_with_conductor(E, 1, [(Fraction(1, 4), 0)])

for chi in chars[:3]:
    trivial_on_units = not any(restrict_to_F(chi).unit_images)
    print(chi, "| chi trivial on O_F^x:", trivial_on_units)
    for v in (-2, -1, 0, 1):
        beta = LocalElement.from_unit(F, v, (2,))
        M = m_threshold(chi, beta)
        bf = gauss_A_tilde_bruteforce(chi, beta)
        closed = a_tilde_closed(chi, beta, "inert")
        print(f"  v(beta) = {v:2d}  M = {M}  brute force = {bf}")
        print(f"  {'':13s}closed form = {closed}  equal: {bf == closed}")
