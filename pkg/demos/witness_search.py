"""Search for a witness eta with A_eta(chi) nonzero modulo a prime above p,
then show the mu_p > 0 case where every A_beta vanishes modulo m.

Run: python3 demos/witness_search.py
"""
from fractions import Fraction

from hll.assembly import embedding_for, nonvanishing_witness_search, w_Cminus
from hll.characters import characters_with_conductor, self_dual_characters
from hll.localfield import LocalFieldDesc, QuadExtDesc

F = LocalFieldDesc(3)
E = QuadExtDesc(F, "inert", (-1,))
chi = [c for c in characters_with_conductor(E, 1, [(Fraction(1, 4), 0)]) if c.value_order == 8][0]
for p in (5, 7, 11):
    emb = embedding_for([chi], p, 3)
    r = nonvanishing_witness_search(chi, emb)
    print(f"p = {p:2d}: {r.status}, v(eta) = {r.valuation} (w(C-) = {w_Cminus(chi)}),"
          f" {r.searched} candidate(s), residue {emb.reduce(r.value)}")

for chi in self_dual_characters(E, 1):
    r = nonvanishing_witness_search(chi, embedding_for([chi], 5, 3))
    print("self-dual", chi, "->", r.status, "at v(eta) =", r.valuation)

F11 = LocalFieldDesc(11)
E11 = QuadExtDesc(F11, "inert", (2,))
chi5 = [c for c in characters_with_conductor(E11, 1, [(0, 0)], 5) if c.value_order == 5][0]
emb = embedding_for([chi5], 5, 11, allow_wild=True, psi_depth=1)
print("order-5 character, p = 5:", nonvanishing_witness_search(chi5, emb).message)
