"""Finite sets as a π-tribe: every map is a fibration, products over fibers are sections.

Run with ``python demos/01_finite_sets.py``.
"""

from tribekit import internal_product, verify_clan, verify_law, verify_pi_tribe
from tribekit.models.finset import FinSetModel, finmap

m = FinSetModel(4)
print("FinSet(4) objects:", list(m.objects))
print(verify_clan(m).summary())

# A pullback is the set of matching pairs.
f = finmap(3, 2, [0, 1, 1])
g = finmap(2, 2, [1, 1])
sq = m.pullback(f, g)
print("\npullback of", m.name(f), "and", m.name(g), "has", sq.apex, "points")

# Π along f: a point over b is a section of the fibers of e over f^{-1}(b).
e = finmap(4, 3, [0, 1, 1, 2])
P = internal_product(m, e, f)
print("Π_f(e) lives over", m.name(P.structure))

# Distributivity on fibers of sizes (2; 1, 3): one choice times three choices.
inst = {"x": m.identity(4), "f": finmap(4, 2, [0, 1, 1, 1]), "g": finmap(2, 1, [0, 0])}
print("\n" + verify_law(m, "distributivity", inst).summary())

print("\nπ-tribe axioms on FinSet(3):")
print(verify_pi_tribe(FinSetModel(3)).summary())
