"""Homotopy classes, truncation and contractibility in the groupoid universe."""

from tribekit import homotopy_classes, is_homotopy_equivalence, is_n_truncated, tribe_morphism_report
from tribekit import restricted_base_change
from tribekit.models.fingpd import FinGpdModel, fingpd_model
from tribekit.models.universe import UniverseSpec, generate_universe
from tribekit.pi import is_contr_witness

m = fingpd_model()
G = {X.name: X for X in m.objects}

# Maps B(Z2) -> B(Z2) up to homotopy.  Z2 is abelian, so conjugation
# cannot identify its two endomorphisms.
print("[B(Z2), B(Z2)] has", len(homotopy_classes(m, G["B(Z2)"], G["B(Z2)"])), "classes")

print("\nlowest truncation level of each object:")
for name, A in G.items():
    t = m.to_terminal(A)
    level = next(n for n in (-2, -1, 0, 1) if is_n_truncated(m, t, n))
    K, _ = is_contr_witness(m, A)
    print(f"  {name:10} {level:>3}   isContr inhabited: {bool(m.hom(m.terminal, K))}")

print("\nI -> 1 is a homotopy equivalence:", is_homotopy_equivalence(m, m.to_terminal(G["I"])))

# Base change along an endpoint of the interval, on a small universe that
# contains enough products with I for every slice to be represented.
shapes = ("0", "1", "I", "d2", "B(Z2)", "I*d2", "I*B(Z2)", "I*I")
small = FinGpdModel(generate_universe(UniverseSpec(seeds=shapes, closure=(), max_groupoid_objects=4,
                                                   max_groupoid_arrows=16)).objects)
S = {X.name: X for X in small.objects}
base = [S[n] for n in shapes[:5]]
F = restricted_base_change(small, small.hom(S["1"], S["I"])[0], None, base)
objs = [X for X in F.source.objects if X.total.name != "C4"]
print("\nbase change along 1 -> I:")
print(tribe_morphism_report(F, slice_objects=objs).summary())
