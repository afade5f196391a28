"""A small universe of finite groupoids and the isofibration tribe it carries.

Run with ``python demos/02_groupoid_universe.py``; it takes a few seconds.
"""

from tribekit import af_factorize, anodyne_decisions, path_object, verify_tribe
from tribekit.models.fingpd import fingpd_model, is_isofibration

m = fingpd_model()
G = {X.name: X for X in m.objects}
maps = list(m.morphisms())
print("objects:", ", ".join(G))
print(len(maps), "functors,", sum(map(m.is_fibration, maps)), "isofibrations")

# The interval has two isomorphic objects.  Including one endpoint is anodyne,
# yet it is no isofibration: the other endpoint cannot be reached from above.
i0 = m.hom(G["1"], G["I"])[0]
print("\n1 -> I anodyne by each procedure:", anodyne_decisions(m, i0))
print("1 -> I isofibration:", is_isofibration(i0))

# Factor a map that is neither: the point into two discrete points.
a, p = af_factorize(m, m.hom(G["1"], G["d2"])[0])
print("\n1 -> d2 factors through", a.tgt.name, "then", p.tgt.name)

# The path object of B(Z2) is the arrow groupoid; its unit picks out identities.
P = path_object(m, G["B(Z2)"])
print("path object of B(Z2):", P.obj.name)

print("\n" + verify_tribe(m).summary())
