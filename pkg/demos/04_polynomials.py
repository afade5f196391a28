"""Polynomial spans I <- E -> B -> J acting on families of finite sets."""

import json
from pathlib import Path

from tribekit.models.io import load_span
from tribekit.pi import Family, compose_polynomials, eval_polynomial, verify_composition

DATA = Path(__file__).resolve().parent / "data"
P = load_span((DATA / "P.json").read_text())
Q = load_span((DATA / "Q.json").read_text())
labels = json.loads((DATA / "family.json").read_text())
X = Family.of(range(len(labels)), dict(enumerate(labels)))

PX = eval_polynomial(P, X)
print("|X| =", len(X), "  P(X) profile over J:", PX.profile(P.J))

# An element of P(X) over b is a choice of an X-element for every e above b.
for elem, j in list(PX.index.items())[:4]:
    print("  ", elem, "->", j)

C = compose_polynomials(P, Q)
print("\nQ∘P has", len(C.E), "positions over", len(C.B), "shapes")
print("Q(P(X)) profile:", eval_polynomial(Q, PX).profile(Q.J))
print("(Q∘P)(X) profile:", eval_polynomial(C, X).profile(Q.J))
print(verify_composition(P, Q, C, max_size=4).summary())
