"""Why two qubits admit no entangled splitting.

In 2x2 the largest entangled subspace is one-dimensional, so any plane
already holds a product vector. The Bell-pair planes below are a concrete
case: each one is caught by the exact certificate, and the measurement
leaves |01> untouched.
"""
# %%
from entsplit import (
    ProjectiveMeasurement,
    SearchConfig,
    StateSet,
    TensorSpace,
    certify_property2,
    check_property1,
    detect_product,
    feasibility,
    fixture,
    ket_from_terms,
    measure,
)

cfg = SearchConfig()
print(feasibility(TensorSpace((2, 2)), (2, 2)).violations)

# %%
sp = fixture("EX1_2x2")
for label, S in zip(sp.labels, sp.subspaces):
    v = detect_product(S, None, cfg)
    num = detect_product(S, None, cfg, use_certificate=False)
    print(f"{label}: certificate says {v.kind.value}, optimizer says {num.kind.value} ({num.max_overlap:.12f})")

# %% a product input that comes out product
meas = ProjectiveMeasurement.from_splitting(sp)
rec = measure(meas, ket_from_terms(sp.space, {"01": 1}), outcome=0)
print(f"|01> -> outcome 0 with p = {rec.probability:.3f}, post-state second Schmidt = {rec.min_entanglement:.2e}")

# %% so both properties fail
print("unidentifiability:", check_property1(StateSet.from_splitting(sp), cfg).holds)
print("entangling measurement:", certify_property2(meas, cfg, samples=0).holds)
