"""The same space split two different ways.

2x4 has entangled splittings with three parts (3,3,2) and with four parts
(2,2,2,2). The feasibility check lists the candidate profiles; both fixtures
show the candidates are reached.
"""
# %%
from entsplit import SearchConfig, TensorSpace, feasibility, fixture, verify_entangled_splitting, verify_splitting

cfg = SearchConfig()
feas = feasibility(TensorSpace((2, 4)))
print("max entangled dimension:", feas.max_entangled_dim)
print("candidate profiles:", feas.achievable_profiles)
print("cardinality between", feas.cardinality_min, "and", feas.cardinality_max, "| degeneracy", feas.degeneracy_degree)

# %%
for fid in ("EX4_2x4_MIN", "EX3_2x4_MAX"):
    sp = fixture(fid)
    rep = verify_entangled_splitting(sp, cfg)
    overlaps = [round(v.max_overlap, 4) for v in rep.verdicts]
    print(f"{fid}: profile {verify_splitting(sp).profile}, entangled {rep.overall}, overlaps {overlaps}")

# %% 3x3 has three candidate profiles
print(feasibility(TensorSpace((3, 3))).achievable_profiles)
