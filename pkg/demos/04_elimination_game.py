"""Ruling states out instead of picking one.

Measuring the 2x3 states in the computational basis never identifies a
state, but every outcome excludes one of the three. In 3x3 some outcomes
exclude nothing at all.
"""
# %%
from entsplit import StateSet, TensorSpace, computational_basis, elimination_table, fixture, local_basis

tab = elimination_table(StateSet.from_splitting(fixture("EX2_2x3")), computational_basis(TensorSpace((2, 3))))
for outcome, gone in tab.as_dict().items():
    print(f"{outcome}: rules out {['rho_%d' % (i + 1) for i in gone]}")

# %%
states = StateSet.from_splitting(fixture("EX5_3x3"))
tab = elimination_table(states, computational_basis(TensorSpace((3, 3))))
print("dead outcomes in 3x3:", tab.dead_outcomes)

# rotating the local bases changes which outcomes are informative
for seed in range(3):
    t = elimination_table(states, local_basis(states.space, seed))
    print(f"random local basis {seed}: {len(t.dead_outcomes)} of {len(t.outcomes)} outcomes dead")
