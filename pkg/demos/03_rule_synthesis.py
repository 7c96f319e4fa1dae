# %% [markdown]
# # Building rewrite systems from a finite theory
#
# Three levels, from most to least literal:
#
# * level 0 writes one rule per state transition, over whole terms;
# * level 1 rewrites the smallest subterm that determines the action;
# * level 2 generalizes families of level-0 rules with variables.

# %%
from sitrewrite import build_r0, build_r1, build_r2, check_representation, make_domain

theory, enc = make_domain("switches", 3)
r0 = build_r0(theory, enc)
r1 = build_r1(theory, enc)
r2 = build_r2(theory, enc, r0)
print("level 0:", len(r0.rules), "rules")
print("level 1:", sorted(f"{r.lhs} -> {r.rhs}" for r in r1.rules))
print("level 2:")
for r in r2.rules:
    print("  ", r.lhs, "->", r.rhs)

# %% [markdown]
# Each synthesized system still represents the theory.

# %%
for name, rules in [("level 0", r0), ("level 1", r1), ("level 2", r2)]:
    print(name, check_representation(theory, enc.with_rules(rules)).passed)

# %% [markdown]
# With the indicator fluent `z` (true iff every switch is on), flipping a
# switch may also flip `z`, so no small subterm suffices and level 1 falls
# back to whole terms.

# %%
theory, enc = make_domain("switches", 3, variant="indicator")
r1 = build_r1(theory, enc)
print("indicator, level 1:", len(r1.rules), "rules, e.g.", r1.rules[0].lhs, "->", r1.rules[0].rhs)
