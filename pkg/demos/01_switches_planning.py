# %% [markdown]
# # Planning with light switches
#
# Each switch is one argument of `f`.  Turning a switch on or off is a
# single subterm rule, so two rules cover every switch at once.

# %%
from sitrewrite import bfs_plan, make_domain, plan, validate_plan

theory, enc = make_domain("switches", 3)
for rule in enc.rules.rules:
    print(rule.label, ":", rule.lhs, "->", rule.rhs)

# %% [markdown]
# States are fluent assignments.  `sigma` maps a term to the state it encodes.

# %%
start = enc.sigma(enc.start)
goal = enc.sigma(enc.goal)
print("start", dict(start))
print("goal ", dict(goal))

# %% [markdown]
# The planner completes the rules, joins the two terms and reads the
# actions off the rewrite proof.  Breadth-first search over states gives
# the reference answer.

# %%
p = plan(enc, start, goal)
print("\n".join(p.lines()))
assert validate_plan(theory, start, p) == goal
print("breadth-first length:", len(bfs_plan(theory, start, goal)))

# %% [markdown]
# The witness is the rewrite proof itself, one step per line.

# %%
for step in p.witness:
    print(step)
