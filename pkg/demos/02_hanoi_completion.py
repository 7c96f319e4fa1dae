# %% [markdown]
# # Towers of Hanoi by completion
#
# A state is the nested term `f(peg_of_largest, f(..., bot))`, so the
# innermost `f` holds the smallest disk.  Each legal move is an equation
# between two ground terms.  Ordering pegs as 3 > 2 > 1 orients everything
# towards "all disks on peg 1".

# %%
from sitrewrite import bfs_plan, complete, join, make_domain, parse_term, plan

theory, enc = make_domain("hanoi", 3)
result = complete(enc.rules.rules, enc.precedence)
print("status:", result.status)
for rule in result.rules:
    print(" ", rule.lhs, "->", rule.rhs)
print(result.stats)

# %% [markdown]
# Two configurations are connected exactly when their normal forms meet.

# %%
trace = join(result, enc.precedence, parse_term("f(2,f(2,f(2,bot)))"),
             parse_term("f(3,f(3,f(3,bot)))"))
print("meet:", trace.meet)
print("left leg:", len(trace.left), "steps; right leg:", len(trace.right), "steps")

# %% [markdown]
# The raw proof goes through peg 1 and back, so the extracted plan is long.
# Optimization removes cycles and shortcuts it to the optimal 7 moves.

# %%
s = theory.assignment(disk1=2, disk2=2, disk3=2)
g = theory.assignment(disk1=3, disk2=3, disk3=3)
raw = plan(enc, s, g, optimize=False)
best = plan(enc, s, g)
print("unoptimized:", len(raw), "optimized:", len(best),
      "breadth-first:", len(bfs_plan(theory, s, g)))
