# %% [markdown]
# # How completion cost grows with Hanoi size
#
# Count rewrite operations during completion for 2 to 6 disks and fit a
# low-degree polynomial.

# %%
from sitrewrite import complete, make_domain
from sitrewrite.completion import cost_trend

ns = [2, 3, 4, 5, 6]
ops = []
for n in ns:
    _, enc = make_domain("hanoi", n)
    res = complete(enc.rules.rules, enc.precedence)
    ops.append(res.stats["rewrite_ops"])
    print(f"n={n}: {len(enc.rules.rules):4} input rules, {len(res.rules)} completed rules, "
          f"{ops[-1]} rewrite operations")

fit = cost_trend(ns, ops, max_degree=2)
print("quadratic fit coefficients:", [round(c, 3) for c in fit["coefficients"]], "R^2:", fit["r2"])
