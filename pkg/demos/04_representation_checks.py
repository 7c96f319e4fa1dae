# %% [markdown]
# # Does a rewrite system represent the theory?
#
# Five conditions are checked exhaustively: every state has a term, terms
# stay well formed under rewriting, rearrangements preserve the state,
# action rules do what an action does, and every action has a rule.

# %%
from sitrewrite import RuleSet, check_invertible, check_representation, make_domain

for name, n, kw in [("switches", 3, {}), ("hanoi", 3, {}), ("river", 3, {}),
                    ("blocks", 3, {"positions": 2})]:
    theory, enc = make_domain(name, n, **kw)
    report = check_representation(theory, enc)
    ok, _, steps = check_invertible(enc)
    print(f"{enc.name:16} {'PASS' if report.passed else 'FAIL'}  invertible={ok} ({steps} steps)")

# %% [markdown]
# Delete one rule and completeness breaks, with a concrete witness.

# %%
theory, enc = make_domain("hanoi", 3)
broken = enc.with_rules(RuleSet(enc.rules.rules[1:], enc.rules.equations))
print("\n".join(check_representation(theory, broken).lines()))
