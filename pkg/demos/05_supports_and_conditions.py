# %% [markdown]
# # Action supports and when subterm rules exist
#
# A subterm is an action support when rewriting it alone realizes some
# action in every context where it occurs.  Slot languages that are
# limited and expressive for a set of fluents guarantee such rewrites.

# %%
from sitrewrite import (check_f_expressive, check_f_limited, is_action_support, make_domain,
                        parse_term)
from sitrewrite.synthesis import term_index, sufficient_condition_check, necessary_condition_check

theory, enc = make_domain("switches", 3)
res = is_action_support(theory, enc, parse_term("off"))
print("off is a support:", res.ok)
for cert in res.certificates[:3]:
    print("  ", cert)

# %% [markdown]
# In Hanoi, moving a disk depends on the disks above it, so a bare peg
# number is not a support.

# %%
theory, enc = make_domain("hanoi", 3)
res = is_action_support(theory, enc, parse_term("1"))
term, pos = res.counterexample
print("1 is a support:", res.ok, "| fails at position", pos, "of", term)

# %% [markdown]
# Inspect one slot: the first argument of a switches term.

# %%
theory, enc = make_domain("switches", 3)
idx = term_index(enc)
ctx = next(c for c in idx.contexts() if str(c).startswith("f([]"))
lang = idx.language(ctx)
f1 = {"switch1"}
print("context", ctx, "language", sorted(map(str, lang)))
print("limited:", bool(check_f_limited(enc, lang, f1, [ctx])),
      "expressive:", bool(check_f_expressive(enc, lang, f1, [ctx])))

# %% [markdown]
# The sufficient and necessary conditions, checked exhaustively.

# %%
for name, n, kw in [("switches", 3, {}), ("switches", 3, {"variant": "indicator"}),
                    ("hanoi", 3, {})]:
    theory, enc = make_domain(name, n, **kw)
    t6, t7 = sufficient_condition_check(theory, enc), necessary_condition_check(theory, enc)
    print(f"{enc.name:18} sufficient: {t6['ok']} ({t6['premises']} premises)  "
          f"necessary: {t7['ok']} ({t7['instances']} instances)")
