# %% [markdown]
# # Domain files and the command line
#
# Built-in domains can be written to a plain-text file, edited and read
# back.  The `sitrewrite` command works on such files.

# %%
import os
import tempfile

from sitrewrite import emit, make_domain, parse_domain_file
from sitrewrite.cli import run

text = emit(*make_domain("switches", 3))
print(text)
df = parse_domain_file(text)
assert emit(df.theory, df.encoding) == text

# %%
path = os.path.join(tempfile.mkdtemp(), "hanoi3.dom")
print(run(["domain", "hanoi", "--n", "3", "--emit", path]))
for argv in (["check", path], ["oracle", path], ["plan", path], ["synth", path, "--level", "1"]):
    status, lines = run(argv)
    print("$ sitrewrite", " ".join(argv[:1] + argv[2:]), f"(exit {status})")
    shown = lines if len(lines) <= 7 else lines[:5] + ["..."] + lines[-1:]
    print("\n".join(shown))
