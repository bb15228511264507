"""
Using the ``gt`` command
========================

Fragments and fixed points are written to JSON files, so an expensive
build can be queried and verified many times.
"""

import subprocess
import sys
import tempfile
from pathlib import Path

work = Path(tempfile.mkdtemp())
gt = [sys.executable, "-m", "groundedtruth.cli"]


def run(*args):
    out = subprocess.run(gt + list(args), capture_output=True, text=True)
    print("$ gt", " ".join(args).replace(str(work) + "/", ""))
    print(out.stdout + out.stderr, end="")
    print("exit", out.returncode)
    print()


# %%
# Build, then solve.
run("build", "--model", "two", "--depth", "2", "--reflect", "1", "--with-liar",
    "--out", str(work / "frag.json"))
run("fixpoint", str(work / "frag.json"), "--out", str(work / "state.json"))

# %%
# Ask about single sentences.  Quotation brackets are accepted.
files = ["--fragment", str(work / "frag.json"), "--state", str(work / "state.json")]
run("query", "T([P(a)])", *files)
run("query", "~T(#1)", *files)
run("query", "P(a) & P(a) & P(a) & P(a)", *files)

# %%
# Run two suites.  The exit code is 6 if anything is violated.
run("verify", *files, "--suite", "t-rule,ut")
