"""
The liar and the truth-teller
=============================

Both sentences talk about themselves through a designated code.  Neither
is decided by the least fixed point, but they fail for different reasons:
seeding the liar's code leads to a contradiction, while seeding the
truth-teller's code yields a larger, perfectly consistent fixed point.
"""

from groundedtruth import Store, Valuation, build_fragment, load_model, outer_fixpoint, to_text
from groundedtruth.engine import fixed_point_above

# %%
# A small fragment over the two-element model, with both sentences added.
model, base = load_model("two")
frag = build_fragment(Store(), model, base, depth=1, reflect=1, liar=True, truthteller=True)
liar, teller = frag.designated["liar"], frag.designated["truthteller"]
print(to_text(liar), "has code", frag.code(liar))
print(to_text(teller), "has code", frag.code(teller))

# %%
# The least fixed point leaves both out.
trace = outer_fixpoint(frag)
val = Valuation(frag, trace)
print("liar:", val.classify(liar).value)
print("truth-teller:", val.classify(teller).value)

# %%
# Start above W with the liar's code and close under G.
attempt = fixed_point_above(trace.W | {frag.code(liar)}, frag)
print("liar seed:", attempt.status, "witness", to_text(attempt.witness))

# %%
# The truth-teller can consistently be made true.  The resulting fixed
# point contains the least one, as minimality demands.
other = fixed_point_above(trace.W | {frag.code(teller)}, frag)
print("truth-teller seed:", other.status)
print("contains the least fixed point:", trace.fixpoint <= other.fixed_point)
print("sizes:", len(trace.fixpoint), "<", len(other.fixed_point))
