"""
Transparency of truth
=====================

For every grounded sentence A, ``T(⌈A⌉) ↔ A`` comes out true and
``¬T(⌈A⌉) ↔ A`` comes out false.  We look at a few instances and then run
the whole suite.
"""

from groundedtruth import Store, Valuation, build_fragment, load_model, outer_fixpoint, to_text
from groundedtruth.verify import t_rule_suite

model, base = load_model("two")
frag = build_fragment(Store(), model, base, depth=2, reflect=2)
val = Valuation(frag, outer_fixpoint(frag))
s = frag.store

# %%
# A true atom, a false one, and a sentence about truth itself.
for text in ["P(a)", "~P(a)", "exists x. T(x)"]:
    a = frag.parse(text)
    t = s.true_of(a)
    print(f"{text:<16} {val.classify(a).value:<14} T(⌈A⌉) {val.classify(t).value:<14}",
          "T(⌈A⌉) <-> A:", val.classify(s.iff(t, a)).value)

# %%
# Quotations print as numerals; the stage tells when a sentence became true.
t = s.true_of(s.true_of(frag.parse("P(a)")))
print(to_text(t), "stage", val.stage(t))

# %%
# The full suite checks every T-atom of the fragment.
report = t_rule_suite(val)
print(report.to_text())
