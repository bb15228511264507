"""
Quantifier prefixes over x = 2y
===============================

``R(x, y)`` means ``x = 2y`` on the surrogate domain ``0..N``.  For each
two-quantifier prefix the three sentences ``T(⌈q R⌉)``, ``q R`` and
``q T(⌈R(ẋ, ẏ)⌉)`` must agree.  The derived truth values are compared
with the table stated in the source text, and cells that differ are
listed rather than judged.
"""

from groundedtruth import Store, Valuation, build_fragment, doubling_model, outer_fixpoint
from groundedtruth.verify import quantifier_table

# %%
# The answer does not depend on the bound once it is at least 2.
for bound in (2, 4, 8):
    model, base = doubling_model(bound)
    frag = build_fragment(Store(), model, base, depth=1, reflect=1)
    report = quantifier_table(Valuation(frag, outer_fixpoint(frag)))
    print(f"N = {bound}: chains agree: {report.passed}, "
          f"{len(report.discrepancies)} cells differ from the stated table")

# %%
# The table for the last bound, with every chain member's verdict.
print(report.to_text())

# %%
# Only one of the positive prefixes holds: there is an x = 2y pair, but
# not every x is even, so ∀x∃y fails at x = 1.
for row in report.discrepancies:
    print(row)
