"""
Correlation, significance and annotator agreement
=================================================

Scores are Pearson correlations per VAD dimension. Two correlations are
compared with a Fisher z test; rating consistency between annotators is the
mean per-word standard deviation.
"""
import numpy as np

from affectlex.evaluation import AnnotatorTable, fisher_z_test, iaa_sd, kendall_tau, pearson

rng = np.random.default_rng(0)

###############################################################################
# Pearson is invariant under positive affine maps of either argument, so a
# lexicon induced on a [1, 9] scale can be compared against gold on [-1, 1].
gold = rng.uniform(1, 9, 200)
induced = gold + rng.normal(0, 2, 200)
print(round(pearson(induced, gold), 4), round(pearson((induced - 5) / 4, gold), 4))
print("kendall tau-b:", round(kendall_tau(induced, gold), 4))

###############################################################################
# Is 0.557 significantly better than 0.330 on 1000 words? Treating the two
# correlations as independent samples is anti-conservative when both are
# computed on the same gold words; treat the p-value as a lower bound.
test = fisher_z_test(0.557, 1000, 0.330, 1000)
print(f"z = {test.z:.3f}, p = {test.p_two_sided:.2e}")

###############################################################################
# Small differences on a few hundred words are not significant.
print(fisher_z_test(0.505, 300, 0.501, 300))

###############################################################################
# Agreement: three annotators rating 50 words on three dimensions.
truth = rng.uniform(1, 9, (50, 1, 3))
ratings = np.clip(truth + rng.normal(0, [1.2, 1.1, 1.4], (50, 3, 3)), 1, 9)
table = AnnotatorTable([f"w{i}" for i in range(50)], ["a", "b", "c"], ratings)
for name, sd in iaa_sd(table).items():
    print(f"{name:<10}{sd:.2f}")
