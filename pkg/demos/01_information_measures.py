"""Walk through the discrete information estimators.

Everything downstream (the selectors, the redundancy criteria) is built on
these three quantities: entropy, mutual information, and conditional mutual
information over integer-coded columns.
"""

import numpy as np

from miselect import (
    ContingencyTable,
    conditional_mutual_information,
    entropy,
    joint_pair_mi,
    mutual_information,
)

print("=== entropy ===")
print("fair coin      H =", entropy([0, 1, 0, 1]), "bits")
print("constant       H =", entropy([3, 3, 3]))
print("uniform 4-ary  H =", entropy([0, 1, 2, 3]))

print()
print("=== mutual information ===")
x = [0, 0, 1, 1]
print("independent    MI =", mutual_information(x, [0, 1, 0, 1]))
print("identical      MI =", mutual_information(x, x), "(= H(x))")
print("skewed         MI =", round(mutual_information(x, [0, 1, 1, 1]), 6))

print()
print("=== the underlying contingency table ===")
table = ContingencyTable.from_columns(x, [0, 1, 1, 1])
print("joint counts:\n", table.counts)
print("marginals:", table.marginal(0), table.marginal(1))

print()
print("=== conditional MI and the chain rule ===")
rng = np.random.default_rng(0)
a = rng.integers(0, 3, size=200)
b = rng.integers(0, 3, size=200)
c = (a + b) % 3  # c depends on both
print("I(a;c)      =", round(mutual_information(a, c), 4))
print("I(a;c | b)  =", round(conditional_mutual_information(a, c, b), 4),
      "(conditioning on b reveals a)")
lhs = joint_pair_mi(a, b, c)
rhs = mutual_information(b, c) + conditional_mutual_information(a, c, b)
print("chain rule  I((a,b);c) =", round(lhs, 12), "=", round(rhs, 12))
