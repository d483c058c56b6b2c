"""Independent reference computations for the test suite.

Deliberately naive: subsets are enumerated index combination by index
combination with itertools, so nothing here shares a code path with the
package's bitset DP, doubling enumeration, or packed-profile propagation.
"""

from collections import Counter
from itertools import combinations


def subset_sums(values):
    """Multiset of all 2^n subset sums. Works for ints and exact rationals."""
    sums = Counter()
    indices = range(len(values))
    for r in range(len(values) + 1):
        for combo in combinations(indices, r):
            sums[sum(values[i] for i in combo)] += 1
    return sums


def has_subset_sum(values, target):
    return target in subset_sums(values)
