"""Classical subset-sum solvers used as ground truth for the simulator.

Three independent routes: a pseudo-polynomial dynamic program over reachable
sums (bit-packed, O(n*B) work), exhaustive enumeration of all 2^n subset sums,
and meet-in-the-middle for instances where the target is too large for the DP
and n too large for brute force. Every simulated verdict is checked against
at least one of these.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimit
from .model import Instance, Verdict

# Configuration constants, overridable per call.
BRUTE_FORCE_MAX_N = 25
MITM_MAX_N = 50
DP_MAX_TABLE_BITS = 10**8

# Doubling enumeration stays on int64; larger sums fall back to Python ints.
_INT64_SAFE_SUM = 2**62


@dataclass(frozen=True)
class OracleResult:
    """Verdict plus, when extracted, a witness of indices into the value list."""

    verdict: Verdict
    witness: tuple[int, ...] | None
    solver_name: str

    def to_json_dict(self) -> dict[str, object]:
        return {
            "verdict": self.verdict.value,
            "witness": list(self.witness) if self.witness is not None else None,
            "solver_name": self.solver_name,
        }


def solve_dp(
    instance: Instance,
    want_witness: bool = False,
    *,
    max_table_bits: int = DP_MAX_TABLE_BITS,
) -> OracleResult:
    """Reachability DP over sums 0..B, one bit per sum.

    The table is a single big integer; witness extraction keeps one snapshot
    per element and backtracks, so it multiplies the memory bound by n.
    """
    b = instance.target
    rows = instance.n + 1 if want_witness else 1
    if (b + 1) * rows > max_table_bits:
        raise ResourceLimit(
            f"DP table of {(b + 1) * rows} bits exceeds the budget of {max_table_bits}"
        )
    mask = (1 << (b + 1)) - 1
    reach = 1
    snapshots = [reach]
    for a in instance.values:
        reach = (reach | (reach << a)) & mask
        if want_witness:
            snapshots.append(reach)
    yes = bool((reach >> b) & 1)

    witness: tuple[int, ...] | None = None
    if yes and want_witness:
        picked = []
        s = b
        for i in range(instance.n - 1, -1, -1):
            if not (snapshots[i] >> s) & 1:
                picked.append(i)
                s -= instance.values[i]
        assert s == 0
        witness = tuple(reversed(picked))
    return OracleResult(Verdict.from_bool(yes), witness, "dp")


def _all_subset_sums(values: tuple[int, ...]) -> np.ndarray | list[int]:
    """All 2^n subset sums by doubling, as int64 when they safely fit."""
    if sum(values) < _INT64_SAFE_SUM:
        arr = np.zeros(1, dtype=np.int64)
        for a in values:
            arr = np.concatenate((arr, arr + a))
        return arr
    sums = [0]
    for a in values:
        sums += [s + a for s in sums]
    return sums


def enumerate_subset_sums(
    values: tuple[int, ...], *, max_n: int = BRUTE_FORCE_MAX_N
) -> Counter[int]:
    """Multiset of all 2^n subset sums, keyed by sum.

    This is the reference histogram the simulated arrival profile must match
    (shifted by n*k).
    """
    if len(values) > max_n:
        raise ResourceLimit(f"brute force is capped at n <= {max_n}, got {len(values)}")
    sums = _all_subset_sums(values)
    if isinstance(sums, np.ndarray):
        uniq, counts = np.unique(sums, return_counts=True)
        return Counter(dict(zip(uniq.tolist(), counts.tolist())))
    return Counter(sums)


def solve_bruteforce(
    instance: Instance, *, max_n: int = BRUTE_FORCE_MAX_N
) -> OracleResult:
    """Exhaustive enumeration of every subset sum."""
    if instance.n > max_n:
        raise ResourceLimit(f"brute force is capped at n <= {max_n}, got {instance.n}")
    sums = _all_subset_sums(instance.values)
    if isinstance(sums, np.ndarray):
        yes = instance.target <= instance.total and bool(
            np.any(sums == np.int64(instance.target))
        )
    else:
        yes = instance.target in sums
    return OracleResult(Verdict.from_bool(yes), None, "bruteforce")


def solve_mitm(instance: Instance, *, max_n: int = MITM_MAX_N) -> OracleResult:
    """Meet-in-the-middle: O(2^(n/2)) time, independent of the target size."""
    if instance.n > max_n:
        raise ResourceLimit(f"meet-in-the-middle is capped at n <= {max_n}, got {instance.n}")
    half = instance.n // 2
    left = _all_subset_sums(instance.values[:half])
    right = _all_subset_sums(instance.values[half:])
    b = instance.target
    if isinstance(left, np.ndarray) and isinstance(right, np.ndarray) and b < _INT64_SAFE_SUM:
        yes = bool(np.isin(np.int64(b) - left, right).any())
    else:
        right_set = set(right.tolist() if isinstance(right, np.ndarray) else right)
        left_list = left.tolist() if isinstance(left, np.ndarray) else left
        yes = any(b - s in right_set for s in left_list)
    return OracleResult(Verdict.from_bool(yes), None, "mitm")


def solve_auto(instance: Instance, want_witness: bool = False) -> OracleResult:
    """Pick a solver by cost: brute force when 2^n is at most the DP work n*B,
    else the DP while its table fits the budget, else meet-in-the-middle."""
    n, b = instance.n, instance.target
    if want_witness and (b + 1) * (n + 1) <= DP_MAX_TABLE_BITS:
        return solve_dp(instance, want_witness=True)
    if n <= BRUTE_FORCE_MAX_N and 2**n <= n * b:
        return solve_bruteforce(instance)
    if b + 1 <= DP_MAX_TABLE_BITS:
        return solve_dp(instance)
    if n <= MITM_MAX_N:
        return solve_mitm(instance)
    raise ResourceLimit(
        f"no exact solver can handle n={n}, B={b} within the configured limits"
    )
