"""Compare the three two-party regression strategies on one instance.

Run: python3 demos/two_party_regression.py
"""

from __future__ import annotations

import numpy as np

from distqla import (
    classical_naive_regression,
    regression_case1_b_to_a,
    regression_case2_a_to_b,
    regression_case3_two_way,
)


def main() -> None:
    p = 1 / 64
    A = np.diag([1.0] + [np.sqrt(p)] * 15)
    b = np.zeros(16)
    b[0] = 1.0
    print("Alice holds A = diag(1, 1/8, ..., 1/8); Bob holds b = e0.")
    one_shot = regression_case1_b_to_a(A, b, mode="postselect").success_prob
    print(f"A single run from Bob's copy succeeds with probability {one_shot:.4f}.\n")
    runs = {
        "Bob ships |b>, repeat until success": regression_case1_b_to_a(A, b, mode="repeat"),
        "Alice ships the encoding (one copy)": regression_case2_a_to_b(A, b, mode="postselect"),
        "two-way amplitude amplification": regression_case3_two_way(A, b),
    }
    for label, o in runs.items():
        t = o.ledger.totals
        print(f"{label:40s} qubits={t.qubits_sent:5d} rounds={t.rounds:4d} "
              f"success={o.final_success_prob:.3f} fidelity={o.fidelity_to_target:.6f}")
    c = classical_naive_regression(A, b)
    print(f"{'classical: Bob sends b in full':40s} bits={c.ledger.totals.bits_sent:5d}")


if __name__ == "__main__":
    main()
