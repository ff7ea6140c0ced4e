"""Show how the coordinator ledger grows with the condition number, with and without variable-time amplification.

Run: python3 demos/variable_time_scaling.py
"""

from __future__ import annotations

import numpy as np

from distqla import coordinator_regression, fit_exponent, vtaa_solve


def main() -> None:
    kappas = [2.0, 4.0, 8.0]
    plain, staged = [], []
    for k in kappas:
        A = np.diag(np.geomspace(1.0, 1 / k, 8))
        b = np.zeros(8)
        b[0] = 1.0
        c = coordinator_regression([A[:4], A[4:]], [b[:4], b[4:]], eps=1e-3)
        v = vtaa_solve(A, b, eps=1e-3, simulate="eigen")
        plain.append(c.ledger.totals.qubits_sent)
        staged.append(v.ledger.totals.qubits_sent)
        print(f"kappa={k:4.0f}  coordinator qubits={plain[-1]:9d}  staged qubits={staged[-1]:9d}  "
              f"staged fidelity={v.fidelity_to_target:.5f}")
    print(f"\nfitted exponent: coordinator {fit_exponent(kappas, plain):.2f}, staged {fit_exponent(kappas, staged):.2f}")


if __name__ == "__main__":
    main()
