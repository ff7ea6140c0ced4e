"""Print the measurement statistics that make the hard instances hard.

Run: python3 demos/lower_bound_instances.py
"""

from __future__ import annotations

from distqla import disjointness_regression, gamma_regression, multiparty_regression, sq_counterexample


def main() -> None:
    meet = disjointness_regression({0, 1}, {1, 2}, 4)
    apart = disjointness_regression({0, 1}, {2, 3}, 4)
    print("set disjointness, l = 4")
    print("  S={0,1}, T={1,2}:", [round(p, 3) for p in meet.metadata["expected_distribution"]])
    print("  S={0,1}, T={2,3}:", [round(p, 3) for p in apart.metadata["expected_distribution"]])

    g = gamma_regression({0, 1}, {1, 3}, 4)
    print("\nprojector instance, marker at index 4:", g.metadata["expected_distribution"])

    m = multiparty_regression([{0, 1, 2}, {2, 5}], 16)
    print(f"\ntwo-party coordinator instance, common index mass = {m.metadata['intersection_mass']:.3f}")

    a = [1, 1, 0, 0, 0, 0, 0, 0]
    for b, label in (([0, 0, 1, 1, 0, 0, 0, 0], "disjoint"), ([0, 1, 1, 0, 0, 0, 0, 0], "one common index")):
        inst = sq_counterexample(a, b, 1)
        print(f"rank-2 instance ({label}): mass off index 0 = {inst.metadata['nonzero_index_mass']:.3f}")


if __name__ == "__main__":
    main()
