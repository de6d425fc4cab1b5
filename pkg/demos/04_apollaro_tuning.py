"""Re-tuning the Apollaro end couplings for different objectives.

The disorder-free optimum is sharp; disordered quantile objectives sit on a
broad ridge, so re-optimized coordinates wander while the achieved fidelity
barely moves.

Run: python3 demos/04_apollaro_tuning.py          (quick)
     python3 demos/04_apollaro_tuning.py --full   (adds the slow disordered rows)
"""

import sys

import numpy as np

from spintransfer import (Objective, evaluate_objective, objective_landscape,
                          optimize_apollaro, uniform_disorder)

print("zero-disorder end-to-end objective (window 1):")
result = optimize_apollaro(Objective(n=51, window=1), 0.5, 0.8)
print(f"  optimum ({result.x:.4f}, {result.y:.4f}), fidelity {result.objective_value:.6f}, "
      f"{result.evaluations} evaluations")

print("\nzero-disorder 3-site-window objective:")
result = optimize_apollaro(Objective(n=51, window=3), 0.5, 0.8)
print(f"  optimum ({result.x:.4f}, {result.y:.4f}), fidelity {result.objective_value:.6f}")

print("\nlandscape slice through the window-1 optimum (x across, y down):")
obj = Objective(n=51, window=1)
xs = np.linspace(0.35, 0.55, 5)
ys = np.linspace(0.65, 0.85, 5)
grid = objective_landscape(obj, xs, ys)
print("        " + "  ".join(f"x={x:.2f}" for x in xs))
for j, y in enumerate(ys):
    print(f"  y={y:.2f} " + "  ".join(f"{grid[i, j]:.4f}" for i in range(len(xs))))

if "--full" in sys.argv[1:]:
    print("\ndisordered quantile objectives (uniform +-delta on couplings, M=200):")
    for window, delta in ((1, 0.1), (3, 0.1), (3, 0.15), (5, 0.1)):
        obj = Objective(n=51, window=window, metric="quantile", samples=200,
                        disorder=uniform_disorder(delta, 0.0, seed=2024))
        result = optimize_apollaro(obj, 0.5, 0.8, restarts=1, max_iter=150)
        big = Objective(n=51, window=window, metric="quantile", samples=1000,
                        disorder=uniform_disorder(delta, 0.0, seed=2024))
        print(f"  window {window}, delta {delta}: ({result.x:.4f}, {result.y:.4f}), "
              f"M=1000 quantile {evaluate_objective(big, result.x, result.y):.5f}")
else:
    print("\n(pass --full to run the slow disordered rows)")
