"""Tour of the chain families and their transfer times.

Run: python3 demos/01_chain_models.py
"""

import numpy as np

from spintransfer import (eigendecompose, end_to_end_fidelity, first_peak_time,
                          pst_chain, pst_transfer_time, quadratic_chain,
                          quadratic_time_bound, rescale_to_unit_max, swap_trace_first,
                          swap_trace_second, uniform_chain)

print("=== uniform chain ===")
chain = uniform_chain(51)
t_peak, f_peak = first_peak_time(chain)
print(f"N=51: first arrival peak at t = {t_peak:.4f} with fidelity {f_peak:.4f}")
print(f"      ballistic estimate (N + 0.8 N^(1/3))/2 = {(51 + 0.8 * 51 ** (1 / 3)) / 2:.4f}")

print("\n=== perfect-transfer chain ===")
for n in (4, 5, 16, 51):
    chain = pst_chain(n)
    t0 = pst_transfer_time(chain)
    f = end_to_end_fidelity(eigendecompose(chain), t0)
    print(f"N={n:2d}: couplings peak at {np.max(chain.couplings):.3f}, "
          f"t0 = {t0:.4f}, fidelity 1 - {1 - f:.1e}")

print("\n=== quadratic-spectrum chain ===")
for n in (4, 5, 8, 9):
    chain = quadratic_chain(n)
    scaled, alpha = rescale_to_unit_max(chain)
    bound = quadratic_time_bound(n)
    if n % 2 == 0:
        trace = swap_trace_first(chain)
        print(f"N={n}: Tr(SH) = 2 J_center = {trace:.3f} "
              f"(formula N(N+2)/4 = {n * (n + 2) / 4}), unit-coupling time bound {bound:.3f}")
    else:
        trace = swap_trace_second(chain)
        print(f"N={n}: Tr(SH^2) = 4 J_center^2 = {trace:.3f}, "
              f"unit-coupling time bound {bound:.3f}")

print("\nodd-length quadratic chains transfer perfectly at t = pi (natural units):")
chain = quadratic_chain(9)
f = end_to_end_fidelity(eigendecompose(chain), np.pi)
print(f"N=9: fidelity at t = pi is 1 - {1 - f:.1e}")

print("\neven lengths never reach unit fidelity (mixed-parity spectral gaps):")
chain = quadratic_chain(4)
eig = eigendecompose(chain)
ts = np.arange(0.0, 10.0, 0.001)
best = max(end_to_end_fidelity(eig, t) for t in ts)
print(f"N=4: best fidelity over t in [0, 10) is {best:.4f}")
