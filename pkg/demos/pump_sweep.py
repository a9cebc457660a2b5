"""Sweep the pump through threshold and watch the laser turn on.

Below A = kappa the cavity holds a few thermal-looking photons; above it
the mean follows the semiclassical intensity (A/kappa - 1)/(4 (g tau_bar)^2)
and the Mandel Q relaxes toward the far-above-threshold value
kappa / (A - kappa).
"""

import numpy as np

from micromaser import (
    PumpParameters,
    TruncatedSpace,
    choose_truncation,
    exact_model,
    moments,
    recurrence_steady,
    semiclassical_intensity,
)

KAPPA = 1.0
G_TAU_BAR = 0.03

print(f"exact model, g tau_bar = {G_TAU_BAR}\n")
print(f"{'A/kappa':>8s} {'n_max':>6s} {'mean_n':>10s} {'semiclassical':>13s} "
      f"{'Mandel Q':>9s} {'kappa/(A-k)':>11s}")

for pump in (0.5, 0.8, 0.9, 1.0, 1.1, 1.3, 1.6, 2.0, 3.0, 4.0, 5.0):
    params = PumpParameters.from_pump(pump, G_TAU_BAR, KAPPA)
    model = exact_model(params, TruncatedSpace(1))
    space = choose_truncation(model, KAPPA)
    stats = recurrence_steady(model.gain_ratio(KAPPA), space)
    mom = moments(stats.p)
    sc = semiclassical_intensity(params.gain_rate, KAPPA, 4 * params.u)
    q_far = KAPPA / (pump - KAPPA) if pump > 1.2 else float("nan")
    print(f"{pump:8.2f} {space.n_max:6d} {mom.mean_n:10.3f} {sc:13.3f} "
          f"{mom.mandel_q:9.4f} {q_far:11.4f}")

print("\nthe Q maximum sits near threshold; far above, Q -> kappa/(A - kappa)")
