#!/usr/bin/env python3
"""All waveform strategies on one multipath channel realization.

Draws an 18-tap indoor-style channel over a 10 MHz band, designs every
strategy for it and tabulates the DC surrogate, the rectified output
current and the transmit peak-to-average ratio.  The optimized design
tops the table by construction; the matched filter usually lands close.
"""

import numpy as np

from multisine_wpt import (ArrayConfig, FrequencyGrid, OptimizerOptions,
                           PowerDelayProfile, RectennaParams,
                           baseline_waveform, iout_fixed_point,
                           multipath_channel, optimize, optimize_decoupled,
                           papr, zdc_analytic)

n_tones, n_antennas = 8, 2
power = 1e-5
grid = FrequencyGrid.from_bandwidth(n_tones, 5e6, 16 * n_tones)
profile = PowerDelayProfile.exponential()
channel = multipath_channel(profile, ArrayConfig(n_antennas), grid, seed=5)
params = RectennaParams()
opts = OptimizerOptions(eps=1e-9, max_iterations=200)

designs = {name: baseline_waveform(name, channel, power, grid)
           for name in ("ss", "up", "ass", "mf", "upmf", "maxpapr")}
designs["opt"] = optimize(channel, power, params, grid, opts).waveform
designs["opt-decoupled"] = optimize_decoupled(channel, power, params, grid,
                                              opts).waveform

print(f"{'strategy':>14} | {'z_dc':>11} | {'i_out [A]':>11} | "
      f"{'max PAPR':>8}")
print("-" * 55)
for name, waveform in sorted(designs.items(),
                             key=lambda kv: zdc_analytic(kv[1], channel,
                                                         params)):
    z = zdc_analytic(waveform, channel, params)
    worst = max(papr(waveform, ant)
                for ant in range(n_antennas)
                if np.any(waveform.amplitudes[:, ant] > 0))
    print(f"{name:>14} | {z:11.4e} | {iout_fixed_point(z, params):11.4e} | "
          f"{worst:8.2f}")

print("\nJoint and decoupled optimization agree; the decoupled run only")
print("searches over per-tone amplitudes after matched beamforming.")
