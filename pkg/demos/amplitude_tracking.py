#!/usr/bin/env python3
"""Covariance vs exchange-pulse amplitude tracks the pulse calibration.

The mid-gap exchange pulse rotates the qubit by an angle set exponentially
by the pulse amplitude.  Sweeping the amplitude sweeps the rotation from 0
(full back-action, low covariance) through pi (refocused, high covariance)
and onward through 2 pi where the back-action returns.  The same sweep
applied to a single echo's refocusing pulse gives the calibration curve
the covariance closely follows.

Run:  python3 demos/amplitude_tracking.py
"""

import math

import numpy as np

from spinbath import ElectronParams, JMap, Model
from spinbath.bath import BathConfig
from spinbath.engine import sweep_amplitude

model = Model(electron=ElectronParams(), bath=BathConfig())

amps = list(np.linspace(0.0, 4.4, 23))
cov, echo = sweep_amplitude(model, 2.734e-6, 22.3e-6, amps, shots=5000,
                            root_seed=1)

a_pi = JMap().amplitude_for_angle(math.pi, 20e-9)
print(f"pi-pulse amplitude from the exchange map: {a_pi:.3f}\n")
print("amplitude  covariance   echo P(S)")
for a, c, e in zip(amps, cov, echo):
    mark = "  <- pi" if abs(a - a_pi) < 0.1 else ""
    print(f"{a:8.2f}   {c.covariance:+.4f}     {e.p1_mean:.4f}{mark}")

cc = np.array([r.covariance for r in cov])
ee = np.array([r.p1_mean for r in echo])
print(f"\nPearson correlation of the two curves: {np.corrcoef(cc, ee)[0, 1]:.3f}")
