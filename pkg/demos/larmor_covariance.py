#!/usr/bin/env python3
"""Covariance of two Hahn echoes vs the delay between them.

At a valley echo duration each single echo is a coin flip, but the two
outcomes stay correlated whenever the delay lets the slowly drifting
transverse Overhauser field return to (or mirror) its earlier phase.  The
covariance trace therefore spikes twice per Larmor period, here dominated
by As-75 (period 683.5 ns at 0.2 T).

Run:  python3 demos/larmor_covariance.py
"""

import numpy as np

from spinbath import ElectronParams, IntermediateSpec, Model
from spinbath.bath import BathConfig
from spinbath.engine import sweep_delay

model = Model(electron=ElectronParams(), bath=BathConfig())

tau_echo = 2.0e-6          # echo valley: single-shot outcomes are random
delays = np.arange(7.0e-6, 8.4e-6, 0.025e-6)
results = sweep_delay(model, tau_echo, list(delays), IntermediateSpec(),
                      shots=5000, root_seed=1)

print("tau_delay (us)  covariance")
for r in results:
    bar = "#" * int(250 * max(r.covariance, 0.0))
    print(f"{r.axis * 1e6:12.3f}  {r.covariance:+.4f}  {bar}")

print("\nAs-75 Larmor period: 0.6835 us; peaks recur every half period.")
