"""Scratch probe: pair-collision sweep used while calibrating the solver."""
import time

import numpy as np

from frontflow.potential import double_well
import frontflow.stationary_fronts as sf
import frontflow.pgl_sim as sim
import frontflow.front_tracking as ft

pot = double_well(2)
results = {}
for eps, n in ((0.04, 2201), (0.02, 4401), (0.01, 8801)):
    grid = sim.Grid1D(-5.5, 5.5, n)
    f = sf.glue_chain(pot, [-0.5, 0.5], (0, 1, 0), eps, grid)
    track = []

    def obs(field):
        t = ft.front_points(pot, field)
        track.append((field.s, t.count))

    def stop(field):
        return track[-1][1] == 0 and field.s > 1.02 * next(
            s for s, c in reversed(track) if True)

    def stop(field):
        if track[-1][1] != 0:
            return False
        s_first_zero = next(s for s, c in track if c == 0)
        return field.s > s_first_zero * 1.02

    t0 = time.time()
    res = sim.run(pot, f, s_max=0.55, params=sim.SimParams(time_resolution=512),
                  observer=obs, stop_when=stop)
    el = time.time() - t0
    s2 = [s for s, c in track if c == 2][-1]
    s0 = [s for s, c in track if c < 2][0]
    scol = 0.5 * (s2 + s0)
    results[eps] = scol
    print('eps=%g: %.1fs, steps %d, S_col = %.4f' % (eps, el, res.steps, scol), flush=True)

es = np.array([0.04, 0.02, 0.01])
ts = np.array([results[e] * e**-3.0 for e in es])
slope = np.polyfit(np.log(es), np.log(ts), 1)[0]
print('t_col exponent vs eps:', slope, '(expect -3)')
print('S_col rel err vs 0.20425:', {float(e): abs(results[e] - 0.2042465) / 0.2042465 for e in es})
