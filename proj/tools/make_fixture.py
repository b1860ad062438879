#!/usr/bin/env python3
# Copyright 2026 The eqstat Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the synthetic catalog and prediction fixture under data/fixture.

Ten years of M >= 4 events in a 300 km square with a Gaussian hot spot, and
60 circular predictions with non-overlapping windows. Half of the
predictions are centred on upcoming events, so the set does better than
chance without being trivially significant.
"""

import argparse
import pathlib

import numpy as np

SPAN = 3650.0
SIDE = 300.0
N_EVENTS = 400
N_PREDICTIONS = 60


def events(rng):
    n_bump = int(0.4 * N_EVENTS)
    bump = rng.multivariate_normal([150.0, 120.0], [[400.0, 150.0], [150.0, 900.0]], size=4 * n_bump)
    inside = (bump >= 0).all(axis=1) & (bump <= SIDE).all(axis=1)
    bump = bump[inside][:n_bump]
    background = rng.uniform(0.0, SIDE, size=(N_EVENTS - n_bump, 2))
    xy = np.vstack([bump, background])
    t = np.sort(rng.uniform(0.0, SPAN, size=N_EVENTS))
    t[-1] = SPAN
    xy = xy[rng.permutation(N_EVENTS)]
    mag = 4.0 - np.log10(rng.uniform(size=N_EVENTS))
    return t, xy, mag


def predictions(rng, t, xy):
    slot = SPAN / N_PREDICTIONS
    rows = []
    for j in range(N_PREDICTIONS):
        start = j * slot + rng.uniform(0.0, 0.2 * slot)
        end = start + rng.uniform(0.3, 0.6) * slot
        issue = start - rng.uniform(0.0, 5.0)
        radius = rng.uniform(30.0, 50.0)
        if j % 5 == 0:
            upcoming = np.nonzero((t >= start) & (t <= end))[0]
            if len(upcoming):
                k = upcoming[0]
                centre = xy[k] + rng.normal(0.0, 0.3 * radius, size=2)
            else:
                centre = rng.uniform(radius, SIDE - radius, size=2)
        else:
            centre = rng.uniform(radius, SIDE - radius, size=2)
        centre = np.clip(centre, radius, SIDE - radius)
        rows.append((max(issue, 0.0), start, end, centre[0], centre[1], radius, 4.0))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=pathlib.Path(__file__).resolve().parent.parent / "data" / "fixture",
                        type=pathlib.Path)
    parser.add_argument("--seed", type=int, default=20260101)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)
    t, xy, mag = events(rng)
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "earthquakes.csv", "w") as f:
        f.write("time,x,y,magnitude\n")
        for ti, (x, y), m in zip(t, xy, mag):
            f.write(f"{ti:.4f},{x:.3f},{y:.3f},{m:.2f}\n")
    with open(args.out / "predictions.csv", "w") as f:
        f.write("issue_time,window_start,window_end,cx,cy,radius,min_magnitude\n")
        for row in predictions(rng, t, xy):
            f.write(",".join(f"{v:.4f}" for v in row) + "\n")


if __name__ == "__main__":
    main()
