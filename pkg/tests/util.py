"""Shared test helpers: reference scenarios and randomized variants."""

from dataclasses import replace

import numpy as np

from starvlc import OrientedPoint
from starvlc.cli import default_scenario


def reference_scenario():
    return default_scenario()


def random_scenario(rng, rows, cols):
    """Randomized two-room scenario with a rows x cols panel in the wall."""
    sc = default_scenario()
    return replace(
        sc,
        panel=replace(
            sc.panel,
            rows=rows,
            cols=cols,
            center=np.array([5.0, rng.uniform(1.5, 3.5), rng.uniform(1.0, 2.0)]),
        ),
        ue1=OrientedPoint([rng.uniform(1.0, 4.9), rng.uniform(0.5, 4.5), 1.0], [0, 0, 1]),
        ue2=OrientedPoint([rng.uniform(5.1, 9.0), rng.uniform(0.5, 4.5), 1.0], [0, 0, 1]),
        ap=OrientedPoint([rng.uniform(0.5, 4.9), rng.uniform(0.5, 4.5), 3.0], [0, 0, -1]),
        p1=rng.uniform(0.01, 0.2),
        p2=rng.uniform(0.01, 0.2),
    )
