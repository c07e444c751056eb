"""Two-user uplink VLC link assisted by a simultaneously transmitting and
reflecting RIS: channel model, sum-rate optimizers and validation oracles."""

from ._kernels import BACKEND as KERNEL_BACKEND
from .channel import (
    ChannelSet,
    OpticalFrontEnd,
    Scenario,
    channel_set,
    h_los,
    h_reflect,
    h_transmit,
)
from .geometry import LambertianSource, OrientedPoint, RisPanel, build_ris_grid, lambertian_order
from .link import DetectorScheme, RatePair, effective_channels, rate, rate_pair, sinr, sum_rate
from .oracle import OracleReport, coordinate_scan, mask_to_beta, vertex_enumerate
from .spca import (
    Objective,
    SpcaConfig,
    SpcaResult,
    TimeSharingResult,
    max_min_optimize,
    mode_switching_optimize,
    reduced_objective,
    solve_subproblem,
    spca_optimize,
    time_sharing_optimize,
)

__all__ = [
    "KERNEL_BACKEND",
    "ChannelSet",
    "OpticalFrontEnd",
    "Scenario",
    "channel_set",
    "h_los",
    "h_reflect",
    "h_transmit",
    "LambertianSource",
    "OrientedPoint",
    "RisPanel",
    "build_ris_grid",
    "lambertian_order",
    "DetectorScheme",
    "RatePair",
    "effective_channels",
    "rate",
    "rate_pair",
    "sinr",
    "sum_rate",
    "OracleReport",
    "coordinate_scan",
    "mask_to_beta",
    "vertex_enumerate",
    "Objective",
    "SpcaConfig",
    "SpcaResult",
    "TimeSharingResult",
    "max_min_optimize",
    "mode_switching_optimize",
    "reduced_objective",
    "solve_subproblem",
    "spca_optimize",
    "time_sharing_optimize",
]
