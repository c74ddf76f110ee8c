"""Density-matrix simulation of digital and digital-analog quantum Fourier transforms."""

from daqcsim.channels import DecoherenceConfig, KrausChannel, apply_channel, bit_flip, gad
from daqcsim.circuits import BuildOptions, build_schedule, qft_reference
from daqcsim.compiler import CouplingSpec, solve_block_times
from daqcsim.engine import NoiseConfig, run_beta_sweep, run_ensemble
from daqcsim.errors import ConfigError, NumericalError, UnsupportedSizeError
from daqcsim.mitigation import run_mitigation_experiment, stage1_zero_decoherence, stage2_zero_bang
from daqcsim.states import fidelity, make_initial, root_fidelity

__all__ = [
    "BuildOptions",
    "ConfigError",
    "CouplingSpec",
    "DecoherenceConfig",
    "KrausChannel",
    "NoiseConfig",
    "NumericalError",
    "UnsupportedSizeError",
    "apply_channel",
    "bit_flip",
    "build_schedule",
    "fidelity",
    "gad",
    "make_initial",
    "qft_reference",
    "root_fidelity",
    "run_beta_sweep",
    "run_ensemble",
    "run_mitigation_experiment",
    "solve_block_times",
    "stage1_zero_decoherence",
    "stage2_zero_bang",
]
